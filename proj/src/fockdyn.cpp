#include "magnomech/fockdyn.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace magnomech {

FockSpace::FockSpace(std::vector<std::string> labels_, std::vector<int> dims_,
                     int dim_cap)
    : labels(std::move(labels_)), dims(std::move(dims_)) {
    if (labels.size() != dims.size() || dims.empty())
        throw std::invalid_argument("one dimension per mode label required");
    long long total = 1;
    for (int d : dims) {
        if (d < 2) throw std::invalid_argument("every mode needs dim >= 2");
        total *= d;
        if (total > dim_cap) {
            std::ostringstream os;
            os << "product dimension exceeds the cap of " << dim_cap;
            throw std::invalid_argument(os.str());
        }
    }
}

int FockSpace::dim() const {
    return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
}

int FockSpace::mode_index(const std::string& label) const {
    for (int i = 0; i < n_modes(); ++i)
        if (labels[i] == label) return i;
    throw std::invalid_argument("no mode labelled '" + label + "'");
}

namespace {

CMatrix kron(const CMatrix& A, const CMatrix& B) {
    CMatrix out(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) =
                A(i, j) * B;
    return out;
}

CMatrix embed(const FockSpace& space, int mode, const CMatrix& local) {
    CMatrix out = CMatrix::Identity(1, 1);
    for (int k = 0; k < space.n_modes(); ++k) {
        if (k == mode)
            out = kron(out, local);
        else
            out = kron(out, CMatrix::Identity(space.dims[k], space.dims[k]));
    }
    return out;
}

CMatrix local_lowering(int d) {
    CMatrix a = CMatrix::Zero(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

}  // namespace

CMatrix lowering(const FockSpace& space, int mode) {
    return embed(space, mode, local_lowering(space.dims[mode]));
}

CMatrix number_operator(const FockSpace& space, int mode) {
    const int d = space.dims[mode];
    CMatrix n = CMatrix::Zero(d, d);
    for (int k = 0; k < d; ++k) n(k, k) = double(k);
    return embed(space, mode, n);
}

CMatrix top_level_projector(const FockSpace& space, int mode) {
    const int d = space.dims[mode];
    CMatrix p = CMatrix::Zero(d, d);
    p(d - 1, d - 1) = 1.0;
    return embed(space, mode, p);
}

CMatrix product_thermal(const FockSpace& space, const std::vector<double>& nbar) {
    if (nbar.size() != static_cast<std::size_t>(space.n_modes()))
        throw std::invalid_argument("one occupation per mode required");
    CMatrix rho = CMatrix::Identity(1, 1);
    for (int k = 0; k < space.n_modes(); ++k) {
        const int d = space.dims[k];
        CMatrix local = CMatrix::Zero(d, d);
        if (nbar[k] <= 0) {
            local(0, 0) = 1.0;
        } else {
            const double r = nbar[k] / (1.0 + nbar[k]);
            double w = 1.0, sum = 0.0;
            for (int n = 0; n < d; ++n, w *= r) {
                local(n, n) = w;
                sum += w;
            }
            local /= sum;  // renormalised on the truncated ladder
        }
        rho = kron(rho, local);
    }
    return rho;
}

CMatrix build_hamiltonian_linear(const FockSpace& space, const SystemParams& p,
                                 std::complex<double> G,
                                 double delta_m_tilde_override,
                                 bool use_override) {
    const int ia = space.mode_index("a");
    const int im = space.mode_index("m");
    const int ib = space.mode_index("b");
    const CMatrix a = lowering(space, ia);
    const CMatrix m = lowering(space, im);
    const CMatrix b = lowering(space, ib);
    const double dm = use_override ? delta_m_tilde_override : p.delta_m();
    CMatrix H = -p.delta_a() * (a.adjoint() * a) - dm * (m.adjoint() * m) +
                p.omega_b * (b.adjoint() * b);
    H += (G * m.adjoint() + std::conj(G) * m) * (b + b.adjoint());
    H += p.g_ma * (m.adjoint() * a) + std::conj(p.g_ma) * (m * a.adjoint());
    return H;
}

CMatrix build_hamiltonian_effective(const FockSpace& space,
                                    const EffectiveParams& e) {
    const int im = space.mode_index("m");
    const int ib = space.mode_index("b");
    const CMatrix m = lowering(space, im);
    const CMatrix b = lowering(space, ib);
    CMatrix H = -e.delta_eff * (m.adjoint() * m) + e.omega_b * (b.adjoint() * b);
    H += (e.G * m.adjoint() + std::conj(e.G) * m) * (b + b.adjoint());
    return H;
}

std::vector<Dissipator> dissipators_linear(const FockSpace& space,
                                           const SystemParams& p) {
    const CMatrix a = lowering(space, space.mode_index("a"));
    const CMatrix m = lowering(space, space.mode_index("m"));
    const CMatrix b = lowering(space, space.mode_index("b"));
    std::vector<Dissipator> out;
    out.push_back({a, 2.0 * p.kappa_a});
    out.push_back({m, 2.0 * p.kappa_m});
    out.push_back({b, 2.0 * p.gamma_b * (p.n_th + 1.0)});
    if (p.n_th > 0) out.push_back({b.adjoint(), 2.0 * p.gamma_b * p.n_th});
    return out;
}

std::vector<Dissipator> dissipators_effective(const FockSpace& space,
                                              const EffectiveParams& e) {
    const CMatrix m = lowering(space, space.mode_index("m"));
    const CMatrix b = lowering(space, space.mode_index("b"));
    std::vector<Dissipator> out;
    out.push_back({m, 2.0 * e.kappa_eff});
    out.push_back({b, 2.0 * e.gamma_b * (e.n_th + 1.0)});
    if (e.n_th > 0) out.push_back({b.adjoint(), 2.0 * e.gamma_b * e.n_th});
    return out;
}

CMatrix lindblad_rhs(const CMatrix& rho, const CMatrix& H,
                     const std::vector<Dissipator>& dissipators) {
    if (rho.rows() != rho.cols() || H.rows() != rho.rows())
        throw std::invalid_argument("shape mismatch in lindblad_rhs");
    const std::complex<double> i(0.0, 1.0);
    CMatrix out = i * (rho * H - H * rho);
    for (const auto& d : dissipators) {
        const CMatrix od_o = d.op.adjoint() * d.op;
        out += d.rate * (d.op * rho * d.op.adjoint() -
                         0.5 * (od_o * rho + rho * od_o));
    }
    return out;
}

namespace {

// The anticommutator halves fold into a non-Hermitian drift
// K = -i H - sum_k rate_k o^dag o / 2, leaving only the jump feeds:
// rhs(rho) = K rho + rho K^dag + sum_k J_k rho J_k^dag, J_k = sqrt(rate) o.
// This is the dense matrix-multiply hot path of the module.
class Propagator {
public:
    Propagator(const CMatrix& H, const std::vector<Dissipator>& diss) {
        const std::complex<double> i(0.0, 1.0);
        K_ = -i * H;
        for (const auto& d : diss) {
            jumps_.push_back(std::sqrt(d.rate) * d.op);
            K_ -= 0.5 * d.rate * (d.op.adjoint() * d.op);
        }
        const auto n = H.rows();
        tmp_.resize(n, n);
        out_.resize(n, n);
        k1_.resize(n, n); k2_.resize(n, n); k3_.resize(n, n); k4_.resize(n, n);
        stage_.resize(n, n);
    }

    const CMatrix& rhs(const CMatrix& rho) {
        out_.noalias() = K_ * rho;
        out_.noalias() += rho * K_.adjoint();
        for (const auto& J : jumps_) {
            tmp_.noalias() = J * rho;
            out_.noalias() += tmp_ * J.adjoint();
        }
        return out_;
    }

    void rk4_step(CMatrix& rho, double h) {
        k1_ = rhs(rho);
        stage_ = rho + (0.5 * h) * k1_;
        k2_ = rhs(stage_);
        stage_ = rho + (0.5 * h) * k2_;
        k3_ = rhs(stage_);
        stage_ = rho + h * k3_;
        k4_ = rhs(stage_);
        rho += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
    }

private:
    CMatrix K_;
    std::vector<CMatrix> jumps_;
    CMatrix tmp_, out_, k1_, k2_, k3_, k4_, stage_;
};

}  // namespace

namespace {

double spectral_norm_hermitian(const CMatrix& M) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(M, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

double stable_step(const CMatrix& H, const std::vector<Dissipator>& diss) {
    double scale = spectral_norm_hermitian(0.5 * (H + H.adjoint()));
    for (const auto& d : diss)
        scale += d.rate * spectral_norm_hermitian(d.op.adjoint() * d.op);
    return scale > 0 ? 1.5 / scale : 0.01;
}

}  // namespace

FockTrajectory evolve_density(const CMatrix& rho0, const FockSpace& space,
                              const std::vector<double>& t_grid,
                              const CMatrix& H,
                              const std::vector<Dissipator>& dissipators,
                              const FockEvolveOptions& opts) {
    if (rho0.rows() != space.dim() || rho0.cols() != space.dim())
        throw std::invalid_argument("initial state does not match the space");
    if (t_grid.empty())
        throw std::invalid_argument("empty time grid");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1]))
            throw std::invalid_argument("time grid must be strictly ascending");
    const double dt = opts.dt > 0 ? opts.dt : stable_step(H, dissipators);

    Propagator prop(H, dissipators);
    std::vector<CMatrix> number_ops, top_ops;
    for (int k = 0; k < space.n_modes(); ++k) {
        number_ops.push_back(number_operator(space, k));
        top_ops.push_back(top_level_projector(space, k));
    }

    FockTrajectory traj;
    traj.occupations.resize(space.n_modes());
    CMatrix rho = rho0;

    auto sample = [&](double t) {
        traj.times.push_back(t);
        for (int k = 0; k < space.n_modes(); ++k)
            traj.occupations[k].push_back(
                (number_ops[k] * rho).trace().real());
        if (opts.record_states) traj.states.push_back(rho);

        const double tr_drift = std::abs(rho.trace().real() - 1.0) +
                                std::abs(rho.trace().imag());
        traj.max_trace_drift = std::max(traj.max_trace_drift, tr_drift);
        const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
        traj.max_hermiticity_drift = std::max(traj.max_hermiticity_drift, herm);
        // both are conserved by the generator itself, so growth beyond
        // roundoff means the step size is unstable for this generator
        if (tr_drift > 1e-8 || herm > 1e-8) {
            std::ostringstream os;
            os << "trace/hermiticity drift " << std::max(tr_drift, herm)
               << " at t = " << t << "; reduce dt";
            throw IntegrationError(os.str());
        }
        for (int k = 0; k < space.n_modes(); ++k) {
            const double leak = (top_ops[k] * rho).trace().real();
            traj.max_leak = std::max(traj.max_leak, leak);
        }
        if (traj.max_leak > opts.leak_threshold) {
            traj.leaked = true;
            if (opts.throw_on_leak) {
                std::ostringstream os;
                os << "top Fock level reached population " << traj.max_leak
                   << " at t = " << t << "; enlarge the truncation";
                throw TruncationLeakError(os.str());
            }
        }
    };

    sample(t_grid.front());
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        const double span = t_grid[i] - t_grid[i - 1];
        const int steps = std::max(1, static_cast<int>(std::ceil(span / dt)));
        const double h = span / steps;
        for (int s = 0; s < steps; ++s) prop.rk4_step(rho, h);
        sample(t_grid[i]);
    }
    return traj;
}

CMatrix partial_trace(const CMatrix& rho, const FockSpace& space,
                      const std::vector<int>& keep) {
    if (keep.empty())
        throw std::invalid_argument("must keep at least one mode");
    for (std::size_t i = 1; i < keep.size(); ++i)
        if (keep[i] <= keep[i - 1])
            throw std::invalid_argument("keep list must be strictly ascending");
    for (int k : keep)
        if (k < 0 || k >= space.n_modes())
            throw std::invalid_argument("keep index out of range");

    const int n = space.n_modes();
    std::vector<bool> kept(n, false);
    for (int k : keep) kept[k] = true;

    int dim_keep = 1, dim_rest = 1;
    for (int k = 0; k < n; ++k) (kept[k] ? dim_keep : dim_rest) *= space.dims[k];

    // Strides of each mode in the row index of the full matrix.
    std::vector<int> stride(n, 1);
    for (int k = n - 2; k >= 0; --k) stride[k] = stride[k + 1] * space.dims[k + 1];

    // Strides within the kept / traced subspaces, preserving mode order.
    std::vector<int> keep_stride(n, 0), rest_stride(n, 0);
    int sk = dim_keep, sr = dim_rest;
    for (int k = 0; k < n; ++k) {
        if (kept[k]) { sk /= space.dims[k]; keep_stride[k] = sk; }
        else { sr /= space.dims[k]; rest_stride[k] = sr; }
    }

    std::vector<int> full_of_keep(dim_keep * dim_rest);
    for (int idx = 0; idx < space.dim(); ++idx) {
        int rem = idx, ik = 0, ir = 0;
        for (int k = 0; k < n; ++k) {
            const int digit = rem / stride[k];
            rem %= stride[k];
            if (kept[k]) ik += digit * keep_stride[k];
            else ir += digit * rest_stride[k];
        }
        full_of_keep[ik * dim_rest + ir] = idx;
    }

    CMatrix out = CMatrix::Zero(dim_keep, dim_keep);
    for (int i = 0; i < dim_keep; ++i)
        for (int j = 0; j < dim_keep; ++j) {
            std::complex<double> sum = 0.0;
            for (int r = 0; r < dim_rest; ++r)
                sum += rho(full_of_keep[i * dim_rest + r],
                           full_of_keep[j * dim_rest + r]);
            out(i, j) = sum;
        }
    return out;
}

DensityDefects density_defects(const CMatrix& rho) {
    DensityDefects d;
    d.hermiticity = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    d.trace = std::abs(rho.trace() - std::complex<double>(1.0, 0.0));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(
        0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    d.negativity = std::max(0.0, -es.eigenvalues().minCoeff());
    return d;
}

double fidelity(const CMatrix& rho, const CMatrix& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw std::invalid_argument("fidelity needs states on the same space");
    for (const CMatrix* s : {&rho, &sigma}) {
        const DensityDefects d = density_defects(*s);
        if (d.hermiticity > 1e-8 || d.trace > 1e-6 || d.negativity > 1e-7)
            throw std::domain_error("fidelity input is not a valid density "
                                    "matrix within tolerance");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rho + rho.adjoint()));
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    const CMatrix sqrt_rho = es.eigenvectors() *
                             ev.cwiseSqrt().asDiagonal() *
                             es.eigenvectors().adjoint();
    Eigen::SelfAdjointEigenSolver<CMatrix> inner(sqrt_rho * sigma * sqrt_rho,
                                                 Eigen::EigenvaluesOnly);
    const double root_sum = inner.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return std::min(root_sum * root_sum, 1.0 + 1e-12);
}

}  // namespace magnomech
