#include "magnomech/covariance.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace magnomech {

namespace {

// Coupling o1' = -i c o2 in quadratures: xdot1 = Im(c) x2 + Re(c) p2,
// pdot1 = -Re(c) x2 + Im(c) p2.
void add_mode_coupling(Eigen::MatrixXd& A, int row_mode, int col_mode,
                       std::complex<double> c) {
    const int r = 2 * row_mode, k = 2 * col_mode;
    A(r, k) += c.imag();
    A(r, k + 1) += c.real();
    A(r + 1, k) += -c.real();
    A(r + 1, k + 1) += c.imag();
}

// Free evolution odot = (i delta - kappa) o.
void add_mode_diagonal(Eigen::MatrixXd& A, int mode, double delta, double kappa) {
    const int r = 2 * mode;
    A(r, r) += -kappa;
    A(r, r + 1) += -delta;
    A(r + 1, r) += delta;
    A(r + 1, r + 1) += -kappa;
}

// Position-coupling mdot = -i G (b + b^dag), pdot_b picks up the conjugate.
void add_displacement_coupling(Eigen::MatrixXd& A, int mode_m, int mode_b,
                               std::complex<double> G) {
    const int m = 2 * mode_m, b = 2 * mode_b;
    A(m, b) += 2.0 * G.imag();
    A(m + 1, b) += -2.0 * G.real();
    A(b + 1, m) += -2.0 * G.real();
    A(b + 1, m + 1) += -2.0 * G.imag();
}

void check_dim(const DriftDiffusion& dd) {
    if (dd.A.rows() != dd.A.cols() || dd.D.rows() != dd.D.cols() ||
        dd.A.rows() != dd.D.rows() || dd.A.rows() != 2 * dd.n_modes())
        throw std::invalid_argument("inconsistent drift/diffusion dimensions");
}

Eigen::VectorXcd drift_eigenvalues(const Eigen::MatrixXd& A) {
    return Eigen::EigenSolver<Eigen::MatrixXd>(A, false).eigenvalues();
}

double max_re_eigenvalue(const Eigen::MatrixXd& A) {
    return drift_eigenvalues(A).real().maxCoeff();
}

}  // namespace

double occupation(const CovarianceState& s, int mode) {
    const int i = 2 * mode;
    return 0.5 * (s.V(i, i) + s.V(i + 1, i + 1) - 1.0);
}

std::complex<double> moment_dag(const CovarianceState& s, int i, int j) {
    // <o_i^dag o_j> = (Vxx + Vpp + i Vxp - i Vpx - delta_ij)/2
    const int a = 2 * i, b = 2 * j;
    const std::complex<double> im(0.0, 1.0);
    std::complex<double> val = s.V(a, b) + s.V(a + 1, b + 1) +
                               im * (s.V(a, b + 1) - s.V(a + 1, b));
    if (i == j) val -= 1.0;
    return 0.5 * val;
}

std::complex<double> moment_pair(const CovarianceState& s, int i, int j) {
    // <o_i o_j> = (Vxx - Vpp + i Vxp + i Vpx)/2
    const int a = 2 * i, b = 2 * j;
    const std::complex<double> im(0.0, 1.0);
    return 0.5 * (s.V(a, b) - s.V(a + 1, b + 1) +
                  im * (s.V(a, b + 1) + s.V(a + 1, b)));
}

double uncertainty_defect(const Eigen::MatrixXd& V) {
    const int n = static_cast<int>(V.rows());
    Eigen::MatrixXcd M = V.cast<std::complex<double>>();
    const std::complex<double> ih(0.0, 0.5);
    for (int m = 0; m + 1 < n; m += 2) {
        M(m, m + 1) += ih;
        M(m + 1, m) -= ih;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

DriftDiffusion build_effective(const EffectiveParams& e) {
    DriftDiffusion dd;
    dd.modes = {"m", "b"};
    dd.A = Eigen::MatrixXd::Zero(4, 4);
    dd.D = Eigen::MatrixXd::Zero(4, 4);
    add_mode_diagonal(dd.A, 0, e.delta_eff, e.kappa_eff);
    add_mode_diagonal(dd.A, 1, -e.omega_b, e.gamma_b);
    add_displacement_coupling(dd.A, 0, 1, e.G);
    dd.D.diagonal() << e.kappa_eff, e.kappa_eff,
        e.gamma_b * (2.0 * e.n_th + 1.0), e.gamma_b * (2.0 * e.n_th + 1.0);
    return dd;
}

DriftDiffusion build_full(const SystemParams& p, std::complex<double> G) {
    DriftDiffusion dd;
    dd.modes = {"a", "m", "b"};
    dd.A = Eigen::MatrixXd::Zero(6, 6);
    dd.D = Eigen::MatrixXd::Zero(6, 6);
    add_mode_diagonal(dd.A, 0, p.delta_a(), p.kappa_a);
    add_mode_diagonal(dd.A, 1, p.delta_m(), p.kappa_m);
    add_mode_diagonal(dd.A, 2, -p.omega_b, p.gamma_b);
    add_mode_coupling(dd.A, 0, 1, std::conj(p.g_ma));  // adot += -i g* m
    add_mode_coupling(dd.A, 1, 0, p.g_ma);             // mdot += -i g a
    add_displacement_coupling(dd.A, 1, 2, G);
    dd.D.diagonal() << p.kappa_a, p.kappa_a, p.kappa_m, p.kappa_m,
        p.gamma_b * (2.0 * p.n_th + 1.0), p.gamma_b * (2.0 * p.n_th + 1.0);
    return dd;
}

CovarianceState thermal_state(const DriftDiffusion& dd,
                              const std::vector<double>& occupations) {
    check_dim(dd);
    if (occupations.size() != static_cast<std::size_t>(dd.n_modes()))
        throw std::invalid_argument("one occupation per mode required");
    CovarianceState s;
    s.V = Eigen::MatrixXd::Zero(dd.dim(), dd.dim());
    for (int m = 0; m < dd.n_modes(); ++m) {
        const double v = occupations[m] + 0.5;
        s.V(2 * m, 2 * m) = v;
        s.V(2 * m + 1, 2 * m + 1) = v;
    }
    return s;
}

CovarianceState steady_state(const DriftDiffusion& dd) {
    check_dim(dd);
    const double top = max_re_eigenvalue(dd.A);
    if (!(top < 0)) {
        std::ostringstream os;
        os << "drift matrix is not stable (max Re eigenvalue = " << top
           << "); no steady state";
        throw StabilityError(os.str());
    }
    const int n = dd.dim();
    // vec form: (I (x) A + A (x) I) vec(V) = -vec(D), column-major vec.
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n * n, n * n);
    for (int c = 0; c < n; ++c)
        M.block(c * n, c * n, n, n) += dd.A;
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r)
            M.block(c * n, r * n, n, n).diagonal().array() += dd.A(c, r);
    Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(dd.D.data(), n * n);
    Eigen::VectorXd v = M.partialPivLu().solve(rhs);

    CovarianceState s;
    s.V = Eigen::Map<Eigen::MatrixXd>(v.data(), n, n);
    s.V = 0.5 * (s.V + s.V.transpose()).eval();
    const double res = (dd.A * s.V + s.V * dd.A.transpose() + dd.D).norm();
    if (res > 1e-10 * std::max(dd.D.norm(), 1e-300))
        throw IntegrationError("Lyapunov residual too large");
    return s;
}

namespace {

// One exact step of length h: V -> E V E^T + Q with E = exp(A h) and
// Q = int_0^h exp(A s) D exp(A^T s) ds, both read off one block exponential.
struct ExactStepper {
    Eigen::MatrixXd E, Q;

    ExactStepper(const DriftDiffusion& dd, double h) {
        const int n = dd.dim();
        Eigen::MatrixXd block = Eigen::MatrixXd::Zero(2 * n, 2 * n);
        block.topLeftCorner(n, n) = dd.A * h;
        block.topRightCorner(n, n) = dd.D * h;
        block.bottomRightCorner(n, n) = -dd.A.transpose() * h;
        const Eigen::MatrixXd F = block.exp();
        E = F.topLeftCorner(n, n);
        Q = F.topRightCorner(n, n) * E.transpose();
        Q = 0.5 * (Q + Q.transpose()).eval();
    }

    void apply(Eigen::MatrixXd& V) const {
        V = (E * V * E.transpose() + Q).eval();
        V = 0.5 * (V + V.transpose()).eval();
    }
};

Eigen::MatrixXd rhs(const DriftDiffusion& dd, const Eigen::MatrixXd& V) {
    return dd.A * V + V * dd.A.transpose() + dd.D;
}

// Classic step-doubling RK4 with absolute/relative error control.
void rk_adaptive(const DriftDiffusion& dd, Eigen::MatrixXd& V, double t0,
                 double t1, double tol) {
    auto rk4 = [&](const Eigen::MatrixXd& y, double h) {
        const Eigen::MatrixXd k1 = rhs(dd, y);
        const Eigen::MatrixXd k2 = rhs(dd, y + 0.5 * h * k1);
        const Eigen::MatrixXd k3 = rhs(dd, y + 0.5 * h * k2);
        const Eigen::MatrixXd k4 = rhs(dd, y + h * k3);
        return (y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)).eval();
    };
    double t = t0;
    double h = (t1 - t0) / 16.0;
    int rejected = 0;
    while (t < t1) {
        if (t + h > t1) h = t1 - t;
        const Eigen::MatrixXd full = rk4(V, h);
        const Eigen::MatrixXd half = rk4(rk4(V, 0.5 * h), 0.5 * h);
        const double err = (full - half).norm();
        const double scale = std::max(half.norm(), 1.0);
        if (err <= tol * scale || h <= 1e-14 * std::max(std::abs(t1), 1.0)) {
            V = half;
            V = 0.5 * (V + V.transpose()).eval();
            t += h;
            if (err < 0.1 * tol * scale) h *= 2.0;
        } else {
            h *= 0.5;
            if (++rejected > 10000)
                throw IntegrationError("adaptive step size underflow");
        }
    }
}

}  // namespace

std::vector<CovarianceState> evolve(const DriftDiffusion& dd,
                                    const CovarianceState& V0,
                                    const std::vector<double>& t_grid,
                                    const EvolveOptions& opts) {
    check_dim(dd);
    if (t_grid.empty())
        throw std::invalid_argument("empty time grid");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1]))
            throw std::invalid_argument("time grid must be strictly ascending");

    std::vector<CovarianceState> out;
    out.reserve(t_grid.size());
    CovarianceState cur = V0;
    cur.t = t_grid.front();
    out.push_back(cur);

    if (opts.method == EvolveMethod::MatrixExponential) {
        double cached_h = -1.0;
        std::unique_ptr<ExactStepper> stepper;
        for (std::size_t i = 1; i < t_grid.size(); ++i) {
            const double h = t_grid[i] - t_grid[i - 1];
            if (!stepper || std::abs(h - cached_h) >
                                1e-12 * std::max(std::abs(h), std::abs(cached_h))) {
                stepper = std::make_unique<ExactStepper>(dd, h);
                cached_h = h;
            }
            stepper->apply(cur.V);
            cur.t = t_grid[i];
            out.push_back(cur);
        }
    } else {
        for (std::size_t i = 1; i < t_grid.size(); ++i) {
            rk_adaptive(dd, cur.V, t_grid[i - 1], t_grid[i], opts.rk_tolerance);
            cur.t = t_grid[i];
            out.push_back(cur);
        }
    }
    return out;
}

double analytic_nbs(double G_abs, double kappa_eff, double gamma_b,
                    double omega_b, double n_th, WarningLog* log) {
    const double G2 = G_abs * G_abs;
    const double k2 = kappa_eff * kappa_eff;
    const double w2 = omega_b * omega_b;
    const double pole = 4.0 * w2 + k2 - 16.0 * G2;
    if (std::abs(pole) < 1e-12 * (4.0 * w2 + k2 + 16.0 * G2)) {
        std::ostringstream os;
        os << "closed-form N_bs diverges: 16|G|^2 = " << 16.0 * G2
           << " hits 4 omega_b^2 + kappa_eff^2 = " << 4.0 * w2 + k2;
        throw SingularityError(os.str());
    }
    if (G2 > 0 && gamma_b > 0 && kappa_eff > 0 &&
        4.0 * G2 / (gamma_b * kappa_eff) < 100.0)
        warn(log, "4|G|^2/(gamma_b kappa_eff) < 100; the closed form is "
                  "outside its validity range");
    double value = 0.0;
    if (gamma_b * n_th != 0.0) {
        if (G2 == 0)
            throw SingularityError("closed-form N_bs needs G != 0 for the "
                                   "thermal term");
        value += (4.0 * G2 + k2) / (4.0 * G2 * (gamma_b + kappa_eff)) *
                 gamma_b * n_th;
    }
    value += (4.0 * w2 * (k2 + 8.0 * G2) + k2 * (k2 - 8.0 * G2)) /
             (16.0 * w2 * pole);
    return value;
}

StabilityVerdict stability(const EffectiveParams& e) {
    StabilityVerdict v;
    const DriftDiffusion dd = build_effective(e);
    v.max_re_eigenvalue = max_re_eigenvalue(dd.A);
    v.stable = v.max_re_eigenvalue < 0;
    v.threshold_g = std::sqrt(0.25 * e.omega_b * e.omega_b +
                              0.25 * e.kappa_eff * e.kappa_eff);
    const double scale = std::max(std::abs(e.delta_eff), e.omega_b);
    v.analytic_applicable = std::abs(e.delta_eff + e.omega_b) <= 1e-9 * scale;
    v.analytic_stable = std::abs(e.G) < v.threshold_g;
    return v;
}

}  // namespace magnomech
