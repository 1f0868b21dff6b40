#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "magnomech/adiabatic.hpp"
#include "magnomech/errors.hpp"
#include "magnomech/params.hpp"

namespace magnomech {

using CMatrix = Eigen::MatrixXcd;

/// Truncated tensor-product Fock space. Mode order fixes the Kronecker
/// layout (first label is the slowest index).
struct FockSpace {
    std::vector<std::string> labels;
    std::vector<int> dims;

    static constexpr int kDefaultDimCap = 4096;

    FockSpace(std::vector<std::string> labels_, std::vector<int> dims_,
              int dim_cap = kDefaultDimCap);
    int n_modes() const { return static_cast<int>(dims.size()); }
    int dim() const;
    int mode_index(const std::string& label) const;
};

/// Lowering operator of one mode on the product space.
CMatrix lowering(const FockSpace& space, int mode);
CMatrix number_operator(const FockSpace& space, int mode);

/// Projector onto the top Fock level of one mode; its population is the
/// truncation-leak monitor.
CMatrix top_level_projector(const FockSpace& space, int mode);

/// Product state with the given thermal occupation per mode (0 = vacuum).
CMatrix product_thermal(const FockSpace& space, const std::vector<double>& nbar);

/// One jump operator plus its Lindblad rate.
struct Dissipator {
    CMatrix op;
    double rate = 0.0;
};

/// Three-mode linearised Hamiltonian on (a, m, b):
///   -delta_a a^dag a - delta_m_tilde m^dag m + omega_b b^dag b
///   + (G m^dag + G* m)(b + b^dag) + (g_ma m^dag a + g_ma* m a^dag)
CMatrix build_hamiltonian_linear(const FockSpace& space, const SystemParams& p,
                                 std::complex<double> G,
                                 double delta_m_tilde_override = 0.0,
                                 bool use_override = false);

/// Two-mode effective Hamiltonian on (m, b):
///   -delta_eff m^dag m + omega_b b^dag b + (G m^dag + G* m)(b + b^dag)
CMatrix build_hamiltonian_effective(const FockSpace& space,
                                    const EffectiveParams& e);

/// Dissipator sets in the half-width convention used throughout: the
/// Lindblad rate of a mode with amplitude decay kappa is 2 kappa, and the
/// phonon bath splits into 2 gamma_b (n_th + 1) down and 2 gamma_b n_th up.
std::vector<Dissipator> dissipators_linear(const FockSpace& space,
                                           const SystemParams& p);
std::vector<Dissipator> dissipators_effective(const FockSpace& space,
                                              const EffectiveParams& e);

/// Right-hand side of the master equation,
///   i[rho, H] + sum_k rate_k (o rho o^dag - {o^dag o, rho}/2).
CMatrix lindblad_rhs(const CMatrix& rho, const CMatrix& H,
                     const std::vector<Dissipator>& dissipators);

struct FockEvolveOptions {
    /// Target RK4 step (grid intervals are subdivided to hit it exactly).
    /// Non-positive requests an automatic step from the stiffest generator
    /// scale, sum_k rate_k ||o_k^dag o_k|| + ||H||, inside the RK4 stability
    /// region with margin.
    double dt = 0.0;
    double leak_threshold = 1e-4;
    bool record_states = false;  ///< keep full density-matrix snapshots
    bool throw_on_leak = true;
};

struct FockTrajectory {
    std::vector<double> times;
    /// occupations[k][i] = <n_k>(times[i]) for mode k.
    std::vector<std::vector<double>> occupations;
    std::vector<CMatrix> states;  ///< only when record_states
    double max_trace_drift = 0.0;
    double max_hermiticity_drift = 0.0;
    double max_leak = 0.0;
    bool leaked = false;
};

/// Fixed-step RK4 through the sample grid. Trace and Hermiticity are
/// preserved algebraically by the right-hand side, so their drift is a
/// roundoff monitor; the real accuracy limit is truncation leak, which
/// raises TruncationLeakError past the threshold (unless disabled).
FockTrajectory evolve_density(const CMatrix& rho0, const FockSpace& space,
                              const std::vector<double>& t_grid,
                              const CMatrix& H,
                              const std::vector<Dissipator>& dissipators,
                              const FockEvolveOptions& opts = {});

/// Reduced state over the kept modes (by index, ascending order kept).
CMatrix partial_trace(const CMatrix& rho, const FockSpace& space,
                      const std::vector<int>& keep);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2. Inputs must be
/// valid density matrices (Hermitian, unit trace, PSD within tolerance).
double fidelity(const CMatrix& rho, const CMatrix& sigma);

/// Max deviation from a valid density matrix: returns
/// {hermiticity defect, |trace - 1|, most negative eigenvalue}.
struct DensityDefects {
    double hermiticity = 0.0;
    double trace = 0.0;
    double negativity = 0.0;
};
DensityDefects density_defects(const CMatrix& rho);

}  // namespace magnomech
