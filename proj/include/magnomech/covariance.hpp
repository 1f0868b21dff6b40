#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "magnomech/adiabatic.hpp"
#include "magnomech/errors.hpp"
#include "magnomech/params.hpp"

namespace magnomech {

/// Gaussian second-moment description. Quadratures x = (o + o^dag)/sqrt(2),
/// p = (o - o^dag)/(i sqrt(2)) per mode, ordered as the mode list below.
/// The moment equation dV/dt = A V + V A^T + D is exact for the linear
/// dynamics, whatever the initial state.
struct DriftDiffusion {
    Eigen::MatrixXd A;  ///< drift (rad/s entries)
    Eigen::MatrixXd D;  ///< diffusion, symmetric PSD (rad/s entries)
    std::vector<std::string> modes;  ///< quadrature pairs, e.g. {"m", "b"}

    int dim() const { return static_cast<int>(A.rows()); }
    int n_modes() const { return static_cast<int>(modes.size()); }
};

struct CovarianceState {
    Eigen::MatrixXd V;
    double t = 0.0;  ///< in the same time units as 1/rates
};

/// Mean occupation of one mode, (V_xx + V_pp - 1)/2.
double occupation(const CovarianceState& s, int mode);

/// Second moments in the complex-amplitude basis, for reporting:
/// <o_i^dag o_j> and <o_i o_j> reconstructed from the quadrature blocks.
std::complex<double> moment_dag(const CovarianceState& s, int i, int j);
std::complex<double> moment_pair(const CovarianceState& s, int i, int j);

/// Smallest eigenvalue of V + i Omega / 2 (Omega the symplectic form);
/// non-negative up to tolerance for any physical state.
double uncertainty_defect(const Eigen::MatrixXd& V);

/// Two-mode model (magnon, phonon): magnon sees a vacuum input of width
/// kappa_eff, the phonon a thermal input of width gamma_b and occupation
/// n_th. Counter-rotating coupling terms are kept in full.
DriftDiffusion build_effective(const EffectiveParams& e);

/// Full three-mode model (cavity, magnon, phonon) of the linearised
/// dynamics, used to validate the elimination at any bath occupation.
DriftDiffusion build_full(const SystemParams& p, std::complex<double> G);

/// Product state: vacuum everywhere except thermal occupations given per
/// mode (same order as dd.modes).
CovarianceState thermal_state(const DriftDiffusion& dd,
                              const std::vector<double>& occupations);

/// Steady covariance from A V + V A^T + D = 0, solved directly (Kronecker
/// elimination; dimensions here are tiny). Throws StabilityError when A has
/// a non-decaying eigenvalue. The residual is verified to 1e-10 ||D||.
CovarianceState steady_state(const DriftDiffusion& dd);

enum class EvolveMethod {
    MatrixExponential,  ///< exact per-step propagation (default)
    AdaptiveRK,         ///< embedded RK fallback, tolerance 1e-10
};

struct EvolveOptions {
    EvolveMethod method = EvolveMethod::MatrixExponential;
    double rk_tolerance = 1e-10;
};

/// Propagates V through the given times (ascending, first entry = V0's own
/// time). Symmetry is re-imposed after every step.
std::vector<CovarianceState> evolve(const DriftDiffusion& dd,
                                    const CovarianceState& V0,
                                    const std::vector<double>& t_grid,
                                    const EvolveOptions& opts = {});

/// Mean phonon number of the cooled steady state, closed form:
///   (4|G|^2 + k^2) / (4|G|^2 (g + k)) * g * n_th
///   + [4 w^2 (k^2 + 8|G|^2) + k^2 (k^2 - 8|G|^2)] / [16 w^2 (4 w^2 + k^2 - 16|G|^2)]
/// The expression is stated with full-width rates (k, g twice the amplitude
/// half-widths used elsewhere in this library) and holds on resonance
/// (delta_eff = -omega_b) when 4|G|^2 / (g k) >> 1; a warning is emitted
/// when that ratio drops below 100. Throws SingularityError at the pole of
/// the second term.
double analytic_nbs(double G_abs, double kappa_eff, double gamma_b,
                    double omega_b, double n_th, WarningLog* log = nullptr);

struct StabilityVerdict {
    bool stable = false;            ///< eigenvalue verdict (authoritative)
    double max_re_eigenvalue = 0.0;
    bool analytic_applicable = false;  ///< only at delta_eff = -omega_b
    bool analytic_stable = false;
    /// Closed-form threshold on |G| at delta_eff = -omega_b,
    /// sqrt(omega_b^2/4 + kappa_eff^2/4) with the half-width kappa_eff.
    /// (Equivalently omega_b^2/4 + kappa^2/16 with the full width
    /// kappa = 2 kappa_eff.) Coincides with the eigenvalue boundary.
    double threshold_g = 0.0;
};

/// Routh-Hurwitz style verdict: the analytic resonant-drive threshold plus
/// the general eigenvalue check on the drift matrix. At delta_eff = -omega_b
/// the two agree by construction.
StabilityVerdict stability(const EffectiveParams& e);

}  // namespace magnomech
