#pragma once

#include <complex>
#include <vector>

#include "magnomech/adiabatic.hpp"
#include "magnomech/params.hpp"

namespace magnomech {

/// Cooling analytics from the magnetic force noise spectrum. All rates are
/// returned with the zero-point amplitude already absorbed, so no mechanical
/// mass or x_ZPF ever appears.
struct CoolingResult {
    double a_plus = 0.0;         ///< heating rate A+ (rad/s)
    double a_minus = 0.0;        ///< cooling rate A- (rad/s)
    double gamma_md = 0.0;       ///< magnetic damping, A- minus A+ (rad/s)
    double delta_omega_b = 0.0;  ///< mechanical frequency shift (rad/s)
    double quantum_part = 0.0;   ///< backaction contribution to n_f
    double classical_part = 0.0; ///< residual thermal contribution to n_f
    double n_f = 0.0;            ///< final phonon number (quantum + classical)
    bool n_f_valid = true;       ///< false when gamma_md + gamma_b <= 0 (net gain)
    bool heating = false;        ///< n_f exceeds the bath occupation
};

/// Magnon response chi(omega) = 1 / (-i(omega + delta_eff) + kappa_eff).
/// Throws SingularityError at an exact pole (kappa_eff = 0, omega = -delta_eff).
std::complex<double> susceptibility(double omega, const EffectiveParams& e);

/// Scattering rate at frequency omega, 2 kappa_eff |G chi(omega)|^2.
/// A- and A+ are this rate at +/- omega_b; it is the force spectrum with
/// the zero-point factor absorbed, hence non-negative for every omega.
double scattering_rate(double omega, const EffectiveParams& e);

/// Self-energy of the mechanical mode, -i|G|^2 [chi(omega) - chi*(-omega)].
std::complex<double> self_energy(double omega, const EffectiveParams& e);

/// Evaluates A+, A-, the magnetic damping, the frequency shift and the
/// final phonon number. The damping is computed along two independent
/// algebraic routes (rate difference and self-energy) which must agree to
/// 1e-12 relative; a mismatch throws IntegrationError. When
/// gamma_md + gamma_b <= 0 the result is flagged invalid instead of thrown.
CoolingResult cooling_rates(const EffectiveParams& e);

struct DetuningSweepRow {
    double delta_eff = 0.0;
    CoolingResult cooling;
};

struct DetuningSweep {
    std::vector<DetuningSweepRow> rows;
    double argmax_gamma_md = 0.0;
    double argmin_n_f = 0.0;     ///< over rows with a valid n_f
    double max_gamma_md = 0.0;
    double min_n_f = 0.0;
    bool any_valid = false;
};

/// Evaluates the cooling analytics on a detuning grid (all other effective
/// parameters held at `templ`). Rows are independent and dispatched to a
/// worker pool; output order is the grid order regardless of job count.
DetuningSweep detuning_sweep(const EffectiveParams& templ, double delta_from,
                             double delta_to, int n_points, int jobs = 0);

struct FieldSweepRow {
    double H_tesla = 0.0;
    double omega_m = 0.0;
    double delta_eff = 0.0;
    CoolingResult cooling;
    bool in_window = false;  ///< n_f < 1 with a valid n_f
};

struct FieldSweep {
    std::vector<FieldSweepRow> rows;
    bool has_window = false;
    bool window_contiguous = false;
    double window_low = 0.0;   ///< first H with n_f < 1
    double window_high = 0.0;  ///< last H with n_f < 1
};

/// Sweeps the bias field at fixed drive frequency and fixed G: each H moves
/// the magnon frequency, hence the detuning, and the cooling analytics are
/// re-evaluated. Reports the window of ground-state cooling (n_f < 1).
FieldSweep field_sweep(const SystemParams& p, std::complex<double> G,
                       double H_from, double H_to, int n_points, int jobs = 0);

}  // namespace magnomech
