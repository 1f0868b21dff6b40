#pragma once

#include <array>
#include <complex>

#include "magnomech/errors.hpp"
#include "magnomech/params.hpp"

namespace magnomech {

/// Reduced two-mode (magnon + phonon) model obtained by eliminating the
/// fast cavity. The eliminated mode survives only through the detuning
/// pull and the added decay; the coupling G is untouched.
struct EffectiveParams {
    double delta_eff = 0.0;   ///< effective magnon detuning (rad/s)
    double kappa_eff = 0.0;   ///< effective magnon decay (rad/s, half-width)
    std::complex<double> G{0.0, 0.0};  ///< enhanced magnomechanical coupling (rad/s)
    double omega_b = 0.0;
    double gamma_b = 0.0;
    double n_th = 0.0;
};

/// Eliminates the cavity:
///   delta_eff = delta_m - |g_ma|^2 delta_a / (delta_a^2 + kappa_a^2)
///   kappa_eff = kappa_m + |g_ma|^2 kappa_a / (delta_a^2 + kappa_a^2)
/// Valid deep in the bad-cavity regime; warns when
/// kappa_a < 5 * max(|g_ma|, |G|, kappa_m).
EffectiveParams effective_params(const SystemParams& p, std::complex<double> G,
                                 WarningLog* log = nullptr);

/// Weights of the two vacuum channels feeding the effective magnon input,
/// {2 kappa_a |g_ma|^2 / (delta_a^2 + kappa_a^2), 2 kappa_m}. Their half-sum
/// equals kappa_eff, which keeps dissipation and noise consistent.
std::array<double, 2> effective_noise_weights(const SystemParams& p);

}  // namespace magnomech
