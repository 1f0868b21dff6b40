#include "magnomech/adiabatic.hpp"

#include <algorithm>
#include <cmath>

namespace magnomech {

EffectiveParams effective_params(const SystemParams& p, std::complex<double> G,
                                 WarningLog* log) {
    const double da = p.delta_a();
    const double den = da * da + p.kappa_a * p.kappa_a;
    const double g2 = std::norm(p.g_ma);

    EffectiveParams e;
    e.delta_eff = p.delta_m() - (den > 0 ? g2 * da / den : 0.0);
    e.kappa_eff = p.kappa_m + (den > 0 ? g2 * p.kappa_a / den : 0.0);
    e.G = G;
    e.omega_b = p.omega_b;
    e.gamma_b = p.gamma_b;
    e.n_th = p.n_th;

    const double fast = std::max({std::abs(p.g_ma), std::abs(G), p.kappa_m});
    if (p.kappa_a < 5.0 * fast)
        warn(log, "cavity is not strongly overdamped (kappa_a < 5 max(|g_ma|, "
                  "|G|, kappa_m)); the reduced model may be inaccurate");
    return e;
}

std::array<double, 2> effective_noise_weights(const SystemParams& p) {
    const double da = p.delta_a();
    const double den = da * da + p.kappa_a * p.kappa_a;
    if (!(den > 0))
        throw std::domain_error("effective noise weights need kappa_a > 0 or "
                                "delta_a != 0");
    return {2.0 * p.kappa_a * std::norm(p.g_ma) / den, 2.0 * p.kappa_m};
}

}  // namespace magnomech
