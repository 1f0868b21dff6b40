#include "magnomech/validate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "magnomech/constants.hpp"
#include "magnomech/covariance.hpp"

namespace magnomech {

std::string to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::warn: return "warn";
        case CheckStatus::fail: return "fail";
    }
    return "?";
}

const ValidityCheck* ValidityReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

namespace {

ValidityCheck make_check(std::string name, double lhs, double rhs,
                         double pass_below, double warn_below,
                         std::string note = {}) {
    ValidityCheck c;
    c.name = std::move(name);
    c.lhs = lhs;
    c.rhs = rhs;
    c.ratio = rhs > 0 ? lhs / rhs : std::numeric_limits<double>::infinity();
    c.pass_below = pass_below;
    c.warn_below = warn_below;
    c.note = std::move(note);
    if (c.ratio <= pass_below)
        c.status = CheckStatus::pass;
    else if (c.ratio <= warn_below)
        c.status = CheckStatus::warn;
    else
        c.status = CheckStatus::fail;
    return c;
}

}  // namespace

ValidityReport check_regimes(const SystemParams& p, const SteadyAmplitudes& amp,
                             const EffectiveParams& e,
                             const RegimeThresholds& thr) {
    ValidityReport report;

    report.checks.push_back(make_check(
        "resolved_sideband", p.kappa_m, p.omega_b, thr.sideband_pass,
        thr.sideband_warn, "magnon linewidth below the mechanical frequency"));

    const double spins = constants::yig_spin_density * p.volume;
    const double occupancy = std::norm(amp.eta);
    report.checks.push_back(make_check(
        "low_lying_excitation", occupancy, 5.0 * spins, thr.low_lying_pass,
        thr.low_lying_warn, "magnon occupation well below the spin number"));

    const double kerr = thr.kerr_coefficient > 0 ? thr.kerr_coefficient
                                                 : constants::kerr_coefficient;
    const double kerr_lhs = kerr * std::pow(std::abs(amp.eta), 3);
    report.checks.push_back(make_check(
        "kerr_negligible", kerr_lhs, std::abs(p.eps_d), thr.kerr_pass,
        thr.kerr_warn, "Kerr self-interaction small against the drive"));

    const double fast =
        5.0 * std::max({std::abs(p.g_ma), std::abs(e.G), p.kappa_m});
    report.checks.push_back(make_check(
        "adiabatic_hierarchy", fast, p.kappa_a, thr.adiabatic_pass,
        thr.adiabatic_warn, "cavity much faster than every other scale"));

    const StabilityVerdict verdict = stability(e);
    ValidityCheck stab = make_check(
        "stability", std::norm(e.G), verdict.threshold_g * verdict.threshold_g,
        1.0, 1.0, "below the resonant-drive instability threshold");
    if (!verdict.stable) stab.status = CheckStatus::fail;
    report.checks.push_back(stab);

    report.overall = CheckStatus::pass;
    for (const auto& c : report.checks)
        report.overall = std::max(report.overall, c.status,
                                  [](CheckStatus a, CheckStatus b) {
                                      return static_cast<int>(a) < static_cast<int>(b);
                                  });
    return report;
}

}  // namespace magnomech
