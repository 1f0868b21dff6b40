#pragma once

#include <string>
#include <vector>

#include "magnomech/adiabatic.hpp"
#include "magnomech/params.hpp"

namespace magnomech {

enum class CheckStatus { pass, warn, fail };

std::string to_string(CheckStatus s);

struct ValidityCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;  ///< lhs / rhs, dimensionless
    double pass_below = 0.0;
    double warn_below = 0.0;
    CheckStatus status = CheckStatus::pass;
    std::string note;
};

struct ValidityReport {
    std::vector<ValidityCheck> checks;
    CheckStatus overall = CheckStatus::pass;

    const ValidityCheck* find(const std::string& name) const;
};

/// Per-check ratio thresholds (all configurable; the report is monotone in
/// them: tightening a threshold can only demote a status).
struct RegimeThresholds {
    double sideband_pass = 1.0, sideband_warn = 1.0;
    double low_lying_pass = 1e-2, low_lying_warn = 1e-1;
    double kerr_pass = 1e-1, kerr_warn = 1.0;
    double adiabatic_pass = 1.0, adiabatic_warn = 2.5;  ///< on 5 max(...)/kappa_a
    double kerr_coefficient = 0.0;  ///< 0 = library default
};

/// Evaluates every regime condition the model relies on:
///  1. resolved sideband        kappa_m / omega_b
///  2. low-lying excitation     |eta|^2 / (5 Lambda V)
///  3. Kerr negligibility       K |eta|^3 / |eps_d|
///  4. adiabatic hierarchy      5 max(|g_ma|, |G|, kappa_m) / kappa_a
///  5. dynamical stability      |G|^2 / threshold^2
/// Always returns a report; nothing is enforced.
ValidityReport check_regimes(const SystemParams& p, const SteadyAmplitudes& amp,
                             const EffectiveParams& e,
                             const RegimeThresholds& thr = {});

}  // namespace magnomech
