#include "magnomech/params.hpp"

#include <cmath>
#include <sstream>

#include "magnomech/constants.hpp"

namespace magnomech {

namespace {
constexpr double kHbarOverKb = constants::hbar / constants::k_boltzmann;
}

void SystemParams::check() const {
    if (kappa_a < 0 || kappa_m < 0 || gamma_b < 0)
        throw std::domain_error("decay rates must be non-negative");
    if (!(omega_b > 0))
        throw std::domain_error("omega_b must be positive");
    if (n_th < 0)
        throw std::domain_error("n_th must be non-negative");
    if (T_env) {
        const double n_from_T = thermal_occupation(*T_env, omega_b);
        const double scale = std::max(std::abs(n_from_T), std::abs(n_th));
        if (scale > 0 && std::abs(n_from_T - n_th) > 1e-9 * scale) {
            std::ostringstream os;
            os << "T_env = " << *T_env << " K implies n_th = " << n_from_T
               << ", but n_th = " << n_th << " was supplied";
            throw std::domain_error(os.str());
        }
    }
}

double magnon_frequency(double H_tesla, WarningLog* log) {
    if (H_tesla < 0)
        throw std::domain_error("bias field must be non-negative");
    if (H_tesla > 1.0)
        warn(log, "bias field above the 1 T tuning range");
    return constants::gyromagnetic_ratio * H_tesla;
}

double field_for_magnon_frequency(double omega_m) {
    if (omega_m < 0)
        throw std::domain_error("magnon frequency must be non-negative");
    return omega_m / constants::gyromagnetic_ratio;
}

double thermal_occupation(double T_kelvin, double omega_b) {
    if (T_kelvin < 0)
        throw std::domain_error("temperature must be non-negative");
    if (!(omega_b > 0))
        throw std::domain_error("omega_b must be positive");
    if (T_kelvin == 0) return 0.0;
    return 1.0 / std::expm1(kHbarOverKb * omega_b / T_kelvin);
}

double temperature_for(double n_th, double omega_b) {
    if (n_th < 0)
        throw std::domain_error("n_th must be non-negative");
    if (!(omega_b > 0))
        throw std::domain_error("omega_b must be positive");
    if (n_th == 0) return 0.0;
    return kHbarOverKb * omega_b / std::log1p(1.0 / n_th);
}

double drive_amplitude(double B0_tesla, double volume_m3) {
    if (B0_tesla < 0)
        throw std::domain_error("drive field amplitude must be non-negative");
    if (!(volume_m3 > 0))
        throw std::domain_error("sphere volume must be positive");
    const double spins = constants::yig_spin_density * volume_m3;
    return 0.25 * std::sqrt(5.0) * constants::gyromagnetic_ratio *
           std::sqrt(spins) * B0_tesla;
}

namespace {

std::complex<double> response_eta(const SystemParams& p, double delta_m_eff) {
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> cav = -i * p.delta_a() + p.kappa_a;
    const std::complex<double> mag = -i * delta_m_eff + p.kappa_m;
    const std::complex<double> den = std::norm(p.g_ma) + mag * cav;
    const double scale = std::norm(p.g_ma) + std::abs(mag) * std::abs(cav);
    if (std::abs(den) <= 1e-300 || std::abs(den) < 1e-14 * scale) {
        std::ostringstream os;
        os << "steady-state response is singular: |g_ma|^2 + "
              "(-i delta_m + kappa_m)(-i delta_a + kappa_a) vanishes for "
              "delta_a = " << p.delta_a() << ", delta_m = " << delta_m_eff
           << ", kappa_a = " << p.kappa_a << ", kappa_m = " << p.kappa_m;
        throw SingularityError(os.str());
    }
    return p.eps_d * cav / den;
}

}  // namespace

SteadyAmplitudes steady_state_amplitudes(const SystemParams& p,
                                         const SteadyStateOptions& opts,
                                         WarningLog* log) {
    const std::complex<double> i(0.0, 1.0);
    SteadyAmplitudes out;
    double delta_eff = p.delta_m();
    out.eta = response_eta(p, delta_eff);

    auto displacement = [&](const std::complex<double>& eta) {
        return -i * p.g_mb * std::norm(eta) /
               (i * p.omega_b + std::complex<double>(p.gamma_b, 0.0));
    };
    out.beta = displacement(out.eta);

    if (opts.refine) {
        for (; out.iterations < opts.max_iterations; ++out.iterations) {
            const double shifted = p.delta_m() - p.g_mb * 2.0 * out.beta.real();
            const std::complex<double> next = response_eta(p, shifted);
            const double change = std::abs(next - out.eta);
            out.eta = next;
            out.beta = displacement(out.eta);
            delta_eff = shifted;
            if (change <= opts.tolerance * std::max(std::abs(out.eta), 1e-300))
                break;
        }
        if (out.iterations == opts.max_iterations)
            warn(log, "steady-state refinement hit the iteration cap");
    }

    out.G = out.eta * p.g_mb;
    out.drive_shift = std::abs(p.g_mb * 2.0 * out.beta.real());
    out.delta_m_tilde = p.delta_m() - p.g_mb * 2.0 * out.beta.real();
    if (out.drive_shift > 0.1 * std::abs(p.delta_m()))
        warn(log, "static displacement shifts the magnon detuning by more "
                  "than 10%; consider the refined solve");
    return out;
}

SystemParams preset(const std::string& name) {
    using constants::two_pi;
    SystemParams p;
    if (name == "physical") {
        p.omega_a = two_pi * 10.1e9;
        p.omega_m = two_pi * 10.1e9;
        p.omega_b = two_pi * 10.0e6;
        p.omega_d = p.omega_m - p.omega_b;  // red-detuned by one phonon
        p.kappa_a = two_pi * 1.0e9;
        p.kappa_m = two_pi * 0.15e6;
        p.gamma_b = two_pi * 100.0;
        p.g_ma = two_pi * 20.0e6;
        p.g_mb = two_pi * 0.1;
        p.eps_d = two_pi * 4.0e14;
        p.n_th = 1000.0;
        p.H_bias = field_for_magnon_frequency(p.omega_m);
        p.volume = 4.0 / 3.0 * constants::pi * std::pow(0.5e-3, 3);
        return p;
    }
    if (name == "fig3") {
        // Dimensionless, omega_b = 1. The carrier anchor is arbitrary;
        // only detunings enter the dynamics.
        const double omega_d = 100.0;
        const double delta_a = 1.0;
        const double kappa_a = 100.0;
        const double g_ma = 2.0;
        // Place delta_m so the cavity pull lands the effective detuning
        // exactly at -omega_b.
        const double pull = g_ma * g_ma * delta_a / (delta_a * delta_a + kappa_a * kappa_a);
        const double delta_m = -1.0 + pull;
        p.omega_b = 1.0;
        p.omega_d = omega_d;
        p.omega_a = omega_d - delta_a;
        p.omega_m = omega_d - delta_m;
        p.kappa_a = kappa_a;
        p.kappa_m = 0.15;
        p.gamma_b = 1e-5;
        p.g_ma = g_ma;
        p.g_mb = 0.0;
        p.eps_d = 0.0;
        p.n_th = 1000.0;
        return p;
    }
    throw ConfigError("unknown preset '" + name + "' (available: physical, fig3)");
}

}  // namespace magnomech
