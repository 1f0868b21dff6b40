#pragma once

#include <complex>
#include <optional>
#include <string>

#include "magnomech/errors.hpp"

namespace magnomech {

/// Full physical parameter set of the driven cavity-magnon-phonon system.
///
/// Every frequency-like quantity is angular (rad/s). Decay rates are
/// amplitude half-widths: an undriven mode amplitude relaxes as exp(-kappa t)
/// and the matching Lindblad rate is 2*kappa. Config files may specify
/// ordinary frequencies in Hz instead; the loader multiplies those by 2*pi.
struct SystemParams {
    double omega_a = 0.0;   ///< cavity frequency
    double omega_m = 0.0;   ///< magnon (Kittel) frequency
    double omega_b = 0.0;   ///< mechanical frequency
    double omega_d = 0.0;   ///< drive frequency
    double kappa_a = 0.0;   ///< cavity amplitude decay
    double kappa_m = 0.0;   ///< magnon amplitude decay
    double gamma_b = 0.0;   ///< mechanical amplitude decay
    std::complex<double> g_ma{0.0, 0.0};  ///< magnon-photon coupling
    double g_mb = 0.0;      ///< bare magnomechanical coupling
    std::complex<double> eps_d{0.0, 0.0};  ///< drive amplitude
    double n_th = 0.0;      ///< thermal phonon occupation of the bath

    // Optional laboratory quantities; zero means "not supplied".
    double H_bias = 0.0;            ///< bias magnetic field (T)
    double B0 = 0.0;                ///< drive field amplitude (T)
    double volume = 0.0;            ///< sphere volume (m^3)
    std::optional<double> T_env;    ///< bath temperature (K), alternative to n_th

    // Detunings are always derived, never stored.
    double delta_a() const { return omega_d - omega_a; }
    double delta_m() const { return omega_d - omega_m; }

    /// Validates invariants (rates >= 0, omega_b > 0, n_th >= 0, and
    /// T_env consistent with n_th to 1e-9 relative when both are given).
    /// Throws std::domain_error on violation.
    void check() const;
};

/// Classical steady-state amplitudes of the driven system and the
/// drive-enhanced coupling derived from them.
struct SteadyAmplitudes {
    std::complex<double> eta{0.0, 0.0};   ///< magnon amplitude (dimensionless)
    std::complex<double> beta{0.0, 0.0};  ///< phonon amplitude (dimensionless)
    std::complex<double> G{0.0, 0.0};     ///< enhanced coupling, eta * g_mb (rad/s)
    double delta_m_tilde = 0.0;           ///< magnon detuning shifted by the static displacement
    /// |g_mb (beta + beta*)|, reported so the delta_m_tilde ~ delta_m
    /// approximation stays checkable.
    double drive_shift = 0.0;
    int iterations = 0;                   ///< fixed-point refinement steps taken
};

/// Kittel-mode frequency for a bias field, omega_m = gyromagnetic_ratio * H.
/// Warns when H lies outside the tuning range [0, 1] T; negative H throws.
double magnon_frequency(double H_tesla, WarningLog* log = nullptr);

/// Bias field producing a given magnon frequency (inverse of the above).
double field_for_magnon_frequency(double omega_m);

/// Bose-Einstein occupation 1/(exp(hbar*omega/(kB*T)) - 1). T = 0 gives 0;
/// T < 0 or omega <= 0 throws.
double thermal_occupation(double T_kelvin, double omega_b);

/// Temperature at which the bath occupation equals n_th (inverse Bose).
double temperature_for(double n_th, double omega_b);

/// Magnon Rabi drive produced by a field of amplitude B0 on a sphere of
/// the given volume: eps_d = (sqrt(5)/4) * gamma_g * sqrt(rho V) * B0.
double drive_amplitude(double B0_tesla, double volume_m3);

struct SteadyStateOptions {
    /// When set, re-inserts the displaced detuning into the amplitude
    /// equation until self-consistent. Off by default; the bare detuning
    /// is a good approximation whenever drive_shift << |delta_m|.
    bool refine = false;
    int max_iterations = 100;
    double tolerance = 1e-12;
};

/// Solves the classical steady state: eta from the driven linear response,
/// beta from the static magnetostrictive displacement, G = eta * g_mb.
/// Throws SingularityError when the response denominator vanishes.
SteadyAmplitudes steady_state_amplitudes(const SystemParams& p,
                                         const SteadyStateOptions& opts = {},
                                         WarningLog* log = nullptr);

/// Named parameter sets.
///
/// "physical": the SI-valued experimental scenario (10.1 GHz modes,
/// 10 MHz mechanics, 1 GHz cavity linewidth, drive tuned one mechanical
/// frequency below the magnon).
///
/// "fig3": the dimensionless sweep set used by the figures, omega_b = 1,
/// kappa_a = 100, g_ma = 2, delta_a = +1, with delta_m placed so the
/// effective detuning is exactly -omega_b. G is supplied directly by the
/// caller in this preset (eps_d = g_mb = 0).
SystemParams preset(const std::string& name);

}  // namespace magnomech
