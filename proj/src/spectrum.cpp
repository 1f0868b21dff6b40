#include "magnomech/spectrum.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "magnomech/parallel.hpp"

namespace magnomech {

std::complex<double> susceptibility(double omega, const EffectiveParams& e) {
    const std::complex<double> den(e.kappa_eff, -(omega + e.delta_eff));
    const double scale = std::abs(omega) + std::abs(e.delta_eff) + e.kappa_eff;
    if (std::abs(den) <= (scale > 0 ? 1e-300 : 0.0) ||
        (scale > 0 && std::abs(den) < 1e-15 * scale)) {
        std::ostringstream os;
        os << "susceptibility pole: omega = " << omega
           << " hits -delta_eff with kappa_eff = " << e.kappa_eff;
        throw SingularityError(os.str());
    }
    if (scale == 0)
        throw SingularityError("susceptibility undefined for omega = "
                               "delta_eff = kappa_eff = 0");
    return 1.0 / den;
}

double scattering_rate(double omega, const EffectiveParams& e) {
    return 2.0 * e.kappa_eff * std::norm(e.G) * std::norm(susceptibility(omega, e));
}

std::complex<double> self_energy(double omega, const EffectiveParams& e) {
    const std::complex<double> i(0.0, 1.0);
    return -i * std::norm(e.G) *
           (susceptibility(omega, e) - std::conj(susceptibility(-omega, e)));
}

CoolingResult cooling_rates(const EffectiveParams& e) {
    CoolingResult r;
    if (e.G == std::complex<double>(0.0, 0.0)) {
        // Uncoupled: the resonator just thermalises with its own bath.
        r.n_f = r.classical_part = e.n_th;
        return r;
    }
    r.a_minus = scattering_rate(e.omega_b, e);
    r.a_plus = scattering_rate(-e.omega_b, e);
    r.gamma_md = r.a_minus - r.a_plus;

    const std::complex<double> sigma = self_energy(e.omega_b, e);
    r.delta_omega_b = sigma.real();
    const double gamma_md_sigma = -2.0 * sigma.imag();
    const double scale = std::max({r.a_minus, r.a_plus, 1e-300});
    if (std::abs(r.gamma_md - gamma_md_sigma) > 1e-12 * scale)
        throw IntegrationError("damping routes disagree: rate difference vs "
                               "self-energy");

    const double total = r.gamma_md + e.gamma_b;
    if (total <= 0) {
        r.n_f_valid = false;
        r.n_f = std::numeric_limits<double>::quiet_NaN();
        r.heating = true;
        return r;
    }
    r.quantum_part = r.a_plus / total;
    r.classical_part = e.gamma_b * e.n_th / total;
    r.n_f = r.quantum_part + r.classical_part;
    r.heating = r.n_f > e.n_th;
    return r;
}

DetuningSweep detuning_sweep(const EffectiveParams& templ, double delta_from,
                             double delta_to, int n_points, int jobs) {
    if (n_points < 2)
        throw std::invalid_argument("detuning sweep needs at least 2 points");
    DetuningSweep sweep;
    sweep.rows.resize(n_points);
    const double step = (delta_to - delta_from) / (n_points - 1);
    parallel_for(n_points, jobs, [&](std::size_t i) {
        EffectiveParams e = templ;
        e.delta_eff = delta_from + step * static_cast<double>(i);
        sweep.rows[i].delta_eff = e.delta_eff;
        sweep.rows[i].cooling = cooling_rates(e);
    });

    sweep.max_gamma_md = -std::numeric_limits<double>::infinity();
    sweep.min_n_f = std::numeric_limits<double>::infinity();
    for (const auto& row : sweep.rows) {
        if (row.cooling.gamma_md > sweep.max_gamma_md) {
            sweep.max_gamma_md = row.cooling.gamma_md;
            sweep.argmax_gamma_md = row.delta_eff;
        }
        if (row.cooling.n_f_valid && row.cooling.n_f < sweep.min_n_f) {
            sweep.min_n_f = row.cooling.n_f;
            sweep.argmin_n_f = row.delta_eff;
            sweep.any_valid = true;
        }
    }
    return sweep;
}

FieldSweep field_sweep(const SystemParams& p, std::complex<double> G,
                       double H_from, double H_to, int n_points, int jobs) {
    if (n_points < 2)
        throw std::invalid_argument("field sweep needs at least 2 points");
    FieldSweep sweep;
    sweep.rows.resize(n_points);
    const double step = (H_to - H_from) / (n_points - 1);
    parallel_for(n_points, jobs, [&](std::size_t i) {
        FieldSweepRow& row = sweep.rows[i];
        row.H_tesla = H_from + step * static_cast<double>(i);
        row.omega_m = magnon_frequency(row.H_tesla);
        SystemParams q = p;
        q.omega_m = row.omega_m;
        q.H_bias = row.H_tesla;
        const EffectiveParams e = effective_params(q, G);
        row.delta_eff = e.delta_eff;
        row.cooling = cooling_rates(e);
        row.in_window = row.cooling.n_f_valid && row.cooling.n_f < 1.0;
    });

    int first = -1, last = -1, count = 0;
    for (int i = 0; i < n_points; ++i) {
        if (sweep.rows[i].in_window) {
            if (first < 0) first = i;
            last = i;
            ++count;
        }
    }
    if (first >= 0) {
        sweep.has_window = true;
        sweep.window_contiguous = (count == last - first + 1);
        sweep.window_low = sweep.rows[first].H_tesla;
        sweep.window_high = sweep.rows[last].H_tesla;
    }
    return sweep;
}

}  // namespace magnomech
