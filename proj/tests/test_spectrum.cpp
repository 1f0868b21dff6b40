#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "magnomech/spectrum.hpp"

using namespace magnomech;

namespace {

EffectiveParams eff(double delta, double kappa, double G, double gamma = 1e-5,
                    double nth = 1000.0) {
    EffectiveParams e;
    e.delta_eff = delta;
    e.kappa_eff = kappa;
    e.G = G;
    e.omega_b = 1.0;
    e.gamma_b = gamma;
    e.n_th = nth;
    return e;
}

}  // namespace

TEST_CASE("susceptibility") {
    const EffectiveParams e = eff(-1.0, 0.19, 0.15);
    SUBCASE("resonance peak is real, 1/kappa") {
        const auto chi = susceptibility(-e.delta_eff, e);
        CHECK(chi.real() == doctest::Approx(1.0 / 0.19).epsilon(1e-14));
        CHECK(chi.imag() == 0.0);
    }
    SUBCASE("decays at large frequency") {
        CHECK(std::abs(susceptibility(1e9, e)) < 2e-9);
    }
    SUBCASE("explicit value at -omega_b") {
        const auto chi = susceptibility(-1.0, e);
        const std::complex<double> expect =
            1.0 / std::complex<double>(0.19, 2.0);
        CHECK(std::abs(chi - expect) < 1e-15);
    }
    SUBCASE("exact pole throws") {
        const EffectiveParams lossless = eff(-1.0, 0.0, 0.15);
        CHECK_THROWS_AS(susceptibility(1.0, lossless), SingularityError);
        CHECK_NOTHROW(susceptibility(0.5, lossless));
    }
}

TEST_CASE("cooling rates at the working point") {
    const CoolingResult r = cooling_rates(eff(-1.0, 0.19, 0.15));
    CHECK(r.a_minus == doctest::Approx(0.23684210526315788).epsilon(1e-13));
    CHECK(r.a_plus == doctest::Approx(0.0021183816060057975).epsilon(1e-13));
    CHECK(r.gamma_md == doctest::Approx(0.2347).epsilon(1e-3));
    CHECK(r.n_f == doctest::Approx(0.052).epsilon(0.02));
    CHECK(r.n_f == doctest::Approx(0.05162607833762178).epsilon(1e-10));
    CHECK(r.delta_omega_b == doctest::Approx(-0.011149376873714723).epsilon(1e-10));
    CHECK(r.n_f_valid);
    CHECK_FALSE(r.heating);
    // decomposition adds up bitwise
    CHECK(r.n_f == r.quantum_part + r.classical_part);
}

TEST_CASE("uncoupled system keeps the bath occupation") {
    const CoolingResult r = cooling_rates(eff(-1.0, 0.19, 0.0));
    CHECK(r.a_plus == 0.0);
    CHECK(r.a_minus == 0.0);
    CHECK(r.gamma_md == 0.0);
    CHECK(r.n_f == 1000.0);
}

TEST_CASE("damping identity across 10^4 random draws") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const double delta = -3.0 + 6.0 * u(rng);
        const double kappa = 1e-3 + u(rng);
        const double mag = 0.5 * u(rng);
        const double phase = 6.283185307179586 * u(rng);
        EffectiveParams e = eff(delta, kappa, 0.0, 1e-6 + 1e-2 * u(rng),
                                1e4 * u(rng));
        e.G = std::polar(mag, phase);
        if (std::abs(e.G) == 0.0) continue;

        // route 1: rate difference; route 2: self-energy
        const double g1 = scattering_rate(e.omega_b, e) -
                          scattering_rate(-e.omega_b, e);
        const double g2 = -2.0 * self_energy(e.omega_b, e).imag();
        const double scale = std::max(scattering_rate(e.omega_b, e),
                                      scattering_rate(-e.omega_b, e));
        REQUIRE(std::abs(g1 - g2) <= 1e-12 * scale);

        // the packaged result keeps the decomposition exact
        const CoolingResult r = cooling_rates(e);
        if (r.n_f_valid)
            REQUIRE(r.n_f == r.quantum_part + r.classical_part);
        REQUIRE(r.a_plus >= 0.0);
        REQUIRE(r.a_minus >= 0.0);
    }
}

TEST_CASE("scattering rate is non-negative everywhere") {
    const EffectiveParams e = eff(0.7, 0.3, 0.25);
    for (double w = -5.0; w <= 5.0; w += 0.01)
        CHECK(scattering_rate(w, e) >= 0.0);
}

TEST_CASE("backaction floor in the cold, lossless limit") {
    EffectiveParams e = eff(-1.0, 0.19, 0.1, 1e-14, 0.0);
    const CoolingResult r = cooling_rates(e);
    CHECK(r.n_f == doctest::Approx(r.a_plus / r.gamma_md).epsilon(1e-9));
}

TEST_CASE("blue detuning produces gain, flagged invalid") {
    const CoolingResult r = cooling_rates(eff(+1.0, 0.19, 0.15));
    CHECK(r.gamma_md < 0.0);
    CHECK_FALSE(r.n_f_valid);
    CHECK(r.heating);
}

TEST_CASE("detuning sweep extrema and symmetry") {
    const EffectiveParams base = eff(0.0, 0.18999600039996, 0.15);
    const DetuningSweep sweep = detuning_sweep(base, -3.0, 3.0, 601);
    REQUIRE(sweep.rows.size() == 601);
    CHECK(sweep.argmax_gamma_md == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(sweep.argmin_n_f == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(sweep.min_n_f < 0.1);

    // gamma_md is odd in the detuning
    for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
        const auto& a = sweep.rows[i];
        const auto& b = sweep.rows[sweep.rows.size() - 1 - i];
        CHECK(a.cooling.gamma_md ==
              doctest::Approx(-b.cooling.gamma_md).epsilon(1e-10));
    }

    // weaker coupling cools less
    const DetuningSweep weaker =
        detuning_sweep(eff(0.0, 0.18999600039996, 0.075), -3.0, 3.0, 601);
    CHECK(weaker.min_n_f > sweep.min_n_f);
    CHECK(weaker.min_n_f < 0.3);
}

TEST_CASE("sweeps are independent of the worker count") {
    const EffectiveParams base = eff(0.0, 0.19, 0.12);
    const DetuningSweep s1 = detuning_sweep(base, -2.0, 2.0, 101, 1);
    const DetuningSweep s8 = detuning_sweep(base, -2.0, 2.0, 101, 8);
    for (std::size_t i = 0; i < s1.rows.size(); ++i) {
        CHECK(s1.rows[i].cooling.gamma_md == s8.rows[i].cooling.gamma_md);
        CHECK(s1.rows[i].cooling.n_f_valid == s8.rows[i].cooling.n_f_valid);
        if (s1.rows[i].cooling.n_f_valid)
            CHECK(s1.rows[i].cooling.n_f == s8.rows[i].cooling.n_f);
    }
}

TEST_CASE("field sweep windows nest with coupling") {
    const SystemParams p = preset("physical");
    const FieldSweep strong = field_sweep(p, 0.15 * p.omega_b, 0.357, 0.3645, 601);
    const FieldSweep weak = field_sweep(p, 0.10 * p.omega_b, 0.357, 0.3645, 601);
    REQUIRE(strong.has_window);
    REQUIRE(weak.has_window);
    CHECK(strong.window_contiguous);
    CHECK(weak.window_contiguous);
    CHECK(strong.window_low < weak.window_low);
    CHECK(strong.window_high > weak.window_high);

    // the field reaching delta_eff = -omega_b reproduces the detuning-sweep
    // optimum
    double best_nf = 1e300, best_delta = 0.0;
    for (const auto& row : strong.rows) {
        if (row.cooling.n_f_valid && row.cooling.n_f < best_nf) {
            best_nf = row.cooling.n_f;
            best_delta = row.delta_eff / p.omega_b;
        }
    }
    // the H grid quantises delta_eff in steps of ~0.035 omega_b
    CHECK(std::abs(best_delta + 1.0) < 0.018);
}
