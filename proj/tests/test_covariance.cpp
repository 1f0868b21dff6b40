#include <doctest.h>

#include <cmath>
#include <random>

#include "magnomech/covariance.hpp"
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

SystemParams fig3_system(double g_mb_unused = 0.0) {
    (void)g_mb_unused;
    return preset("fig3");
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

}  // namespace

TEST_CASE("uncoupled steady state reproduces the baths") {
    const DriftDiffusion dd = build_effective(eff(-1.0, 0.19, 0.0, 1e-3, 7.0));
    const CovarianceState s = steady_state(dd);
    CHECK(occupation(s, 0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(occupation(s, 1) == doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("uncoupled drift eigenvalues are the mode poles") {
    const DriftDiffusion dd = build_effective(eff(-0.7, 0.19, 0.0, 1e-3, 0.0));
    Eigen::EigenSolver<Eigen::MatrixXd> es(dd.A, false);
    const auto ev = es.eigenvalues();
    int magnon_like = 0, phonon_like = 0;
    for (int i = 0; i < ev.size(); ++i) {
        if (std::abs(ev[i].real() + 0.19) < 1e-12 &&
            std::abs(std::abs(ev[i].imag()) - 0.7) < 1e-12)
            ++magnon_like;
        if (std::abs(ev[i].real() + 1e-3) < 1e-12 &&
            std::abs(std::abs(ev[i].imag()) - 1.0) < 1e-12)
            ++phonon_like;
    }
    CHECK(magnon_like == 2);
    CHECK(phonon_like == 2);
}

TEST_CASE("strong-coupling steady state brackets the known value") {
    const DriftDiffusion dd = build_effective(eff(-1.0, 0.3, 0.4));
    const CovarianceState s = steady_state(dd);
    const double nbs = occupation(s, 1);
    CHECK(nbs == doctest::Approx(0.2816970470416025).epsilon(1e-9));
    CHECK(nbs > 0.25);
    CHECK(nbs < 0.29);
    // residual discipline
    CHECK((dd.A * s.V + s.V * dd.A.transpose() + dd.D).norm() <=
          1e-10 * dd.D.norm());
}

TEST_CASE("closed-form steady occupation") {
    CHECK(analytic_nbs(0.4, 0.3, 1e-5, 1.0, 1000.0) ==
          doctest::Approx(0.25750077516479314).epsilon(1e-14));
    CHECK(analytic_nbs(0.15, 0.3, 1e-5, 1.0, 1000.0) ==
          doctest::Approx(0.08462523540323455).epsilon(1e-14));
    SUBCASE("pole is flagged") {
        // 16 G^2 -> 4 w^2 + k^2
        const double G = std::sqrt((4.0 + 0.09) / 16.0);
        CHECK_THROWS_AS(analytic_nbs(G, 0.3, 1e-5, 1.0, 1000.0),
                        SingularityError);
    }
    SUBCASE("validity warning") {
        WarningLog log;
        analytic_nbs(0.01, 0.3, 1e-2, 1.0, 10.0, &log);  // 4G^2/(g k) = 0.13
        CHECK(log.size() == 1);
    }
}

TEST_CASE("closed form tracks the exact solve in its own convention") {
    // The closed form is stated with full-width rates; feeding it twice the
    // half-widths used by the drift matrix reproduces the Lyapunov result.
    for (double G : {0.25, 0.4, 0.45}) {
        const double k = 0.15, g = 1e-5, n = 500.0;
        const CovarianceState s = steady_state(build_effective(eff(-1.0, k, G, g, n)));
        const double exact = occupation(s, 1);
        const double closed = analytic_nbs(G, 2.0 * k, 2.0 * g, 1.0, n);
        CHECK(closed == doctest::Approx(exact).epsilon(0.05));
    }
}

TEST_CASE("three-mode model agrees with the reduced one") {
    const SystemParams p = fig3_system();
    const std::complex<double> G(0.15, 0.0);
    const EffectiveParams e = effective_params(p, G);

    SUBCASE("steady phonon occupation within 5%") {
        const CovarianceState full = steady_state(build_full(p, G));
        const CovarianceState red = steady_state(build_effective(e));
        const double nb_full = occupation(full, 2);
        const double nb_red = occupation(red, 1);
        CHECK(std::abs(nb_full - nb_red) / nb_red < 0.05);
    }

    SUBCASE("overdamped-cavity limit recovers the reduced drift") {
        SystemParams q = p;
        q.kappa_a = 1e7;
        const EffectiveParams e2 = effective_params(q, G);
        const DriftDiffusion full = build_full(q, G);
        const DriftDiffusion red = build_effective(e2);
        // magnon/phonon sub-block of the full drift vs the reduced drift;
        // the residual is the remaining cavity-induced linewidth ~ 4e-7
        const Eigen::MatrixXd sub = full.A.bottomRightCorner(4, 4);
        CHECK((sub - red.A).cwiseAbs().maxCoeff() < 1e-6);
    }

    SUBCASE("fully uncoupled three modes decay independently") {
        SystemParams q = p;
        q.g_ma = 0.0;
        const DriftDiffusion dd = build_full(q, 0.0);
        // block diagonal: no cross terms anywhere
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                if (i / 2 != j / 2) CHECK(dd.A(i, j) == 0.0);
    }
}

TEST_CASE("evolution") {
    const EffectiveParams e = eff(-1.0, 0.3, 0.4);
    const DriftDiffusion dd = build_effective(e);
    const CovarianceState v0 = thermal_state(dd, {0.0, 1000.0});

    SUBCASE("time zero returns the initial state") {
        const auto traj = evolve(dd, v0, {0.0});
        CHECK((traj[0].V - v0.V).norm() == 0.0);
    }

    SUBCASE("long-time limit is the Lyapunov solution") {
        const CovarianceState ss = steady_state(dd);
        const auto traj = evolve(dd, v0, linspace(0.0, 250.0, 126));
        CHECK((traj.back().V - ss.V).norm() < 1e-8);
    }

    SUBCASE("the steady state is a fixed point") {
        const CovarianceState ss = steady_state(dd);
        const auto traj = evolve(dd, ss, linspace(0.0, 7.0, 8));
        for (const auto& s : traj)
            CHECK((s.V - ss.V).norm() < 1e-10);
    }

    SUBCASE("exact stepper matches the adaptive fallback") {
        const auto grid = linspace(0.0, 20.0, 21);
        const auto a = evolve(dd, v0, grid);
        EvolveOptions opts;
        opts.method = EvolveMethod::AdaptiveRK;
        const auto b = evolve(dd, v0, grid, opts);
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK((a[i].V - b[i].V).norm() <
                  1e-7 * std::max(1.0, a[i].V.norm()));
    }

    SUBCASE("uncertainty relation holds along the trajectory") {
        const auto traj = evolve(dd, v0, linspace(0.0, 60.0, 61));
        for (const auto& s : traj)
            CHECK(uncertainty_defect(s.V) > -1e-9);
    }

    SUBCASE("single uncoupled mode decays analytically") {
        const DriftDiffusion solo = build_effective(eff(-1.0, 0.25, 0.0, 0.0, 0.0));
        CovarianceState hot = thermal_state(solo, {3.0, 0.0});
        const auto traj = evolve(solo, hot, linspace(0.0, 4.0, 5));
        for (const auto& s : traj) {
            const double expect = 3.0 * std::exp(-2.0 * 0.25 * s.t);
            CHECK(occupation(s, 0) == doctest::Approx(expect).epsilon(1e-10));
        }
    }
}

TEST_CASE("cooling trajectory rings before settling at the known value") {
    const EffectiveParams e = eff(-1.0, 0.3, 0.4);
    const DriftDiffusion dd = build_effective(e);
    const auto traj = evolve(dd, thermal_state(dd, {0.0, 1000.0}),
                             linspace(0.0, 100.0, 1001));
    std::vector<double> nb(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) nb[i] = occupation(traj[i], 1);

    // settles onto the steady value
    CHECK(nb.back() == doctest::Approx(0.2817).epsilon(1e-3));
    CHECK(nb.back() > 0.25);
    CHECK(nb.back() < 0.29);

    // hybridised dynamics: the decay is modulated, not monotone
    int direction_changes = 0;
    for (std::size_t i = 2; i < nb.size() / 2; ++i)
        if ((nb[i] - nb[i - 1]) * (nb[i - 1] - nb[i - 2]) < 0)
            ++direction_changes;
    CHECK(direction_changes > 10);
}

TEST_CASE("moment helpers recover complex moments") {
    const DriftDiffusion dd = build_effective(eff(-1.0, 0.3, 0.4));
    const CovarianceState s = steady_state(dd);
    // <o^dag o> from the helper equals the occupation
    CHECK(moment_dag(s, 1, 1).real() == doctest::Approx(occupation(s, 1)).epsilon(1e-12));
    CHECK(moment_dag(s, 1, 1).imag() == doctest::Approx(0.0).epsilon(1e-12));
    // hermiticity of the cross moment
    CHECK(std::abs(moment_dag(s, 0, 1) - std::conj(moment_dag(s, 1, 0))) < 1e-12);
}

TEST_CASE("stability verdicts") {
    SUBCASE("zero coupling is stable") {
        const StabilityVerdict v = stability(eff(-1.0, 0.3, 0.0));
        CHECK(v.stable);
        CHECK(v.analytic_stable);
        CHECK(v.analytic_applicable);
    }
    SUBCASE("threshold value at kappa_eff = 0.3") {
        const StabilityVerdict v = stability(eff(-1.0, 0.3, 0.4));
        CHECK(v.threshold_g == doctest::Approx(0.5220153254455275).epsilon(1e-14));
        CHECK(v.stable);
        CHECK(v.analytic_stable);
    }
    SUBCASE("far above threshold both checks fail") {
        const StabilityVerdict v = stability(eff(-1.0, 0.3, 0.6, 0.0, 0.0));
        CHECK_FALSE(v.stable);
        CHECK_FALSE(v.analytic_stable);
    }
    SUBCASE("the analytic boundary is the eigenvalue boundary") {
        // bisect the eigenvalue criterion and compare against the closed form
        for (double k : {0.05, 0.2, 0.35, 0.5}) {
            double lo = 0.01, hi = 1.2;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                const StabilityVerdict v = stability(eff(-1.0, k, mid, 0.0, 0.0));
                (v.stable ? lo : hi) = mid;
            }
            const double analytic = std::sqrt(0.25 + k * k / 4.0);
            CHECK(0.5 * (lo + hi) == doctest::Approx(analytic).epsilon(1e-9));
        }
    }
    SUBCASE("unstable steady state throws") {
        CHECK_THROWS_AS(steady_state(build_effective(eff(-1.0, 0.3, 0.6))),
                        StabilityError);
    }
}

TEST_CASE("weak-coupling comparison against the noise-spectrum result") {
    // In the genuinely weak regime the two routes approach each other;
    // the quantum-noise rate formula carries O((2G/kappa)^2) saturation
    // corrections on top, so the tolerance tightens as G drops.
    for (double G : {0.02, 0.01}) {
        EffectiveParams e = eff(-1.0, 0.19, G, 1e-9, 0.0);
        const double nf = cooling_rates(e).n_f;
        const double nb = occupation(steady_state(build_effective(e)), 1);
        CHECK(std::abs(nb - nf) / nb < 0.05);
    }
}
