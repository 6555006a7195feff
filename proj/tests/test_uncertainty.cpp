#include <doctest.h>

#include <cmath>

#include "jst/core.hpp"
#include "jst/fixtures.hpp"
#include "jst/jost.hpp"
#include "jst/uncertainty.hpp"

using namespace jst;

TEST_SUITE_BEGIN("uncertainty");

TEST_CASE("envelope values") {
    EnvelopeSpec env;  // eps = 0.5, C = 1, gap = 1
    CHECK(env(1) == doctest::Approx(std::exp(1.0) / 4.5));
    CHECK(env(3) == doctest::Approx(std::pow(std::exp(1.0) / 13.5, 3)));
    CHECK(env(0) == 1.0);
    env.time_gap = 2.0;
    CHECK(env(1) == doctest::Approx(2.0 * std::exp(1.0) / 4.5));
    env.amplitude = 3.0;
    CHECK(env(2) == doctest::Approx(3.0 * std::pow(2.0 * std::exp(1.0) / 9.0, 2)));
}

TEST_CASE("phi of a single negative-side delta is one Jost value") {
    const auto p = single_site_profile(0.5);
    WavePacket u;
    u.values = ComplexSequence({-20, 20});
    u.values[-3] = 1.0;
    const VectorXc grid = rotated_circle_grid(16);
    const auto d = phi_transform(p, u, grid);
    const GridWindow w{-20, 20};
    for (Eigen::Index k = 0; k < grid.size(); ++k) {
        const auto em = compute_jost(p, grid[k], Side::minus, w).values;
        CHECK(std::abs(d.Phi[k] - em[-3]) <= 1e-13);
        CHECK(std::abs(d.A2[k]) == 0.0);
        CHECK(std::abs(d.B[k]) == 0.0);
        CHECK(std::abs(d.A1[k] - d.Phi[k]) == 0.0);
    }
}

TEST_CASE("phi of the origin delta under the free operator") {
    WavePacket u;
    u.values = ComplexSequence({-20, 20});
    u.values[0] = 1.0;
    const VectorXc grid = rotated_circle_grid(16);
    const auto d = phi_transform(free_profile(), u, grid);
    for (Eigen::Index k = 0; k < grid.size(); ++k) {
        CHECK(std::abs(d.Phi[k] - 1.0) <= 1e-13);
        CHECK(std::abs(d.A1[k]) == 0.0);
        CHECK(std::abs(d.B[k] - 1.0) <= 1e-13);  // alpha = 1, beta = 0
    }
    CHECK(d.decomposition_residual <= 1e-13);
    CHECK(d.series_residual <= 1e-13);
}

TEST_CASE("decomposition identity for right-supported data") {
    const auto p = single_site_profile(0.5);
    WavePacket u;
    u.values = fixtures::random_packet({-25, 25}, 4, 0, 12);
    const auto d = phi_transform(p, u, rotated_circle_grid(32));
    CHECK(d.decomposition_residual <= 1e-8);
    CHECK(d.series_residual <= 1e-8);
}

TEST_CASE("decomposition identity across seeded profiles and packets") {
    const VectorXc grid = rotated_circle_grid(16);
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto p = fixtures::random_admissible(seed);
        WavePacket u;
        u.values = fixtures::random_packet({-25, 25}, seed + 500, -12, 12);
        const auto d = phi_transform(p, u, grid);
        CHECK(d.decomposition_residual <= 1e-8);
        CHECK(d.series_residual <= 1e-8);
    }
}

TEST_CASE("phi series coefficients") {
    SUBCASE("free operator has no correction series") {
        WavePacket u;
        u.values = fixtures::random_packet({-15, 15}, 6, -5, 5);
        const auto bc = b_coefficients(free_profile(), u, 16, EnvelopeSpec{});
        CHECK(bc.values.cwiseAbs().maxCoeff() <= 1e-14);
    }
    SUBCASE("origin delta picks out one coefficient row") {
        const auto p = single_site_profile(0.3, 2);
        WavePacket u;
        u.values = ComplexSequence({-10, 10});
        u.values[0] = 1.0;
        const auto bc = b_coefficients(p, u, 16, EnvelopeSpec{});
        const auto e = jost_expansion_extract(p, Side::plus, {0, 15}, 128, 16);
        const double v0 = 1.0 / asymptotic_product_plus(p, 0);
        for (int j = 1; j <= 16; ++j)
            CHECK(std::abs(bc.values[j - 1] - v0 * e.K_table(e.n_range.index(0), j)) <= 1e-13);
        CHECK(std::abs(bc.values[0]) > 1e-3);  // K_{+,1}(0) = -2b(2) reaches the origin row
    }
    SUBCASE("measured coefficients respect the decay-chain bound") {
        const EnvelopeSpec env;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto p = fixtures::random_admissible(seed);
            const WavePacket u = envelope_saturating_packet(env, {-30, 30});
            const auto bc = b_coefficients(p, u, 24, env);
            for (int j = 0; j < 24; ++j)
                CHECK(std::abs(bc.values[j]) <= bc.bounds[j] + 1e-12);
        }
    }
}

TEST_CASE("phi evolution identity via the free kernel") {
    // oracle first: the kernel-evolved delta satisfies
    // sum_n u(1,n) theta^{-n} = e^{-i lambda(theta)} for |theta| = 1
    const VectorXc grid = rotated_circle_grid(16);
    for (Eigen::Index k = 0; k < grid.size(); ++k) {
        Complex phi1(0.0, 0.0);
        for (int n = -60; n <= 60; ++n)
            phi1 += free_kernel(n, 0, 1.0) * std::pow(grid[k], -n);
        const Complex expected = std::exp(Complex(0.0, -1.0) * lambda_of_theta(grid[k]));
        CHECK(std::abs(phi1 - expected) <= 1e-13);
    }

    WavePacket u0;
    u0.values = ComplexSequence({-60, 60});
    u0.values[0] = 1.0;
    const auto u1 = evolve_spectral(free_profile(), u0, 1.0);
    CHECK(phi_evolution_residual(free_profile(), u0, u1, {1.0}) <= 1e-8);
    CHECK(phi_evolution_residual(free_profile(), u0, u1, {0.5}) <= 1e-6);
    SUBCASE("zero data gives zero residual") {
        WavePacket z0, z1;
        z0.values = ComplexSequence({-60, 60});
        z1 = z0;
        z1.time = 1.0;
        CHECK(phi_evolution_residual(free_profile(), z0, z1, {1.0, 0.5}) == 0.0);
    }
}

TEST_CASE("interior circles for scattering fixtures") {
    const auto p = single_site_profile(0.5);  // theta_j ~ 0.618
    const WavePacket u0 = envelope_saturating_packet(EnvelopeSpec{}, {-60, 60});
    EvolutionConfig cfg;
    cfg.circle_samples = 1024;
    const auto u1 = evolve_spectral(p, u0, 1.0, cfg);
    CHECK(phi_evolution_residual(p, u0, u1, {1.0, 0.9}) <= 1e-7);
    // compact data evolved for finite time keeps superfactorial tails, so
    // even |theta| = 0.5 < theta_j stays summable here
    CHECK(phi_evolution_residual(p, u0, u1, {0.5}) <= 1e-6);
}

TEST_CASE("data with a genuine spectral tail is refused inside its radius") {
    // an eigenvector packet decays like theta_j^|n| forever; against
    // e^-(theta, n) ~ theta^{-n} with |theta| < theta_j the series diverges
    // and the truncation guard must refuse the circle
    const auto p = single_site_profile(0.5);
    const GridWindow w{-60, 60};
    const auto states = find_eigenvalues(p, w);
    REQUIRE(states.size() == 1);
    WavePacket u0;
    u0.values = bound_state_jost(p, states[0].theta, w);
    u0.values.values() *= std::sqrt(states[0].gamma);
    WavePacket u1 = u0;  // the evolution only rotates the phase
    u1.time = 1.0;
    u1.values.values() *= std::exp(Complex(0.0, -states[0].lambda));
    CHECK(phi_evolution_residual(p, u0, u1, {1.0}) <= 1e-9);
    CHECK_THROWS_AS(phi_evolution_residual(p, u0, u1, {0.5}), std::runtime_error);
}

TEST_CASE("envelope scan semantics") {
    EnvelopeSpec env;
    SUBCASE("zero data is indeterminate, never satisfied") {
        WavePacket u;
        u.values = ComplexSequence({-30, 30});
        const auto scan = envelope_violation_scan(u, env, 3, 25);
        CHECK(scan.verdict == ScanVerdict::indeterminate);
        CHECK(scan.measurable_count == 0);
    }
    SUBCASE("half of the envelope is not a violation") {
        WavePacket u;
        u.values = ComplexSequence({-30, 30});
        for (int n = 1; n <= 30; ++n) u.values[n] = 0.5 * env(n);
        const auto scan = envelope_violation_scan(u, env, 3, 25, 0.0);
        CHECK(scan.verdict == ScanVerdict::not_violated);
        for (const auto& row : scan.rows)
            if (row.flag >= 0) CHECK(row.ratio == doctest::Approx(0.5));
    }
    SUBCASE("a single loud site flips the verdict") {
        WavePacket u;
        u.values = ComplexSequence({-30, 30});
        for (int n = 1; n <= 30; ++n) u.values[n] = 0.5 * env(n);
        u.values[4] = 2.0 * env(4);
        const auto scan = envelope_violation_scan(u, env, 3, 25, 0.0);
        CHECK(scan.verdict == ScanVerdict::violated);
        CHECK(scan.worst_n == 4);
        CHECK(scan.worst_ratio == doctest::Approx(2.0));
    }
    SUBCASE("range validation") {
        WavePacket u;
        u.values = ComplexSequence({-5, 5});
        CHECK_THROWS_AS(envelope_violation_scan(u, env, 0, 5), std::invalid_argument);
    }
}

TEST_CASE("saturating packet construction") {
    EnvelopeSpec env;
    const auto u = envelope_saturating_packet(env, {-20, 20});
    CHECK(u.values[0] == Complex(1.0, 0.0));
    CHECK(u.values[-5] == Complex(0.0, 0.0));
    CHECK(u.values[4].real() == doctest::Approx(env(4)));
    CHECK_THROWS_AS(envelope_saturating_packet(env, {1, 20}), std::invalid_argument);
}

TEST_CASE("experiment on the free fixture") {
    UncertaintyConfig cfg;
    cfg.window = {-60, 60};
    const WavePacket u0 = envelope_saturating_packet(cfg.envelope, cfg.window);
    const auto report = run_uncertainty_experiment(free_profile(), u0, cfg);
    CHECK_FALSE(report.aborted);
    CHECK(report.theorem_consistent);
    CHECK(report.scan_t0.verdict == ScanVerdict::not_violated);
    CHECK(report.scan_t1.verdict == ScanVerdict::violated);
    CHECK(report.cross_validation <= 1e-6);
    CHECK(report.phi_residual <= 1e-7);
    CHECK(report.type_t0.sigma_hat <= 1.0 / 4.5 * 1.02);
    CHECK(report.type_t1.sigma_hat >= 0.5 - 1.0 / 4.5 - 0.05);
}

TEST_CASE("experiment on a scattering fixture") {
    UncertaintyConfig cfg;
    cfg.window = {-60, 60};
    const WavePacket u0 = envelope_saturating_packet(cfg.envelope, cfg.window);
    const auto report = run_uncertainty_experiment(single_site_profile(0.5), u0, cfg);
    CHECK(report.theorem_consistent);
    CHECK(report.scan_t0.verdict == ScanVerdict::not_violated);
    CHECK(report.scan_t1.verdict == ScanVerdict::violated);
}

TEST_CASE("experiment on a mixed hopping/potential perturbation") {
    VectorXr a(2), b(2);
    a << 0.58, 0.5;
    b << 0.2, -0.1;
    auto p = make_profile(0, a, b, 1.0, 1.0);
    p.decay_constant = 1.05 * admissibility_check(p).minimal_C;
    UncertaintyConfig cfg;
    cfg.window = {-90, 90};  // the weak state at theta_j ~ 0.82 needs room
    const WavePacket u0 = envelope_saturating_packet(cfg.envelope, cfg.window);
    const auto report = run_uncertainty_experiment(p, u0, cfg);
    CHECK_FALSE(report.aborted);
    CHECK(report.theorem_consistent);
    CHECK(report.scan_t0.verdict == ScanVerdict::not_violated);
    CHECK(report.scan_t1.verdict == ScanVerdict::violated);
    CHECK(report.cross_validation <= 1e-6);
}

TEST_CASE("trivial data is reported as such") {
    UncertaintyConfig cfg;
    cfg.window = {-60, 60};
    WavePacket u0;
    u0.values = ComplexSequence(cfg.window);
    const auto report = run_uncertainty_experiment(free_profile(), u0, cfg);
    CHECK(report.verdict == "consistent with trivial solution");
    CHECK(report.theorem_consistent);
}

TEST_CASE("cross-validation failure aborts the verdict") {
    UncertaintyConfig cfg;
    cfg.window = {-60, 60};
    cfg.time_step = 0.25;  // deliberately coarse stepping
    const WavePacket u0 = envelope_saturating_packet(cfg.envelope, cfg.window);
    const auto report = run_uncertainty_experiment(free_profile(), u0, cfg);
    CHECK(report.aborted);
    CHECK(report.verdict.find("aborted") == 0);
}

TEST_CASE("profiles that fail their stored tail condition are rejected") {
    VectorXr a = VectorXr::Constant(1, 0.5), b = VectorXr::Constant(1, 0.3);
    const auto p = make_profile(2, a, b, 1e-6, 1.0);  // C far too small
    UncertaintyConfig cfg;
    cfg.window = {-60, 60};
    const WavePacket u0 = envelope_saturating_packet(cfg.envelope, cfg.window);
    CHECK_THROWS_AS(run_uncertainty_experiment(p, u0, cfg), std::invalid_argument);
}

TEST_SUITE_END();
