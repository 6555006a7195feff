#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <filesystem>

#include "jst/core.hpp"
#include "jst/evolution.hpp"
#include "jst/fixtures.hpp"

using namespace jst;

namespace {

WavePacket delta_packet(GridWindow w, int site = 0) {
    WavePacket u;
    u.values = ComplexSequence(w);
    u.values[site] = 1.0;
    return u;
}

// independent oracle for J_k: straightforward long-double factorial series,
// written without the library's recurrence form
long double bessel_reference(int k, long double t) {
    long double sum = 0.0L;
    for (int s = 0; s < 40; ++s) {
        long double term = 1.0L;
        for (int i = 1; i <= s; ++i) term *= (t / 2.0L) / i;
        for (int i = 1; i <= s + k; ++i) term *= (t / 2.0L) / i;
        sum += (s % 2 ? -1.0L : 1.0L) * term;
    }
    return sum;
}

}  // namespace

TEST_SUITE_BEGIN("evolution");

TEST_CASE("bessel series against an independent summation and the standard library") {
    CHECK(bessel_j_series(0, 1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-14));
    for (int k : {0, 1, 2, 5, 11}) {
        for (double t : {0.25, 1.0, 3.5}) {
            CHECK(bessel_j_series(k, t) ==
                  doctest::Approx(double(bessel_reference(k, t))).epsilon(1e-13));
            CHECK(bessel_j_series(k, t) ==
                  doctest::Approx(std::cyl_bessel_j(k, t)).epsilon(1e-12));
        }
    }
    // parity in the order and in time
    CHECK(bessel_j_series(-3, 1.2) == doctest::Approx(-bessel_j_series(3, 1.2)));
    CHECK(bessel_j_series(2, -1.2) == doctest::Approx(bessel_j_series(2, 1.2)));
    CHECK(bessel_j_series(170, 1.0) == 0.0);  // underflow region
}

TEST_CASE("free kernel at t = 0 is the identity") {
    CHECK(free_kernel(0, 0, 0.0) == Complex(1.0, 0.0));
    CHECK(free_kernel(3, 0, 0.0) == Complex(0.0, 0.0));
}

TEST_CASE("free kernel columns have unit mass") {
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
        double total = 0.0;
        for (int n = -80; n <= 80; ++n) total += std::norm(free_kernel(n, 0, t));
        CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("zero time is the identity for both methods") {
    const auto p = single_site_profile(0.5);
    const auto u0 = delta_packet({-40, 40});
    const auto us = evolve_spectral(p, u0, 0.0);
    const auto ud = evolve_direct(p, u0, 0.0);
    CHECK((us.values.values() - u0.values.values()).norm() == 0.0);
    CHECK((ud.values.values() - u0.values.values()).norm() == 0.0);
}

TEST_CASE("free evolution of a delta matches the kernel") {
    const auto p = free_profile();
    const auto u0 = delta_packet({-60, 60});
    const auto us = evolve_spectral(p, u0, 1.0);
    const auto ud = evolve_direct(p, u0, 1.0);
    double worst_s = 0.0, worst_d = 0.0;
    for (int n = -30; n <= 30; ++n) {
        worst_s = std::max(worst_s, std::abs(us.values[n] - free_kernel(n, 0, 1.0)));
        worst_d = std::max(worst_d, std::abs(ud.values[n] - free_kernel(n, 0, 1.0)));
    }
    CHECK(worst_s <= 1e-12);  // quadrature-exact
    CHECK(worst_d <= 1e-7);   // second-order stepping at dt = 1e-3
}

TEST_CASE("bound state only rotates its phase") {
    const auto p = single_site_profile(0.5);
    const GridWindow w{-80, 80};
    const auto states = find_eigenvalues(p, w);
    REQUIRE(states.size() == 1);
    WavePacket u0;
    u0.values = bound_state_jost(p, states[0].theta, w);
    u0.values.values() *= std::sqrt(states[0].gamma);
    const double t = 0.7;
    const auto ut = evolve_spectral(p, u0, t);
    const Complex phase = std::exp(Complex(0.0, -t * states[0].lambda));
    double worst = 0.0;
    for (int n = w.lo; n <= w.hi; ++n)
        worst = std::max(worst, std::abs(ut.values[n] - phase * u0.values[n]));
    CHECK(worst <= 1e-8);
}

TEST_CASE("both methods against a dense matrix-exponential oracle") {
    // brute force: diagonalize the truncated operator and apply the
    // propagator through its eigenbasis, independent of every library route
    const auto p = single_site_profile(0.5);
    const GridWindow w{-80, 80};
    const int N = w.size();
    MatrixXr H = MatrixXr::Zero(N, N);
    for (int n = w.lo; n <= w.hi; ++n) {
        H(w.index(n), w.index(n)) = p.b(n);
        if (n < w.hi) H(w.index(n), w.index(n + 1)) = H(w.index(n + 1), w.index(n)) = p.a(n);
    }
    const Eigen::SelfAdjointEigenSolver<MatrixXr> solver(H);
    WavePacket u0;
    u0.values = fixtures::random_packet(w, 41, -8, 8);
    const double t = 1.0;
    const VectorXc coeffs = solver.eigenvectors().transpose() * u0.values.values();
    VectorXc evolved_coeffs(N);
    for (int i = 0; i < N; ++i)
        evolved_coeffs[i] = coeffs[i] * std::exp(Complex(0.0, -t * solver.eigenvalues()[i]));
    const VectorXc oracle = solver.eigenvectors() * evolved_coeffs;

    const auto us = evolve_spectral(p, u0, t);
    const auto ud = evolve_direct(p, u0, t);
    CHECK((us.values.values() - oracle).norm() <= 1e-9);
    CHECK((ud.values.values() - oracle).norm() <= 1e-6);
}

TEST_CASE("dropping the bound-state projection sheds exactly its share") {
    const auto p = single_site_profile(0.5);
    const GridWindow w{-80, 80};
    WavePacket u0;
    u0.values = ComplexSequence(w);
    u0.values[0] = 1.0;
    EvolutionConfig control;
    control.include_bound_states = false;  // deliberate negative control
    const auto ut = evolve_spectral(p, u0, 1.0, control);
    // || P_ac delta_0 ||^2 = 1 - gamma |e^+(theta_j, 0)|^2 = 1 - 1/sqrt(5)
    const double expected = std::sqrt(1.0 - 1.0 / std::sqrt(5.0));
    CHECK(ut.norm() == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("norm conservation") {
    const auto p = single_site_profile(0.5);
    WavePacket u0;
    u0.values = fixtures::random_packet({-70, 70}, 3, -10, 10);
    const auto us = evolve_spectral(p, u0, 1.0);
    const auto ud = evolve_direct(p, u0, 1.0);
    CHECK(std::abs(us.norm() - 1.0) <= 1e-10);
    CHECK(std::abs(ud.norm() - 1.0) <= 1e-12);  // Cayley is unitary
}

TEST_CASE("group law and time reversal") {
    const auto p = single_site_profile(0.3);
    WavePacket u0;
    u0.values = fixtures::random_packet({-70, 70}, 5, -6, 6);
    for (auto method : {0, 1}) {
        auto evolve = [&](const WavePacket& u, double t) {
            return method == 0 ? evolve_spectral(p, u, t) : evolve_direct(p, u, t);
        };
        const auto two_step = evolve(evolve(u0, 0.35), 0.65);
        const auto one_step = evolve(u0, 1.0);
        CHECK((two_step.values.values() - one_step.values.values()).norm() <= 1e-7);
        const auto back = evolve(evolve(u0, 0.8), -0.8);
        CHECK((back.values.values() - u0.values.values()).norm() <= 1e-7);
    }
}

TEST_CASE("methods agree on fixtures") {
    CHECK(cross_validate(free_profile(), delta_packet({-60, 60}), 1.0) <= 1e-6);
    const auto via_enum = evolve(free_profile(), delta_packet({-60, 60}), 1.0,
                                 EvolutionMethod::spectral);
    const auto direct_call = evolve_spectral(free_profile(), delta_packet({-60, 60}), 1.0);
    CHECK((via_enum.values.values() - direct_call.values.values()).norm() == 0.0);

    WavePacket gauss;
    gauss.values = ComplexSequence({-60, 60});
    for (int n = -8; n <= 8; ++n) gauss.values[n] = std::exp(-0.5 * n * n);
    gauss.values.values() /= gauss.values.norm();
    CHECK(cross_validate(single_site_profile(0.5), gauss, 1.0) <= 1e-6);
    CHECK(cross_validate(single_site_profile(0.5), gauss, 0.0) == 0.0);
}

TEST_CASE("rescaled generator equals the rescaled-time gauge transform") {
    // if u solves the evolution under H, then u(alpha t) e^{-i beta t} solves
    // it under alpha H + beta
    const auto p = single_site_profile(0.4);
    WavePacket u0;
    u0.values = fixtures::random_packet({-70, 70}, 8, -5, 5);
    const double alpha = 2.0, beta = 0.3, t = 0.5;
    EvolutionConfig cfg;
    cfg.time_step = 2.5e-4;  // the scaled generator triples the phase-error rate
    const auto u_at = evolve_direct(p, u0, alpha * t, cfg);
    const auto expected = affine_transform(u_at, alpha, beta);
    const auto direct = evolve_direct(p, u0, t, cfg, {alpha, beta});
    CHECK((direct.values.values() - expected.values.values()).norm() <= 1e-7);
    CHECK(direct.time == doctest::Approx(expected.time));
}

TEST_CASE("reflected profile evolves the mirrored packet") {
    const auto p = fixtures::random_admissible(17);
    const auto pr = reflect_profile(p);
    const GridWindow w{-50, 50};
    WavePacket u0;
    u0.values = fixtures::random_packet(w, 23, -7, 7);
    WavePacket u0_mirror;
    u0_mirror.values = ComplexSequence(w);
    for (int n = w.lo; n <= w.hi; ++n) u0_mirror.values[n] = u0.values[-n];

    const auto ut = evolve_direct(p, u0, 1.0);
    const auto ut_mirror = evolve_direct(pr, u0_mirror, 1.0);
    double worst = 0.0;
    for (int n = w.lo; n <= w.hi; ++n)
        worst = std::max(worst, std::abs(ut_mirror.values[n] - ut.values[-n]));
    CHECK(worst <= 1e-10);
}

TEST_CASE("window padding is enforced") {
    const auto p = free_profile();
    auto u0 = delta_packet({-12, 12});
    CHECK_THROWS_AS(evolve_direct(p, u0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(evolve_spectral(p, u0, 1.0), std::invalid_argument);
    EvolutionConfig relaxed;
    relaxed.min_padding = 5;
    CHECK_NOTHROW(evolve_direct(p, u0, 1.0, relaxed));
}

TEST_CASE("packet CSV round trip") {
    namespace fs = std::filesystem;
    WavePacket u;
    u.time = 0.75;
    u.values = fixtures::random_packet({-9, 9}, 77, -9, 9);
    const fs::path path = fs::temp_directory_path() / "jst_packet.csv";
    save_packet_csv(u, path);
    const auto v = load_packet_csv(path);
    CHECK(v.time == u.time);
    REQUIRE(v.window() == u.window());
    CHECK((v.values.values() - u.values.values()).norm() == 0.0);
}

TEST_SUITE_END();
