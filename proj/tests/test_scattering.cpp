#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "jst/core.hpp"
#include <Eigen/Eigenvalues>

#include "jst/csv.hpp"
#include "jst/fixtures.hpp"
#include "jst/scattering.hpp"

using namespace jst;

namespace {

const GridWindow kWin{-30, 30};

}  // namespace

TEST_SUITE_BEGIN("scattering");

TEST_CASE("wronskian antisymmetry and the free pairing") {
    const auto p = free_profile();
    const Complex theta(0.0, 1.0);
    ComplexSequence f({-5, 5}), g({-5, 5});
    for (int n = -5; n <= 5; ++n) {
        f[n] = std::pow(theta, n);
        g[n] = std::pow(theta, -n);
    }
    CHECK(std::abs(wronskian(p, f, f, 0)) == 0.0);
    // W(theta^n, theta^{-n}) = (1 - theta^2)/(2 theta); at theta = i this is -i
    CHECK(std::abs(wronskian(p, f, g, 0) - Complex(0.0, -1.0)) <= 1e-15);
    CHECK_THROWS_AS(wronskian(p, f, g, 5), std::out_of_range);
}

TEST_CASE("wronskian of two solutions does not drift across the window") {
    const auto p = fixtures::random_admissible(13);
    const Complex theta = std::polar(1.0, 1.1);
    const auto ep = compute_jost(p, theta, Side::plus, kWin).values;
    const auto em = compute_jost(p, theta, Side::minus, kWin).values;
    Complex w0 = wronskian(p, ep, em, kWin.lo);
    double scale = std::abs(w0), drift = 0.0;
    for (int n = kWin.lo; n < kWin.hi; ++n) {
        const Complex w = wronskian(p, ep, em, n);
        drift = std::max(drift, std::abs(w - w0));
        scale = std::max(scale, std::abs(w));
    }
    CHECK(drift <= 1e-12 * scale);
}

TEST_CASE("free transmission is trivial") {
    const auto p = free_profile();
    for (const Complex theta : {std::polar(1.0, 0.4), std::polar(0.7, 2.0), Complex(0.3, 0.0)}) {
        const auto alpha = alpha_of_theta(p, theta, kWin);
        CHECK_FALSE(alpha.near_pole);
        CHECK(std::abs(alpha.value - 1.0) <= 1e-12);
    }
    const auto beta = beta_of_theta(p, std::polar(1.0, 0.9), Side::plus, kWin);
    CHECK(std::abs(beta.value) <= 1e-12);
}

TEST_CASE("alpha vanishes exactly at the bound state") {
    const auto p = single_site_profile(0.5);
    const double theta_j = -0.5 + std::sqrt(1.25);
    CHECK(std::abs(alpha_of_theta(p, {theta_j, 0.0}, kWin).value) <= 1e-8);
}

TEST_CASE("alpha tends to 1/A at the origin") {
    VectorXr a(2), b = VectorXr::Zero(2);
    a << 0.65, 0.45;
    const auto p = make_profile(0, a, b);
    const double A = total_product(p);
    for (double phi : {0.3, 1.7, 4.0})
        CHECK(std::abs(alpha_of_theta(p, std::polar(1e-3, phi), kWin).value - 1.0 / A) <= 1e-2);
}

TEST_CASE("beta requires the unit circle, and reflection sides balance") {
    const auto p = fixtures::random_admissible(21);
    CHECK_THROWS_AS(beta_of_theta(p, {0.5, 0.0}, Side::plus, kWin), std::domain_error);
    for (double phi : {0.37, 1.2, 2.7}) {
        const Complex theta = std::polar(1.0, phi);
        const auto bp = beta_of_theta(p, theta, Side::plus, kWin);
        const auto bm = beta_of_theta(p, theta, Side::minus, kWin);
        CHECK(std::abs(std::abs(bp.value) - std::abs(bm.value)) <= 1e-12);
    }
}

TEST_CASE("single-site reflection at theta = i against a hand-built wronskian") {
    const auto p = single_site_profile(0.5);
    const Complex theta(0.0, 1.0);
    const auto em = compute_jost(p, theta, Side::minus, kWin).values;
    const auto ep_inv = compute_jost(p, 1.0 / theta, Side::plus, kWin).values;
    const Complex expected =
        2.0 * theta / (1.0 - theta * theta) * wronskian(p, em, ep_inv, 0);
    const auto beta = beta_of_theta(p, theta, Side::plus, kWin);
    CHECK(std::abs(beta.value - expected) <= 1e-13);
    CHECK(std::abs(beta.value) > 1e-3);  // genuinely reflecting
}

TEST_CASE("pole neighborhood is extrapolated and flagged") {
    const auto p = single_site_profile(0.5);
    const Complex near_one = std::polar(1.0, 1e-8);
    const auto alpha = alpha_of_theta(p, near_one, kWin);
    CHECK(alpha.near_pole);
    CHECK(std::isfinite(alpha.value.real()));
    const VectorXc bad_grid = VectorXc::Constant(1, Complex(1.0, 0.0));
    CHECK_THROWS_AS(scattering_relation_residual(p, bad_grid, kWin), std::domain_error);
}

TEST_CASE("scattering relation residual") {
    const VectorXc grid = rotated_circle_grid(64);
    CHECK(scattering_relation_residual(free_profile(), grid, kWin) <= 1e-12);
    CHECK(scattering_relation_residual(single_site_profile(0.5), grid, kWin) <= 1e-9);
    for (std::uint64_t seed = 1; seed <= 25; ++seed)
        CHECK(scattering_relation_residual(fixtures::random_admissible(seed), grid, kWin) <= 1e-8);
}

TEST_CASE("free operator has no bound states") {
    CHECK(find_eigenvalues(free_profile(), {-40, 40}).empty());
}

TEST_CASE("single-site eigenvalue against matrix and closed-form oracles") {
    const auto p = single_site_profile(0.5);
    const auto states = find_eigenvalues(p, {-40, 40});
    REQUIRE(states.size() == 1);

    // oracle 1: closed forms from the quadratic and the geometric sum
    const double theta_ref = -0.5 + std::sqrt(1.25);
    const double lambda_ref = std::sqrt(1.25);
    const double gamma_inv_ref = (1.0 + theta_ref * theta_ref) / (1.0 - theta_ref * theta_ref);
    CHECK(states[0].theta == doctest::Approx(theta_ref).epsilon(1e-12));
    CHECK(states[0].lambda == doctest::Approx(lambda_ref).epsilon(1e-12));
    CHECK(1.0 / states[0].gamma == doctest::Approx(gamma_inv_ref).epsilon(1e-9));

    // oracle 2: dense truncation eigensolve, built independently here
    const int N = 81;
    MatrixXr H = MatrixXr::Zero(N, N);
    for (int i = 0; i < N; ++i) {
        const int n = i - 40;
        H(i, i) = p.b(n);
        if (i + 1 < N) H(i, i + 1) = H(i + 1, i) = p.a(n);
    }
    const Eigen::SelfAdjointEigenSolver<MatrixXr> solver(H);
    double top = solver.eigenvalues().maxCoeff();
    CHECK(top == doctest::Approx(states[0].lambda).epsilon(1e-10));
}

TEST_CASE("sign symmetry of the impurity") {
    const auto states = find_eigenvalues(single_site_profile(-0.5), {-40, 40});
    REQUIRE(states.size() == 1);
    CHECK(states[0].theta == doctest::Approx(0.5 - std::sqrt(1.25)).epsilon(1e-12));
    CHECK(states[0].lambda == doctest::Approx(-std::sqrt(1.25)).epsilon(1e-12));
}

TEST_CASE("double well separates into two near-degenerate states") {
    VectorXr a = VectorXr::Constant(17, 0.5), b = VectorXr::Zero(17);
    b[0] = b[16] = 0.5;  // sites -8 and 8
    const auto p = make_profile(-8, a, b, 1e40, 1.0);
    const auto states = find_eigenvalues(p, {-48, 48});
    REQUIRE(states.size() == 2);
    CHECK(states[0].theta != states[1].theta);
    for (const auto& s : states)
        CHECK(s.lambda == doctest::Approx(std::sqrt(1.25)).epsilon(1e-3));
    CHECK(argument_principle_zero_count(p, {-48, 48}) == 2);
}

TEST_CASE("too-small windows for a weak state are refused, not silently wrong") {
    // g = 0.05 binds at theta_j ~ 0.951 with a ~20-site decay length: a short
    // window truncates the state below the matrix filter while the winding
    // of alpha still sees the zero, and the disagreement must surface
    const auto p = single_site_profile(0.05);
    CHECK_THROWS_AS(find_eigenvalues(p, {-12, 12}), std::runtime_error);
    const auto states = find_eigenvalues(p, {-60, 60});
    REQUIRE(states.size() == 1);
    CHECK(states[0].theta == doctest::Approx(-0.05 + std::sqrt(1.0025)).epsilon(1e-10));
}

TEST_CASE("zero count by winding matches the eigensolver route") {
    for (std::uint64_t seed : {2, 7, 19}) {
        const auto p = fixtures::random_admissible(seed);
        const auto states = find_eigenvalues(p, {-45, 45});
        CHECK(argument_principle_zero_count(p, {-45, 45}) == static_cast<int>(states.size()));
    }
}

TEST_CASE("scattering data assembly and the transmission series") {
    VectorXr a(2), b(2);
    a << 0.58, 0.5;
    b << 0.2, -0.1;
    const auto p = make_profile(0, a, b, 1e3, 1.0);
    const auto data = compute_scattering(p, 512, kWin);

    CHECK(data.wronskian_drift <= 1e-12);
    CHECK(data.total_product == doctest::Approx(2.0 * 0.58));
    CHECK(data.alpha_coeffs[0] == doctest::Approx(1.0).epsilon(1e-10));  // K_0 = 1

    // series reconstruction inside |theta| <= 0.9
    for (double r : {0.3, 0.6, 0.9}) {
        for (double phi : {0.2, 1.4, 3.9}) {
            const Complex theta = std::polar(r, phi);
            Complex series(0.0, 0.0);
            for (int j = static_cast<int>(data.alpha_coeffs.size()) - 1; j >= 0; --j)
                series = series * theta + data.alpha_coeffs[j];
            series /= data.total_product;
            CHECK(std::abs(series - alpha_of_theta(p, theta, kWin).value) <= 1e-8);
        }
    }

    // |alpha|^2 - |beta|^2 = 1 on the grid
    for (Eigen::Index k = 0; k < data.theta_grid.size(); ++k)
        CHECK(std::abs(std::norm(data.alpha[k]) - std::norm(data.beta_plus[k]) - 1.0) <= 1e-8);
}

TEST_CASE("log-growth of the transmission stays bounded toward the origin") {
    const auto p = single_site_profile(0.5);
    double prev_ratio = std::numeric_limits<double>::infinity();
    for (double r : {0.5, 0.25, 0.125}) {
        double max_log = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < 64; ++k) {
            const Complex theta = std::polar(r, M_PI * (2.0 * k + 1.0) / 64.0);
            max_log = std::max(max_log, std::log(std::abs(alpha_of_theta(p, theta, kWin).value)));
        }
        const double ratio = max_log / (1.0 / r);  // sublinear growth diagnostic
        CHECK(ratio <= prev_ratio + 1e-12);
        prev_ratio = ratio;
    }
}

TEST_CASE("CSV dumps carry the documented headers") {
    namespace fs = std::filesystem;
    const auto p = single_site_profile(0.5);
    const auto data = compute_scattering(p, 64, kWin);
    const fs::path dir = fs::temp_directory_path() / "jst_scatter_csv";
    save_scattering_csv(data, dir / "scattering.csv");
    save_eigenvalues_csv(data.bound_states, dir / "eigenvalues.csv");
    CHECK(csv::read(dir / "scattering.csv",
                    "theta_re,theta_im,alpha_re,alpha_im,beta_re,beta_im").size() == 64);
    const auto eigen_rows = csv::read(dir / "eigenvalues.csv", "theta_j,lambda_j,gamma_j");
    REQUIRE(eigen_rows.size() == 1);
    CHECK(csv::parse_double(eigen_rows[0][1], "eig") == doctest::Approx(std::sqrt(1.25)));
}

TEST_SUITE_END();
