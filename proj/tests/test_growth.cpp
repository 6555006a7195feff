#include <doctest.h>

#include <cmath>

#include "jst/growth.hpp"

using namespace jst;

namespace {

VectorXc exp_coeffs(double sigma, int count) {
    VectorXc c(count);
    double term = 1.0;
    for (int n = 0; n < count; ++n) {
        c[n] = term;
        term *= sigma / (n + 1.0);
    }
    return c;
}

}  // namespace

TEST_SUITE_BEGIN("growth");

TEST_CASE("type of an exponential from its coefficients") {
    const auto est = exponential_type_from_coeffs(exp_coeffs(2.0, 200));
    CHECK(std::abs(est.sigma_hat - 2.0) <= 0.04);  // within 2%
    CHECK_FALSE(est.degenerate);
    CHECK(est.first_index >= 99);
}

TEST_CASE("polynomials have type zero") {
    VectorXc c = VectorXc::Zero(64);
    c[0] = 3.0;
    c[5] = -2.0;
    c[9] = 1.0;
    const auto est = exponential_type_from_coeffs(c);
    CHECK(est.sigma_hat == 0.0);  // the vanishing tail wins the trailing window
    CHECK(est.last_index == 63);
}

TEST_CASE("all-zero input is degenerate, short input rejected") {
    CHECK(exponential_type_from_coeffs(VectorXc::Zero(40)).degenerate);
    CHECK_THROWS_AS(exponential_type_from_coeffs(VectorXc::Zero(16)), std::invalid_argument);
}

TEST_CASE("superfactorial envelope coefficients stay under the 1/(4+eps) type") {
    const double eps = 0.5;
    VectorXc c(120);
    c[0] = 1.0;
    for (int n = 1; n < 120; ++n)
        c[n] = std::exp(n * std::log(std::exp(1.0) / ((4.0 + eps) * n)));
    const auto est = exponential_type_from_coeffs(c);
    CHECK(est.sigma_hat <= 1.0 / (4.0 + eps) * 1.02);
    CHECK(est.sigma_hat == doctest::Approx(1.0 / 4.5).epsilon(1e-9));
}

TEST_CASE("type estimate is scale covariant") {
    const auto base = exponential_type_from_coeffs(exp_coeffs(1.0, 200));
    for (double rho : {0.5, 2.0}) {
        VectorXc scaled = exp_coeffs(1.0, 200);
        double pw = 1.0;
        for (int n = 0; n < scaled.size(); ++n) {
            scaled[n] *= pw;  // coefficients of f(rho z)
            pw *= rho;
        }
        const auto est = exponential_type_from_coeffs(scaled);
        CHECK(std::abs(est.sigma_hat - rho * base.sigma_hat) <= 0.02 * rho * base.sigma_hat);
    }
}

TEST_CASE("noise floor masks unmeasurable coefficients") {
    VectorXc c = exp_coeffs(0.25, 64);
    for (int n = 40; n < 64; ++n) c[n] = 1e-16;  // measurement noise tail
    const auto raw = exponential_type_from_coeffs(c);
    const auto masked = exponential_type_from_coeffs(c, 0.5, 1e-12);
    CHECK(masked.last_index == 9);  // the floor cuts the series at |c_9| ~ 1e-11
    // only nine measurable coefficients: the finite-n bias is ~(2 pi n)^{-1/(2n)}
    CHECK(std::abs(masked.sigma_hat - 0.25) <= 0.06);
    CHECK(raw.sigma_hat > masked.sigma_hat);  // the noise inflates the raw estimate
}

TEST_CASE("indicator of the exponential matches sigma cos(phi)") {
    const std::vector<double> ladder{5, 10, 15, 20, 25, 30, 35, 40};
    const Evaluator f = [](Complex z) { return std::exp(z); };
    for (double phi : {0.0, M_PI / 4.0, M_PI / 2.0, M_PI}) {
        const auto est = indicator_estimate(f, phi, ladder);
        CHECK(std::abs(est.value - std::cos(phi)) <= 0.05);
    }
}

TEST_CASE("indicator ladder validation and overflow handling") {
    const Evaluator f = [](Complex z) { return std::exp(z * z); };  // order 2: overflows fast
    CHECK_THROWS_AS(indicator_estimate(f, 0.0, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(indicator_estimate(f, 0.0, {3.0, 2.0, 4.0, 5.0}), std::invalid_argument);
    const auto est = indicator_estimate(f, 0.0, {5, 10, 20, 30, 40, 100});
    CHECK(est.ladder_shrunk);  // exp(10000) is out of range
    CHECK(est.radii.size() >= 2);
    CHECK(std::isfinite(est.value));
}

TEST_CASE("zeros on the ray fall off the upper hull") {
    const Evaluator f = [](Complex z) { return std::sin(z); };  // zeros at pi k on the real axis
    const std::vector<double> ladder{M_PI, 5.0, 2.0 * M_PI, 10.0, 3.0 * M_PI, 15.0};
    std::vector<double> sorted = ladder;
    std::sort(sorted.begin(), sorted.end());
    const auto est = indicator_estimate(f, 0.0, sorted);
    CHECK_FALSE(est.degenerate);
    CHECK(std::abs(est.value) <= 0.1);  // bounded on the real axis
}

TEST_CASE("opposite-ray indicator sums are nonnegative") {
    const std::vector<double> ladder{5, 10, 15, 20, 25, 30, 35, 40};
    const Evaluator expz = [](Complex z) { return std::exp(z); };
    const Evaluator cosz = [](Complex z) { return std::cos(z); };
    CHECK(std::abs(indicator_sum_check(expz, 0.0, ladder)) <= 0.05);  // equality case
    CHECK(indicator_sum_check(cosz, M_PI / 2.0, ladder) == doctest::Approx(2.0).epsilon(0.05));
    CHECK(indicator_sum_check(cosz, M_PI / 2.0, ladder) >= -0.05);
}

TEST_CASE("polynomial evaluator is plain Horner") {
    VectorXc c(3);
    c << Complex(1, 0), Complex(0, 1), Complex(2, 0);
    const auto f = polynomial_evaluator(c);
    const Complex z(0.5, -0.25);
    CHECK(std::abs(f(z) - (c[0] + z * (c[1] + z * c[2]))) == 0.0);
}

TEST_SUITE_END();
