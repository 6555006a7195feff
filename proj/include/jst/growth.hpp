#pragma once

#include <functional>
#include <vector>

#include "jst/grid.hpp"

namespace jst {

/// Every growth number carries the data range it was measured on; the
/// limsups behind these quantities are not computable, only the declared
/// finite surrogates are.
struct GrowthEstimate {
    double sigma_hat = 0.0;
    bool degenerate = false;  // too few usable coefficients
    int first_index = 0;      // trailing index window actually maximized over
    int last_index = 0;
    double noise_floor = 0.0;
};

/// Exponential type from Taylor coefficients: finite-n surrogate
///   sigma_hat = max_{n in trailing window} n |c_n|^{1/n} / e.
/// Coefficients with |c_n| <= noise_floor are excluded first (measured data
/// below the floor carries no growth information); the trailing fraction is
/// then taken over the surviving index range. Requires >= 32 coefficients.
GrowthEstimate exponential_type_from_coeffs(const VectorXc& c, double trailing_fraction = 0.5,
                                            double noise_floor = 0.0);

using Evaluator = std::function<Complex(Complex)>;

struct IndicatorEstimate {
    double value = 0.0;
    std::vector<double> radii;   // ladder actually used
    bool ladder_shrunk = false;  // overflow trimmed the top radii
    bool degenerate = false;     // fewer than two finite samples
};

/// Indicator function h_f(phi) = limsup_r log|f(r e^{i phi})| / r estimated
/// as the slope of the final segment of the upper convex hull of
/// (r, log|f(r e^{i phi})|). Documented heuristic surrogate for the limsup.
/// Requires an increasing ladder of at least 4 radii.
IndicatorEstimate indicator_estimate(const Evaluator& f, double phi, std::vector<double> r_ladder);

/// h_f(phi) + h_f(phi + pi); >= 0 for entire functions of exponential type.
double indicator_sum_check(const Evaluator& f, double phi, const std::vector<double>& r_ladder);

/// sum_n c_n z^n by Horner, for feeding series data to the estimators.
Evaluator polynomial_evaluator(VectorXc coeffs);

}  // namespace jst
