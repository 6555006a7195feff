#include "jst/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace jst {

GrowthEstimate exponential_type_from_coeffs(const VectorXc& c, double trailing_fraction,
                                            double noise_floor) {
    if (c.size() < 32)
        throw std::invalid_argument("exponential_type_from_coeffs: need at least 32 coefficients");
    if (!(trailing_fraction > 0.0 && trailing_fraction <= 1.0))
        throw std::invalid_argument("exponential_type_from_coeffs: bad trailing fraction");

    GrowthEstimate est;
    est.noise_floor = noise_floor;
    int lo_u = -1, hi_u = -1;
    for (int n = 1; n < static_cast<int>(c.size()); ++n) {
        if (std::abs(c[n]) > noise_floor) {
            if (lo_u < 0) lo_u = n;
            hi_u = n;
        }
    }
    if (lo_u < 0) {
        est.degenerate = true;
        return est;
    }

    // With no noise floor the window is taken over the raw index range, so a
    // polynomial's vanishing tail drives the estimate to zero. With a floor,
    // the window covers the measurable range instead: data cut off at the
    // floor still gets its tail maximized, while sub-floor entries (pure
    // measurement noise, which would inflate n |c_n|^{1/n}) contribute 0.
    if (noise_floor <= 0.0) {
        lo_u = 1;
        hi_u = static_cast<int>(c.size()) - 1;
    }
    est.first_index = hi_u - static_cast<int>(trailing_fraction * (hi_u - lo_u));
    est.last_index = hi_u;
    const double e = std::exp(1.0);
    for (int n = est.first_index; n <= hi_u; ++n) {
        const double mag = std::abs(c[n]);
        if (mag <= noise_floor || mag == 0.0) continue;
        est.sigma_hat = std::max(est.sigma_hat, n * std::exp(std::log(mag) / n) / e);
    }
    return est;
}

namespace {

double cross(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

}  // namespace

IndicatorEstimate indicator_estimate(const Evaluator& f, double phi, std::vector<double> r_ladder) {
    if (r_ladder.size() < 4)
        throw std::invalid_argument("indicator_estimate: need at least 4 radii");
    if (!std::is_sorted(r_ladder.begin(), r_ladder.end()))
        throw std::invalid_argument("indicator_estimate: ladder must be increasing");

    IndicatorEstimate est;
    const Complex dir = std::polar(1.0, phi);
    std::vector<std::pair<double, double>> pts;  // (r, log|f|)
    for (double r : r_ladder) {
        const Complex v = f(r * dir);
        const double y = std::log(std::abs(v));
        if (std::isinf(y) && y > 0.0) {
            est.ladder_shrunk = true;  // overflow: drop this and all larger radii
            break;
        }
        if (std::isnan(y)) {
            est.ladder_shrunk = true;
            break;
        }
        if (std::isfinite(y)) {  // -inf (a zero on the ray) can never sit on the upper hull
            pts.emplace_back(r, y);
            est.radii.push_back(r);
        }
    }
    if (pts.size() < 2) {
        est.degenerate = true;
        est.value = -std::numeric_limits<double>::infinity();
        return est;
    }

    // Upper convex hull, left to right; the slope of the final segment is the
    // finite-r surrogate for limsup y/r.
    std::vector<std::pair<double, double>> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            if (cross(b.first - a.first, b.second - a.second, pt.first - a.first,
                      pt.second - a.second) >= 0.0)
                hull.pop_back();  // keep only clockwise turns
            else
                break;
        }
        hull.push_back(pt);
    }
    const auto& b = hull[hull.size() - 1];
    const auto& a = hull[hull.size() - 2];
    est.value = (b.second - a.second) / (b.first - a.first);
    return est;
}

double indicator_sum_check(const Evaluator& f, double phi, const std::vector<double>& r_ladder) {
    const auto h0 = indicator_estimate(f, phi, r_ladder);
    const auto h1 = indicator_estimate(f, phi + M_PI, r_ladder);
    return h0.value + h1.value;
}

Evaluator polynomial_evaluator(VectorXc coeffs) {
    return [c = std::move(coeffs)](Complex z) {
        Complex acc(0.0, 0.0);
        for (Eigen::Index n = c.size() - 1; n >= 0; --n) acc = acc * z + c[n];
        return acc;
    };
}

}  // namespace jst
