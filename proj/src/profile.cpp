#include "jst/profile.hpp"

#include <cmath>
#include <limits>

#include "jst/csv.hpp"

namespace jst {

namespace {

bool asymptotic_entry(double a, double b) { return a == 0.5 && b == 0.0; }

}  // namespace

CoefficientProfile make_profile(int window_lo, VectorXr a, VectorXr b, double decay_constant,
                                double decay_exponent) {
    if (a.size() != b.size()) throw std::invalid_argument("profile: a/b length mismatch");
    if (decay_constant <= 0.0 || decay_exponent <= 0.0)
        throw std::invalid_argument("profile: decay parameters must be positive");
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (!(a[i] > 0.0)) throw std::invalid_argument("profile: a(n) must be positive");
        if (!std::isfinite(a[i]) || !std::isfinite(b[i]))
            throw std::invalid_argument("profile: coefficients must be finite");
    }

    // Canonical minimal window: trim edges already at the asymptotic values.
    Eigen::Index first = 0, last = a.size() - 1;
    while (first <= last && asymptotic_entry(a[first], b[first])) ++first;
    while (last >= first && asymptotic_entry(a[last], b[last])) --last;

    CoefficientProfile p;
    p.decay_constant = decay_constant;
    p.decay_exponent = decay_exponent;
    if (first > last) {
        p.window_lo = 0;
        p.window_hi = -1;
        return p;
    }
    p.window_lo = window_lo + static_cast<int>(first);
    p.window_hi = window_lo + static_cast<int>(last);
    p.a_values = a.segment(first, last - first + 1);
    p.b_values = b.segment(first, last - first + 1);
    return p;
}

CoefficientProfile free_profile() { return CoefficientProfile{}; }

CoefficientProfile single_site_profile(double g, int site, double delta) {
    VectorXr a = VectorXr::Constant(1, 0.5);
    VectorXr b = VectorXr::Constant(1, g);
    auto p = make_profile(site, a, b, 1.0, delta);
    auto report = admissibility_check(p);
    if (std::isfinite(report.minimal_C) && report.minimal_C > 0.0)
        p.decay_constant = 1.05 * report.minimal_C;
    return p;
}

CoefficientProfile reflect_profile(const CoefficientProfile& p) {
    if (p.is_free()) return p;
    // a~(n) = a(-n-1) is supported on [-hi-1, -lo-1], b~(n) = b(-n) on [-hi, -lo];
    // build on the union and let make_profile trim.
    const int lo = -p.window_hi - 1;
    const int hi = -p.window_lo;
    const int w = hi - lo + 1;
    VectorXr a(w), b(w);
    for (int n = lo; n <= hi; ++n) {
        a[n - lo] = p.a(-n - 1);
        b[n - lo] = p.b(-n);
    }
    return make_profile(lo, a, b, p.decay_constant, p.decay_exponent);
}

AdmissibilityReport admissibility_check(const CoefficientProfile& p) {
    AdmissibilityReport report;
    report.condition_i = true;  // finite windows: n(1-2a), nb trivially summable
    report.log10_minimal_C = -std::numeric_limits<double>::infinity();
    report.minimal_C = 0.0;
    if (p.is_free() || p.window_hi < 1) return report;

    const double two_n_exp = 2.0 * (1.0 + p.decay_exponent);
    const double logC = std::log(p.decay_constant);
    double max_log_required = -std::numeric_limits<double>::infinity();

    for (int N = 1; N <= p.window_hi; ++N) {
        double tail = 0.0;
        for (int n = std::max(N, p.window_lo); n <= p.window_hi; ++n)
            tail += std::abs(2.0 * p.a(n) - 1.0) + std::abs(p.b(n));
        AdmissibilityRow row;
        row.N = N;
        row.tail_sum = tail;
        row.log_allowance = logC - two_n_exp * N * std::log(static_cast<double>(N));
        row.holds = tail == 0.0 || std::log(tail) <= row.log_allowance;
        if (!row.holds) report.condition_ii = false;
        if (tail > 0.0) {
            double log_required = std::log(tail) + two_n_exp * N * std::log(static_cast<double>(N));
            max_log_required = std::max(max_log_required, log_required);
        }
        report.rows.push_back(row);
    }

    if (std::isfinite(max_log_required)) {
        report.log10_minimal_C = max_log_required / std::log(10.0);
        report.minimal_C = std::exp(max_log_required);  // inf when out of double range
    }
    return report;
}

CoefficientProfile load_profile_csv(const std::filesystem::path& path, double decay_constant,
                                    double decay_exponent) {
    auto rows = csv::read(path, "n,a,b");
    if (rows.empty()) return free_profile();
    const std::string ctx = path.string();
    int lo = csv::parse_int(rows.front()[0], ctx);
    VectorXr a(rows.size()), b(rows.size());
    int expected = lo;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        int n = csv::parse_int(rows[i][0], ctx);
        if (n != expected)
            throw std::runtime_error("profile rows must be consecutive in " + ctx);
        a[static_cast<Eigen::Index>(i)] = csv::parse_double(rows[i][1], ctx);
        b[static_cast<Eigen::Index>(i)] = csv::parse_double(rows[i][2], ctx);
        ++expected;
    }
    return make_profile(lo, a, b, decay_constant, decay_exponent);
}

void save_profile_csv(const CoefficientProfile& p, const std::filesystem::path& path) {
    csv::Writer w(path, "n,a,b");
    for (int n = p.window_lo; n <= p.window_hi; ++n)
        w.row({csv::fmt(n), csv::fmt(p.a(n)), csv::fmt(p.b(n))});
}

}  // namespace jst
