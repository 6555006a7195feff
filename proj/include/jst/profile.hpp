#pragma once

#include <filesystem>
#include <vector>

#include "jst/grid.hpp"

namespace jst {

/// Jacobi coefficients a(n) > 0, b(n) with a finite perturbation window;
/// a = 1/2 and b = 0 outside [window_lo, window_hi]. The pair
/// (decay_constant, decay_exponent) = (C, delta) parameterizes the
/// superexponential tail condition
///     sum_{n>=N} (|2a(n)-1| + |b(n)|) <= C / N^{(1+delta) 2N},  N > 0.
struct CoefficientProfile {
    int window_lo = 0;
    int window_hi = -1;  // empty window = free operator
    VectorXr a_values;   // on [window_lo, window_hi]
    VectorXr b_values;
    double decay_constant = 1.0;
    double decay_exponent = 1.0;

    bool is_free() const { return window_hi < window_lo; }
    int width() const { return is_free() ? 0 : window_hi - window_lo + 1; }

    double a(int n) const {
        return (n >= window_lo && n <= window_hi) ? a_values[n - window_lo] : 0.5;
    }
    double b(int n) const {
        return (n >= window_lo && n <= window_hi) ? b_values[n - window_lo] : 0.0;
    }
};

/// Validates a(n) > 0 and trims window edges that already carry the
/// asymptotic values, so profiles have a canonical minimal window.
CoefficientProfile make_profile(int window_lo, VectorXr a, VectorXr b,
                                double decay_constant = 1.0, double decay_exponent = 1.0);

CoefficientProfile free_profile();

/// b(site) = g, all other coefficients free. decay_constant is set to the
/// minimal admissible value (times a small headroom) for exponent delta.
CoefficientProfile single_site_profile(double g, int site = 0, double delta = 1.0);

/// a~(n) = a(-n-1), b~(n) = b(-n); involution on canonical profiles.
CoefficientProfile reflect_profile(const CoefficientProfile& p);

struct AdmissibilityRow {
    int N;
    double tail_sum;        // sum_{n>=N} (|2a-1| + |b|)
    double log_allowance;   // log C - (1+delta) 2N log N
    bool holds;
};

struct AdmissibilityReport {
    bool condition_i = true;    // n(1-2a(n)), n b(n) summable; finite windows always qualify
    bool condition_ii = true;   // tail bound holds at every N > 0 in the window
    double minimal_C = 0.0;     // smallest C satisfying (ii) for the stored delta (inf on overflow)
    double log10_minimal_C = 0.0;
    std::vector<AdmissibilityRow> rows;
};

AdmissibilityReport admissibility_check(const CoefficientProfile& p);

/// CSV with header `n,a,b`, one row per window index. Malformed rows are hard errors.
CoefficientProfile load_profile_csv(const std::filesystem::path& path,
                                    double decay_constant = 1.0, double decay_exponent = 1.0);
void save_profile_csv(const CoefficientProfile& p, const std::filesystem::path& path);

}  // namespace jst
