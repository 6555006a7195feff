#include "jst/jost.hpp"

#include <cmath>
#include <limits>

#include "jst/core.hpp"
#include "jst/csv.hpp"

namespace jst {

namespace {

void check_theta(Complex theta) {
    const double r = std::abs(theta);
    if (r == 0.0) throw std::domain_error("jost: theta = 0");
    if (r > 1.0 + 1e-12) throw std::domain_error("jost: |theta| > 1");
}

// Side plus seeds theta^n at the two top sites, which is exact once both
// lie in the free region; side minus mirrors at the bottom.
void check_window(const CoefficientProfile& p, Side side, GridWindow w) {
    if (w.size() < 4) throw std::invalid_argument("jost: window too small");
    if (p.is_free()) return;
    if (side == Side::plus && w.hi < p.window_hi + 2)
        throw std::invalid_argument("jost: window top needs two free sites above the perturbation");
    if (side == Side::minus && w.lo > p.window_lo - 2)
        throw std::invalid_argument("jost: window bottom needs two free sites below the perturbation");
}

}  // namespace

JostSolution compute_jost(const CoefficientProfile& p, Complex theta, Side side, GridWindow w) {
    check_theta(theta);
    check_window(p, side, w);
    const Complex lambda = lambda_of_theta(theta);

    ComplexSequence f(w);
    if (side == Side::plus) {
        f[w.hi] = std::pow(theta, w.hi);
        f[w.hi - 1] = std::pow(theta, w.hi - 1);
        for (int n = w.hi - 1; n > w.lo; --n)
            f[n - 1] = ((lambda - p.b(n)) * f[n] - p.a(n) * f[n + 1]) / p.a(n - 1);
    } else {
        f[w.lo] = std::pow(theta, -w.lo);
        f[w.lo + 1] = std::pow(theta, -(w.lo + 1));
        for (int n = w.lo + 1; n < w.hi; ++n)
            f[n + 1] = ((lambda - p.b(n)) * f[n] - p.a(n - 1) * f[n - 1]) / p.a(n);
    }

    JostSolution sol{side, theta, std::move(f), 0.0, 0.0};
    double max_abs = sol.values.max_abs();
    for (int n = w.lo + 1; n <= w.hi - 1; ++n) {
        Complex defect = p.a(n) * sol.values[n + 1] + p.a(n - 1) * sol.values[n - 1] +
                         p.b(n) * sol.values[n] - lambda * sol.values[n];
        sol.residual_abs = std::max(sol.residual_abs, std::abs(defect));
    }
    sol.residual_rel = max_abs > 0.0 ? sol.residual_abs / max_abs : 0.0;
    return sol;
}

MatrixXc jost_table(const CoefficientProfile& p, const VectorXc& thetas, Side side, GridWindow w) {
    MatrixXc table(thetas.size(), w.size());
    for (Eigen::Index k = 0; k < thetas.size(); ++k)
        table.row(k) = compute_jost(p, thetas[k], side, w).values.values().transpose();
    return table;
}

double asymptotic_product_plus(const CoefficientProfile& p, int n) {
    double prod = 1.0;
    for (int m = std::max(n, p.window_lo); m <= p.window_hi; ++m) prod *= 2.0 * p.a(m);
    return prod;
}

double asymptotic_product_minus(const CoefficientProfile& p, int n) {
    double prod = 1.0;
    for (int m = p.window_lo; m <= std::min(n - 1, p.window_hi); ++m) prod *= 2.0 * p.a(m);
    return prod;
}

double total_product(const CoefficientProfile& p) {
    return asymptotic_product_plus(p, p.window_lo);
}

JostExpansion jost_expansion_extract(const CoefficientProfile& p, Side side, GridWindow n_range,
                                     int circle_samples, int J_max) {
    const int M = circle_samples;
    if (M < 2 || (M & (M - 1)) != 0) throw std::invalid_argument("expansion: M must be a power of two");
    if (M < 2 * J_max) throw std::invalid_argument("expansion: M < 2 J_max");
    if (n_range.empty()) throw std::invalid_argument("expansion: empty n-range");

    // Computation window: the requested rows plus the free seed region.
    GridWindow w = n_range;
    if (side == Side::plus)
        w.hi = std::max(w.hi, p.window_hi) + 2;
    else
        w.lo = std::min(w.lo, p.window_lo) - 2;
    if (w.size() < 4) w = {w.lo - 2, w.hi + 2};

    VectorXc thetas(M);
    for (int k = 0; k < M; ++k)
        thetas[k] = std::polar(1.0, 2.0 * M_PI * k / M);
    MatrixXc table = jost_table(p, thetas, side, w);

    JostExpansion exp_data;
    exp_data.side = side;
    exp_data.n_range = n_range;
    exp_data.J_max = J_max;
    exp_data.A_values = VectorXr(n_range.size());
    exp_data.K_table = MatrixXr::Zero(n_range.size(), J_max + 1);

    // g(theta) = e^{side}(theta,n) A_{side}(n) theta^{-+n} = 1 + sum_j K_j(n) theta^j.
    // Powers advance incrementally; on the circle theta^{-1} = conj(theta) exactly.
    MatrixXc samples(n_range.size(), M);
    VectorXc tpow(M);
    for (int k = 0; k < M; ++k)
        tpow[k] = std::pow(thetas[k], side == Side::plus ? -n_range.lo : n_range.lo);
    for (int n = n_range.lo; n <= n_range.hi; ++n) {
        const int i = n_range.index(n);
        const double A = side == Side::plus ? asymptotic_product_plus(p, n)
                                            : asymptotic_product_minus(p, n);
        exp_data.A_values[i] = A;
        for (int k = 0; k < M; ++k) {
            samples(i, k) = table(k, w.index(n)) * A * tpow[k];
            tpow[k] *= side == Side::plus ? std::conj(thetas[k]) : thetas[k];
        }
    }

    VectorXc cp = VectorXc::Ones(M);  // conj(theta)^j
    for (int j = 0; j <= J_max; ++j) {
        VectorXc coeffs = samples * cp / static_cast<double>(M);
        exp_data.K_table.col(j) = coeffs.real();
        double imag_max = coeffs.imag().cwiseAbs().maxCoeff();
        exp_data.quadrature_error = std::max(exp_data.quadrature_error, imag_max);
        for (int k = 0; k < M; ++k) cp[k] *= std::conj(thetas[k]);
    }
    exp_data.aliasing_warning =
        exp_data.K_table.col(J_max).cwiseAbs().maxCoeff() > 1e-10;
    return exp_data;
}

double DecayBounds::c_at(int n) const {
    return (n >= window_lo && n <= window_hi) ? c_values[n - window_lo] : 0.0;
}

double DecayBounds::C_plus_at(int n) const {
    if (window_hi < window_lo) return 0.0;
    if (n > window_hi) return 0.0;
    if (n < window_lo) return suffix_sums[0];
    return suffix_sums[n - window_lo];
}

double DecayBounds::D_plus(int m, int n) const {
    double prod = 1.0;
    for (int j = 1; j <= m - 1; ++j) {
        if (n + j > window_hi) break;  // remaining factors are 1
        prod *= 1.0 + C_plus_at(n + j);
    }
    return prod;
}

DecayBounds decay_bounds(const CoefficientProfile& p) {
    DecayBounds d;
    d.window_lo = p.window_lo;
    d.window_hi = p.window_hi;
    const int w = p.width();
    d.c_values = VectorXr(w);
    d.suffix_sums = VectorXr::Zero(w + 1);
    for (int n = p.window_lo; n <= p.window_hi; ++n)
        d.c_values[n - p.window_lo] =
            2.0 * std::abs(p.b(n)) + std::abs(4.0 * p.a(n) * p.a(n) - 1.0);
    for (int i = w - 1; i >= 0; --i) d.suffix_sums[i] = d.suffix_sums[i + 1] + d.c_values[i];
    return d;
}

KBoundReport verify_K_bounds(const JostExpansion& expansion, const DecayBounds& bounds,
                             double tolerance, double noise_floor) {
    if (expansion.side != Side::plus)
        throw std::invalid_argument("verify_K_bounds: bounds are stated for the plus side");
    KBoundReport report;
    report.tolerance = tolerance;
    for (int n = expansion.n_range.lo; n <= expansion.n_range.hi; ++n) {
        const int i = expansion.n_range.index(n);
        for (int j = 1; j <= expansion.J_max; ++j) {
            const double K = std::abs(expansion.K_table(i, j));
            if (K <= noise_floor) continue;  // below quadrature noise: unmeasurable
            const double denom = bounds.D_plus(j, n) * bounds.C_plus_at(n + j / 2);
            if (denom == 0.0) {  // a vanishing bound forces a vanishing coefficient
                report.pass = false;
                report.max_ratio = std::numeric_limits<double>::infinity();
                report.argmax_j = j;
                report.argmax_n = n;
                return report;
            }
            const double ratio = K / denom;
            if (ratio > report.max_ratio) {
                report.max_ratio = ratio;
                report.argmax_j = j;
                report.argmax_n = n;
            }
        }
    }
    report.pass = report.max_ratio <= 1.0 + tolerance;
    return report;
}

void save_k_table_csv(const JostExpansion& expansion, const std::filesystem::path& path) {
    csv::Writer w(path, "side,n,j,K");
    const std::string side = expansion.side == Side::plus ? "+" : "-";
    for (int n = expansion.n_range.lo; n <= expansion.n_range.hi; ++n)
        for (int j = 0; j <= expansion.J_max; ++j)
            w.row({side, csv::fmt(n), csv::fmt(j),
                   csv::fmt(expansion.K_table(expansion.n_range.index(n), j))});
}

}  // namespace jst
