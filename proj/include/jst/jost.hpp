#pragma once

#include "jst/grid.hpp"
#include "jst/profile.hpp"

namespace jst {

enum class Side { plus, minus };

/// Solution of tau f = lambda(theta) f normalized to theta^{+-n} at the
/// respective end of the lattice.
struct JostSolution {
    Side side;
    Complex theta;
    ComplexSequence values;
    double residual_abs = 0.0;  // max_n |tau f - lambda f| over interior sites
    double residual_rel = 0.0;  // residual_abs / max_n |f|
};

/// Recurses from exact plane-wave seeds in the free region. Requires
/// 0 < |theta| <= 1 and, for side plus (minus), two free sites at the top
/// (bottom) of the window. The recursion direction is the stable one.
JostSolution compute_jost(const CoefficientProfile& p, Complex theta, Side side,
                          GridWindow window);

/// e^{side}(theta_k, n) for a batch of thetas; row k is the solution for
/// thetas[k] over the window.
MatrixXc jost_table(const CoefficientProfile& p, const VectorXc& thetas, Side side,
                    GridWindow window);

double asymptotic_product_plus(const CoefficientProfile& p, int n);   // A_+(n) = prod_{m>=n} 2a(m)
double asymptotic_product_minus(const CoefficientProfile& p, int n);  // A_-(n) = prod_{m<n} 2a(m)
double total_product(const CoefficientProfile& p);                    // A = prod 2a(m)

/// Series data of the Jost solutions,
///   e^+(theta,n) = theta^n / A_+(n) * sum_j K_{+,j}(n) theta^j,  K_{+,0} = 1,
/// extracted by sampling at roots of unity. For finite perturbation windows
/// the series is a polynomial, so the quadrature is exact up to roundoff.
struct JostExpansion {
    Side side;
    GridWindow n_range;
    VectorXr A_values;   // A_{side}(n) over n_range
    MatrixXr K_table;    // (n_range.size() x (J_max+1)); column j holds K_{side,j}(n)
    int J_max = 64;
    double quadrature_error = 0.0;  // max imaginary residue seen in the transform
    bool aliasing_warning = false;  // |K_{J_max}| above tolerance somewhere
};

JostExpansion jost_expansion_extract(const CoefficientProfile& p, Side side,
                                     GridWindow n_range, int circle_samples = 512,
                                     int J_max = 64);

/// c(n) = 2|b(n)| + |4a(n)^2 - 1| and its derived tail quantities.
struct DecayBounds {
    int window_lo = 0;
    int window_hi = -1;
    VectorXr c_values;       // on [window_lo, window_hi]
    VectorXr suffix_sums;    // suffix_sums[i] = sum_{m>=lo+i} c(m), plus a trailing 0

    double c_at(int n) const;
    double C_plus_at(int n) const;             // C_+(n) = sum_{m>=n} c(m)
    double D_plus(int m, int n) const;         // prod_{j=1}^{m-1} (1 + C_+(n+j))
};

DecayBounds decay_bounds(const CoefficientProfile& p);

struct KBoundReport {
    double max_ratio = 0.0;  // max over j>=1, n of |K_j(n)| / (D_{+,j}(n) C_+(n+floor(j/2)))
    int argmax_j = 0;
    int argmax_n = 0;
    bool pass = true;        // max_ratio <= 1 + tolerance; 0/0 entries count as pass
    double tolerance = 0.0;
};

/// Checks |K_{+,j}(n)| <= D_{+,j}(n) C_+(n + floor(j/2)) for all j >= 1 over
/// the expansion's n-range. The tail index pairs each theta^2 factor with the
/// hopping bond it came from; a single perturbed a(s) produces K_{+,2}(s-1),
/// so the sum must start at s = (s-1) + 1, not at s + 1. Entries whose bound
/// vanishes pass when the coefficient is below the quadrature noise floor.
KBoundReport verify_K_bounds(const JostExpansion& expansion, const DecayBounds& bounds,
                             double tolerance = 1e-6, double noise_floor = 1e-10);

/// CSV dump of a K-table: columns `side,n,j,K`.
void save_k_table_csv(const JostExpansion& expansion, const std::filesystem::path& path);

}  // namespace jst
