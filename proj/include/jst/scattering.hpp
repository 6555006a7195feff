#pragma once

#include <vector>

#include "jst/jost.hpp"

namespace jst {

/// W(f,g) = a(n) (f(n) g(n+1) - g(n) f(n+1)). Constant in n when f, g both
/// solve tau f = lambda f; the drift is measured elsewhere, never assumed.
Complex wronskian(const CoefficientProfile& p, const ComplexSequence& f,
                  const ComplexSequence& g, int n);

/// Value of a scattering coefficient; near_pole marks points where
/// theta^2 ~ 1 forced a two-point limit extrapolation (reduced accuracy).
struct CircleValue {
    Complex value;
    bool near_pole = false;
};

/// alpha(theta) = 2 theta / (1 - theta^2) W(e^+(theta), e^-(theta)),
/// 0 < |theta| <= 1. 1/alpha is the transmission coefficient.
CircleValue alpha_of_theta(const CoefficientProfile& p, Complex theta, GridWindow window);

/// beta_{side}(theta) = +-(2 theta / (1 - theta^2)) W(e^{-side}(theta), e^{side}(1/theta)),
/// |theta| = 1 only (1/theta must stay on the closed disk).
CircleValue beta_of_theta(const CoefficientProfile& p, Complex theta, Side side,
                          GridWindow window);

/// max over the grid, both signs and all interior sites of the defect in
///   e^{+-}(theta,n) = alpha(theta) e^{-+}(1/theta,n) + beta_{-+}(theta) e^{-+}(theta,n),
/// relative to max(1, |lhs|).
double scattering_relation_residual(const CoefficientProfile& p, const VectorXc& theta_grid,
                                    GridWindow window);

/// M-th roots of unity rotated by e^{i pi / M}; theta = +-1 never appears and
/// the grid is closed under conjugation.
VectorXc rotated_circle_grid(int M);

struct BoundState {
    double theta;   // in (-1,1)\{0}
    double lambda;  // lambda(theta), |lambda| > 1
    double gamma;   // norming constant, 1/gamma = sum_n |e^+(theta,n)|^2
};

/// e^+(theta_j, .) for a bound state, assembled from the stable recursion
/// direction on each side of the perturbation. A one-directional recursion
/// would be swamped by the exponentially growing second solution on the far
/// side of a wide window; here the left tail is the minus-side solution
/// rescaled at the matching site, so every entry is accurate in relative
/// terms.
ComplexSequence bound_state_jost(const CoefficientProfile& p, double theta, GridWindow window);

/// Zeros of alpha counted by winding along |theta| = radius.
int argument_principle_zero_count(const CoefficientProfile& p, GridWindow window,
                                  double radius = 0.999, int samples = 4096);

/// Eigenvalues via symmetric tridiagonal truncation, refined by root-polishing
/// alpha on the real interval, cross-checked against the argument principle.
/// Throws when the two counts disagree (window too small).
std::vector<BoundState> find_eigenvalues(const CoefficientProfile& p, GridWindow window);

struct ScatteringData {
    VectorXc theta_grid;           // rotated circle grid (upper semicircle plus conjugates)
    VectorXc alpha;
    VectorXc beta_plus, beta_minus;
    std::vector<BoundState> bound_states;
    VectorXr alpha_coeffs;         // K_j of alpha(theta) = (1/A) sum K_j theta^j, K_0 = 1
    double total_product = 1.0;    // A
    double wronskian_drift = 0.0;  // max relative n-variation of W(e^+, e^-) over the grid
};

/// alpha_coeff_count coefficients are recovered from an interior circle
/// (|theta| = 0.95) where the Taylor tail is damped geometrically; on the
/// boundary the coefficients of alpha need not decay at all.
ScatteringData compute_scattering(const CoefficientProfile& p, int M, GridWindow window,
                                  int alpha_coeff_count = 256);

void save_scattering_csv(const ScatteringData& data, const std::filesystem::path& path);
void save_eigenvalues_csv(const std::vector<BoundState>& states, const std::filesystem::path& path);

}  // namespace jst
