#pragma once

#include <vector>

#include "jst/scattering.hpp"

namespace jst {

/// Spectral measure of H: absolutely continuous density 1/(2 pi |alpha|^2)
/// per unit angle on the upper semicircle, plus point masses gamma_j at the
/// eigenvalues theta_j.
struct SpectralMeasure {
    VectorXc theta_grid;   // upper half of the rotated circle grid
    VectorXr angles;       // arg(theta_k) in (0, pi)
    double dphi = 0.0;     // uniform angular spacing
    VectorXr ac_weight;    // 1/(2 pi |alpha(theta_k)|^2)
    std::vector<BoundState> point_masses;
};

/// Two rows of F(f): F(f)(theta) = sum_n f(n) (e^+(theta,n), e^-(theta,n))^T,
/// plus the plus-row values at the bound states.
struct TransformedPair {
    VectorXc plus_component;
    VectorXc minus_component;
    VectorXc eigen_components;
};

/// The unitary transform diagonalizing H. Jost tables, the measure and the
/// bound states are precomputed once per (profile, window, grid size).
class SpectralTransform {
public:
    SpectralTransform(const CoefficientProfile& p, GridWindow window, int circle_samples);

    const SpectralMeasure& measure() const { return measure_; }
    GridWindow window() const { return window_; }
    const CoefficientProfile& profile() const { return profile_; }

    TransformedPair forward(const ComplexSequence& f) const;

    /// Adjoint under d rho; with_point_masses = false is the deliberate
    /// negative-control mode that drops the bound-state contribution.
    ComplexSequence inverse(const TransformedPair& F, bool with_point_masses = true) const;

    double norm_squared(const TransformedPair& F, bool with_point_masses = true) const;

    /// | ||F f||^2_rho - ||f||^2 | / ||f||^2
    double parseval_residual(const ComplexSequence& f, bool with_point_masses = true) const;

    /// max |F(H f) - lambda . F(f)| over grid rows and bound states; f must
    /// vanish at the two outermost sites of each window edge so H f is exact.
    double diagonalization_residual(const ComplexSequence& f) const;

    /// e^{-i t lambda} applied in the transform domain.
    void apply_evolution_phase(TransformedPair& F, double t) const;

private:
    CoefficientProfile profile_;
    GridWindow window_;
    SpectralMeasure measure_;
    MatrixXc e_plus_, e_minus_;  // (grid x window) Jost tables
    MatrixXr e_bound_;           // (bound states x window), real at real theta_j
};

}  // namespace jst
