#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "jst/evolution.hpp"
#include "jst/growth.hpp"

namespace jst {

/// Double-time decay envelope C ((t1-t0) e / ((4+eps) n))^n for n >= 1.
/// A nonzero solution cannot stay below it at two separate times.
struct EnvelopeSpec {
    double epsilon = 0.5;
    double amplitude = 1.0;  // C
    double time_gap = 1.0;   // t1 - t0

    double operator()(int n) const;
};

/// Phi(t,theta) = sum_n u(t,n) e^-(theta,n) and its proof-side split
/// Phi = A1 + beta_+ A2 + alpha B with B(theta) = B1(1/theta) + B2(1/theta),
/// B1(z) = sum_{n>=0} v(n) z^n, B2(z) = sum_j b_j z^j, v = u / A_+.
struct PhiDecomposition {
    VectorXc theta_grid;  // |theta| = 1, theta^2 != 1
    VectorXc Phi;
    VectorXc A1, A2, B;
    VectorXc B1_coeffs;   // v(t,n), n = 0..window_hi
    VectorXc B2_coeffs;   // b_j, j = 1..J_max (index 0 holds b_1)
    ComplexSequence v_values;
    double decomposition_residual = 0.0;  // max |Phi - (A1 + beta_+ A2 + alpha B)|
    double series_residual = 0.0;         // max |B - (B1 + B2)(1/theta)|
};

PhiDecomposition phi_transform(const CoefficientProfile& p, const WavePacket& u,
                               const VectorXc& theta_grid);

/// Phi at arbitrary points of the punctured closed disk. Inside the circle
/// the series can pick up exponentially amplified measurement noise, so the
/// sum is truncated at its smallest tail term; truncation_bound reports the
/// size of the first neglected terms (the honest accuracy limit).
struct PhiValues {
    VectorXc values;
    VectorXr truncation_bound;
};
PhiValues phi_values(const CoefficientProfile& p, const WavePacket& u, const VectorXc& thetas,
                     double noise_floor_rel = 1e-13);

/// max over the listed circles |theta| = r of
///   |Phi(t1,theta) - e^{-i (t1-t0) lambda(theta)} Phi(t0,theta)| / max(1, |Phi(t0,theta)|).
/// Throws when a requested circle cannot be evaluated reliably (series
/// truncation bound above max_truncation_error).
double phi_evolution_residual(const CoefficientProfile& p, const WavePacket& u0,
                              const WavePacket& u1, const std::vector<double>& circle_radii,
                              int M = 512, double max_truncation_error = 1e-9);

/// b_j(t) = sum_{k=0}^{j-1} v(t,k) K_{+,j-k}(k) next to the decay-chain bound
///   D_max C_v sum_{k<j} env(k) C_+(k + floor((j-k)/2)),
/// all constants measured from the profile and the packet.
struct BCoefficients {
    VectorXc values;  // b_j, j = 1..J_max
    VectorXr bounds;
};
BCoefficients b_coefficients(const CoefficientProfile& p, const WavePacket& u, int J_max,
                             const EnvelopeSpec& env);

enum class ScanVerdict { violated, not_violated, indeterminate };

struct EnvelopeScanRow {
    int n;
    double abs_u;
    double envelope;
    double ratio;  // abs_u / envelope, NaN below the noise floor
    int flag;      // 1 violated, 0 within envelope, -1 below noise floor
};

/// Entries with |u(n)| <= noise_floor are indeterminate, never "satisfied":
/// double-precision data cannot certify superfactorial smallness. Verdict is
/// violated iff some measurable ratio exceeds 1; with no measurable entries
/// the scan is indeterminate.
struct EnvelopeScanReport {
    ScanVerdict verdict = ScanVerdict::indeterminate;
    std::vector<EnvelopeScanRow> rows;
    int worst_n = 0;
    double worst_ratio = 0.0;
    int measurable_count = 0;
    double noise_floor = 0.0;
};

EnvelopeScanReport envelope_violation_scan(const WavePacket& u, const EnvelopeSpec& env,
                                           int n_lo, int n_hi, double noise_floor = -1.0);

/// u0(n) = envelope(n) for n >= 1, u0(0) = 1, zero on the negative half line.
WavePacket envelope_saturating_packet(const EnvelopeSpec& env, GridWindow window);

struct UncertaintyConfig {
    EnvelopeSpec envelope;
    int scan_lo = 3;
    int scan_hi = 25;
    GridWindow window{-60, 60};
    int circle_samples = 1024;
    double time_step = 1e-3;
    bool direct_only = false;  // skip the spectral route (and cross-validation)
    std::vector<double> phi_radii{1.0, 0.9};
    std::optional<std::filesystem::path> out_dir;
};

struct ExperimentReport {
    EnvelopeScanReport scan_t0, scan_t1;
    GrowthEstimate type_t0, type_t1;  // exponential type of B1(t, .)
    double phi_residual = 0.0;
    std::vector<double> phi_radii_used;
    double cross_validation = 0.0;
    bool aborted = false;             // cross-validation failure: no verdict
    bool theorem_consistent = true;   // false only if both scans report "not violated"
    std::string verdict;
};

/// The end-to-end experiment: evolve u0 across the envelope's time gap,
/// scan both endpoints against the envelope, estimate the growth of B1 at
/// both times and check the evolution identity of Phi. Writes CSV artifacts
/// when cfg.out_dir is set.
ExperimentReport run_uncertainty_experiment(const CoefficientProfile& p, const WavePacket& u0,
                                            const UncertaintyConfig& cfg);

}  // namespace jst
