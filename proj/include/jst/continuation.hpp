#pragma once

#include <string>
#include <vector>

#include "jst/evolution.hpp"

namespace jst {

/// Time-sampled solution: snapshots on a common window at strictly
/// increasing times (at least 5 samples).
struct SolutionTrace {
    VectorXr times;
    std::vector<ComplexSequence> snapshots;

    GridWindow window() const;
    void validate() const;
};

SolutionTrace sample_direct_evolution(const CoefficientProfile& p, const WavePacket& u0,
                                      double t0, double t1, int n_samples,
                                      const EvolutionConfig& cfg = {});
SolutionTrace sample_spectral_evolution(const CoefficientProfile& p, const WavePacket& u0,
                                        double t0, double t1, int n_samples,
                                        const EvolutionConfig& cfg = {});

enum class Direction { down, up };

/// Solves the evolution equation for the missing neighbor:
///   down: w(t,n-1) = [i w_t(t,n) - a(n) w(t,n+1) - b(n) w(t,n)] / a(n-1)
/// with the time derivative taken by central differences, so only interior
/// sample times contribute. error_bar estimates the O(dt^2) |w_ttt| defect.
struct DerivedNeighbor {
    VectorXr interior_times;
    VectorXc values;
    double error_bar = 0.0;
};

DerivedNeighbor derive_neighbor(const CoefficientProfile& p, const SolutionTrace& w, int n,
                                Direction direction);

enum class SiteStatus { hypothesis, coincide, flagged, inconclusive };

struct SiteReport {
    int n;
    double certified_bound;  // tolerance growth of the zero-propagation recursion
    double measured_max;     // max_t |u - v| at this site (over still-valid times)
    double mismatch;         // |derived - measured| for the equation-implied value
    SiteStatus status;
};

struct ContinuationReport {
    bool hypothesis_ok = false;
    double tolerance = 0.0;
    double amplification = 0.0;  // A = max(1, ||a||_inf, ||b||_inf, c_fd/dt^2) / min_n a(n)
    std::vector<SiteReport> sites;  // ascending n
    int first_flagged_site;         // INT_MIN when none
    std::string verdict;
};

/// Unique continuation check: with w = u - v vanishing (within tol) at
/// n0, n0+1 over the sampled interval, the equation propagates the bound
/// outward site by site. Certified bounds grow by the documented factor
///   eps(n) = tol * A^{|n - n0|}   (A as above, c_fd = 1),
/// plus the accumulated finite-difference defect; sites where the measured
/// trace contradicts the equation-implied value are flagged.
ContinuationReport continuation_check(const CoefficientProfile& p, const SolutionTrace& u,
                                      const SolutionTrace& v, int n0, double tol);

/// Report CSV: `n,certified_bound,status`.
void save_continuation_csv(const ContinuationReport& report, const std::filesystem::path& path);

}  // namespace jst
