#pragma once

#include "jst/spectral.hpp"

namespace jst {

/// alpha H + beta, for evolving under rescaled/shifted operators.
struct AffineOperator {
    double alpha = 1.0;
    double beta = 0.0;
};

struct EvolutionConfig {
    int circle_samples = 2048;     // spectral method grid size
    double time_step = 1e-3;       // direct method step
    int min_padding = 20;          // required window slack beyond ceil(|t|)
    bool include_bound_states = true;   // spectral; false = negative control
    double boundary_tolerance = 1e-12;  // relative edge-mass guard
};

/// u(t) = e^{-itH} u(0) through the spectral transform: forward, multiply by
/// e^{-it lambda}, inverse. Throws if the support padding rule
/// (ceil(|t|) + min_padding free sites each side) is violated.
WavePacket evolve_spectral(const CoefficientProfile& p, const WavePacket& u0, double t,
                           const EvolutionConfig& cfg = {});
WavePacket evolve_spectral(const SpectralTransform& transform, const WavePacket& u0, double t,
                           const EvolutionConfig& cfg = {});

/// Trapezoidal/Cayley stepping
///   u_{k+1} = (I - i dt/2 H)^{-1} (I + i dt/2 H) u_k
/// on the truncated tridiagonal operator, solved by Thomas elimination.
/// Exactly unitary up to solver roundoff. Throws if mass reaches the window
/// edge (advising larger padding). `op` selects alpha H + beta.
WavePacket evolve_direct(const CoefficientProfile& p, const WavePacket& u0, double t,
                         const EvolutionConfig& cfg = {}, AffineOperator op = {});

enum class EvolutionMethod { spectral, direct };

/// Dispatch by method; both routes share the config.
WavePacket evolve(const CoefficientProfile& p, const WavePacket& u0, double t,
                  EvolutionMethod method, const EvolutionConfig& cfg = {});

/// One Cayley step with a fixed step size; the tridiagonal factorization is
/// reused across steps, which is what trace sampling wants.
class CayleyStepper {
public:
    CayleyStepper(const CoefficientProfile& p, GridWindow window, double step,
                  AffineOperator op = {});
    void step(VectorXc& u) const;
    double step_size() const { return h_; }

private:
    double h_;
    VectorXc sub_, diag_, sup_;      // I + i h/2 A
    VectorXc mult_, diag_mod_;       // its LU factors
};

/// Free propagator matrix element <n| e^{-itH_0} |m> = (-i)^{n-m} J_{n-m}(t),
/// with J_k summed by its absolutely convergent power series. Serves as the
/// independent oracle for evolution tests. Underflowed terms are 0.
Complex free_kernel(int n, int m, double t);

/// J_k(t) by the ascending power series (k may be negative).
double bessel_j_series(int k, double t);

/// ||spectral - direct||_2 / ||u0||_2 at time t.
double cross_validate(const CoefficientProfile& p, const WavePacket& u0, double t,
                      const EvolutionConfig& cfg = {});

/// Snapshot CSV: `t,n,re_u,im_u,abs_u`.
void save_packet_csv(const WavePacket& u, const std::filesystem::path& path);
WavePacket load_packet_csv(const std::filesystem::path& path);

}  // namespace jst
