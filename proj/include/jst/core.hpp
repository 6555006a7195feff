#pragma once

#include "jst/grid.hpp"
#include "jst/profile.hpp"

namespace jst {

/// Spectral parameter map lambda(theta) = (theta + 1/theta)/2. Maps the unit
/// circle onto the essential spectrum [-1,1].
Complex lambda_of_theta(Complex theta);

/// A point of the spectral parameter domain with its image under the map.
struct SpectralPoint {
    Complex theta;   // 0 < |theta| <= 1
    Complex lambda;  // (theta + 1/theta)/2

    static SpectralPoint from_theta(Complex theta);
};

/// Inverse branch for real |lambda| > 1: returns theta in (-1,1)\{0} with
/// lambda_of_theta(theta) = lambda. Uses the cancellation-free form
/// sign(lambda) / (|lambda| + sqrt(lambda^2 - 1)).
double theta_of_lambda(double lambda);

/// (tau f)(n) = a(n) f(n+1) + a(n-1) f(n-1) + b(n) f(n), returned on the
/// interior window (boundary rows dropped; no boundary condition invented).
ComplexSequence apply_operator(const CoefficientProfile& p, const ComplexSequence& f);

/// v(t,n) = u(alpha t, n) e^{-i beta t}: if u solves i u_t = H u then v
/// solves i v_t = (alpha H + beta) v. The input packet is read as a sample
/// of u at time alpha*t, so the result carries time u.time/alpha.
WavePacket affine_transform(const WavePacket& u, double alpha, double beta);

}  // namespace jst
