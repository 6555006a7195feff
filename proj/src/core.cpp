#include "jst/core.hpp"

#include <cmath>

namespace jst {

Complex lambda_of_theta(Complex theta) {
    if (theta == Complex(0.0, 0.0))
        throw std::domain_error("lambda_of_theta: theta = 0");
    return 0.5 * (theta + 1.0 / theta);
}

SpectralPoint SpectralPoint::from_theta(Complex theta) {
    if (std::abs(theta) > 1.0 + 1e-12)
        throw std::domain_error("SpectralPoint: |theta| > 1");
    return {theta, lambda_of_theta(theta)};
}

double theta_of_lambda(double lambda) {
    if (!(std::abs(lambda) > 1.0))
        throw std::domain_error("theta_of_lambda: |lambda| <= 1 lies in the a.c. spectrum");
    const double s = lambda > 0.0 ? 1.0 : -1.0;
    return s / (std::abs(lambda) + std::sqrt(lambda * lambda - 1.0));
}

ComplexSequence apply_operator(const CoefficientProfile& p, const ComplexSequence& f) {
    const GridWindow w = f.window();
    if (w.size() < 3) throw std::invalid_argument("apply_operator: window width < 3");
    ComplexSequence g(w.shrunk(1));
    for (int n = w.lo + 1; n <= w.hi - 1; ++n)
        g[n] = p.a(n) * f[n + 1] + p.a(n - 1) * f[n - 1] + p.b(n) * f[n];
    return g;
}

WavePacket affine_transform(const WavePacket& u, double alpha, double beta) {
    if (alpha == 0.0) throw std::invalid_argument("affine_transform: alpha = 0");
    WavePacket v;
    v.time = u.time / alpha;
    v.values = u.values;
    const Complex phase = std::exp(Complex(0.0, -beta * v.time));
    v.values.values() *= phase;
    return v;
}

}  // namespace jst
