#include "jst/fixtures.hpp"

#include <cmath>

#include "jst/rng.hpp"

namespace jst::fixtures {

CoefficientProfile random_admissible(std::uint64_t seed, double delta) {
    Rng rng(seed);
    const int W = rng.uniform_int(2, 6);
    const int lo = -W;
    const int width = 2 * W + 1;
    VectorXr a(width), b(width);
    for (int n = lo; n <= W; ++n) {
        const int m = std::max(1, std::abs(n));
        const double env = 0.3 * std::exp(-2.0 * (1.0 + delta) * m * std::log(double(m)));
        a[n - lo] = 0.5 + 0.5 * rng.uniform(-1.0, 1.0) * env;
        b[n - lo] = rng.uniform(-1.0, 1.0) * env;
    }
    auto p = make_profile(lo, a, b, 1.0, delta);
    const auto report = admissibility_check(p);
    if (std::isfinite(report.minimal_C) && report.minimal_C > 0.0)
        p.decay_constant = 1.05 * report.minimal_C;
    return p;
}

ComplexSequence random_packet(GridWindow window, std::uint64_t seed, int support_lo,
                              int support_hi, bool normalize) {
    if (!window.contains(support_lo) || !window.contains(support_hi) || support_hi < support_lo)
        throw std::invalid_argument("random_packet: support outside window");
    Rng rng(seed);
    ComplexSequence f(window);
    for (int n = support_lo; n <= support_hi; ++n) f[n] = rng.unit_disk();
    if (normalize && f.norm() > 0.0) f.values() /= f.norm();
    return f;
}

}  // namespace jst::fixtures
