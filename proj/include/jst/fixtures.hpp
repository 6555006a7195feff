#pragma once

#include <cstdint>

#include "jst/profile.hpp"

namespace jst::fixtures {

/// Seeded admissible profile: perturbations drawn under the superexponential
/// envelope 0.3 * max(1,|n|)^{-2(1+delta) max(1,|n|)} on a small window, with
/// decay_constant set to its measured minimal admissible value.
CoefficientProfile random_admissible(std::uint64_t seed, double delta = 1.0);

/// Seeded packet supported on [support_lo, support_hi], unit l2 norm unless
/// normalize = false.
ComplexSequence random_packet(GridWindow window, std::uint64_t seed, int support_lo,
                              int support_hi, bool normalize = true);

}  // namespace jst::fixtures
