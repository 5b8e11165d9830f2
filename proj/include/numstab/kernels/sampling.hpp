#pragma once

// Uniform sampling that keeps the raw draw inside [1, 1 + 2^-k), a range
// whose every value is a normal number, then maps affinely onto the
// requested interval. Raw values are built directly from mantissa bits so
// the arithmetic below 1 + 2^-k is exact.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "numstab/types.hpp"

namespace numstab {

/// One raw draw from [1, 1 + 2^-k): 1 + j * 2^-52 for uniform j.
inline double normalized_uniform_raw(std::mt19937_64& rng, int k = 3) {
    if (k < 1 || k > 52) throw std::domain_error("normalized_uniform_raw: k must be in [1, 52]");
    const std::uint64_t j = rng() >> (12 + k); // 52 - k mantissa bits
    return 1.0 + static_cast<double>(j) * 0x1p-52;
}

/// Affine image of a raw draw on [lo, hi).
inline double map_normalized(double raw, double lo, double hi, int k = 3) {
    if (!(lo < hi)) throw std::domain_error("sample_normalized_uniform: need lo < hi");
    const double frac = (raw - 1.0) * std::ldexp(1.0, k); // exact, in [0, 1)
    double mapped = lo + frac * (hi - lo);
    if (mapped >= hi) mapped = std::nextafter(hi, lo); // rounding guard at the top end
    if (mapped < lo) mapped = lo;
    return mapped;
}

inline double sample_normalized_uniform(std::mt19937_64& rng, double lo, double hi, int k = 3) {
    if (!(lo < hi)) throw std::domain_error("sample_normalized_uniform: need lo < hi");
    return map_normalized(normalized_uniform_raw(rng, k), lo, hi, k);
}

} // namespace numstab
