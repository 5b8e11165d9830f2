#pragma once

// Remainder of a large integral float. The stable path round-trips through
// 64-bit integers; the unstable path emulates a - trunc(a/m)*m with every
// intermediate rounded to binary32, where the quotient has already lost the
// low digits.

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "numstab/precision.hpp"
#include "numstab/types.hpp"

namespace numstab {

inline double float_remainder(double a, std::int64_t m, StabilityMode mode) {
    if (m <= 0) throw std::domain_error("float_remainder: modulus must be positive");
    if (mode == StabilityMode::stable) {
        if (!(a >= 0.0) || std::trunc(a) != a || a > 9.2e18)
            throw std::domain_error(
                "float_remainder: value must be a non-negative integer representable in 64 bits");
        const std::int64_t ai = static_cast<std::int64_t>(a);
        return static_cast<double>(ai % m);
    }
    Fp fp(Precision::binary32);
    const double af = fp.round(a);
    const double mf = fp.round(static_cast<double>(m));
    const double q = fp.trunc(fp.div(af, mf));
    return fp.sub(af, fp.mul(q, mf));
}

} // namespace numstab
