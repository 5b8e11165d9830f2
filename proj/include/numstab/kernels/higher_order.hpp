#pragma once

// Gradient step shared by repeated differentiation of a division: the
// unstable form squares the denominator before dividing, so y*y overflows or
// underflows while both quotients of the stable form stay in range.

#include <stdexcept>

#include "numstab/precision.hpp"
#include "numstab/types.hpp"

namespace numstab {

inline double higher_order_div_grad(double grad, double x, double y, StabilityMode mode,
                                    Precision precision = Precision::binary64) {
    if (y == 0.0) throw std::domain_error("higher_order_div_grad: y must be nonzero");
    Fp fp(precision);
    grad = fp.round(grad);
    x = fp.round(x);
    y = fp.round(y);
    if (mode == StabilityMode::unstable)
        return fp.neg(fp.mul(grad, fp.div(x, fp.mul(y, y))));
    return fp.neg(fp.mul(grad, fp.div(fp.div(x, y), y)));
}

} // namespace numstab
