#pragma once

// Cosine similarity in two arithmetically distinct forms. The stable path
// clamps the squared-norm product and divides by its square root; the
// unstable path multiplies by a reciprocal square root, whose rounding can
// push the result above 1.0 for near-parallel vectors.

#include <algorithm>
#include <stdexcept>

#include "numstab/types.hpp"

namespace numstab {

inline double cosine_similarity(const RealVector& u, const RealVector& v,
                                double epsilon, StabilityMode mode) {
    if (u.size() != v.size() || u.empty())
        throw std::domain_error("cosine_similarity: vectors must be non-empty and equal length");
    if (!(epsilon > 0.0)) throw std::domain_error("cosine_similarity: epsilon must be positive");
    Fp fp(u.precision);
    double x = 0.0, y = 0.0, z = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double ui = fp.round(u[i]);
        const double vi = fp.round(v[i]);
        x = fp.add(x, fp.mul(ui, vi));
        y = fp.add(y, fp.mul(ui, ui));
        z = fp.add(z, fp.mul(vi, vi));
    }
    if (mode == StabilityMode::stable) {
        double n = fp.mul(y, z);
        n = std::max(n, fp.mul(fp.round(epsilon), fp.round(epsilon)));
        n = fp.sqrt(n);
        return fp.div(x, n);
    }
    double n = fp.div(1.0, fp.sqrt(fp.mul(y, z)));
    n = std::min(n, fp.div(1.0, fp.round(epsilon)));
    return fp.mul(x, n);
}

} // namespace numstab
