#pragma once

// Log-determinant of an SPD matrix. Both paths share one Cholesky
// factorization; they differ only in whether the diagonal is reduced as a
// sum of logs or as a product of squares followed by a single log. The
// product underflows to zero long before the sum of logs loses anything.

#include <cmath>
#include <stdexcept>

#include "numstab/types.hpp"

namespace numstab {

/// Lower Cholesky factor G with A = G * G^T. Throws on asymmetry or on a
/// non-positive pivot (the matrix is not SPD to working precision).
inline RealMatrix cholesky_factor(const RealMatrix& a) {
    if (!a.square()) throw std::domain_error("cholesky: matrix must be square");
    const std::size_t n = a.rows;
    const double scale = max_abs(a);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::fabs(a.at(i, j) - a.at(j, i)) > 1e-12 * scale)
                throw std::domain_error("cholesky: matrix is not symmetric");

    Fp fp(a.precision);
    RealMatrix g(n, n, 0.0, a.precision);
    for (std::size_t j = 0; j < n; ++j) {
        double d = fp.round(a.at(j, j));
        for (std::size_t k = 0; k < j; ++k)
            d = fp.sub(d, fp.mul(g.at(j, k), g.at(j, k)));
        if (!(d > 0.0) || !std::isfinite(d))
            throw std::domain_error("cholesky: matrix is not positive definite");
        const double gjj = fp.sqrt(d);
        g.at(j, j) = gjj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = fp.round(a.at(i, j));
            for (std::size_t k = 0; k < j; ++k)
                s = fp.sub(s, fp.mul(g.at(i, k), g.at(j, k)));
            g.at(i, j) = fp.div(s, gjj);
        }
    }
    return g;
}

inline double log_det_spd(const RealMatrix& m, StabilityMode mode) {
    const RealMatrix g = cholesky_factor(m);
    Fp fp(m.precision);
    if (mode == StabilityMode::stable) {
        double acc = 0.0;
        for (std::size_t i = 0; i < g.rows; ++i)
            acc = fp.add(acc, fp.log(g.at(i, i)));
        return fp.mul(2.0, acc);
    }
    double det = 1.0;
    for (std::size_t i = 0; i < g.rows; ++i)
        det = fp.mul(det, fp.mul(g.at(i, i), g.at(i, i)));
    return fp.log(det);
}

} // namespace numstab
