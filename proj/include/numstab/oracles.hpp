#pragma once

// Independent high-accuracy references the test suites measure the kernels
// against. Nothing here shares code with the kernel implementations.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>

#include "numstab/types.hpp"

namespace numstab {

/// Neumaier-compensated binary64 summation; the running error term also
/// captures the case where the incoming term dwarfs the accumulated sum.
inline double compensated_sum(const RealVector& xs) {
    double sum = 0.0;
    double comp = 0.0;
    for (double x : xs.elements) {
        const double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

struct GradCheckConfig {
    double relative_step = 1e-6; // h scales with each entry's magnitude
    // Floor for entries near zero; below this the difference quotient is
    // dominated by roundoff in the loss rather than by the step.
    double min_step = 1e-5;
};

using MatrixLoss = std::function<double(const RealMatrix&)>;

/// Central-difference gradient of a scalar loss, entrywise:
/// (loss(A + h*Eij) - loss(A - h*Eij)) / (2h).
inline RealMatrix finite_diff_grad(const MatrixLoss& loss, const RealMatrix& a,
                                   const GradCheckConfig& cfg = {}) {
    if (!(cfg.relative_step > 0.0))
        throw std::domain_error("finite_diff_grad: step must be positive");
    RealMatrix grad(a.rows, a.cols, 0.0, a.precision);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) {
            const double h =
                std::max(cfg.min_step, cfg.relative_step * std::fabs(a.at(i, j)));
            RealMatrix plus = a;
            RealMatrix minus = a;
            plus.at(i, j) += h;
            minus.at(i, j) -= h;
            const double fp = loss(plus);
            const double fm = loss(minus);
            if (!std::isfinite(fp) || !std::isfinite(fm))
                throw std::domain_error("finite_diff_grad: loss is not finite near A");
            grad.at(i, j) = (fp - fm) / (2.0 * h);
        }
    return grad;
}

/// Exhaustive scan over the implicit array; authoritative for small lengths.
inline SearchResult linear_search(std::uint64_t length,
                                  const std::function<int(std::uint64_t)>& probe) {
    for (std::uint64_t i = 0; i < length; ++i) {
        const int cmp = probe(i);
        if (cmp == 0) return SearchResult{SearchStatus::found, i};
        if (cmp > 0) return SearchResult{SearchStatus::not_found, i};
    }
    return SearchResult{SearchStatus::not_found, length};
}

} // namespace numstab
