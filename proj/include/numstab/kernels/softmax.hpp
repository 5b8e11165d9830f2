#pragma once

// Softmax, log-softmax and log-sum-exp, each in the textbook form and in the
// max-shifted form. The unstable softmax is the classic two-loop
// exp-then-normalize: exp(x[i]) overflows for inputs near +100 at binary32
// and the sum underflows to zero for large negative inputs, so the quotient
// degenerates to inf/inf or 0/0.

#include <algorithm>
#include <stdexcept>

#include "numstab/types.hpp"

namespace numstab {

inline RealVector softmax(const RealVector& x, StabilityMode mode) {
    if (x.empty()) throw std::domain_error("softmax: empty input");
    Fp fp(x.precision);
    RealVector out(std::vector<double>(x.size(), 0.0), x.precision);
    double sum = 0.0;
    if (mode == StabilityMode::unstable) {
        for (std::size_t i = 0; i < x.size(); ++i)
            sum = fp.add(sum, fp.exp(fp.round(x[i])));
        for (std::size_t j = 0; j < x.size(); ++j)
            out[j] = fp.div(fp.exp(fp.round(x[j])), sum);
    } else {
        const double mx = *std::max_element(x.elements.begin(), x.elements.end());
        for (std::size_t i = 0; i < x.size(); ++i)
            sum = fp.add(sum, fp.exp(fp.sub(fp.round(x[i]), fp.round(mx))));
        for (std::size_t j = 0; j < x.size(); ++j)
            out[j] = fp.div(fp.exp(fp.sub(fp.round(x[j]), fp.round(mx))), sum);
    }
    return out;
}

/// log(sum(exp(x))) evaluated as max(x) + log(sum(exp(x - max(x)))).
/// The shift makes the largest exponent exactly zero, so the sum is >= 1 and
/// neither overflows nor collapses to zero for any finite input.
inline double log_sum_exp(const RealVector& x) {
    if (x.empty()) throw std::domain_error("log_sum_exp: empty input");
    Fp fp(x.precision);
    const double mx = *std::max_element(x.elements.begin(), x.elements.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        sum = fp.add(sum, fp.exp(fp.sub(fp.round(x[i]), fp.round(mx))));
    return fp.add(fp.round(mx), fp.log(sum));
}

inline RealVector log_softmax(const RealVector& x, StabilityMode mode) {
    if (x.empty()) throw std::domain_error("log_softmax: empty input");
    Fp fp(x.precision);
    RealVector out(std::vector<double>(x.size(), 0.0), x.precision);
    if (mode == StabilityMode::unstable) {
        const RealVector p = softmax(x, StabilityMode::unstable);
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = fp.log(p[i]);
    } else {
        const double mx = *std::max_element(x.elements.begin(), x.elements.end());
        double sum = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            sum = fp.add(sum, fp.exp(fp.sub(fp.round(x[i]), fp.round(mx))));
        const double log_sum = fp.log(sum);
        for (std::size_t i = 0; i < x.size(); ++i)
            out[i] = fp.sub(fp.sub(fp.round(x[i]), fp.round(mx)), log_sum);
    }
    return out;
}

} // namespace numstab
