#pragma once

// Mean/variance in three algorithmic variants and order-controlled summation.
// The naive variance E[x^2] - E[x]^2 cancels catastrophically when the mean
// dwarfs the spread; Welford's single-pass update and the shifted two-pass
// form do not.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "numstab/types.hpp"

namespace numstab {

enum class VarianceAlgo { naive, two_pass, welford };

struct MeanVariance {
    double mean = 0.0;
    double variance = 0.0; // population convention (divide by n)
};

inline MeanVariance variance(const RealVector& xs, VarianceAlgo algo) {
    if (xs.empty()) throw std::domain_error("variance: empty input");
    Fp fp(xs.precision);
    const double n = static_cast<double>(xs.size());

    switch (algo) {
        case VarianceAlgo::naive: {
            double sum = 0.0, sum_sq = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const double x = fp.round(xs[i]);
                sum = fp.add(sum, x);
                sum_sq = fp.add(sum_sq, fp.mul(x, x));
            }
            const double mean = fp.div(sum, n);
            return {mean, fp.sub(fp.div(sum_sq, n), fp.mul(mean, mean))};
        }
        case VarianceAlgo::two_pass: {
            double sum = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) sum = fp.add(sum, fp.round(xs[i]));
            const double mean = fp.div(sum, n);
            double acc = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const double d = fp.sub(fp.round(xs[i]), mean);
                acc = fp.add(acc, fp.mul(d, d));
            }
            return {mean, fp.div(acc, n)};
        }
        case VarianceAlgo::welford: {
            double mean = 0.0, m2 = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const double x = fp.round(xs[i]);
                const double count = static_cast<double>(i + 1);
                const double delta = fp.sub(x, mean);
                mean = fp.add(mean, fp.div(delta, count));
                const double delta2 = fp.sub(x, mean);
                m2 = fp.add(m2, fp.mul(delta, delta2));
            }
            return {mean, fp.div(m2, n)};
        }
    }
    throw std::domain_error("variance: unknown algorithm");
}

enum class SumPolicy { given_order, ascending_magnitude };

/// Left-fold accumulation, optionally after sorting by ascending |x| so the
/// small terms are absorbed before the running sum grows.
inline double ordered_sum(const RealVector& xs, SumPolicy policy) {
    Fp fp(xs.precision);
    std::vector<double> terms = xs.elements;
    if (policy == SumPolicy::ascending_magnitude) {
        std::stable_sort(terms.begin(), terms.end(),
                         [](double a, double b) { return std::fabs(a) < std::fabs(b); });
    }
    double sum = 0.0;
    for (double t : terms) sum = fp.add(sum, fp.round(t));
    return sum;
}

} // namespace numstab
