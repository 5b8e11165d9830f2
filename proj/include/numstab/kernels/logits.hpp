#pragma once

// Log-probabilities parametrized by logits. The stable paths stay in the
// log domain via the two-branch softplus; the unstable paths materialize the
// probability first, which saturates to 0 or 1 and drags the log with it.

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "numstab/precision.hpp"
#include "numstab/types.hpp"

namespace numstab {

/// Overflow-free softplus(t) = log(1 + e^t), split at t = 0.
inline double softplus(double t, const Fp& fp) {
    t = fp.round(t);
    if (t <= 0.0) return fp.log1p(fp.exp(t));
    return fp.add(t, fp.log1p(fp.exp(fp.sub(0.0, t))));
}

inline double softplus(double t, Precision p = Precision::binary64) {
    return softplus(t, Fp(p));
}

inline double bernoulli_log_prob(const BernoulliParams& params, Precision precision,
                                 StabilityMode mode) {
    if (params.outcome != 0 && params.outcome != 1)
        throw std::domain_error("bernoulli_log_prob: outcome must be 0 or 1");
    Fp fp(precision);
    const double l = fp.round(params.logits);
    if (mode == StabilityMode::stable) {
        return params.outcome == 1 ? fp.neg(softplus(fp.neg(l), fp))
                                   : fp.neg(softplus(l, fp));
    }
    // Probability-space round trip: p = e^l / (1 + e^l), log taken after the
    // fact. e^l overflows the tagged precision well before l does.
    const double log_denom = fp.log(fp.add(1.0, fp.exp(l)));
    return params.outcome == 1 ? fp.sub(l, log_denom) : fp.neg(log_denom);
}

inline double bce_with_logits(double x, double z, Precision precision, StabilityMode mode) {
    if (!(z >= 0.0 && z <= 1.0))
        throw std::domain_error("bce_with_logits: target must be in [0, 1]");
    Fp fp(precision);
    x = fp.round(x);
    z = fp.round(z);
    if (mode == StabilityMode::stable) {
        // max(x, 0) - x*z + log1p(e^{-|x|})
        const double mx = std::max(x, 0.0);
        return fp.add(fp.sub(mx, fp.mul(x, z)), fp.log1p(fp.exp(fp.neg(std::fabs(x)))));
    }
    const double p = fp.div(1.0, fp.add(1.0, fp.exp(fp.neg(x))));
    // Zero-weight terms are skipped (xlogy convention), otherwise a hard
    // label meets 0 * log(0) and the loss is NaN instead of the saturated
    // value the probability-space form actually produces.
    double acc = 0.0;
    if (z != 0.0) acc = fp.add(acc, fp.mul(z, fp.log(p)));
    if (z != 1.0) acc = fp.add(acc, fp.mul(fp.sub(1.0, z), fp.log(fp.sub(1.0, p))));
    return fp.neg(acc);
}

} // namespace numstab
