#pragma once

// Synchronized batch normalization, three evaluators per element:
//   reference:  (x - E[x]) / sqrt(Var + eps) * gamma + beta
//   stable:     (x - E[x] + sqrt(Var + eps) - 1) / sqrt(Var + eps)
//   unstable:   2^floor(log2((1 + (x - E[x]) - 1) / sqrt(Var + eps)))
// The stable form equals the reference at gamma = 1,
// beta = 1 - 1/sqrt(Var + eps). The unstable form is reproduced exactly as
// printed, including the "1 + (x - E[x]) - 1" numerator; any non-positive
// log2 argument yields a NaN which is propagated.

#include <cmath>
#include <limits>
#include <stdexcept>

#include "numstab/types.hpp"

namespace numstab {

inline RealVector sync_bn_reference(const RealVector& x, const SyncBNParams& params) {
    if (!(params.epsilon > 0.0)) throw std::domain_error("sync_bn: epsilon must be positive");
    Fp fp(x.precision);
    const double denom = fp.sqrt(fp.add(fp.round(params.variance), fp.round(params.epsilon)));
    RealVector out(std::vector<double>(x.size(), 0.0), x.precision);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double centered = fp.sub(fp.round(x[i]), fp.round(params.mean));
        out[i] = fp.add(fp.mul(fp.div(centered, denom), fp.round(params.gamma)),
                        fp.round(params.beta));
    }
    return out;
}

inline RealVector sync_bn_normalize(const RealVector& x, const SyncBNParams& params,
                                    StabilityMode mode) {
    if (!(params.epsilon > 0.0)) throw std::domain_error("sync_bn: epsilon must be positive");
    Fp fp(x.precision);
    const double denom = fp.sqrt(fp.add(fp.round(params.variance), fp.round(params.epsilon)));
    RealVector out(std::vector<double>(x.size(), 0.0), x.precision);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double centered = fp.sub(fp.round(x[i]), fp.round(params.mean));
        if (mode == StabilityMode::stable) {
            out[i] = fp.div(fp.sub(fp.add(centered, denom), 1.0), denom);
        } else {
            const double t = fp.div(fp.sub(fp.add(1.0, centered), 1.0), denom);
            out[i] = t > 0.0 ? fp.exp2(fp.floor(fp.log2(t)))
                             : std::numeric_limits<double>::quiet_NaN();
        }
    }
    return out;
}

} // namespace numstab
