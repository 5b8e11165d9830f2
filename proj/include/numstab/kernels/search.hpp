#pragma once

// Bucketization and the bounded binary search underneath it. The search
// probes an implicit sorted array through a comparison callback, so the
// 2^31-element manifestation runs without allocating anything. The unstable
// midpoint (L+R)/2 is evaluated with wrapping signed arithmetic at a chosen
// index width; when the wrapped midpoint leaves [L, R] the search reports
// index_overflow instead of dereferencing out of range.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "numstab/types.hpp"

namespace numstab {

enum class IndexWidth : int { i8 = 8, i16 = 16, i32 = 32, i64 = 64 };

/// Reduces v modulo 2^bits and reinterprets the result as two's complement.
inline std::int64_t wrap_signed(std::int64_t v, int bits) {
    if (bits >= 64) return v;
    const std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
    std::uint64_t u = static_cast<std::uint64_t>(v) & mask;
    const std::uint64_t sign = std::uint64_t{1} << (bits - 1);
    if (u & sign) u |= ~mask;
    return static_cast<std::int64_t>(u);
}

/// probe(i) orders the implicit array element a[i] against the target:
/// negative for a[i] < target, zero for a match, positive for a[i] > target.
using Probe = std::function<int(std::uint64_t)>;

inline SearchResult bounded_binary_search(std::uint64_t length, const Probe& probe,
                                          IndexWidth width, StabilityMode mode) {
    const int bits = static_cast<int>(width);
    if (bits < 64 && length >= (std::uint64_t{1} << (bits - 1)))
        throw std::domain_error("bounded_binary_search: length does not fit the signed index width");

    std::int64_t lo = 0;
    std::int64_t hi = static_cast<std::int64_t>(length) - 1;
    while (lo <= hi) {
        std::int64_t mid;
        if (mode == StabilityMode::stable) {
            mid = lo + (hi - lo) / 2;
        } else {
            // The addition wraps in unsigned arithmetic, then reads as a
            // two's-complement value of the configured width.
            const auto sum = static_cast<std::int64_t>(
                static_cast<std::uint64_t>(lo) + static_cast<std::uint64_t>(hi));
            mid = wrap_signed(sum, bits) / 2;
            if (mid < lo || mid > hi)
                return SearchResult{SearchStatus::index_overflow, 0};
        }
        const int cmp = probe(static_cast<std::uint64_t>(mid));
        if (cmp == 0) return SearchResult{SearchStatus::found, static_cast<std::uint64_t>(mid)};
        if (cmp < 0)
            lo = mid + 1;
        else
            hi = mid - 1;
    }
    // lo is the insertion point.
    return SearchResult{SearchStatus::not_found, static_cast<std::uint64_t>(lo)};
}

/// Bucket index per value: the count of boundaries <= value, so ties at a
/// boundary land in the higher bucket. Boundaries must be non-decreasing.
inline std::vector<std::size_t> bucketize(const RealVector& values,
                                          const RealVector& boundaries) {
    for (std::size_t i = 1; i < boundaries.size(); ++i)
        if (boundaries[i - 1] > boundaries[i])
            throw std::domain_error("bucketize: boundaries must be sorted non-decreasing");

    std::vector<std::size_t> out(values.size(), 0);
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double v = values[k];
        // Stable upper bound: first boundary strictly greater than v.
        std::int64_t lo = 0;
        std::int64_t hi = static_cast<std::int64_t>(boundaries.size()) - 1;
        while (lo <= hi) {
            const std::int64_t mid = lo + (hi - lo) / 2;
            if (boundaries[static_cast<std::size_t>(mid)] <= v)
                lo = mid + 1;
            else
                hi = mid - 1;
        }
        out[k] = static_cast<std::size_t>(lo);
    }
    return out;
}

} // namespace numstab
