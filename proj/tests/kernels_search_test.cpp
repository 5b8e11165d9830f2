#include <gtest/gtest.h>

#include <algorithm>
#include <cstdint>
#include <random>

#include "numstab/kernels/search.hpp"
#include "numstab/oracles.hpp"

using namespace numstab;

namespace {

Probe probe_for(const std::vector<double>& sorted, double target) {
    return [&sorted, target](std::uint64_t i) {
        if (sorted[i] < target) return -1;
        if (sorted[i] > target) return 1;
        return 0;
    };
}

} // namespace

TEST(Bucketize, ReferenceExample) {
    const RealVector boundaries{0, 10, 100};
    const RealVector values{-5, 10000, 150, 10, 5, 100};
    const std::vector<std::size_t> want{0, 3, 3, 2, 1, 3};
    EXPECT_EQ(bucketize(values, boundaries), want);
}

TEST(Bucketize, EmptyBoundariesMapEverythingToZero) {
    const auto out = bucketize(RealVector{1, 2, 3}, RealVector{});
    EXPECT_EQ(out, (std::vector<std::size_t>{0, 0, 0}));
}

TEST(Bucketize, UnsortedBoundariesAreADomainError) {
    EXPECT_THROW(bucketize(RealVector{1}, RealVector{3, 1, 2}), std::domain_error);
}

TEST(Bucketize, MatchesLinearScanOnRandomInstances) {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> vi(-40, 40);
    std::uniform_int_distribution<std::size_t> nb(0, 32);
    for (int t = 0; t < 300; ++t) {
        std::vector<double> bounds(nb(rng));
        for (double& b : bounds) b = vi(rng); // duplicates are expected
        std::sort(bounds.begin(), bounds.end());
        std::vector<double> values(16);
        for (double& v : values) v = vi(rng);
        const auto got = bucketize(RealVector{values}, RealVector{bounds});
        for (std::size_t i = 0; i < values.size(); ++i) {
            std::size_t count = 0;
            for (double b : bounds)
                if (b <= values[i]) ++count;
            ASSERT_EQ(got[i], count);
        }
    }
}

TEST(Bucketize, MonotoneInTheValue) {
    std::mt19937_64 rng(22);
    std::uniform_int_distribution<int> vi(-40, 40);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> bounds(8);
        for (double& b : bounds) b = vi(rng);
        std::sort(bounds.begin(), bounds.end());
        std::vector<double> values(12);
        for (double& v : values) v = vi(rng);
        std::sort(values.begin(), values.end());
        const auto out = bucketize(RealVector{values}, RealVector{bounds});
        EXPECT_TRUE(std::is_sorted(out.begin(), out.end()));
    }
}

TEST(BoundedBinarySearch, SingleElementFoundInBothModes) {
    const std::vector<double> a{7.0};
    for (StabilityMode mode : {StabilityMode::stable, StabilityMode::unstable}) {
        const auto r = bounded_binary_search(1, probe_for(a, 7.0), IndexWidth::i32, mode);
        EXPECT_EQ(r.status, SearchStatus::found);
        EXPECT_EQ(r.index, 0u);
    }
}

TEST(BoundedBinarySearch, InsertionPointWhenMissing) {
    const std::vector<double> a{1, 3, 5, 7};
    const auto r =
        bounded_binary_search(a.size(), probe_for(a, 4.0), IndexWidth::i64, StabilityMode::stable);
    EXPECT_EQ(r.status, SearchStatus::not_found);
    EXPECT_EQ(r.index, 2u);
}

TEST(BoundedBinarySearch, LengthMustFitTheIndexWidth) {
    const Probe probe = [](std::uint64_t) { return 0; };
    EXPECT_THROW(bounded_binary_search(128, probe, IndexWidth::i8, StabilityMode::stable),
                 std::domain_error);
    EXPECT_NO_THROW(bounded_binary_search(127, probe, IndexWidth::i8, StabilityMode::stable));
}

TEST(BoundedBinarySearch, BillionScaleImplicitArray) {
    // a[i] = i + 1 over 2^31 - 1 elements, probing for the last value.
    const std::uint64_t length = 2147483647ull;
    const std::uint64_t target = 2147483647ull;
    const Probe probe = [target](std::uint64_t i) {
        const std::uint64_t v = i + 1;
        return v < target ? -1 : (v > target ? 1 : 0);
    };
    const auto stable =
        bounded_binary_search(length, probe, IndexWidth::i32, StabilityMode::stable);
    EXPECT_EQ(stable.status, SearchStatus::found);
    EXPECT_EQ(stable.index, 2147483646ull);

    const auto unstable =
        bounded_binary_search(length, probe, IndexWidth::i32, StabilityMode::unstable);
    EXPECT_EQ(unstable.status, SearchStatus::index_overflow);

    // At 64-bit width the additive midpoint has room and both modes agree.
    const auto wide =
        bounded_binary_search(length, probe, IndexWidth::i64, StabilityMode::unstable);
    EXPECT_EQ(wide.status, SearchStatus::found);
    EXPECT_EQ(wide.index, 2147483646ull);
}

TEST(BoundedBinarySearch, ExhaustiveSmallInstancesMatchLinearScan) {
    for (std::uint64_t n = 0; n <= 16; ++n) {
        std::vector<double> a(n);
        for (std::uint64_t i = 0; i < n; ++i) a[i] = static_cast<double>(2 * i);
        for (std::int64_t target = -1; target <= static_cast<std::int64_t>(2 * n); ++target) {
            const Probe probe = probe_for(a, static_cast<double>(target));
            const SearchResult want = linear_search(n, probe);
            for (IndexWidth w :
                 {IndexWidth::i8, IndexWidth::i16, IndexWidth::i32, IndexWidth::i64}) {
                EXPECT_EQ(bounded_binary_search(n, probe, w, StabilityMode::stable), want);
            }
        }
    }
}

TEST(Midpoint, WrappedSignedArithmetic) {
    EXPECT_EQ(wrap_signed(100, 8), 100);
    EXPECT_EQ(wrap_signed(200, 8), 200 - 256);
    EXPECT_EQ(wrap_signed((std::int64_t{1} << 31) + 5, 32),
              5 - (std::int64_t{1} << 31));
    EXPECT_EQ(wrap_signed(-1, 16), -1);
}

TEST(Midpoint, OffsetFormEqualsAdditiveFormIn64Bit) {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<std::int64_t> d(0, (std::int64_t{1} << 31) - 1);
    for (int t = 0; t < 10000; ++t) {
        std::int64_t l = d(rng), r = d(rng);
        if (l > r) std::swap(l, r);
        EXPECT_EQ(l + (r - l) / 2, (l + r) / 2);
    }
}
