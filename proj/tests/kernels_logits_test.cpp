#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "numstab/kernels/logits.hpp"

using namespace numstab;

TEST(Softplus, TwoBranchFormIsFiniteEverywhere) {
    EXPECT_EQ(softplus(0.0), std::log(2.0));
    EXPECT_NEAR(softplus(-100.0), std::exp(-100.0), 1e-56);
    EXPECT_EQ(softplus(1e6), 1e6);
    EXPECT_TRUE(std::isfinite(softplus(750.0)));
}

TEST(BernoulliLogProb, FairCoinInBothModes) {
    for (int outcome : {0, 1}) {
        const BernoulliParams p{0.0, outcome};
        EXPECT_EQ(bernoulli_log_prob(p, Precision::binary64, StabilityMode::stable),
                  -std::log(2.0));
        EXPECT_EQ(bernoulli_log_prob(p, Precision::binary64, StabilityMode::unstable),
                  -std::log(2.0));
    }
}

TEST(BernoulliLogProb, LargeLogitsSeparateTheRoutes) {
    const BernoulliParams p{90.5229, 1};
    const double unstable = bernoulli_log_prob(p, Precision::binary32, StabilityMode::unstable);
    EXPECT_TRUE(std::isinf(unstable));
    EXPECT_LT(unstable, 0.0);

    const double stable = bernoulli_log_prob(p, Precision::binary32, StabilityMode::stable);
    EXPECT_GE(stable, -1e-30);
    EXPECT_LE(stable, 0.0);
}

TEST(BernoulliLogProb, ModesAgreeAtModerateLogits) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> ld(-20.0, 20.0);
    for (int t = 0; t < 500; ++t) {
        const BernoulliParams p{ld(rng), t % 2};
        const double a = bernoulli_log_prob(p, Precision::binary64, StabilityMode::stable);
        const double b = bernoulli_log_prob(p, Precision::binary64, StabilityMode::unstable);
        EXPECT_NEAR(a, b, 1e-9);
    }
}

TEST(BernoulliLogProb, StableIsFiniteAndNonPositiveOverHugeLogits) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> ld(-1e6, 1e6);
    for (int t = 0; t < 500; ++t) {
        const BernoulliParams p{ld(rng), t % 2};
        const double v = bernoulli_log_prob(p, Precision::binary64, StabilityMode::stable);
        EXPECT_TRUE(std::isfinite(v));
        EXPECT_LE(v, 0.0);
    }
}

TEST(BernoulliLogProb, OutcomeMustBeBinary) {
    EXPECT_THROW(
        bernoulli_log_prob(BernoulliParams{0.0, 2}, Precision::binary64, StabilityMode::stable),
        std::domain_error);
}

TEST(BceWithLogits, BalancedPointMatchesInBothModes) {
    EXPECT_EQ(bce_with_logits(0.0, 0.5, Precision::binary64, StabilityMode::stable),
              std::log(2.0));
    EXPECT_EQ(bce_with_logits(0.0, 0.5, Precision::binary64, StabilityMode::unstable),
              std::log(2.0));
}

TEST(BceWithLogits, PositiveSaturationLosesTheTinyLoss) {
    const double stable = bce_with_logits(100.0, 1.0, Precision::binary64, StabilityMode::stable);
    EXPECT_NEAR(stable, std::log1p(std::exp(-100.0)), 1e-56);
    EXPECT_GT(stable, 0.0);
    // sigmoid(100) rounds to exactly 1, so the two-layer route reports zero loss.
    EXPECT_EQ(bce_with_logits(100.0, 1.0, Precision::binary64, StabilityMode::unstable), 0.0);
}

TEST(BceWithLogits, NegativeSaturationDivergesAtBinary32) {
    // At binary32 exp(100) overflows inside the sigmoid, the probability
    // collapses to exactly zero and the log of it is -inf.
    const double unstable =
        bce_with_logits(-100.0, 1.0, Precision::binary32, StabilityMode::unstable);
    EXPECT_TRUE(std::isinf(unstable));
    EXPECT_GT(unstable, 0.0);

    const double stable = bce_with_logits(-100.0, 1.0, Precision::binary64, StabilityMode::stable);
    EXPECT_NEAR(stable, 100.0, 1e-12);
    EXPECT_TRUE(std::isfinite(stable));
}

TEST(BceWithLogits, TargetOutsideUnitIntervalIsADomainError) {
    EXPECT_THROW(bce_with_logits(0.0, -0.1, Precision::binary64, StabilityMode::stable),
                 std::domain_error);
    EXPECT_THROW(bce_with_logits(0.0, 1.1, Precision::binary64, StabilityMode::stable),
                 std::domain_error);
}

TEST(BceWithLogits, StableIsFiniteAcrossTheWholeLogitRange) {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> xd(-1e4, 1e4);
    std::uniform_real_distribution<double> zd(0.0, 1.0);
    for (int t = 0; t < 500; ++t) {
        const double v =
            bce_with_logits(xd(rng), zd(rng), Precision::binary64, StabilityMode::stable);
        EXPECT_TRUE(std::isfinite(v));
    }
}

TEST(BceWithLogits, ModesAgreeAtModerateLogits) {
    // The 1 - p cancellation grows like eps * e^|x|, so the tight agreement
    // band ends near |x| = 15; by |x| = 20 the two-layer route has already
    // shed eight digits of the saturated side's loss term.
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> xd(-15.0, 15.0);
    std::uniform_real_distribution<double> wide(-20.0, 20.0);
    std::uniform_real_distribution<double> zd(0.0, 1.0);
    for (int t = 0; t < 500; ++t) {
        const double x = xd(rng);
        const double z = zd(rng);
        const double a = bce_with_logits(x, z, Precision::binary64, StabilityMode::stable);
        const double b = bce_with_logits(x, z, Precision::binary64, StabilityMode::unstable);
        EXPECT_NEAR(a, b, 1e-9);

        const double xw = wide(rng);
        const double aw = bce_with_logits(xw, z, Precision::binary64, StabilityMode::stable);
        const double bw = bce_with_logits(xw, z, Precision::binary64, StabilityMode::unstable);
        EXPECT_NEAR(aw, bw, 1e-7);
    }
}
