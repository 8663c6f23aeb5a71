#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "townnet/sampling.hpp"

using namespace townnet;

TEST(SkewNormal, ZeroShapeIsSymmetric) {
    RngStream rng(11, 0);
    const int n = 1'000'000;
    std::vector<double> xs(n);
    double mean = 0.0;
    for (auto& x : xs) {
        x = sample_skew_normal(rng, 0.0, 2.0, 3.0);
        mean += x;
    }
    mean /= n;
    double m2 = 0.0, m3 = 0.0;
    for (double x : xs) {
        const double d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    EXPECT_LT(std::abs(m3 / std::pow(m2, 1.5)), 0.01);
    EXPECT_NEAR(mean, 2.0, 0.01);
    EXPECT_NEAR(std::sqrt(m2), 3.0, 0.01);
}

TEST(SkewNormal, ZeroScaleIsConstant) {
    RngStream rng(3, 1);
    for (int k = 0; k < 1000; ++k) EXPECT_EQ(sample_skew_normal(rng, 3.96, 1.22, 0.0), 1.22);
}

TEST(SkewNormal, HouseholdMeanMatchesMomentFormula) {
    const double alpha = 3.96, xi = 1.22, omega = 1.75;
    const double delta = alpha / std::sqrt(1 + alpha * alpha);
    const double analytic = xi + omega * delta * std::sqrt(2 / std::numbers::pi);
    EXPECT_NEAR(analytic, 2.574, 0.001);
    EXPECT_DOUBLE_EQ(skew_normal_mean(alpha, xi, omega), analytic);

    RngStream rng(5, 0);
    double sum = 0.0;
    const int n = 1'000'000;
    for (int k = 0; k < n; ++k) sum += sample_skew_normal(rng, alpha, xi, omega);
    EXPECT_NEAR(sum / n, analytic, 0.01);
}

TEST(SampleCount, ZeroSigmaRounds) {
    RngStream rng(1, 0);
    for (int k = 0; k < 100; ++k) EXPECT_EQ(sample_count(rng, 7.6, 0.0, 1), 8);
}

TEST(SampleCount, ClampsToFloor) {
    RngStream rng(1, 0);
    for (int k = 0; k < 100; ++k) EXPECT_EQ(sample_count(rng, -5.0, 0.0, 1), 1);
}

TEST(SampleCount, HalfRoundsAwayFromZero) {
    RngStream rng(1, 0);
    EXPECT_EQ(sample_count(rng, 2.5, 0.0, 0), 3);
    EXPECT_EQ(sample_count(rng, -2.5, 0.0, -10), -3);
}

TEST(SampleCount, MeanMatchesIndependentOracle) {
    RngStream rng(17, 0);
    const int n = 1'000'000;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) sum += static_cast<double>(sample_count(rng, 12.3, 5.0, 0));
    const double expected = oracle::clamped_rounded_normal_mean(12.3, 5.0, 0, 1'000'000, 99);
    EXPECT_NEAR(sum / n, expected, 0.05);
}

TEST(Displace, Examples) {
    EXPECT_EQ(displace(5, 0.0, 10), 5u);
    EXPECT_EQ(displace(9, 2.4, 10), 1u);
    EXPECT_EQ(displace(0, -0.5, 10), 9u);
    EXPECT_EQ(displace(0, 0.5, 10), 1u);
    EXPECT_EQ(displace(3, -13.0, 10), 0u);
}

TEST(Displace, AlwaysInRange) {
    RngStream rng(2, 0);
    for (std::uint64_t n : {1ull, 2ull, 7ull, 26400ull}) {
        for (int k = 0; k < 20000; ++k) {
            const double d = rng.normal(0.0, 1e7) * (k % 3 == 0 ? 1e6 : 1.0);
            const auto i = static_cast<Vertex>(rng.uniform_index(n));
            EXPECT_LT(displace(i, d, n), n);
        }
    }
    EXPECT_LT(displace(0, 1e300, 10), 10u);
    EXPECT_LT(displace(0, -1e300, 10), 10u);
}

TEST(Displace, RejectsBadInput) {
    EXPECT_THROW(displace(0, 1.0, 0), std::invalid_argument);
    EXPECT_THROW(displace(0, std::nan(""), 10), std::invalid_argument);
}

TEST(Displace, SymmetricAboutOrigin) {
    // Landing offsets (j - i) mod n and (i - j) mod n should be equally likely.
    const std::uint64_t n = 11;
    const Vertex i = 4;
    std::vector<double> counts(n, 0.0);
    RngStream rng(8, 0);
    const int samples = 1'000'000;
    for (int k = 0; k < samples; ++k) ++counts[(displace(i, rng.normal(0.0, 3.0), n) + n - i) % n];
    double chi2 = 0.0;
    int dof = 0;
    for (std::uint64_t off = 1; off <= n / 2; ++off) {
        const double a = counts[off], b = counts[n - off];
        chi2 += (a - b) * (a - b) / (a + b);
        ++dof;
    }
    // 99.9% quantile of chi-square with 5 degrees of freedom.
    ASSERT_EQ(dof, 5);
    EXPECT_LT(chi2, 20.52);
}

TEST(RngStream, SameSeedSameSequence) {
    RngStream a(123, 4), b(123, 4);
    for (int k = 0; k < 10000; ++k) {
        ASSERT_EQ(a.next_u64(), b.next_u64());
        ASSERT_EQ(a.uniform(), b.uniform());
        ASSERT_EQ(a.normal(), b.normal());
        ASSERT_EQ(a.exponential(0.7), b.exponential(0.7));
        ASSERT_EQ(a.uniform_index(97), b.uniform_index(97));
        ASSERT_EQ(sample_skew_normal(a, 3.96, 1.22, 1.75), sample_skew_normal(b, 3.96, 1.22, 1.75));
        ASSERT_EQ(sample_count(a, 12.3, 5.0, 0), sample_count(b, 12.3, 5.0, 0));
    }
}

TEST(RngStream, IndicesGiveDifferentStreams) {
    RngStream a(123, 0), b(123, 1), c(124, 0);
    const auto x = a.next_u64();
    EXPECT_NE(x, b.next_u64());
    EXPECT_NE(x, c.next_u64());
}

TEST(RngStream, UniformIndexCoversRange) {
    RngStream rng(9, 0);
    std::vector<int> seen(5, 0);
    for (int k = 0; k < 5000; ++k) ++seen[rng.uniform_index(5)];
    for (int c : seen) EXPECT_GT(c, 850);
    EXPECT_THROW(rng.uniform_index(0), std::invalid_argument);
}

TEST(RngStream, ExponentialMean) {
    RngStream rng(10, 0);
    double sum = 0.0;
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
        const double x = rng.exponential(2.0);
        ASSERT_GT(x, 0.0);
        sum += x;
    }
    EXPECT_NEAR(sum / n, 0.5, 0.005);
}

TEST(DeriveSeed, DistinctKeysDistinctSeeds) {
    EXPECT_NE(derive_seed(1, 2, 3), derive_seed(1, 3, 2));
    EXPECT_NE(derive_seed(1, 2), derive_seed(2, 2));
    EXPECT_EQ(derive_seed(7, 8, 9), derive_seed(7, 8, 9));
}
