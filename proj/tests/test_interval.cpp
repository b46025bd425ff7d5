#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "grushin/interval.hpp"

using grushin::Interval;

TEST(Interval, ExactOperationsStayPoints) {
    const Interval one(1.0);
    EXPECT_TRUE((one * one - one).is_point());
    EXPECT_EQ((one * one - one).lo(), 0.0);
    EXPECT_TRUE((Interval(3.0) / Interval(4.0)).is_point());
    EXPECT_TRUE(sqrt(Interval(16.0)).is_point());
}

TEST(Interval, InexactOperationsBracketTheTruth) {
    const Interval third = Interval(1.0) / Interval(3.0);
    EXPECT_FALSE(third.is_point());
    EXPECT_LT(third.lo(), third.hi());
    // 3 * [1/3] must contain 1
    EXPECT_TRUE((third * Interval(3.0)).contains(1.0));
    const Interval r2 = sqrt(Interval(2.0));
    EXPECT_TRUE((r2 * r2).contains(2.0));
    const Interval tenth = Interval(0.1) + Interval(0.2);
    // 0.1 + 0.2 in binary is not exactly representable
    EXPECT_LT(tenth.lo(), tenth.hi());
}

TEST(Interval, DivisionByZeroStraddleThrows) {
    EXPECT_THROW(Interval(1.0) / Interval(-1.0, 1.0), std::domain_error);
    EXPECT_THROW(Interval(2.0, 1.0), std::invalid_argument);
}

TEST(Interval, QuarterTrigIsExactAtZeroAndCoversHalfPi) {
    const auto s0 = grushin::sin_quarter(Interval(0.0));
    EXPECT_EQ(s0.lo(), 0.0);
    EXPECT_EQ(s0.hi(), 0.0);
    const auto c0 = grushin::cos_quarter(Interval(0.0));
    EXPECT_EQ(c0.lo(), 1.0);
    EXPECT_EQ(c0.hi(), 1.0);
    const auto ctop = grushin::cos_quarter(Interval(grushin::kHalfPi));
    EXPECT_EQ(ctop.lo(), 0.0);
    EXPECT_EQ(grushin::sin_quarter(Interval(grushin::kHalfPi)).hi(), 1.0);
    EXPECT_THROW(grushin::sin_quarter(Interval(-0.1, 0.2)), std::domain_error);
}

// Random arithmetic: a long double evaluation of the same expression at a
// point of the box must land inside the enclosure.
TEST(Interval, RandomExpressionsContainLongDoubleValues) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::uniform_real_distribution<double> w(0.0, 0.5);
    std::uniform_real_distribution<double> t(0.0, 1.0);
    for (int i = 0; i < 20000; ++i) {
        const double a0 = u(rng), a1 = a0 + w(rng);
        const double b0 = u(rng) + 4.0, b1 = b0 + w(rng);
        const Interval a(a0, a1), b(b0, b1);
        const double pa = a0 + t(rng) * (a1 - a0);
        const double pb = b0 + t(rng) * (b1 - b0);
        const long double la = pa, lb = pb;
        const Interval e = (a * b - a) / b + sqrt(b) * sqr(a);
        const long double v = (la * lb - la) / lb + std::sqrt(lb) * la * la;
        ASSERT_TRUE(e.lo() <= v && v <= e.hi()) << i;
    }
}
