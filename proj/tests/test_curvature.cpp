#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "grushin/curvature.hpp"

namespace g = grushin;
using g::kHalfPi;

namespace {

// Ricci components assembled from jet-oracle derivatives only.
g::RicComponents jet_ricci(double r, const g::WarpParams& p) {
    const auto f = g::jet2_eval(g::Warp::f, r, p.lambda);
    const auto h = g::jet2_eval(g::Warp::h, r, p.lambda);
    const double m = p.m, n = p.n;
    const double fpp_f = f.d2 / f.value, hpp_h = h.d2 / h.value;
    const double cross = f.d1 * h.d1 / (f.value * h.value);
    return {-m * fpp_f - (n - 1) * hpp_h,
            -fpp_f + (m - 1) * (1 - f.d1 * f.d1) / (f.value * f.value) - (n - 1) * cross,
            -hpp_h + (n - 2) * (1 - h.d1 * h.d1) / (h.value * h.value) - m * cross};
}

double direct_term_I(double r, const g::WarpParams& p) {
    const double s2 = std::sin(r) * std::sin(r), c2 = std::cos(r) * std::cos(r);
    const double l2 = p.lambda * p.lambda, l4 = l2 * l2;
    const double A = l2 * s2 + c2, B = l2 * s2 + 1;
    return p.m * A * A * (l4 * s2 * s2 + l4 * s2 + 6 * l2 + 4) - 8.0 * (p.n - 1) * B * B * l4 * s2;
}

}  // namespace

TEST(RicHH, Examples) {
    EXPECT_DOUBLE_EQ(g::ric_hh(0.0, {1.0, 8, 2}), 21.0);
    EXPECT_NEAR(g::ric_hh(kHalfPi, {2.0, 8, 2}), 3.55, 1e-13);
    EXPECT_NEAR(g::ric_hh(kHalfPi, {1.0, 8, 2}), 7.0, 1e-13);
}

TEST(RicUU, Examples) {
    // 0.75 + 7 sqrt 2 + 0.75: the cross term keeps its value 0.75 at pi/2
    EXPECT_NEAR(g::ric_uu(kHalfPi, {1.0, 8, 2}), 1.5 + 7.0 * std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(g::ric_uu(kHalfPi, {1.0, 8, 2}), jet_ricci(kHalfPi - 1e-6, {1.0, 8, 2}).uu, 1e-5);
    // r = 0 is a removable singularity of the oracle; compare the series path
    // with the oracle just inside
    EXPECT_NEAR(g::ric_uu(0.0, {1.0, 8, 2}), jet_ricci(1e-4, {1.0, 8, 2}).uu, 1e-6);
    EXPECT_NEAR(g::ric_uu(0.0, {1.0, 8, 2}), 21.0, 1e-12);
    // 40-digit value at (pi/4, lambda = 10)
    const double uu = g::ric_uu(std::numbers::pi / 4, {10.0, 8, 2});
    EXPECT_NEAR(uu, 99.949141626765385, 1e-10);
    EXPECT_GE(uu, 1.0);
}

TEST(RicVV, Examples) {
    EXPECT_NEAR(g::ric_vv(kHalfPi, {1.0, 8, 2}), 7.0, 1e-13);
    EXPECT_NEAR(g::ric_vv(kHalfPi, {2.0, 8, 2}), 3.55, 1e-13);
    const double vv = g::ric_vv(0.0, {2.0, 8, 3});
    EXPECT_NEAR(vv, jet_ricci(1e-4, {2.0, 8, 3}).vv, 1e-4);
    EXPECT_GE(vv, 1.0);
    // 40-digit reference at (0.3, lambda 3, m 16, n 3)
    EXPECT_NEAR(g::ric_vv(0.3, {3.0, 16, 3}), 62.400494351938689, 1e-10);
}

TEST(TermI, Examples) {
    EXPECT_DOUBLE_EQ(g::term_I(0.0, {1.0, 8, 2}).value, 80.0);
    EXPECT_NEAR(g::term_I(kHalfPi, {1.0, 8, 2}).value, 64.0, 1e-12);
    EXPECT_NEAR(g::term_I(kHalfPi, {1.0, 1, 2}).value, -20.0, 1e-12);
}

TEST(TermI, HornerMatchesDirectExpansion) {
    for (double lambda : {1.0, 3.0, 20.0}) {
        for (int i = 0; i <= 200; ++i) {
            const double r = kHalfPi * i / 200.0;
            const g::WarpParams p{lambda, 16, 3};
            const double ref = direct_term_I(r, p);
            ASSERT_NEAR(g::term_I(r, p).value, ref, 1e-11 * std::max(1.0, std::fabs(ref)));
        }
    }
}

TEST(TermI, NonnegativeAtThreshold) {
    for (int n : {2, 3, 4}) {
        const int m = 8 * (n - 1);
        for (double lambda : {1.0, 2.0, 5.0, 10.0, 100.0}) {
            for (int i = 0; i <= 1000; ++i) {
                const double r = i == 1000 ? kHalfPi : kHalfPi * i / 1000.0;
                ASSERT_GE(g::term_I(r, {lambda, m, n}).value, 0.0) << n << " " << lambda << " " << r;
            }
        }
    }
}

TEST(TermI, RangeEstimatesBoundIFromBelow) {
    for (int n : {2, 3, 4}) {
        const g::WarpParams base{1.0, 8 * (n - 1), n};
        for (double lambda : {1.0, 2.0, 5.0, 10.0}) {
            g::WarpParams p = base;
            p.lambda = lambda;
            for (int i = 0; i <= 400; ++i) {
                const double r = kHalfPi * i / 400.0;
                const double I = g::term_I(r, p).value;
                const double tol = 1e-9 * std::max(1.0, std::fabs(I));
                if (r >= std::numbers::pi / 4) {
                    const double est = g::term_I_upper_half_estimate(r, p);
                    ASSERT_GE(I - est, -tol);
                    ASSERT_GE(est, -tol);
                }
                if (r <= std::numbers::pi / 4) {
                    const double est = g::term_I_lower_half_estimate(r, p);
                    ASSERT_GE(I - est, -tol);
                    ASSERT_GE(est, -tol);
                }
            }
        }
    }
}

TEST(Curvature, AssemblyMatchesJetOracle) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> rr(0.01, kHalfPi - 0.01);
    std::uniform_real_distribution<double> ll(1.0, 100.0);
    for (int i = 0; i < 200; ++i) {
        const double r = rr(rng);
        const g::WarpParams p{ll(rng), 8, 3};
        const auto a = g::ricci(r, p);
        const auto o = jet_ricci(r, p);
        const auto close = [](double x, double y) { return std::fabs(x - y) <= 1e-6 * std::max(1.0, std::fabs(y)); };
        ASSERT_TRUE(close(a.hh, o.hh)) << r << " " << p.lambda;
        ASSERT_TRUE(close(a.uu, o.uu)) << r << " " << p.lambda;
        ASSERT_TRUE(close(a.vv, o.vv)) << r << " " << p.lambda;
    }
}

// ric_hh minus the version with -h''/h replaced by its claimed lower bound is
// (n-1) times the residual of that bound; the residual changes sign.
TEST(Curvature, HHChainResidualIdentity) {
    int negative = 0, positive = 0;
    for (double lambda : {1.0, 2.0, 10.0}) {
        const g::WarpParams p{lambda, 8, 3};
        for (int i = 0; i <= 400; ++i) {
            const double r = kHalfPi * i / 400.0;
            const double bound = g::neg_hpp_over_h_bound(r, lambda);
            const double replaced = p.m * g::ratio_neg_fpp_over_f(r, lambda) + (p.n - 1) * bound;
            const double residual = g::ratio_neg_hpp_over_h(r, lambda) - bound;
            ASSERT_NEAR(g::ric_hh(r, p) - replaced, (p.n - 1) * residual, 1e-9 * std::max(1.0, std::fabs(g::ric_hh(r, p))));
            (residual < 0 ? negative : positive)++;
        }
    }
    EXPECT_GT(positive, 0);
    EXPECT_GT(negative, 0);  // e.g. lambda = 2 near pi/2: -5/4 < -1
}

TEST(RicMinScan, Examples) {
    auto s = g::ric_min_scan({1.0, 8, 2}, 1000);
    EXPECT_GE(s.min_value, 1.0 - 1e-9);
    s = g::ric_min_scan({100.0, 8, 2}, 1000);
    EXPECT_GE(s.min_value, 1.0 - 1e-9);
    // m = 1: at lambda = 1 the minimum is still 1.5 (at pi/2); from lambda = 2
    // on the bound fails.
    s = g::ric_min_scan({1.0, 1, 2}, 1000);
    EXPECT_NEAR(s.min_value, 1.5, 1e-9);
    s = g::ric_min_scan({2.0, 1, 2}, 1000);
    EXPECT_LT(s.min_value, 1.0);
    EXPECT_NEAR(s.min_value, -0.65, 1e-9);
    EXPECT_DOUBLE_EQ(s.argmin_r, kHalfPi);
    EXPECT_THROW(g::ric_min_scan({1.0, 8, 2}, 1), g::DomainError);
}
