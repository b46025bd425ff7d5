#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "grushin/certify.hpp"
#include "grushin/report.hpp"

namespace g = grushin;
using g::Interval;
using g::kHalfPi;

namespace {

// Reference values from the defining formulas, differentiated by the jet oracle.
long double oracle_value(g::Expr e, double r, double lambda, int m, int n) {
    const auto f = g::jet2_eval(g::Warp::f, r, lambda);
    const auto h = g::jet2_eval(g::Warp::h, r, lambda);
    const long double s = std::sin(static_cast<long double>(r)), c = std::cos(static_cast<long double>(r));
    const long double l2 = static_cast<long double>(lambda) * lambda;
    const long double A = l2 * s * s + c * c, B = l2 * s * s + 1;
    const long double fpp = -f.d2 / static_cast<long double>(f.value);
    const long double hpp = -h.d2 / static_cast<long double>(h.value);
    const long double cross = -static_cast<long double>(f.d1) * h.d1 / (static_cast<long double>(f.value) * h.value);
    const long double ff = (1 - static_cast<long double>(f.d1) * f.d1) / (static_cast<long double>(f.value) * f.value);
    const long double hh = (1 - static_cast<long double>(h.d1) * h.d1) / (static_cast<long double>(h.value) * h.value);
    const long double ric_hh = m * fpp + (n - 1) * hpp;
    const long double ric_uu = fpp + (m - 1) * ff + (n - 1) * cross;
    const long double ric_vv = hpp + (n - 2) * hh + m * cross;
    switch (e) {
        case g::Expr::f: return f.value;
        case g::Expr::h: return h.value;
        case g::Expr::A: return A;
        case g::Expr::B: return B;
        case g::Expr::fprime: return f.d1;
        case g::Expr::neg_fpp_over_f: return fpp;
        case g::Expr::neg_fphp_over_fh: return cross;
        case g::Expr::neg_hpp_over_h: return hpp;
        case g::Expr::one_minus_hp2_over_h2: return hh;
        case g::Expr::one_minus_fp2_over_f2: return ff;
        case g::Expr::term_I:
            return m * A * A * (l2 * l2 * s * s * s * s + l2 * l2 * s * s + 6 * l2 + 4) -
                   8.0L * (n - 1) * B * B * l2 * l2 * s * s;
        case g::Expr::ric_hh: return ric_hh;
        case g::Expr::ric_uu: return ric_uu;
        case g::Expr::ric_vv: return ric_vv;
        case g::Expr::ric_min: return std::min({ric_hh, ric_uu, ric_vv});
    }
    return 0;
}

constexpr int kExprCount = 15;

g::CertifyOptions with_workers(unsigned w) {
    g::CertifyOptions o;
    o.workers = w;
    return o;
}

}  // namespace

TEST(IntervalEval, DegenerateBoxMatchesPoint) {
    const Interval v = g::interval_eval(g::Expr::neg_fpp_over_f, Interval(0.0), 1.0, 8, 2);
    EXPECT_TRUE(v.contains(2.5));
    EXPECT_LE(v.width(), 1e-12);
}

TEST(IntervalEval, FprimeRangeOnFullInterval) {
    const Interval v = g::interval_eval(g::Expr::fprime, Interval(0.0, kHalfPi), 1.0, 8, 2);
    EXPECT_GE(v.lo(), -1e-12);
    EXPECT_LE(v.hi(), 1.0 + 1e-12);
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < 256; ++i) {
        const Interval box(kHalfPi * i / 256, i == 255 ? kHalfPi : kHalfPi * (i + 1) / 256);
        const Interval part = g::interval_eval(g::Expr::fprime, box, 1.0, 8, 2);
        lo = std::min(lo, part.lo());
        hi = std::max(hi, part.hi());
    }
    EXPECT_GE(lo, -1e-12);
    EXPECT_LE(hi, 1.0 + 1e-12);
}

TEST(IntervalEval, AuxARange) {
    const Interval v = g::interval_eval(g::Expr::A, Interval(0.0, kHalfPi), 2.0, 8, 2);
    EXPECT_TRUE(v.contains(1.0));
    EXPECT_TRUE(v.contains(4.0));
    EXPECT_LE(v.width(), 3.0 + 1e-12);
}

TEST(IntervalEval, RejectsBoxOutsideDomain) {
    EXPECT_THROW(g::interval_eval(g::Expr::f, Interval(-0.1, 0.2), 1.0, 8, 2), g::DomainError);
    EXPECT_THROW(g::interval_eval(g::Expr::f, Interval(0.1, 1.6), 1.0, 8, 2), g::DomainError);
    EXPECT_THROW(g::interval_eval(g::Expr::f, Interval(0.1, 0.2), 0.5, 8, 2), g::DomainError);
}

TEST(IntervalEval, ExpressionNamesRoundTrip) {
    for (int i = 0; i < kExprCount; ++i) {
        const auto e = static_cast<g::Expr>(i);
        EXPECT_EQ(g::parse_expr(g::to_string(e)), e);
    }
    EXPECT_FALSE(g::parse_expr("ric_xx").has_value());
}

TEST(IntervalEval, SoundnessOnRandomTriples) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double lo_r = 1e-3, hi_r = kHalfPi - 1e-3;  // jet oracle stays well conditioned here
    int checked = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const auto e = static_cast<g::Expr>(trial % kExprCount);
        const double lambda = 1.0 + 99.0 * unit(rng) * unit(rng);
        const int n = 2 + static_cast<int>(unit(rng) * 3);
        const int m = 1 + static_cast<int>(unit(rng) * 24);
        const double width = std::pow(10.0, -1.0 - 8.0 * unit(rng));
        const double a = std::min(kHalfPi, unit(rng) * kHalfPi);
        const double b = std::min(kHalfPi, a + width);
        const Interval box(a, b);
        double x = a + unit(rng) * (b - a);
        x = std::clamp(x, std::max(a, lo_r), std::min(b, hi_r));
        if (x < a || x > b) continue;
        const Interval enc = g::interval_eval(e, box, lambda, m, n);
        const long double truth = oracle_value(e, x, lambda, m, n);
        const long double tol = 1e-9L * (1 + std::fabs(truth));
        ASSERT_LE(enc.lo() - tol, truth) << g::to_string(e) << " r=" << x << " lambda=" << lambda;
        ASSERT_GE(enc.hi() + tol, truth) << g::to_string(e) << " r=" << x << " lambda=" << lambda;
        // the degenerate box enclosure is itself contained in the box enclosure
        const Interval at = g::interval_eval(e, Interval(x), lambda, m, n);
        ASSERT_LE(enc.lo(), at.hi());
        ASSERT_GE(enc.hi(), at.lo());
        ++checked;
    }
    EXPECT_GT(checked, 9000);
}

TEST(IntervalEval, MonotoneRefinement) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 3000; ++trial) {
        const auto e = static_cast<g::Expr>(trial % kExprCount);
        const double lambda = 1.0 + 20.0 * unit(rng);
        const double a = unit(rng) * kHalfPi;
        const double b = std::min(kHalfPi, a + 0.3 * unit(rng));
        const Interval parent = g::interval_eval(e, Interval(a, b), lambda, 12, 3);
        const double mid = Interval(a, b).mid();
        const double slack = 1e-12 * (1 + std::fabs(parent.lo()) + std::fabs(parent.hi()));
        for (const Interval child : {Interval(a, mid), Interval(mid, b)}) {
            const Interval ce = g::interval_eval(e, child, lambda, 12, 3);
            ASSERT_GE(ce.lo(), parent.lo() - slack) << g::to_string(e);
            ASSERT_LE(ce.hi(), parent.hi() + slack) << g::to_string(e);
        }
    }
}

TEST(Registry, StableIds) {
    std::vector<std::string> ids;
    for (const auto& c : g::claim_registry()) ids.push_back(c.id);
    const std::vector<std::string> expected{"C1", "C2", "C2'", "C3", "C4", "C5", "C5a",
                                            "C5b", "C6", "C7", "C8", "C9", "C10"};
    EXPECT_EQ(ids, expected);
    EXPECT_THROW(g::find_claim("C11"), std::invalid_argument);
}

TEST(CertifyClaim, C3VerifiedAtLambdaOne) {
    const auto c = g::certify_claim("C3", {1.0, 8, 2});
    EXPECT_EQ(c.status, g::Status::verified);
    EXPECT_FALSE(c.witness.has_value());
    EXPECT_GE(c.min_enclosure.lo(), 0.5);
}

TEST(CertifyClaim, C2RefutedAtEquator) {
    const auto c = g::certify_claim("C2", {1.0, 8, 2});
    ASSERT_EQ(c.status, g::Status::refuted);
    ASSERT_TRUE(c.witness.has_value());
    EXPECT_DOUBLE_EQ(c.witness->r, kHalfPi);
    EXPECT_NEAR(c.witness->value, 0.75, 1e-12);
    EXPECT_EQ(c.witness->bound, 1.0);
}

TEST(CertifyClaim, C10VerifiedAtLambdaTen) {
    const auto c = g::certify_claim("C10", {10.0, 8, 2});
    EXPECT_EQ(c.status, g::Status::verified);
    EXPECT_GE(c.min_enclosure.lo(), 1.0);
    EXPECT_LE(c.max_depth, 48);
}

TEST(CertifyClaim, ThresholdTouchingClaimsVerifyThroughFactorisation) {
    // f' = 0 at pi/2 and f' = 1 at 0; C4 margin vanishes at r = 0 when lambda = 1
    EXPECT_EQ(g::certify_claim("C1", {1.0, 8, 2}).status, g::Status::verified);
    EXPECT_EQ(g::certify_claim("C1", {100.0, 8, 2}).status, g::Status::verified);
    EXPECT_EQ(g::certify_claim("C4", {1.0, 8, 2}).status, g::Status::verified);
}

TEST(CertifyClaim, C4RefutedAtLambdaTwo) {
    const auto c = g::certify_claim("C4", {2.0, 8, 2});
    ASSERT_EQ(c.status, g::Status::refuted);
    EXPECT_NEAR(c.witness->r, kHalfPi, 1e-9);
    EXPECT_NEAR(c.witness->value, -1.25, 1e-12);
    EXPECT_NEAR(c.witness->bound, -1.0, 1e-12);
}

TEST(CertifyClaim, CorrectedThresholdHolds) {
    for (double lambda : {1.0, 2.0, 10.0, 100.0})
        EXPECT_EQ(g::certify_claim("C2'", {lambda, 8, 2}).status, g::Status::verified) << lambda;
}

TEST(CertifyClaim, GuardViolationThrows) {
    EXPECT_THROW(g::certify_claim("C5", {1.0, 7, 2}), g::DomainError);
    EXPECT_THROW(g::certify_claim("C7", {1.0, 11, 3}), g::DomainError);
    EXPECT_THROW(g::certify_claim("C3", {0.5, 8, 2}), g::DomainError);
    EXPECT_THROW(g::certify_claim("nope", {1.0, 8, 2}), std::invalid_argument);
}

TEST(CertifyClaim, InconclusiveWhenBudgetTooSmall) {
    g::CertifyOptions o;
    o.max_depth = 2;
    o.split_levels = 1;
    const auto c = g::certify_claim("C10", {100.0, 8, 2}, o);
    EXPECT_EQ(c.status, g::Status::inconclusive);
    EXPECT_LE(c.max_depth, 2);
}

TEST(CertifyClaim, PolynomialClaimAlwaysDecided) {
    for (int n = 2; n <= 5; ++n) {
        const int base = 8 * (n - 1);
        for (int m : {base, base + 1, 2 * base}) {
            for (double lambda : {1.0, 1.5, 2.0, 3.0, 5.0, 10.0, 30.0, 100.0}) {
                for (const char* id : {"C5", "C5a", "C5b"}) {
                    const auto c = g::certify_claim(id, {lambda, m, n});
                    EXPECT_NE(c.status, g::Status::inconclusive) << id << " m=" << m << " n=" << n;
                    EXPECT_LE(c.max_depth, 40);
                }
            }
        }
    }
}

TEST(CertifyClaim, DeterministicAcrossWorkerCounts) {
    for (const char* id : {"C10", "C8", "C2", "C2'"}) {
        for (double lambda : {1.0, 5.0, 100.0}) {
            const g::WarpParams p{lambda, 16, 3};
            const std::string one = g::to_json(g::certify_claim(id, p, with_workers(1)), false);
            EXPECT_EQ(one, g::to_json(g::certify_claim(id, p, with_workers(2)), false));
            EXPECT_EQ(one, g::to_json(g::certify_claim(id, p, with_workers(8)), false));
        }
    }
}

TEST(CertifyClaim, RefutationsHoldInIndependentArithmetic) {
    const std::vector<double> lambdas{1.0, 2.0, 5.0, 10.0, 100.0};
    int refuted = 0;
    for (auto [m, n] : {std::pair{8, 2}, std::pair{16, 3}, std::pair{1, 2}}) {
        for (const auto& entry : g::registry_report(m, n, lambdas)) {
            if (!entry.certificate || entry.certificate->status != g::Status::refuted) continue;
            ++refuted;
            const auto& c = *entry.certificate;
            const auto& claim = g::find_claim(c.claim_id);
            // the jet oracle loses accuracy where h vanishes; step just inside the interval
            const double r = std::clamp(c.witness->r, 1e-3, kHalfPi - 1e-6);
            ASSERT_NEAR(r, c.witness->r, 1e-3);
            const long double v = oracle_value(claim.expression, r, entry.lambda, m, n);
            EXPECT_LT(v, c.witness->bound - 1e-3) << c.claim_id << " lambda=" << entry.lambda;
            EXPECT_NEAR(static_cast<double>(v), c.witness->value, 1e-3 * (1 + std::fabs(c.witness->value)));
        }
    }
    EXPECT_GT(refuted, 10);
}

TEST(CertifyTheorem, AllVerifiedForLargeM) {
    const std::vector<double> lambdas{1.0, 2.0, 5.0, 10.0, 100.0};
    const auto s = g::certify_theorem(8, 2, lambdas);
    EXPECT_TRUE(s.all_verified);
    ASSERT_EQ(s.certificates.size(), lambdas.size());
    for (const auto& c : s.certificates) EXPECT_GE(c.min_enclosure.lo(), 1.0);
    const std::vector<double> two{1.0, 10.0};
    EXPECT_TRUE(g::certify_theorem(16, 3, two).all_verified);
}

TEST(CertifyTheorem, SmallMFailsOnceLambdaGrows) {
    // at lambda = 1 the minimum is 1.5 even for m = 1; lambda = 2 drops it to -0.65
    const std::vector<double> one{1.0};
    EXPECT_TRUE(g::certify_theorem(1, 2, one).all_verified);
    const std::vector<double> two{2.0};
    const auto s = g::certify_theorem(1, 2, two);
    EXPECT_FALSE(s.all_verified);
    ASSERT_EQ(s.certificates[0].status, g::Status::refuted);
    EXPECT_NEAR(s.certificates[0].witness->value, -0.65, 1e-12);
}

TEST(RegistryReport, ExampleEntries) {
    const std::vector<double> lambdas{1.0, 2.0};
    const auto rows = g::registry_report(8, 2, lambdas);
    EXPECT_EQ(rows.size(), g::claim_registry().size() * 2);
    auto status = [&](const std::string& id, double lambda) {
        for (const auto& r : rows)
            if (r.claim_id == id && r.lambda == lambda) return r.certificate->status;
        throw std::runtime_error("missing row");
    };
    EXPECT_EQ(status("C1", 1.0), g::Status::verified);
    EXPECT_EQ(status("C5", 1.0), g::Status::verified);
    EXPECT_EQ(status("C4", 2.0), g::Status::refuted);
    const auto small = g::registry_report(1, 2, lambdas);
    for (const auto& r : small) {
        if (r.claim_id == "C5" || r.claim_id == "C7") EXPECT_FALSE(r.certificate.has_value());
    }
}

TEST(Report, CertificateJsonLayout) {
    const auto c = g::certify_claim("C2", {1.0, 8, 2});
    const std::string json = g::to_json(c, false);
    EXPECT_EQ(json.rfind("{\"claim\":\"C2\",\"lambda\":1,\"m\":8,\"n\":2,\"status\":\"refuted\",\"witness\":{\"r\":", 0), 0u);
    EXPECT_NE(json.find("\"wall_ms\":0}"), std::string::npos);
    for (const char* key : {"min_lo", "min_hi", "boxes", "depth"}) EXPECT_NE(json.find(key), std::string::npos);
}

TEST(Report, CsvWriter) {
    g::CsvWriter w({"a", "b"});
    w.row(std::vector<double>{0.1, 2.0});
    EXPECT_EQ(w.str(), "a,b\n0.10000000000000001,2\n");
    EXPECT_THROW(w.row(std::vector<double>{1.0}), std::invalid_argument);
}
