// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "grushin/certify.hpp"
#include "grushin/curvature.hpp"
#include "grushin/geodesics.hpp"
#include "grushin/gh_lab.hpp"
#include "grushin/grid_oracle.hpp"
#include "grushin/report.hpp"
#include "grushin/scalar_kernel.hpp"

namespace g = grushin;
using g::Interval;
using g::kHalfPi;
using g::kPi;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (!pass) detail << "; ";
            detail << "failed: " << what;
            pass = false;
        }
    }
};

double rel_err(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); }

const std::vector<double> kLambdas{1.0, 2.0, 5.0, 10.0, 100.0};
const std::vector<std::pair<int, int>> kDims{{2, 8}, {3, 16}};  // (n, m)

// --------------------------------------------------------------------------
// 1. closed forms against the jet oracle

void criterion_1(Outcome& o) {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (const double lambda : {1.0, 2.0, 10.0}) {
        for (int i = 0; i < 1000; ++i) {
            const double r = kHalfPi * (i + 0.5) / 1000.0;
            const auto f = g::jet2_eval(g::Warp::f, r, lambda);
            const auto h = g::jet2_eval(g::Warp::h, r, lambda);
            const double pairs[][2] = {
                {g::fprime(r, lambda), f.d1},
                {g::hprime(r, lambda), h.d1},
                {g::ratio_neg_fpp_over_f(r, lambda), -f.d2 / f.value},
                {g::ratio_neg_fphp_over_fh(r, lambda), -f.d1 * h.d1 / (f.value * h.value)},
                {g::ratio_neg_hpp_over_h(r, lambda), -h.d2 / h.value},
                {g::ratio_one_minus_hp2_over_h2(r, lambda), (1 - h.d1 * h.d1) / (h.value * h.value)},
                {g::ratio_one_minus_fp2_over_f2(r, lambda), (1 - f.d1 * f.d1) / (f.value * f.value)},
                {g::warp_f(r, lambda), f.value},
                {g::warp_h(r, lambda), h.value},
            };
            for (const auto& p : pairs) worst = std::max(worst, rel_err(p[0], p[1]));
        }
    }
    const double elapsed = seconds_since(t0);
    o.detail << "max deviation " << worst << " over 3x1000 points, " << elapsed << " s";
    o.require(worst <= 1e-8, "deviation <= 1e-8");
    o.require(elapsed < 5.0, "runtime < 5 s");
}

// --------------------------------------------------------------------------
// 2. boundary conditions at both ends

void criterion_2(Outcome& o) {
    double worst = 0.0;
    bool positive = true;
    for (const double lambda : {1.0, 2.0, 10.0, 100.0}) {
        const double zeros[] = {g::warp_f(0.0, lambda),       g::fprime(0.0, lambda) - 1.0, g::fsecond(0.0, lambda),
                                g::fprime(kHalfPi, lambda),   g::hprime(0.0, lambda),       g::warp_h(kHalfPi, lambda),
                                g::hprime(kHalfPi, lambda) + 1.0, g::hsecond(kHalfPi, lambda)};
        for (const double z : zeros) worst = std::max(worst, std::fabs(z));
        positive = positive && g::warp_f(kHalfPi, lambda) > 0.0 && g::warp_h(0.0, lambda) > 0.0;
    }
    o.detail << "max endpoint defect " << worst;
    o.require(worst <= 1e-10, "endpoint values within 1e-10");
    o.require(positive, "f(pi/2) > 0 and h(0) > 0");
}

// --------------------------------------------------------------------------
// 3. Ric >= 1 certificates

void criterion_3(Outcome& o) {
    double slowest = 0.0, lowest = 1e300;
    int verified = 0, total = 0;
    for (const auto& [n, m] : kDims) {
        for (const double lambda : kLambdas) {
            const auto t0 = Clock::now();
            const auto cert = g::certify_claim("C10", {lambda, m, n});
            slowest = std::max(slowest, seconds_since(t0));
            ++total;
            if (cert.status == g::Status::verified && cert.min_enclosure.lo() >= 1.0 && cert.max_depth <= 48) ++verified;
            else o.require(false, "C10 at n=" + std::to_string(n) + " m=" + std::to_string(m) + " lambda=" + g::format_real(lambda));
            lowest = std::min(lowest, cert.min_enclosure.lo());
        }
    }
    o.detail << verified << "/" << total << " verified, smallest enclosure lower end " << lowest << ", slowest " << slowest << " s";
    o.require(slowest < 60.0, "each certificate < 60 s");
}

// --------------------------------------------------------------------------
// 4. claim registry statuses

void criterion_4(Outcome& o) {
    int checked = 0;
    for (const auto& [n, m] : kDims) {
        for (const double lambda : kLambdas) {
            for (const char* id : {"C1", "C3", "C5a", "C5b", "C6", "C7"}) {
                const auto cert = g::certify_claim(id, {lambda, m, n});
                ++checked;
                o.require(cert.status == g::Status::verified,
                          std::string(id) + " verified at n=" + std::to_string(n) + " lambda=" + g::format_real(lambda));
            }
        }
        for (const double lambda : {1.0, 2.0, 10.0, 100.0}) {
            ++checked;
            o.require(g::certify_claim("C2'", {lambda, m, n}).status == g::Status::verified,
                      "C2' verified at lambda=" + g::format_real(lambda));
        }
        const auto c2 = g::certify_claim("C2", {1.0, m, n});
        ++checked;
        o.require(c2.status == g::Status::refuted && c2.witness && c2.witness->r == kHalfPi &&
                      std::fabs(c2.witness->value - 0.75) <= 1e-12,
                  "C2 refuted with value 0.75 at r = pi/2");
        const auto c4 = g::certify_claim("C4", {2.0, m, n});
        ++checked;
        o.require(c4.status == g::Status::refuted && c4.witness && c4.witness->r == kHalfPi &&
                      std::fabs(c4.witness->value + 1.25) <= 1e-12 && std::fabs(c4.witness->bound + 1.0) <= 1e-12,
                  "C4 refuted with -1.25 vs -1 at r = pi/2");
        if (o.pass && n == 2)
            o.detail << "C2 witness value " << c2.witness->value << ", C4 witness " << c4.witness->value << " vs "
                     << c4.witness->bound << "; ";
    }
    o.detail << checked << " certificates checked";
}

// --------------------------------------------------------------------------
// 5. interval soundness

long double reference(g::Expr e, double r, double lambda, int m, int n) {
    const auto f = g::jet2_eval(g::Warp::f, r, lambda);
    const auto h = g::jet2_eval(g::Warp::h, r, lambda);
    using L = long double;
    const L s = std::sin(static_cast<L>(r)), c = std::cos(static_cast<L>(r));
    const L l2 = static_cast<L>(lambda) * lambda;
    const L A = l2 * s * s + c * c, B = l2 * s * s + 1;
    const L fv = f.value, f1 = f.d1, hv = h.value, h1 = h.d1;
    const L fpp = -f.d2 / fv, hpp = -h.d2 / hv, cross = -f1 * h1 / (fv * hv);
    const L ff = (1 - f1 * f1) / (fv * fv), hh = (1 - h1 * h1) / (hv * hv);
    const L rhh = m * fpp + (n - 1) * hpp;
    const L ruu = fpp + (m - 1) * ff + (n - 1) * cross;
    const L rvv = hpp + (n - 2) * hh + m * cross;
    switch (e) {
        case g::Expr::f: return fv;
        case g::Expr::h: return hv;
        case g::Expr::A: return A;
        case g::Expr::B: return B;
        case g::Expr::fprime: return f1;
        case g::Expr::neg_fpp_over_f: return fpp;
        case g::Expr::neg_fphp_over_fh: return cross;
        case g::Expr::neg_hpp_over_h: return hpp;
        case g::Expr::one_minus_hp2_over_h2: return hh;
        case g::Expr::one_minus_fp2_over_f2: return ff;
        case g::Expr::term_I:
            return m * A * A * (l2 * l2 * s * s * s * s + l2 * l2 * s * s + 6 * l2 + 4) - 8.0L * (n - 1) * B * B * l2 * l2 * s * s;
        case g::Expr::ric_hh: return rhh;
        case g::Expr::ric_uu: return ruu;
        case g::Expr::ric_vv: return rvv;
        case g::Expr::ric_min: return std::min({rhh, ruu, rvv});
    }
    return 0;
}

void criterion_5(Outcome& o) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    constexpr int kExprCount = 15;
    int checks = 0, violations = 0;
    while (checks < 10000) {
        const auto e = static_cast<g::Expr>(checks % kExprCount);
        const double lambda = 1.0 + 99.0 * unit(rng) * unit(rng);
        const int n = 2 + static_cast<int>(unit(rng) * 3);
        const int m = 1 + static_cast<int>(unit(rng) * 24);
        const double width = std::pow(10.0, -1.0 - 8.0 * unit(rng));
        // the jet reference is well conditioned away from the exact endpoints
        const double a = 1e-3 + unit(rng) * (kHalfPi - 2e-3 - width);
        const Interval box(a, a + width);
        const double x = std::clamp(a + unit(rng) * width, box.lo(), box.hi());
        const Interval enc = g::interval_eval(e, box, lambda, m, n);
        const long double truth = reference(e, x, lambda, m, n);
        const long double slack = 1e-9L * (1 + std::fabs(truth));  // accuracy of the long double reference
        if (enc.lo() - slack > truth || enc.hi() + slack < truth) ++violations;
        ++checks;
    }
    o.detail << checks << " point-in-box checks, " << violations << " violations";
    o.require(violations == 0, "zero violations");
}

// --------------------------------------------------------------------------
// 6 + 9. sweeps

std::vector<g::DistortionReport> sweep_with_workers(unsigned workers) {
    g::LabOptions opt;
    opt.workers = workers;
    return g::convergence_sweep(2, 8, {1.0, 2.0, 5.0, 10.0, 20.0, 50.0}, 0.15, 1e-12, 42, opt);
}

std::vector<g::DistortionReport> g_sweep;

void criterion_6(Outcome& o) {
    int certs = 0;
    for (const auto& [n, m] : kDims) {
        for (const char* id : {"C10", "C2", "C5", "C7"}) {
            g::CertifyOptions one, many;
            one.workers = 1;
            many.workers = 8;
            const g::WarpParams p{10.0, m, n};
            const auto a = g::to_json(g::certify_claim(id, p, one), false);
            const auto b = g::to_json(g::certify_claim(id, p, many), false);
            ++certs;
            o.require(a == b, std::string("certificate ") + id + " identical");
        }
    }
    const auto t0 = Clock::now();
    g_sweep = sweep_with_workers(1);
    const std::string csv1 = g::sweep_csv(g_sweep);
    const std::string csv8 = g::sweep_csv(sweep_with_workers(8));
    o.require(csv1 == csv8, "sweep CSV identical");
    o.detail << certs << " certificate pairs and one sweep pair compared (" << csv1.size() << " CSV bytes, "
             << seconds_since(t0) << " s)";
}

// --------------------------------------------------------------------------
// 7. distance solver

g::ReducedPoint random_interior(const g::MetricSpec& spec, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    g::ReducedPoint p{0.1 + 1.4 * unit(rng), {kPi * unit(rng), kPi * unit(rng)}};
    if (spec.index() != 0) p.fiber[1] = 0.0;
    return p;
}

void criterion_7(Outcome& o) {
    const std::vector<g::MetricSpec> specs{g::SphereDWP{{2.0, 8, 2}}, g::LimitHemisphere{2}, g::GrushinHalfplane{1.0}};
    const double tol = 1e-8;
    std::mt19937_64 rng(7);
    double worst_rel = 0.0;
    for (const auto& spec : specs) {
        for (int k = 0; k < 50; ++k) {
            const auto p = random_interior(spec, rng), q = random_interior(spec, rng);
            const double shot = g::distance(spec, p, q, tol);
            const double oracle = g::oracle_distance(spec, p, q, 1024);
            worst_rel = std::max(worst_rel, std::fabs(oracle - shot) / shot);
        }
    }
    o.require(worst_rel <= 1e-2, "oracle agreement within 1%");

    const double segment = g::distance(g::GrushinHalfplane{1.0}, {1.0, {0.0, 0.0}}, {2.0, {0.0, 0.0}}, tol);
    o.require(std::fabs(segment - 1.0) <= 1e-6, "Grushin segment = 1");

    // axioms: a pool of 20 points per spec, its full distance matrix, 1000 random triples
    double worst_sym = 0.0, worst_tri = -1e300;  // raw |d(p,q) - d(q,p)| and d(a,b) - d(a,c) - d(c,b)
    for (const auto& spec : specs) {
        std::vector<g::ReducedPoint> pool;
        for (int k = 0; k < 20; ++k) pool.push_back(random_interior(spec, rng));
        std::vector<double> d(400, 0.0);
        for (int i = 0; i < 20; ++i)
            for (int j = 0; j < 20; ++j)
                if (i != j) d[i * 20 + j] = g::distance(spec, pool[i], pool[j], tol);
        for (int i = 0; i < 20; ++i)
            for (int j = 0; j < 20; ++j) worst_sym = std::max(worst_sym, std::fabs(d[i * 20 + j] - d[j * 20 + i]));
        std::uniform_int_distribution<int> pick(0, 19);
        for (int t = 0; t < 1000; ++t) {
            const int a = pick(rng), b = pick(rng), c = pick(rng);
            worst_tri = std::max(worst_tri, d[a * 20 + b] - d[a * 20 + c] - d[c * 20 + b]);
        }
    }
    o.require(worst_sym <= 2 * tol, "symmetry within 2 tol");
    o.require(worst_tri <= 3 * tol, "triangle inequality within 3 tol");
    o.detail << "150 pairs at resolution 1024, max relative deviation " << worst_rel << "; segment " << segment
             << "; 3000 triples, max asymmetry " << worst_sym << ", max triangle defect " << worst_tri;
}

// --------------------------------------------------------------------------
// 8. limit-space geometry

void criterion_8(Outcome& o) {
    const auto pole = g::boundary_distance(g::LimitHemisphere{2}, {kHalfPi, {0.3, 0.0}}, {0.0, {1.1, 0.0}});
    o.require(std::fabs(pole.value - kHalfPi) <= 1e-6, "pole to equator = pi/2");
    std::vector<double> ratios;
    for (const double y : {0.1, 0.01, 0.001})
        ratios.push_back(g::boundary_distance(g::GrushinHalfplane{1.0}, {0.0, {0.0, 0.0}}, {0.0, {y, 0.0}}).value / std::sqrt(y));
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    const double spread = *hi / *lo - 1.0;
    o.require(spread <= 0.02, "square-root scaling within 2%");
    o.detail << "pole-equator " << pole.value << " (pi/2 defect " << std::fabs(pole.value - kHalfPi) << "); d/sqrt(y) = "
             << ratios[0] << ", " << ratios[1] << ", " << ratios[2] << " (spread " << spread << ")";
}

// --------------------------------------------------------------------------
// 9. convergence surrogate

void criterion_9(Outcome& o) {
    if (g_sweep.empty()) g_sweep = sweep_with_workers(g::default_workers());
    bool monotone = true;
    for (std::size_t k = 1; k < g_sweep.size(); ++k)
        monotone = monotone && g_sweep[k].distortion <= 1.1 * g_sweep[k - 1].distortion;
    const double ratio = g_sweep.back().distortion / g_sweep.front().distortion;
    o.require(monotone, "distortion nonincreasing within 10%");
    o.require(ratio <= 0.5, "distortion(50) <= 0.5 distortion(1)");

    const double tol = 1e-8;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = -1e300;
    int spots = 0;
    for (const auto& rep : g_sweep) {
        const g::MetricSpec spec = g::SphereDWP{{rep.lambda, 8, 2}};
        const double bound = kPi * std::pow(1.0 + rep.lambda * rep.lambda, -0.25);
        for (int k = 0; k < 20; ++k) {
            const double r = 0.05 + 1.45 * unit(rng), beta = kPi * unit(rng);
            const double a0 = kPi * unit(rng), a1 = kPi * unit(rng);
            const double d = g::distance(spec, {r, {a0, beta}}, {r, {a1, beta}}, tol);
            worst = std::max(worst, d - bound - tol);
            ++spots;
        }
    }
    o.require(worst <= 0.0, "fiber bound");
    o.detail << "distortion";
    for (const auto& rep : g_sweep) o.detail << " " << rep.distortion;
    o.detail << " (ratio " << ratio << "); " << spots << " fiber spot checks, max excess over bound " << worst;
}

// --------------------------------------------------------------------------
// 10. dimension and tangent-cone probes

void criterion_10(Outcome& o) {
    const std::vector<double> eps{0.2, 0.1, 0.05, 0.025};
    const auto band = g::dimension_probe(g::LimitHemisphere{2}, g::ProbeRegion::equator_band, eps);
    const auto calib = g::dimension_probe(g::SphereDWP{{1.0, 8, 2}}, g::ProbeRegion::interior_ball, eps);
    o.require(band.slope >= 1.6 && band.slope <= 2.4, "equator band slope in [1.6, 2.4]");
    o.require(calib.slope >= 1.6 && calib.slope <= 2.4, "interior calibration slope in [1.6, 2.4]");
    const auto rows = g::tangent_cone_check(2, {0.1, 0.05, 0.02});
    o.require(rows[2].max_rel_err <= 0.05, "tangent cone error <= 5% at 0.02");
    o.require(rows[1].max_rel_err < rows[0].max_rel_err && rows[2].max_rel_err < rows[1].max_rel_err,
              "tangent cone error decreasing");
    o.detail << "equator slope " << band.slope << ", interior slope " << calib.slope << ", tangent errors "
             << rows[0].max_rel_err << " " << rows[1].max_rel_err << " " << rows[2].max_rel_err;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
        {"closed-form fidelity", criterion_1},    {"boundary conditions", criterion_2},
        {"Ric >= 1 certification", criterion_3},  {"claim registry", criterion_4},
        {"interval soundness", criterion_5},      {"determinism", criterion_6},
        {"distance solver", criterion_7},         {"limit-space geometry", criterion_8},
        {"convergence surrogate", criterion_9},   {"dimension and tangent-cone probes", criterion_10},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        const auto t0 = Clock::now();
        try {
            criteria[k].second(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s %2zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.str().c_str(),
                    seconds_since(t0));
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
