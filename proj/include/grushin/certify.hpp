#pragma once

// Rigorous certification of the curvature inequalities at fixed (lambda, m, n)
// by adaptive bisection of the r-interval with interval enclosures.

#include <chrono>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "grushin/curvature.hpp"
#include "grushin/interval.hpp"
#include "grushin/parallel.hpp"
#include "grushin/scalar_kernel.hpp"

namespace grushin {

enum class Expr {
    f,
    h,
    A,
    B,
    fprime,
    neg_fpp_over_f,
    neg_fphp_over_fh,
    neg_hpp_over_h,
    one_minus_hp2_over_h2,
    one_minus_fp2_over_f2,
    term_I,
    ric_hh,
    ric_uu,
    ric_vv,
    ric_min,
};

inline constexpr std::string_view kExprNames[] = {
    "f",      "h",      "A",      "B",      "fprime", "neg_fpp_over_f", "neg_fphp_over_fh", "neg_hpp_over_h",
    "one_minus_hp2_over_h2", "one_minus_fp2_over_f2", "term_I", "ric_hh", "ric_uu", "ric_vv", "ric_min"};

inline std::string_view to_string(Expr e) { return kExprNames[static_cast<int>(e)]; }

inline std::optional<Expr> parse_expr(std::string_view name) {
    for (std::size_t i = 0; i < std::size(kExprNames); ++i)
        if (kExprNames[i] == name) return static_cast<Expr>(i);
    return std::nullopt;
}

namespace detail {

struct Coeffs {
    Interval lam;
    Interval l2;
};

inline Coeffs coeffs_of(double lambda) {
    const Interval lam(lambda);
    return {lam, lam * lam};
}

template <class T>
T eval_expr(Expr e, const Trig<T>& t, const T& lam, const T& l2, int m, int n) {
    namespace cf = closed_form;
    switch (e) {
        case Expr::f: return cf::warp_f(t, l2);
        case Expr::h: return cf::warp_h(t, lam, l2);
        case Expr::A: return cf::aux_A(t, l2);
        case Expr::B: return cf::aux_B(t, l2);
        case Expr::fprime:
            if constexpr (std::is_same_v<T, Interval>) {
                // intersect with the enclosure through the factored defect 1 - f'
                return intersect(cf::fprime(t, l2), T(1.0) - t.s2 * cf::fprime_defect_over_s2(t, l2));
            } else {
                return cf::fprime(t, l2);
            }
        case Expr::neg_fpp_over_f: return cf::neg_fpp_over_f(t, l2);
        case Expr::neg_fphp_over_fh: return cf::neg_fphp_over_fh(t, l2);
        case Expr::neg_hpp_over_h: return cf::neg_hpp_over_h(t, l2);
        case Expr::one_minus_hp2_over_h2: return cf::one_minus_hp2_over_h2(t, l2);
        case Expr::one_minus_fp2_over_f2: return cf::one_minus_fp2_over_f2(t, l2);
        case Expr::term_I: return cf::term_I(t, l2, m, n);
        case Expr::ric_hh: return cf::ric_hh(t, l2, m, n);
        case Expr::ric_uu: return cf::ric_uu(t, l2, m, n);
        case Expr::ric_vv: return cf::ric_vv(t, l2, m, n);
        case Expr::ric_min: {
            using std::min;
            return min(min(cf::ric_hh(t, l2, m, n), cf::ric_uu(t, l2, m, n)), cf::ric_vv(t, l2, m, n));
        }
    }
    throw std::invalid_argument("unsupported expression");
}

}  // namespace detail

/// Sound enclosure of an expression's range over r_box (r_box inside [0, pi/2]).
inline Interval interval_eval(Expr e, const Interval& r_box, double lambda, int m, int n) {
    check_lambda(lambda);
    if (r_box.lo() < 0.0 || r_box.hi() > kHalfPi) throw DomainError("r_box must lie in [0, pi/2]");
    const auto c = detail::coeffs_of(lambda);
    return detail::eval_expr<Interval>(e, trig_of(r_box), c.lam, c.l2, m, n);
}

/// Double-precision evaluation of the same expression at a point.
inline double point_eval(Expr e, double r, double lambda, int m, int n) {
    check_lambda(lambda);
    check_radius(r);
    return detail::eval_expr<double>(e, trig_of(r), lambda, lambda * lambda, m, n);
}

// ---------------------------------------------------------------------------
// Claim registry

/// Margin of one inequality over a box. The inequality holds on the box when
/// margin.lo() > 0, or when margin = g * cofactor for a factor g that is
/// nonnegative by construction (a power of sin^2 r or cos r) and
/// cofactor.lo() > 0. A margin touching zero without such a factorisation is
/// not accepted.
struct MarginEnclosure {
    Interval margin;
    std::optional<Interval> cofactor;

    [[nodiscard]] bool accepted() const { return margin.lo() > 0.0 || (cofactor && cofactor->lo() > 0.0); }
};

/// One side of a claim: value compared against a bound, which may vary with r.
struct Check {
    using MarginFn = MarginEnclosure (*)(const Trig<Interval>&, const detail::Coeffs&, const WarpParams&);
    using ValueFn = double (*)(const Trig<double>&, double lambda, const WarpParams&);

    MarginFn margin;
    ValueFn value;
    ValueFn bound;
    bool upper = false;  // claim reads value <= bound
};

struct Claim {
    std::string id;
    std::string description;
    Expr expression;  // quantity whose range is reported in the certificate
    double threshold; // constant part of the bound (nominal for r-dependent bounds)
    Interval domain;
    bool (*guard)(const WarpParams&);
    std::string guard_text;
    std::vector<Check> checks;
};

namespace detail {

inline bool no_guard(const WarpParams&) { return true; }
inline bool guard_m_8n(const WarpParams& p) { return p.m >= 8 * (p.n - 1); }
inline bool guard_m_4n(const WarpParams& p) { return p.m >= 4 * p.n; }

inline double zero_bound(const Trig<double>&, double, const WarpParams&) { return 0.0; }
inline double one_bound(const Trig<double>&, double, const WarpParams&) { return 1.0; }
inline double half_bound(const Trig<double>&, double, const WarpParams&) { return 0.5; }

template <Expr E>
double point_value(const Trig<double>& t, double lambda, const WarpParams& p) {
    return eval_expr<double>(E, t, lambda, lambda * lambda, p.m, p.n);
}

template <Expr E>
Interval box_value(const Trig<Interval>& t, const Coeffs& c, const WarpParams& p) {
    return eval_expr<Interval>(E, t, c.lam, c.l2, p.m, p.n);
}

/// value - threshold, no structure.
template <Expr E, int Num, int Den>
MarginEnclosure plain_margin(const Trig<Interval>& t, const Coeffs& c, const WarpParams& p) {
    return {box_value<E>(t, c, p) - Interval(double(Num)) / Interval(double(Den)), std::nullopt};
}

// f' = cos r * (B+1) / (2 B^{5/4})
inline MarginEnclosure fprime_lower_margin(const Trig<Interval>& t, const Coeffs& c, const WarpParams&) {
    const Interval b = closed_form::aux_B(t, c.l2);
    const Interval cof = (b + Interval(1.0)) / (Interval(2.0) * b * closed_form::quarter_root(b));
    return {t.c * cof, cof};
}

// 1 - f' = sin^2 r * (positive cofactor)
inline MarginEnclosure fprime_upper_margin(const Trig<Interval>& t, const Coeffs& c, const WarpParams&) {
    const Interval cof = closed_form::fprime_defect_over_s2(t, c.l2);
    const Interval direct = Interval(1.0) - closed_form::fprime(t, c.l2);
    return {intersect(direct, t.s2 * cof), cof};
}

/// Polynomial in u with interval coefficients. Leading coefficients that are
/// exactly zero are factored out as u^k, which is nonnegative for u >= 0.
inline MarginEnclosure stripped_polynomial(std::span<const Interval> coeffs, const Interval& u, const Interval& den) {
    const auto horner = [&](std::size_t from) {
        Interval acc = coeffs.back();
        for (std::size_t i = coeffs.size() - 1; i-- > from;) acc = coeffs[i] + u * acc;
        return acc;
    };
    std::size_t k = 0;
    while (k + 1 < coeffs.size() && coeffs[k].lo() == 0.0 && coeffs[k].hi() == 0.0) ++k;
    const Interval full = horner(0) / den;
    if (k == 0) return {full, std::nullopt};
    return {full, horner(k) / den};
}

// -h''/h - (1 - 2 l^4 s^2 / A^2) = [(l^2 - 1) + 2 s^2 - (l^2 - 1)^2 s^4] / A^2
inline MarginEnclosure hpp_bound_margin(const Trig<Interval>& t, const Coeffs& c, const WarpParams&) {
    const Interval k = c.l2 - Interval(1.0);
    const Interval coeffs[3] = {k, Interval(2.0), -(k * k)};
    const Interval a = closed_form::aux_A(t, c.l2);
    const MarginEnclosure poly = stripped_polynomial(coeffs, t.s2, a * a);
    const Interval direct =
        closed_form::neg_hpp_over_h(t, c.l2) -
        (Interval(1.0) - Interval(2.0) * c.l2 * c.l2 * t.s2 / (a * a));
    return {intersect(direct, poly.margin), poly.cofactor};
}

inline double hpp_bound(const Trig<double>& t, double lambda, const WarpParams&) {
    const double l2 = lambda * lambda;
    const double a = closed_form::aux_A(t, l2);
    return 1.0 - 2.0 * l2 * l2 * t.s2 / (a * a);
}

// (1-h'^2)/h^2 + l^4 s^2 (s^2+1)/A^2 = (A^2 + A l^2 s^2 + l^4 s^4) / (l^2 A^2)
inline MarginEnclosure hp2_bound_margin(const Trig<Interval>& t, const Coeffs& c, const WarpParams&) {
    const Interval a = closed_form::aux_A(t, c.l2);
    const Interval x = c.l2 * t.s2;
    const Interval rewritten = (a * a + a * x + x * x) / (c.l2 * a * a);
    const Interval direct = closed_form::one_minus_hp2_over_h2(t, c.l2) + c.l2 * c.l2 * t.s2 * (t.s2 + Interval(1.0)) / (a * a);
    return {intersect(direct, rewritten), std::nullopt};
}

inline double hp2_bound(const Trig<double>& t, double lambda, const WarpParams&) {
    const double l2 = lambda * lambda;
    const double a = closed_form::aux_A(t, l2);
    return -l2 * l2 * t.s2 * (t.s2 + 1.0) / (a * a);
}

}  // namespace detail

inline const std::vector<Claim>& claim_registry() {
    using namespace detail;
    static const Interval full(0.0, kHalfPi);
    static const double quarter = std::numbers::pi / 4.0;
    static const std::vector<Claim> registry = {
        {"C1", "f' lies in [0, 1]", Expr::fprime, 0.0, full, no_guard, "",
         {{fprime_lower_margin, point_value<Expr::fprime>, zero_bound, false},
          {fprime_upper_margin, point_value<Expr::fprime>, one_bound, true}}},
        {"C2", "-f''/f >= 1", Expr::neg_fpp_over_f, 1.0, full, no_guard, "",
         {{plain_margin<Expr::neg_fpp_over_f, 1, 1>, point_value<Expr::neg_fpp_over_f>, one_bound, false}}},
        {"C2'", "-f''/f >= 1/2", Expr::neg_fpp_over_f, 0.5, full, no_guard, "",
         {{plain_margin<Expr::neg_fpp_over_f, 1, 2>, point_value<Expr::neg_fpp_over_f>, half_bound, false}}},
        {"C3", "-f'h'/(fh) >= 1/2", Expr::neg_fphp_over_fh, 0.5, full, no_guard, "",
         {{plain_margin<Expr::neg_fphp_over_fh, 1, 2>, point_value<Expr::neg_fphp_over_fh>, half_bound, false}}},
        {"C4", "-h''/h >= -2 lambda^4 sin^2 r / A^2 + 1", Expr::neg_hpp_over_h, 1.0, full, no_guard, "",
         {{hpp_bound_margin, point_value<Expr::neg_hpp_over_h>, hpp_bound, false}}},
        {"C5", "I >= 0", Expr::term_I, 0.0, full, guard_m_8n, "m >= 8(n-1)",
         {{plain_margin<Expr::term_I, 0, 1>, point_value<Expr::term_I>, zero_bound, false}}},
        {"C5a", "I >= 0 on [pi/4, pi/2]", Expr::term_I, 0.0, Interval(quarter, kHalfPi), guard_m_8n, "m >= 8(n-1)",
         {{plain_margin<Expr::term_I, 0, 1>, point_value<Expr::term_I>, zero_bound, false}}},
        {"C5b", "I >= 0 on [0, pi/4]", Expr::term_I, 0.0, Interval(0.0, quarter), guard_m_8n, "m >= 8(n-1)",
         {{plain_margin<Expr::term_I, 0, 1>, point_value<Expr::term_I>, zero_bound, false}}},
        {"C6", "(1-h'^2)/h^2 >= -lambda^4 sin^2 r (sin^2 r + 1) / A^2", Expr::one_minus_hp2_over_h2, 0.0, full,
         no_guard, "", {{hp2_bound_margin, point_value<Expr::one_minus_hp2_over_h2>, hp2_bound, false}}},
        {"C7", "Ric(V,V) >= 1", Expr::ric_vv, 1.0, full, guard_m_4n, "m >= 4n",
         {{plain_margin<Expr::ric_vv, 1, 1>, point_value<Expr::ric_vv>, one_bound, false}}},
        {"C8", "Ric(H,H) >= 1", Expr::ric_hh, 1.0, full, no_guard, "",
         {{plain_margin<Expr::ric_hh, 1, 1>, point_value<Expr::ric_hh>, one_bound, false}}},
        {"C9", "Ric(U,U) >= 1", Expr::ric_uu, 1.0, full, no_guard, "",
         {{plain_margin<Expr::ric_uu, 1, 1>, point_value<Expr::ric_uu>, one_bound, false}}},
        {"C10", "Ric >= 1 in all three directions", Expr::ric_min, 1.0, full, no_guard, "",
         {{plain_margin<Expr::ric_min, 1, 1>, point_value<Expr::ric_min>, one_bound, false}}},
    };
    return registry;
}

inline const Claim& find_claim(std::string_view id) {
    for (const auto& c : claim_registry())
        if (c.id == id) return c;
    throw std::invalid_argument("unknown claim id: " + std::string(id));
}

// ---------------------------------------------------------------------------
// Certificates

enum class Status { verified, refuted, inconclusive };

inline std::string_view to_string(Status s) {
    switch (s) {
        case Status::verified: return "verified";
        case Status::refuted: return "refuted";
        case Status::inconclusive: return "inconclusive";
    }
    return "?";
}

struct Witness {
    double r;
    double value;  // double-precision value of the claim's quantity at r
    double bound;  // the bound it violates
};

struct Certificate {
    std::string claim_id;
    WarpParams params;
    Status status = Status::inconclusive;
    std::optional<Witness> witness;
    std::uint64_t boxes_processed = 0;
    Interval min_enclosure;
    int max_depth = 0;
    double wall_ms = 0.0;
};

struct CertifyOptions {
    int max_depth = 48;
    double min_width = 1e-14;
    unsigned workers = 1;
    int split_levels = 4;  // the domain is cut into 2^split_levels independent subtrees
};

namespace detail {

/// A point refutes a check when the rigorous margin at the point is negative
/// and the double-precision violation exceeds ten times the width of that
/// rigorous point enclosure.
inline std::optional<Witness> refute_at(const Claim& claim, double r, const Coeffs& c, const WarpParams& p) {
    const Interval point(r);
    const auto ti = trig_of(point);
    const auto td = trig_of(r);
    for (const auto& check : claim.checks) {
        const MarginEnclosure me = check.margin(ti, c, p);
        if (!(me.margin.hi() < 0.0)) continue;
        const double value = check.value(td, p.lambda, p);
        const double bound = check.bound(td, p.lambda, p);
        const double violation = check.upper ? value - bound : bound - value;
        if (violation > 10.0 * me.margin.width()) return Witness{r, value, bound};
    }
    return std::nullopt;
}

struct SubtreeResult {
    std::uint64_t boxes = 0;
    int depth = 0;
    bool inconclusive = false;
    bool has_min = false;
    Interval min_enclosure;
    std::optional<Witness> witness;
};

inline void fold_min(SubtreeResult& out, const Interval& v) {
    out.min_enclosure = out.has_min ? min(out.min_enclosure, v) : v;
    out.has_min = true;
}

inline SubtreeResult run_subtree(const Claim& claim, const Interval& root, int root_depth, const Coeffs& c,
                                 const WarpParams& p, const CertifyOptions& opt) {
    SubtreeResult out;
    struct Node {
        Interval box;
        int depth;
    };
    std::vector<Node> stack{{root, root_depth}};
    while (!stack.empty()) {
        const Node node = stack.back();
        stack.pop_back();
        ++out.boxes;
        out.depth = std::max(out.depth, node.depth);
        const auto t = trig_of(node.box);
        bool accepted = true;
        for (const auto& check : claim.checks) {
            if (!check.margin(t, c, p).accepted()) {
                accepted = false;
                break;
            }
        }
        const Interval value = eval_expr<Interval>(claim.expression, t, c.lam, c.l2, p.m, p.n);
        if (accepted) {
            fold_min(out, value);
            continue;
        }
        if (auto w = refute_at(claim, node.box.mid(), c, p)) {
            out.witness = w;
            fold_min(out, value);
            return out;
        }
        if (node.depth >= opt.max_depth || node.box.width() <= opt.min_width) {
            out.inconclusive = true;
            fold_min(out, value);
            continue;
        }
        const double mid = node.box.mid();
        stack.push_back({Interval(mid, node.box.hi()), node.depth + 1});
        stack.push_back({Interval(node.box.lo(), mid), node.depth + 1});
    }
    return out;
}

inline std::vector<Interval> split_uniformly(const Interval& domain, int levels) {
    std::vector<Interval> boxes{domain};
    for (int l = 0; l < levels; ++l) {
        std::vector<Interval> next;
        next.reserve(boxes.size() * 2);
        for (const auto& b : boxes) {
            const double mid = b.mid();
            next.emplace_back(b.lo(), mid);
            next.emplace_back(mid, b.hi());
        }
        boxes.swap(next);
    }
    return boxes;
}

}  // namespace detail

inline bool guard_holds(const Claim& claim, const WarpParams& p) { return claim.guard(p); }

/// Certifies one registered claim at params (lambda taken from params).
/// Throws DomainError when params violate the claim's guard.
inline Certificate certify_claim(std::string_view claim_id, const WarpParams& params, const CertifyOptions& opt = {}) {
    params.validate();
    const Claim& claim = find_claim(claim_id);
    if (!claim.guard(params)) throw DomainError("claim " + claim.id + " requires " + claim.guard_text);
    if (opt.max_depth < 1 || !(opt.min_width > 0.0)) throw DomainError("max_depth must be >= 1 and min_width > 0");
    const auto start = std::chrono::steady_clock::now();
    const auto coeffs = detail::coeffs_of(params.lambda);

    Certificate cert;
    cert.claim_id = claim.id;
    cert.params = params;

    // endpoints and midpoint first: cheap refutations such as r = pi/2
    for (double r : {claim.domain.lo(), claim.domain.hi(), claim.domain.mid()}) {
        ++cert.boxes_processed;
        if (auto w = detail::refute_at(claim, r, coeffs, params)) {
            cert.status = Status::refuted;
            cert.witness = w;
            cert.min_enclosure = interval_eval(claim.expression, Interval(r), params.lambda, params.m, params.n);
            cert.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            return cert;
        }
    }

    const int levels = std::clamp(opt.split_levels, 0, std::max(0, opt.max_depth - 1));
    const auto roots = detail::split_uniformly(claim.domain, levels);
    std::vector<detail::SubtreeResult> results(roots.size());
    parallel_for(roots.size(), opt.workers, [&](std::size_t i) {
        results[i] = detail::run_subtree(claim, roots[i], levels, coeffs, params, opt);
    });

    bool inconclusive = false;
    bool has_min = false;
    for (const auto& r : results) {
        cert.boxes_processed += r.boxes;
        cert.max_depth = std::max(cert.max_depth, r.depth);
        if (r.has_min) {
            cert.min_enclosure = has_min ? min(cert.min_enclosure, r.min_enclosure) : r.min_enclosure;
            has_min = true;
        }
        inconclusive = inconclusive || r.inconclusive;
        if (r.witness && !cert.witness) cert.witness = r.witness;
    }
    cert.status = cert.witness ? Status::refuted : inconclusive ? Status::inconclusive : Status::verified;
    cert.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return cert;
}

struct TheoremSummary {
    std::vector<Certificate> certificates;
    bool all_verified = false;
};

/// Ric >= 1 (claim C10) at each lambda of the list.
inline TheoremSummary certify_theorem(int m, int n, std::span<const double> lambdas, const CertifyOptions& opt = {}) {
    TheoremSummary out;
    out.all_verified = !lambdas.empty();
    for (double lambda : lambdas) {
        out.certificates.push_back(certify_claim("C10", {lambda, m, n}, opt));
        out.all_verified = out.all_verified && out.certificates.back().status == Status::verified;
    }
    return out;
}

struct RegistryEntry {
    std::string claim_id;
    double lambda;
    std::optional<Certificate> certificate;  // empty when the claim's guard excludes (m, n)
};

/// Status matrix over every registered claim and every lambda, row-major by claim.
inline std::vector<RegistryEntry> registry_report(int m, int n, std::span<const double> lambdas,
                                                  const CertifyOptions& opt = {}) {
    std::vector<RegistryEntry> out;
    for (const auto& claim : claim_registry()) {
        for (double lambda : lambdas) {
            const WarpParams p{lambda, m, n};
            p.validate();
            RegistryEntry e{claim.id, lambda, std::nullopt};
            if (claim.guard(p)) e.certificate = certify_claim(claim.id, p, opt);
            out.push_back(std::move(e));
        }
    }
    return out;
}

}  // namespace grushin
