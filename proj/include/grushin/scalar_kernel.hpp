#pragma once

// Warping functions of the doubly warped product
//   g = dr^2 + f(r)^2 ds_m^2 + h(r)^2 ds_{n-1}^2,   r in [0, pi/2],
//   f(r) = sin r / (1 + lambda^2 sin^2 r)^{1/4},
//   h(r) = (1/lambda^2 + tan^2 r)^{-1/2},
// and the closed forms of the curvature ratios built from them.
//
// Every closed form is written once as a template over the scalar type and
// fed with a Trig<T> bundle (sin, cos and their squares) so that the same
// expression serves double evaluation, long double reference evaluation and
// rigorous Interval enclosure.

#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "grushin/interval.hpp"

namespace grushin {

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Parameters (lambda, m, n) of the metric family. m is the dimension of the
/// collapsing sphere, n - 1 the dimension of the surviving one.
struct WarpParams {
    double lambda = 1.0;
    int m = 8;
    int n = 2;

    void validate() const {
        if (!(lambda >= 1.0) || !std::isfinite(lambda))
            throw DomainError("lambda must be a finite value >= 1, got " + std::to_string(lambda));
        if (m < 1) throw DomainError("m must be >= 1, got " + std::to_string(m));
        if (n < 2) throw DomainError("n must be >= 2, got " + std::to_string(n));
    }
};

inline void check_radius(double r) {
    if (!(r >= 0.0 && r <= kHalfPi)) throw DomainError("r must lie in [0, pi/2], got " + std::to_string(r));
}

inline void check_lambda(double lambda) {
    if (!(lambda >= 1.0) || !std::isfinite(lambda))
        throw DomainError("lambda must be a finite value >= 1, got " + std::to_string(lambda));
}

template <class T>
struct Trig {
    T s;
    T c;
    T s2;
    T c2;
};

template <class T>
Trig<T> trig_of(T r) {
    using std::cos;
    using std::sin;
    const T s = sin(r);
    const T c = cos(r);
    return {s, c, s * s, c * c};
}

/// Rigorous trig bundle for a box inside [0, pi/2]. Each square is the
/// intersection of two enclosures (s*s and 1 - c*c, and symmetrically).
inline Trig<Interval> trig_of(const Interval& box) {
    const Interval s = sin_quarter(box);
    const Interval c = cos_quarter(box);
    const Interval sin2 = sqr(s);
    const Interval cos2 = sqr(c);
    return {s, c, intersect(sin2, Interval(1.0) - cos2), intersect(cos2, Interval(1.0) - sin2)};
}

namespace closed_form {

// B^{1/4} as two square roots.
template <class T>
T quarter_root(const T& b) {
    using std::sqrt;
    return sqrt(sqrt(b));
}

template <class T>
T aux_A(const Trig<T>& t, const T& l2) {
    // 1 + (lambda^2 - 1) s^2: one occurrence of r, so box enclosures stay tight
    return T(1.0) + (l2 - T(1.0)) * t.s2;
}

template <class T>
T aux_B(const Trig<T>& t, const T& l2) {
    return l2 * t.s2 + T(1.0);
}

template <class T>
T warp_f(const Trig<T>& t, const T& l2) {
    return t.s / quarter_root(aux_B(t, l2));
}

/// h in the algebraic form lambda cos r / sqrt(A), finite at r = pi/2.
template <class T>
T warp_h(const Trig<T>& t, const T& lam, const T& l2) {
    using std::sqrt;
    return lam * t.c / sqrt(aux_A(t, l2));
}

/// f' = cos r (B + 1) / (2 B^{5/4})
template <class T>
T fprime(const Trig<T>& t, const T& l2) {
    const T b = aux_B(t, l2);
    return t.c * (b + T(1.0)) / (T(2.0) * b * quarter_root(b));
}

/// h' = -lambda^3 sin r / A^{3/2}
template <class T>
T hprime(const Trig<T>& t, const T& lam, const T& l2) {
    using std::sqrt;
    const T a = aux_A(t, l2);
    return -(lam * l2 * t.s) / (a * sqrt(a));
}

/// -f''/f = (lambda^4 s^4 + lambda^4 s^2 + 6 lambda^2 + 4) / (4 B^2)
template <class T>
T neg_fpp_over_f(const Trig<T>& t, const T& l2) {
    const T l4 = l2 * l2;
    const T b = aux_B(t, l2);
    return (l4 * t.s2 * t.s2 + l4 * t.s2 + T(6.0) * l2 + T(4.0)) / (T(4.0) * b * b);
}

/// -f'h'/(f h) = lambda^2 (B + 1) / (2 A B)
template <class T>
T neg_fphp_over_fh(const Trig<T>& t, const T& l2) {
    const T a = aux_A(t, l2);
    const T b = aux_B(t, l2);
    return l2 * (b + T(1.0)) / (T(2.0) * a * b);
}

/// -h''/h = lambda^2 ((2 - 2 lambda^2) s^2 + 1) / A^2
template <class T>
T neg_hpp_over_h(const Trig<T>& t, const T& l2) {
    const T a = aux_A(t, l2);
    return l2 * ((T(2.0) - T(2.0) * l2) * t.s2 + T(1.0)) / (a * a);
}

/// (1 - h'^2)/h^2 = (A^3 - lambda^6 s^2) / (lambda^2 A^2 cos^2 r); singular at pi/2.
template <class T>
T one_minus_hp2_over_h2_direct(const Trig<T>& t, const T& l2) {
    const T a = aux_A(t, l2);
    return (a * a * a - l2 * l2 * l2 * t.s2) / (l2 * a * a * t.c2);
}

/// Same quantity with the factor cos^2 r cancelled exactly:
///   [-2 L^3 + 3 L^2 + 3 L (L-1)^2 u - (L-1)^3 u^2] / (L A^2),  L = lambda^2, u = cos^2 r.
/// Finite on the whole interval; loses relative accuracy for large lambda
/// when u is close to 1, so the point path only uses it for u < 1/4.
template <class T>
T one_minus_hp2_over_h2_regular(const Trig<T>& t, const T& l2) {
    const T a = aux_A(t, l2);
    const T k = l2 - T(1.0);
    const T u = t.c2;
    const T num = T(-2.0) * l2 * l2 * l2 + T(3.0) * l2 * l2 + (T(3.0) * l2 * k * k - k * k * k * u) * u;
    return num / (l2 * a * a);
}

template <class T>
T one_minus_hp2_over_h2(const Trig<T>& t, const T& l2) {
    if constexpr (std::is_same_v<T, Interval>) {
        const Interval reg = one_minus_hp2_over_h2_regular(t, l2);
        if (t.c2.lo() > 0.0) return intersect(reg, one_minus_hp2_over_h2_direct(t, l2));
        return reg;
    } else {
        if (t.c2 < T(0.25)) return one_minus_hp2_over_h2_regular(t, l2);
        return one_minus_hp2_over_h2_direct(t, l2);
    }
}

/// Numerator of 1 - f' after rationalisation, divided by sin^2 r:
///   (16 B^5 - cos^4 r (B+1)^4) / sin^2 r
///     = lambda^2 (48 + 136 x + 152 x^2 + 79 x^3 + 16 x^4) + (2 - s^2)(B+1)^4,  x = lambda^2 s^2.
/// Every term is nonnegative on [0, pi/2].
template <class T>
T fprime_defect_cofactor(const Trig<T>& t, const T& l2) {
    const T x = l2 * t.s2;
    const T b1 = aux_B(t, l2) + T(1.0);
    const T b1_2 = b1 * b1;
    const T poly = T(48.0) + x * (T(136.0) + x * (T(152.0) + x * (T(79.0) + x * T(16.0))));
    return l2 * poly + (T(2.0) - t.s2) * b1_2 * b1_2;
}

/// (1 - f') / sin^2 r
///   = Q / [2 B^{5/4} (2 B^{5/4} + cos r (B+1)) (4 B^{5/2} + cos^2 r (B+1)^2)],
/// with Q the cofactor above; positive on [0, pi/2].
template <class T>
T fprime_defect_over_s2(const Trig<T>& t, const T& l2) {
    using std::sqrt;
    const T b = aux_B(t, l2);
    const T b1 = b + T(1.0);
    const T b54 = b * quarter_root(b);
    const T b52 = b * b * sqrt(b);
    const T den = T(2.0) * b54 * (T(2.0) * b54 + t.c * b1) * (T(4.0) * b52 + t.c2 * b1 * b1);
    return fprime_defect_cofactor(t, l2) / den;
}

/// (1 - f'^2)/f^2, nonsingular form valid on all of [0, pi/2].
template <class T>
T one_minus_fp2_over_f2(const Trig<T>& t, const T& l2) {
    using std::sqrt;
    const T b = aux_B(t, l2);
    const T b1 = b + T(1.0);
    const T b52 = b * b * sqrt(b);
    return fprime_defect_cofactor(t, l2) / (T(4.0) * b * b * (T(4.0) * b52 + t.c2 * b1 * b1));
}

}  // namespace closed_form

// ---------------------------------------------------------------------------
// double-precision public surface

struct AuxAB {
    double A;
    double B;
};

inline double warp_f(double r, double lambda) {
    check_radius(r);
    check_lambda(lambda);
    return closed_form::warp_f(trig_of(r), lambda * lambda);
}

inline double warp_h(double r, double lambda) {
    check_radius(r);
    check_lambda(lambda);
    return closed_form::warp_h(trig_of(r), lambda, lambda * lambda);
}

inline AuxAB aux_AB(double r, double lambda) {
    check_radius(r);
    check_lambda(lambda);
    const auto t = trig_of(r);
    const double l2 = lambda * lambda;
    return {closed_form::aux_A(t, l2), closed_form::aux_B(t, l2)};
}

inline double fprime(double r, double lambda) {
    check_radius(r);
    check_lambda(lambda);
    return closed_form::fprime(trig_of(r), lambda * lambda);
}

inline double hprime(double r, double lambda) {
    check_radius(r);
    check_lambda(lambda);
    return closed_form::hprime(trig_of(r), lambda, lambda * lambda);
}

inline double ratio_neg_fpp_over_f(double r, double lambda) {
    check_radius(r);
    check_lambda(lambda);
    return closed_form::neg_fpp_over_f(trig_of(r), lambda * lambda);
}

inline double ratio_neg_fphp_over_fh(double r, double lambda) {
    check_radius(r);
    check_lambda(lambda);
    return closed_form::neg_fphp_over_fh(trig_of(r), lambda * lambda);
}

inline double ratio_neg_hpp_over_h(double r, double lambda) {
    check_radius(r);
    check_lambda(lambda);
    return closed_form::neg_hpp_over_h(trig_of(r), lambda * lambda);
}

inline double ratio_one_minus_hp2_over_h2(double r, double lambda) {
    check_radius(r);
    check_lambda(lambda);
    return closed_form::one_minus_hp2_over_h2(trig_of(r), lambda * lambda);
}

inline double ratio_one_minus_fp2_over_f2(double r, double lambda) {
    check_radius(r);
    check_lambda(lambda);
    return closed_form::one_minus_fp2_over_f2(trig_of(r), lambda * lambda);
}

/// f'' = -f * (-f''/f); smooth at both ends.
inline double fsecond(double r, double lambda) { return -warp_f(r, lambda) * ratio_neg_fpp_over_f(r, lambda); }

inline double hsecond(double r, double lambda) { return -warp_h(r, lambda) * ratio_neg_hpp_over_h(r, lambda); }

// ---------------------------------------------------------------------------
// Second-order forward-mode jets. Used as the independent derivative oracle:
// the warping functions are differentiated from their defining formulas, never
// from the simplified closed forms above.

template <class T>
struct Jet2 {
    T value{};
    T d1{};
    T d2{};

    static Jet2 variable(T x) { return {x, T(1), T(0)}; }
    static Jet2 constant(T x) { return {x, T(0), T(0)}; }
};

template <class T>
Jet2<T> operator+(const Jet2<T>& a, const Jet2<T>& b) {
    return {a.value + b.value, a.d1 + b.d1, a.d2 + b.d2};
}
template <class T>
Jet2<T> operator-(const Jet2<T>& a, const Jet2<T>& b) {
    return {a.value - b.value, a.d1 - b.d1, a.d2 - b.d2};
}
template <class T>
Jet2<T> operator-(const Jet2<T>& a) {
    return {-a.value, -a.d1, -a.d2};
}
template <class T>
Jet2<T> operator*(const Jet2<T>& a, const Jet2<T>& b) {
    return {a.value * b.value, a.d1 * b.value + a.value * b.d1,
            a.d2 * b.value + T(2) * a.d1 * b.d1 + a.value * b.d2};
}
template <class T>
Jet2<T> operator*(T k, const Jet2<T>& a) {
    return {k * a.value, k * a.d1, k * a.d2};
}
template <class T>
Jet2<T> operator+(T k, const Jet2<T>& a) {
    return {k + a.value, a.d1, a.d2};
}

/// Composition with a scalar function g given g(x), g'(x), g''(x).
template <class T>
Jet2<T> compose(const Jet2<T>& a, T g0, T g1, T g2) {
    return {g0, g1 * a.d1, g2 * a.d1 * a.d1 + g1 * a.d2};
}

template <class T>
Jet2<T> operator/(const Jet2<T>& a, const Jet2<T>& b) {
    const T inv = T(1) / b.value;
    const Jet2<T> recip = compose(b, inv, -inv * inv, T(2) * inv * inv * inv);
    return a * recip;
}

template <class T>
Jet2<T> sin(const Jet2<T>& a) {
    using std::cos;
    using std::sin;
    const T s = sin(a.value);
    return compose(a, s, cos(a.value), -s);
}
template <class T>
Jet2<T> cos(const Jet2<T>& a) {
    using std::cos;
    using std::sin;
    const T c = cos(a.value);
    return compose(a, c, -sin(a.value), -c);
}
template <class T>
Jet2<T> tan(const Jet2<T>& a) {
    using std::tan;
    const T t = tan(a.value);
    const T sec2 = T(1) + t * t;
    return compose(a, t, sec2, T(2) * t * sec2);
}
/// x^p for real p and x > 0.
template <class T>
Jet2<T> pow(const Jet2<T>& a, T p) {
    using std::pow;
    const T x = a.value;
    const T v = pow(x, p);
    return compose(a, v, p * v / x, p * (p - T(1)) * v / (x * x));
}

enum class Warp { f, h };

/// Value, first and second r-derivatives of f or h, computed in extended
/// precision from the defining formulas. h goes through tan r; at r = pi/2
/// the double nearest pi/2 keeps tan finite, so the endpoint is evaluated
/// one-sidedly at that abscissa.
inline Jet2<double> jet2_eval(Warp which, double r, double lambda) {
    check_radius(r);
    check_lambda(lambda);
    using L = long double;
    const auto x = Jet2<L>::variable(static_cast<L>(r));
    const L lam = lambda;
    Jet2<L> out;
    if (which == Warp::f) {
        const auto s = sin(x);
        out = s * pow(L(1) + (lam * lam) * (s * s), L(-0.25));
    } else {
        const auto t = tan(x);
        out = pow(L(1) / (lam * lam) + t * t, L(-0.5));
    }
    return {static_cast<double>(out.value), static_cast<double>(out.d1), static_cast<double>(out.d2)};
}

}  // namespace grushin
