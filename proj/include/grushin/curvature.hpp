#pragma once

// Ricci curvature of the doubly warped product in the three principal
// directions: H = d/dr, U tangent to S^m, V tangent to S^{n-1}.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

#include "grushin/scalar_kernel.hpp"

namespace grushin {

struct RicComponents {
    double hh;
    double uu;
    double vv;

    [[nodiscard]] double min() const { return std::min({hh, uu, vv}); }
};

struct TermI {
    double value;
};

namespace closed_form {

template <class T>
T ric_hh(const Trig<T>& t, const T& l2, int m, int n) {
    return T(double(m)) * neg_fpp_over_f(t, l2) + T(double(n - 1)) * neg_hpp_over_h(t, l2);
}

template <class T>
T ric_uu(const Trig<T>& t, const T& l2, int m, int n) {
    return neg_fpp_over_f(t, l2) + T(double(m - 1)) * one_minus_fp2_over_f2(t, l2) +
           T(double(n - 1)) * neg_fphp_over_fh(t, l2);
}

template <class T>
T ric_vv(const Trig<T>& t, const T& l2, int m, int n) {
    T out = neg_hpp_over_h(t, l2) + T(double(m)) * neg_fphp_over_fh(t, l2);
    // n = 2: the S^1 fiber carries no sectional term, skip the singular ratio
    if (n > 2) out = out + T(double(n - 2)) * one_minus_hp2_over_h2(t, l2);
    return out;
}

/// I = m A^2 (l^4 s^4 + l^4 s^2 + 6 l^2 + 4) - 8 (n-1) B^2 l^4 s^2,
/// evaluated as a polynomial in s^2 (Horner) with coefficients in lambda^2.
template <class T>
T term_I(const Trig<T>& t, const T& l2, int m, int n) {
    const T l4 = l2 * l2;
    const T k = l2 - T(1.0);  // A = 1 + k s^2
    const T mm = T(double(m));
    const T nn = T(8.0 * double(n - 1));
    const T u = t.s2;
    // m (1 + k u)^2 (l4 u^2 + l4 u + 6 l2 + 4)
    const T p0 = T(6.0) * l2 + T(4.0);
    // (1 + 2k u + k^2 u^2)(p0 + l4 u + l4 u^2) coefficients
    const T c0 = p0;
    const T c1 = l4 + T(2.0) * k * p0;
    const T c2 = l4 + T(2.0) * k * l4 + k * k * p0;
    const T c3 = T(2.0) * k * l4 + k * k * l4;
    const T c4 = k * k * l4;
    // 8(n-1) l4 u (1 + l2 u)^2 coefficients
    const T d1 = nn * l4;
    const T d2 = nn * l4 * T(2.0) * l2;
    const T d3 = nn * l4 * l2 * l2;
    const T e0 = mm * c0;
    const T e1 = mm * c1 - d1;
    const T e2 = mm * c2 - d2;
    const T e3 = mm * c3 - d3;
    const T e4 = mm * c4;
    return e0 + u * (e1 + u * (e2 + u * (e3 + u * e4)));
}

}  // namespace closed_form

inline double ric_hh(double r, const WarpParams& p) {
    p.validate();
    check_radius(r);
    return closed_form::ric_hh(trig_of(r), p.lambda * p.lambda, p.m, p.n);
}

inline double ric_uu(double r, const WarpParams& p) {
    p.validate();
    check_radius(r);
    return closed_form::ric_uu(trig_of(r), p.lambda * p.lambda, p.m, p.n);
}

inline double ric_vv(double r, const WarpParams& p) {
    p.validate();
    check_radius(r);
    return closed_form::ric_vv(trig_of(r), p.lambda * p.lambda, p.m, p.n);
}

inline RicComponents ricci(double r, const WarpParams& p) { return {ric_hh(r, p), ric_uu(r, p), ric_vv(r, p)}; }

inline TermI term_I(double r, const WarpParams& p) {
    p.validate();
    check_radius(r);
    return {closed_form::term_I(trig_of(r), p.lambda * p.lambda, p.m, p.n)};
}

/// The lower estimate for Ric(H,H) in terms of I: I / (4 A^2 B^2) + 1.
inline double ric_hh_estimate_from_I(double r, const WarpParams& p) {
    const auto ab = aux_AB(r, p.lambda);
    return term_I(r, p).value / (4.0 * ab.A * ab.A * ab.B * ab.B) + 1.0;
}

/// Pointwise lower bound for -h''/h used on the way to Ric(H,H):
/// -2 lambda^4 sin^2 r / A^2 + 1.
inline double neg_hpp_over_h_bound(double r, double lambda) {
    const auto ab = aux_AB(r, lambda);
    const double s = std::sin(r);
    const double l4 = lambda * lambda * lambda * lambda;
    return -2.0 * l4 * s * s / (ab.A * ab.A) + 1.0;
}

/// Lower bound for (1 - h'^2)/h^2: -lambda^4 s^2 (s^2 + 1) / A^2.
inline double one_minus_hp2_over_h2_bound(double r, double lambda) {
    const auto ab = aux_AB(r, lambda);
    const double s2 = std::sin(r) * std::sin(r);
    const double l4 = lambda * lambda * lambda * lambda;
    return -l4 * s2 * (s2 + 1.0) / (ab.A * ab.A);
}

/// Lower estimates for I on the two halves of the interval, obtained by
/// keeping only selected positive monomials:
///   r in [pi/4, pi/2]: m(l^8 s^6 + 6 l^6 s^4 + 4 l^4 s^4) - 8(n-1)(l^8 s^6 + 2 l^6 s^4 + l^4 s^2)
///   r in [0, pi/4]:    m(l^8 s^6 + 6 l^6 s^4 + 12 l^4 s^2 c^2) - 8(n-1)(...)
inline double term_I_upper_half_estimate(double r, const WarpParams& p) {
    const double s2 = std::sin(r) * std::sin(r);
    const double l2 = p.lambda * p.lambda;
    const double l4 = l2 * l2;
    const double l6 = l4 * l2;
    const double l8 = l4 * l4;
    const double neg = l8 * s2 * s2 * s2 + 2.0 * l6 * s2 * s2 + l4 * s2;
    return p.m * (l8 * s2 * s2 * s2 + 6.0 * l6 * s2 * s2 + 4.0 * l4 * s2 * s2) - 8.0 * (p.n - 1) * neg;
}

inline double term_I_lower_half_estimate(double r, const WarpParams& p) {
    const double s2 = std::sin(r) * std::sin(r);
    const double c2 = std::cos(r) * std::cos(r);
    const double l2 = p.lambda * p.lambda;
    const double l4 = l2 * l2;
    const double l6 = l4 * l2;
    const double l8 = l4 * l4;
    const double neg = l8 * s2 * s2 * s2 + 2.0 * l6 * s2 * s2 + l4 * s2;
    return p.m * (l8 * s2 * s2 * s2 + 6.0 * l6 * s2 * s2 + 12.0 * l4 * s2 * c2) - 8.0 * (p.n - 1) * neg;
}

enum class RicDirection { hh, uu, vv };

struct RicMinScan {
    double min_value;
    double argmin_r;
    RicDirection argmin_direction;
};

/// Minimum of the three components over a uniform grid on [0, pi/2] that
/// includes both endpoints. Ties resolve to the first grid point and to the
/// order hh, uu, vv, so the result does not depend on evaluation order.
inline RicMinScan ric_min_scan(const WarpParams& p, std::size_t grid_size) {
    p.validate();
    if (grid_size < 2) throw DomainError("grid_size must be >= 2");
    RicMinScan best{std::numeric_limits<double>::infinity(), 0.0, RicDirection::hh};
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double r = i + 1 == grid_size ? kHalfPi : kHalfPi * double(i) / double(grid_size - 1);
        const auto ric = ricci(r, p);
        const std::pair<double, RicDirection> parts[3] = {
            {ric.hh, RicDirection::hh}, {ric.uu, RicDirection::uu}, {ric.vv, RicDirection::vv}};
        for (const auto& [value, dir] : parts) {
            if (value < best.min_value) best = {value, r, dir};
        }
    }
    return best;
}

}  // namespace grushin
