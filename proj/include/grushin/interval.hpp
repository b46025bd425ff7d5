#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace grushin {

/// Closed real interval [lo, hi] with rigorously rounded arithmetic.
///
/// The machine runs in round-to-nearest. Each primitive operation recovers its
/// exact rounding error with an error-free transformation (TwoSum, FMA) and
/// moves the bound one representable value outward only when the computed
/// result is inexact in the unsafe direction. Exact results (for example
/// 1*1 - 1) therefore stay exact, which the certifier relies on to recognise
/// structural zeros.
class Interval {
public:
    constexpr Interval() = default;
    constexpr Interval(double x) : lo_(x), hi_(x) {}  // NOLINT: implicit by design of mixed expressions
    Interval(double lo, double hi) : lo_(lo), hi_(hi) {
        if (!(lo <= hi)) throw std::invalid_argument("Interval: lo > hi");
    }

    [[nodiscard]] constexpr double lo() const { return lo_; }
    [[nodiscard]] constexpr double hi() const { return hi_; }
    [[nodiscard]] double width() const { return hi_ - lo_; }
    [[nodiscard]] double mid() const { return lo_ + 0.5 * (hi_ - lo_); }
    [[nodiscard]] bool contains(double x) const { return lo_ <= x && x <= hi_; }
    [[nodiscard]] bool subset_of(const Interval& o) const { return o.lo_ <= lo_ && hi_ <= o.hi_; }
    [[nodiscard]] bool is_point() const { return lo_ == hi_; }

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    double lo_ = 0.0;
    double hi_ = 0.0;
};

namespace detail {

inline constexpr double kTiny = 1e-280;

inline double down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
inline double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

// Sign of the exact rounding error (exact - computed) is passed as err.
inline double round_down(double computed, double err) { return err < 0.0 ? down(computed) : computed; }
inline double round_up(double computed, double err) { return err > 0.0 ? up(computed) : computed; }

inline double two_sum_err(double a, double b, double s) {
    const double bb = s - a;
    return (a - (s - bb)) + (b - bb);
}

inline double add_down(double a, double b) {
    const double s = a + b;
    if (!std::isfinite(s)) return s;
    return round_down(s, two_sum_err(a, b, s));
}
inline double add_up(double a, double b) {
    const double s = a + b;
    if (!std::isfinite(s)) return s;
    return round_up(s, two_sum_err(a, b, s));
}

// FMA residuals are exact unless the product is near the underflow range;
// there we fall back to unconditional widening.
inline double mul_down(double a, double b) {
    if (a == 0.0 || b == 0.0) return 0.0;
    const double p = a * b;
    if (!std::isfinite(p)) return p;
    if (std::fabs(p) < kTiny) return down(p);
    return round_down(p, std::fma(a, b, -p));
}
inline double mul_up(double a, double b) {
    if (a == 0.0 || b == 0.0) return 0.0;
    const double p = a * b;
    if (!std::isfinite(p)) return p;
    if (std::fabs(p) < kTiny) return up(p);
    return round_up(p, std::fma(a, b, -p));
}

inline double div_err_sign(double a, double b, double q) {
    // exact quotient = q + rho/b with rho = a - q*b computed exactly by FMA
    const double rho = std::fma(-q, b, a);
    return b > 0.0 ? rho : -rho;
}
inline double div_down(double a, double b) {
    if (a == 0.0) return 0.0;
    const double q = a / b;
    if (!std::isfinite(q)) return q;
    if (std::fabs(q) < kTiny) return down(q);
    return round_down(q, div_err_sign(a, b, q));
}
inline double div_up(double a, double b) {
    if (a == 0.0) return 0.0;
    const double q = a / b;
    if (!std::isfinite(q)) return q;
    if (std::fabs(q) < kTiny) return up(q);
    return round_up(q, div_err_sign(a, b, q));
}

inline double sqrt_down(double a) {
    if (a <= 0.0) return 0.0;
    const double s = std::sqrt(a);
    return round_down(s, std::fma(-s, s, a));
}
inline double sqrt_up(double a) {
    if (a <= 0.0) return 0.0;
    const double s = std::sqrt(a);
    return round_up(s, std::fma(-s, s, a));
}

}  // namespace detail

inline Interval operator+(const Interval& a, const Interval& b) {
    return {detail::add_down(a.lo(), b.lo()), detail::add_up(a.hi(), b.hi())};
}
inline Interval operator-(const Interval& a) { return {-a.hi(), -a.lo()}; }
inline Interval operator-(const Interval& a, const Interval& b) {
    return {detail::add_down(a.lo(), -b.hi()), detail::add_up(a.hi(), -b.lo())};
}
inline Interval operator*(const Interval& a, const Interval& b) {
    const double l[4] = {detail::mul_down(a.lo(), b.lo()), detail::mul_down(a.lo(), b.hi()),
                         detail::mul_down(a.hi(), b.lo()), detail::mul_down(a.hi(), b.hi())};
    const double h[4] = {detail::mul_up(a.lo(), b.lo()), detail::mul_up(a.lo(), b.hi()),
                         detail::mul_up(a.hi(), b.lo()), detail::mul_up(a.hi(), b.hi())};
    return {std::min({l[0], l[1], l[2], l[3]}), std::max({h[0], h[1], h[2], h[3]})};
}
inline Interval operator/(const Interval& a, const Interval& b) {
    if (b.lo() <= 0.0 && b.hi() >= 0.0) throw std::domain_error("Interval: division by an interval containing 0");
    const double l[4] = {detail::div_down(a.lo(), b.lo()), detail::div_down(a.lo(), b.hi()),
                         detail::div_down(a.hi(), b.lo()), detail::div_down(a.hi(), b.hi())};
    const double h[4] = {detail::div_up(a.lo(), b.lo()), detail::div_up(a.lo(), b.hi()),
                         detail::div_up(a.hi(), b.lo()), detail::div_up(a.hi(), b.hi())};
    return {std::min({l[0], l[1], l[2], l[3]}), std::max({h[0], h[1], h[2], h[3]})};
}

inline Interval& operator+=(Interval& a, const Interval& b) { return a = a + b; }
inline Interval& operator-=(Interval& a, const Interval& b) { return a = a - b; }
inline Interval& operator*=(Interval& a, const Interval& b) { return a = a * b; }
inline Interval& operator/=(Interval& a, const Interval& b) { return a = a / b; }

/// Square of an interval; tighter than a*a when the interval straddles 0.
inline Interval sqr(const Interval& a) {
    if (a.lo() >= 0.0) return {detail::mul_down(a.lo(), a.lo()), detail::mul_up(a.hi(), a.hi())};
    if (a.hi() <= 0.0) return {detail::mul_down(a.hi(), a.hi()), detail::mul_up(a.lo(), a.lo())};
    const double m = std::max(-a.lo(), a.hi());
    return {0.0, detail::mul_up(m, m)};
}

inline Interval sqrt(const Interval& a) {
    if (a.hi() < 0.0) throw std::domain_error("Interval: sqrt of a negative interval");
    return {detail::sqrt_down(a.lo()), detail::sqrt_up(a.hi())};
}

inline Interval hull(const Interval& a, const Interval& b) {
    return {std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

/// Intersection of two enclosures of the same quantity.
inline Interval intersect(const Interval& a, const Interval& b) {
    const double lo = std::max(a.lo(), b.lo());
    const double hi = std::min(a.hi(), b.hi());
    if (lo > hi) throw std::logic_error("Interval: disjoint enclosures of one quantity");
    return {lo, hi};
}

inline Interval min(const Interval& a, const Interval& b) {
    return {std::min(a.lo(), b.lo()), std::min(a.hi(), b.hi())};
}

inline Interval max(const Interval& a, const Interval& b) {
    return {std::max(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

/// Largest double not exceeding pi/2; every double in [0, kHalfPi] lies in
/// the closed quarter period where sin and cos are monotone.
inline constexpr double kHalfPi = std::numbers::pi / 2.0;

/// Enclosure of sin over a box inside [0, pi/2]. libm sin is accurate to
/// within one ulp, so one step outward per bound is sufficient.
inline Interval sin_quarter(const Interval& r) {
    if (r.lo() < 0.0 || r.hi() > kHalfPi) throw std::domain_error("sin_quarter: box outside [0, pi/2]");
    const double lo = r.lo() == 0.0 ? 0.0 : std::max(0.0, detail::down(std::sin(r.lo())));
    // a box reaching the top double also stands for the true pi/2
    const double hi = r.hi() == kHalfPi ? 1.0
                      : r.hi() == 0.0 ? 0.0
                                      : std::min(1.0, detail::up(std::sin(r.hi())));
    return {lo, hi};
}

/// Enclosure of cos over a box inside [0, pi/2].
inline Interval cos_quarter(const Interval& r) {
    if (r.lo() < 0.0 || r.hi() > kHalfPi) throw std::domain_error("cos_quarter: box outside [0, pi/2]");
    const double lo = r.hi() == kHalfPi ? 0.0
                      : r.hi() == 0.0 ? 1.0
                                      : std::max(0.0, detail::down(std::cos(r.hi())));
    const double hi = r.lo() == 0.0 ? 1.0 : std::min(1.0, detail::up(std::cos(r.lo())));
    return {lo, hi};
}

}  // namespace grushin
