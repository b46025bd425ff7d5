#pragma once

// The three reduced metrics, all of the form
//   dx^2 + sum_i G_i(x)^2 dtheta_i^2
// with one radial coordinate x and one or two fiber coordinates theta_i.
//
//   SphereDWP         (r, alpha, beta): G = (f_lambda, h_lambda), x in [0, pi/2]
//   LimitHemisphere   (phi, beta):      G = cot(phi),           x in (0, pi/2]
//   GrushinHalfplane  (x, y):           G = x^(-alpha),         x > 0
//
// Fiber coordinates of the first two are angles on great circles, so only
// their separation modulo 2*pi matters. Collapsed ends are reflections of the
// radial coordinate: crossing r = 0 moves alpha to the antipode, crossing
// r = pi/2 moves beta to the antipode, and so on.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "grushin/scalar_kernel.hpp"

namespace grushin {

struct SphereDWP {
    WarpParams params;
};

struct LimitHemisphere {
    int n = 2;
};

struct GrushinHalfplane {
    double alpha = 1.0;
};

using MetricSpec = std::variant<SphereDWP, LimitHemisphere, GrushinHalfplane>;

/// (r, alpha, beta) | (phi, beta, -) | (x, y, -)
struct ReducedPoint {
    double radial = 0.0;
    std::array<double, 2> fiber{0.0, 0.0};

    friend bool operator==(const ReducedPoint&, const ReducedPoint&) = default;
};

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kPi = std::numbers::pi;

/// Fiber scale below which a fiber counts as collapsed at a point.
inline constexpr double kCollapsed = 1e-6;

inline std::string spec_name(const MetricSpec& spec) {
    switch (spec.index()) {
        case 0: return "sphere";
        case 1: return "hemisphere";
        default: return "grushin";
    }
}

inline void validate(const MetricSpec& spec) {
    if (const auto* s = std::get_if<SphereDWP>(&spec)) s->params.validate();
    if (const auto* h = std::get_if<LimitHemisphere>(&spec); h && h->n < 2)
        throw DomainError("hemisphere dimension n must be >= 2");
    if (const auto* g = std::get_if<GrushinHalfplane>(&spec); g && !(g->alpha > 0.0 && std::isfinite(g->alpha)))
        throw DomainError("Grushin alpha must be a finite real > 0");
}

inline int fiber_count(const MetricSpec& spec) { return spec.index() == 0 ? 2 : 1; }

inline bool fiber_periodic(const MetricSpec& spec) { return spec.index() != 2; }

/// Lower and upper end of the radial chart coordinate.
inline std::array<double, 2> radial_range(const MetricSpec& spec) {
    if (spec.index() == 2) return {0.0, std::numeric_limits<double>::infinity()};
    return {0.0, kHalfPi};
}

/// Radial reflections generating the identifications of the extended chart.
struct Reflection {
    double at;
    int shifted_fiber;  // fiber moved by pi on crossing, -1 for none
};

inline std::vector<Reflection> reflections(const MetricSpec& spec) {
    switch (spec.index()) {
        case 0: return {{0.0, 0}, {kHalfPi, 1}};
        case 1: return {{0.0, -1}, {kHalfPi, 0}};
        default: return {{0.0, -1}};
    }
}

/// Evaluation of the metric coefficients without variant dispatch in inner loops.
class ReducedModel {
public:
    explicit ReducedModel(const MetricSpec& spec) : kind_(static_cast<int>(spec.index())) {
        validate(spec);
        if (kind_ == 0) {
            const double lam = std::get<SphereDWP>(spec).params.lambda;
            l2_ = lam * lam;
        } else if (kind_ == 2) {
            alpha_ = std::get<GrushinHalfplane>(spec).alpha;
        }
    }

    [[nodiscard]] int fibers() const { return kind_ == 0 ? 2 : 1; }

    /// G_i(x)^2 on the chart.
    [[nodiscard]] double scale2(int i, double x) const {
        switch (kind_) {
            case 0: {
                const double s = std::sin(x), c = std::cos(x);
                if (i == 0) return s * s / std::sqrt(1.0 + l2_ * s * s);
                return l2_ * c * c / (1.0 + (l2_ - 1.0) * s * s);
            }
            case 1: {
                const double t = std::cos(x) / std::sin(x);
                return t * t;
            }
            default: return std::pow(std::fabs(x), -2.0 * alpha_);
        }
    }

    [[nodiscard]] double scale(int i, double x) const { return std::sqrt(scale2(i, x)); }

    /// w = 1/G^2 and dw/dx, smooth across the reflections of the extended chart.
    struct Weight {
        double w;
        double dw;
    };

    [[nodiscard]] Weight weight(int i, double x) const {
        switch (kind_) {
            case 0: {
                const double s = std::sin(x), c = std::cos(x);
                if (i == 0) {
                    const double sb = std::sqrt(1.0 + l2_ * s * s);
                    return {sb / (s * s), -c * (l2_ * s * s + 2.0) / (s * s * s * sb)};
                }
                const double t = s / c;
                return {1.0 / l2_ + t * t, 2.0 * t / (c * c)};
            }
            case 1: {
                const double c = std::cos(x);
                const double t = std::sin(x) / c;
                return {t * t, 2.0 * t / (c * c)};
            }
            default: {
                const double ax = std::fabs(x);
                const double w = std::pow(ax, 2.0 * alpha_);
                const double dw = ax == 0.0 ? (alpha_ > 0.5 ? 0.0 : std::numeric_limits<double>::infinity())
                                            : 2.0 * alpha_ * w / x;
                return {w, dw};
            }
        }
    }

private:
    int kind_;
    double l2_ = 1.0;
    double alpha_ = 1.0;
};

/// Separation of two fiber coordinates: angle in [0, pi] for great-circle
/// fibers, |difference| for the Grushin y axis.
inline double fiber_separation(const MetricSpec& spec, double a, double b) {
    if (!fiber_periodic(spec)) return std::fabs(b - a);
    double d = std::fmod(std::fabs(b - a), 2.0 * kPi);
    return d > kPi ? 2.0 * kPi - d : d;
}

/// Angle reduced to (-pi, pi].
inline double wrap_angle(double a) {
    double r = a - 2.0 * kPi * std::nearbyint(a / (2.0 * kPi));
    if (r <= -kPi) r += 2.0 * kPi;
    if (r > kPi) r -= 2.0 * kPi;
    return r;
}

/// Maps a point of the extended chart (radial coordinate anywhere) to the chart.
inline ReducedPoint fold(const MetricSpec& spec, ReducedPoint p) {
    const auto refl = reflections(spec);
    for (int guard = 0; guard < 64; ++guard) {
        bool moved = false;
        for (std::size_t k = 0; k < refl.size(); ++k) {
            const auto& rf = refl[k];
            const bool below = k == 0 && p.radial < rf.at;
            const bool above = k == 1 && p.radial > rf.at;
            if (below || above) {
                p.radial = 2.0 * rf.at - p.radial;
                if (rf.shifted_fiber >= 0) p.fiber[rf.shifted_fiber] += kPi;
                moved = true;
            }
        }
        if (!moved) break;
    }
    if (fiber_periodic(spec))
        for (int i = 0; i < fiber_count(spec); ++i) p.fiber[i] = wrap_angle(p.fiber[i]);
    return p;
}

/// True on the metric-completion boundary: the hemisphere equator or the
/// Grushin singular line.
inline bool on_completion_boundary(const MetricSpec& spec, const ReducedPoint& p) {
    return spec.index() != 0 && p.radial == 0.0;
}

/// Checks that p lies in the closed chart (boundary points allowed on request).
inline void check_point(const MetricSpec& spec, const ReducedPoint& p, bool allow_boundary) {
    const auto range = radial_range(spec);
    if (!std::isfinite(p.radial) || !std::isfinite(p.fiber[0]) || !std::isfinite(p.fiber[1]))
        throw DomainError("point coordinates must be finite");
    if (p.radial < range[0] || p.radial > range[1])
        throw DomainError("radial coordinate " + std::to_string(p.radial) + " outside the chart");
    if (!allow_boundary && on_completion_boundary(spec, p))
        throw DomainError("point lies on the completion boundary; use boundary_distance");
}

}  // namespace grushin
