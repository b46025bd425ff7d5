#pragma once

// Geodesics of the reduced metrics dx^2 + sum G_i^2 dtheta_i^2.
//
// The fiber momenta c_i = G_i^2 dtheta_i/ds are Clairaut constants, and the
// flow is integrated in Hamiltonian form on the extended radial line
//   x' = p,  p' = -1/2 sum c_i^2 (1/G_i^2)',  theta_i' = c_i / G_i^2,
// which passes through turning points without events and through collapsed
// ends by reflection (see metric.hpp). Distances come from multi-start
// shooting with Levenberg-Marquardt polishing.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include "grushin/metric.hpp"

namespace grushin {

struct PathSample {
    double s;
    ReducedPoint point;  // folded into the chart
};

struct PathResult {
    double length = 0.0;
    std::vector<PathSample> samples;
    std::array<double, 2> clairaut{0.0, 0.0};
    bool converged = false;
    double energy_drift = 0.0;  // max |p^2 + sum c_i^2/G_i^2 - 1| over samples
};

namespace detail {

using OdeState = std::array<double, 4>;  // x, p, theta_0, theta_1

struct HamiltonianFlow {
    const ReducedModel* model;
    std::array<double, 2> c;

    void operator()(const OdeState& y, OdeState& dy, double /*s*/) const {
        dy[0] = y[1];
        double force = 0.0;
        for (int i = 0; i < 2; ++i) {
            if (i >= model->fibers() || c[i] == 0.0) {
                dy[2 + i] = 0.0;
                continue;
            }
            const auto w = model->weight(i, y[0]);
            force += c[i] * c[i] * w.dw;
            dy[2 + i] = c[i] * w.w;
        }
        dy[1] = -0.5 * force;
    }

    [[nodiscard]] double energy(const OdeState& y) const {
        double e = y[1] * y[1];
        for (int i = 0; i < model->fibers(); ++i)
            if (c[i] != 0.0) e += c[i] * c[i] * model->weight(i, y[0]).w;
        return e;
    }
};

/// Integrates to arc length `length`; calls observe(s, y) on a uniform grid of
/// `samples` intervals when samples > 0.
inline constexpr long kMaxSteps = 200000;

inline OdeState failed_state() {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, nan, nan};
}

/// Integrates to arc length `length`; calls observe(s, y) on a uniform grid of
/// `samples` intervals when samples > 0. Returns a NaN state if the step
/// budget runs out (trajectories grazing a collapsed fiber).
template <class Observer>
OdeState integrate_flow(const HamiltonianFlow& flow, OdeState y, double length, double tol, int samples,
                        Observer&& observe) {
    namespace ode = boost::numeric::odeint;
    if (length <= 0.0) {
        if (samples > 0) observe(0.0, y);
        return y;
    }
    const double dt0 = std::min(1e-3, length);
    long steps = 0;
    if (samples > 0) {
        auto stepper = ode::make_dense_output(tol, tol, ode::runge_kutta_dopri5<OdeState>());
        const double ds = length / samples;
        stepper.initialize(y, 0.0, dt0);
        observe(0.0, y);
        for (int k = 1; k <= samples; ++k) {
            const double target = k == samples ? length : ds * k;
            while (stepper.current_time() < target) {
                stepper.do_step(std::cref(flow));
                if (++steps > kMaxSteps) return failed_state();
            }
            OdeState out;
            stepper.calc_state(target, out);
            observe(target, out);
            if (k == samples) y = out;
        }
        return y;
    }
    auto stepper = ode::make_controlled(tol, tol, ode::runge_kutta_dopri5<OdeState>());
    double s = 0.0, dt = dt0;
    while (s < length) {
        if (s + dt > length) dt = length - s;
        const double before = s;
        stepper.try_step(std::cref(flow), y, s, dt);
        if (++steps > kMaxSteps || !std::isfinite(y[0])) return failed_state();
        if (s == before && dt < 1e-300) return failed_state();
    }
    return y;
}

inline OdeState integrate_flow(const HamiltonianFlow& flow, OdeState y, double length, double tol) {
    return integrate_flow(flow, y, length, tol, 0, [](double, const OdeState&) {});
}

}  // namespace detail

/// Unit-speed geodesic from `start` with Clairaut constants (c_alpha, c_beta)
/// and initial radial direction `sign`, integrated to arc length max_len.
inline PathResult geodesic_ivp(const MetricSpec& spec, const ReducedPoint& start, double c_alpha, double c_beta,
                               int sign, double max_len, double tol, int samples = 256) {
    check_point(spec, start, false);
    if (sign != 1 && sign != -1) throw DomainError("sign must be +1 or -1");
    if (!(max_len >= 0.0) || !std::isfinite(max_len)) throw DomainError("max_len must be finite and >= 0");
    if (!(tol > 0.0)) throw DomainError("tol must be > 0");
    if (samples < 1) throw DomainError("samples must be >= 1");
    const ReducedModel model(spec);
    const std::array<double, 2> c{c_alpha, model.fibers() > 1 ? c_beta : 0.0};
    if (model.fibers() == 1 && c_beta != 0.0) throw DomainError("this metric has a single fiber; c_beta must be 0");
    double kinetic = 0.0;
    for (int i = 0; i < model.fibers(); ++i) {
        if (c[i] == 0.0) continue;
        const double g2 = model.scale2(i, start.radial);
        if (!(g2 > 0.0)) throw DomainError("nonzero Clairaut constant on a collapsed fiber");
        kinetic += c[i] * c[i] / g2;
    }
    if (kinetic > 1.0 + 1e-12) throw DomainError("initial data not admissible: c^2/G^2 exceeds 1");
    const detail::HamiltonianFlow flow{&model, c};
    detail::OdeState y{start.radial, sign * std::sqrt(std::max(0.0, 1.0 - kinetic)), start.fiber[0], start.fiber[1]};

    PathResult out;
    out.clairaut = c;
    out.samples.reserve(static_cast<std::size_t>(samples) + 1);
    detail::integrate_flow(flow, y, max_len, tol / 10.0, samples, [&](double s, const detail::OdeState& st) {
        ReducedPoint p{st[0], {st[2], st[3]}};
        out.samples.push_back({s, fold(spec, p)});
        out.energy_drift = std::max(out.energy_drift, std::fabs(flow.energy(st) - 1.0));
    });
    out.length = max_len;
    out.converged = true;
    return out;
}

/// Upper bound on d(p, q) from broken paths: move radially to level R, move
/// along both fibers at R, move radially to q; minimised over sampled R.
inline double broken_path_bound(const MetricSpec& spec, const ReducedPoint& p, const ReducedPoint& q) {
    const ReducedModel model(spec);
    const int k = model.fibers();
    std::array<double, 2> sep{0.0, 0.0};
    for (int i = 0; i < k; ++i) sep[i] = fiber_separation(spec, p.fiber[i], q.fiber[i]);
    const auto range = radial_range(spec);
    double lo = range[0], hi = range[1];
    if (!std::isfinite(hi)) {
        const double a = std::get<GrushinHalfplane>(spec).alpha;
        hi = std::max(p.radial, q.radial) + 2.0 * std::pow(1.0 + sep[0], 1.0 / (1.0 + a)) + 1.0;
    }
    const auto cost = [&](double R) {
        double len = std::fabs(p.radial - R) + std::fabs(q.radial - R);
        for (int i = 0; i < k; ++i) {
            if (sep[i] == 0.0) continue;
            const double g2 = model.scale2(i, R);
            len += std::isfinite(g2) ? std::sqrt(g2) * sep[i] : std::numeric_limits<double>::infinity();
        }
        return len;
    };
    double best = std::numeric_limits<double>::infinity();
    constexpr int kSamples = 400;
    for (int j = 0; j <= kSamples; ++j) {
        const double R = lo + (hi - lo) * j / kSamples;
        const double v = cost(R);
        if (v < best) best = v;
    }
    for (double R : {p.radial, q.radial}) best = std::min(best, cost(R));
    return best;
}

struct ShootingOptions {
    int seeds_polar = 24;    // polar seeds (radial direction angle)
    int seeds_azimuth = 24;  // azimuthal seeds (split between the two fibers)
    int seed_cluster = 8;    // geometric refinements towards radial and tangential directions
    int seed_cluster_2d = 0;  // the same for the polar axis with two active fibers
    int polish = 6;          // local minima of the seed residual that get polished
    int max_iter = 60;
    bool bidirectional = true;  // also shoot from q and keep the shorter geodesic
};

struct DistanceResult {
    double value = 0.0;
    bool converged = false;
    std::array<double, 2> clairaut{0.0, 0.0};
    int sign = 1;
    int converged_starts = 0;
};

namespace detail {

class Shooter {
public:
    Shooter(const MetricSpec& spec, const ReducedPoint& p, const ReducedPoint& q, double tol,
            const ShootingOptions& opt)
        : spec_(spec), model_(spec), p_(p), q_(q), tol_(tol), opt_(opt) {
        const int k = model_.fibers();
        for (int i = 0; i < k; ++i) {
            gp_[i] = model_.scale(i, p.radial);
            gq_[i] = model_.scale(i, q.radial);
            if (gp_[i] >= kCollapsed && gq_[i] >= kCollapsed) active_.push_back(i);
            target_[i] = fiber_periodic(spec) ? fiber_separation(spec, p.fiber[i], q.fiber[i]) : q.fiber[i] - p.fiber[i];
        }
        upper_ = broken_path_bound(spec, p, q);
        max_len_ = 1.02 * upper_ + 1e-9;
        build_images();
    }

    [[nodiscard]] double upper_bound() const { return upper_; }

    /// Secondary image approaches closer than this fraction of the broken-path
    /// bound are polished as well.
    static constexpr double kImageSlack = 0.25;

    [[nodiscard]] bool radial_only() const {
        for (int i : active_)
            if (target_[i] != 0.0) return false;
        return true;
    }

    /// Unknowns: direction parameters followed by the length L.
    using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;  // at most 3 unknowns, no heap

    [[nodiscard]] int unknowns() const { return static_cast<int>(active_.size()) + 1; }

    std::optional<DistanceResult> solve(const std::vector<Vec>* warm_starts = nullptr) {
        std::vector<Candidate> seeds;
        if (warm_starts) {
            for (const auto& v : *warm_starts) seeds.push_back({v, nearest_image(shoot(v)), 0.0, {}});
        } else {
            seeds = seed_candidates();
        }
        std::optional<DistanceResult> best;
        const auto consider = [&](Vec v, int image) {
            // a shot whose closest approach comes much later than a known
            // geodesic converges, if at all, to a longer one
            if (best && length_of(v) > 1.05 * best->value + 1e-3) return;
            auto sol = polish(std::move(v), image);
            if (!sol) return;
            if (!best || sol->value < best->value) {
                const int starts = best ? best->converged_starts : 0;
                best = sol;
                best->converged_starts = starts;
            }
            ++best->converged_starts;
        };
        for (auto& seed : seeds) {
            consider(seed.v, seed.image);
            // a direction may pass near q before its closest approach to another
            // image (e.g. just before reflecting at a collapsed end)
            for (const auto& h : seed.hits) {
                if (h.image == seed.image || !(h.residual <= kImageSlack * upper_)) continue;
                Vec v = seed.v;
                v[v.size() - 1] = h.s;
                consider(v, h.image);
            }
        }
        return best;
    }

    /// Shooting parameters of a geodesic leaving p with Clairaut constants c,
    /// radial direction sign and length L.
    [[nodiscard]] Vec from_clairaut(const std::array<double, 2>& c, int sign, double L) const {
        Vec v(unknowns());
        v[v.size() - 1] = L;
        switch (active_.size()) {
            case 0: v[0] = sign < 0 ? 1.0 : 0.0; break;
            case 1: {
                const int i = active_[0];
                const double u = std::clamp(c[i] / gp_[i], -1.0, 1.0);
                v[0] = std::atan2(u, sign * std::sqrt(1.0 - u * u));
                break;
            }
            default: {
                const double u0 = c[0] / gp_[0], u1 = c[1] / gp_[1];
                const double t = std::min(1.0, std::hypot(u0, u1));
                v[0] = std::atan2(t, sign * std::sqrt(1.0 - t * t));
                v[1] = std::atan2(u1, u0);
            }
        }
        return v;
    }

private:
    struct Image {
        double radial;
        std::array<double, 2> fiber;
    };
    struct Hit {
        int image;
        double residual;
        double s;
    };
    struct Candidate {
        Vec v;
        int image;
        double residual;
        std::vector<Hit> hits;  // closest approach to each image of q
    };

    void build_images() {
        const auto refl = reflections(spec_);
        const double reach = max_len_ + 1.0;
        std::vector<Image> todo{{q_.radial, {target_[0], target_[1]}}};
        while (!todo.empty() && images_.size() < 64) {
            const Image im = todo.back();
            todo.pop_back();
            bool known = false;
            for (const auto& e : images_)
                if (std::fabs(e.radial - im.radial) < 1e-12) known = true;
            if (known || std::fabs(im.radial - p_.radial) > reach) continue;
            images_.push_back(im);
            for (const auto& rf : refl) {
                Image next = im;
                next.radial = 2.0 * rf.at - im.radial;
                if (rf.shifted_fiber >= 0) next.fiber[rf.shifted_fiber] += kPi;
                todo.push_back(next);
            }
        }
    }

    [[nodiscard]] std::array<double, 2> clairaut_of(const Vec& v, double& radial_velocity) const {
        std::array<double, 2> c{0.0, 0.0};
        switch (active_.size()) {
            case 0: radial_velocity = v[0] >= 0.5 ? -1.0 : 1.0; break;  // v[0] flags the direction
            case 1:
                radial_velocity = std::cos(v[0]);
                c[active_[0]] = gp_[active_[0]] * std::sin(v[0]);
                break;
            default:
                radial_velocity = std::cos(v[0]);
                c[0] = gp_[0] * std::sin(v[0]) * std::cos(v[1]);
                c[1] = gp_[1] * std::sin(v[0]) * std::sin(v[1]);
        }
        return c;
    }

    [[nodiscard]] double length_of(const Vec& v) const { return v[v.size() - 1]; }

    OdeState shoot(const Vec& v) const {
        double pr = 0.0;
        const auto c = clairaut_of(v, pr);
        const HamiltonianFlow flow{&model_, c};
        const OdeState y0{p_.radial, pr, 0.0, 0.0};
        return integrate_flow(flow, y0, std::max(0.0, length_of(v)), std::min(tol_ * 0.01, 1e-10));
    }

    [[nodiscard]] Vec residual(const OdeState& y, int image) const {
        const auto& im = images_[image];
        Vec r(static_cast<Eigen::Index>(active_.size()) + 1);
        r[0] = y[0] - im.radial;
        for (std::size_t j = 0; j < active_.size(); ++j) {
            const int i = active_[j];
            const double d = y[2 + i] - im.fiber[i];
            r[static_cast<Eigen::Index>(j) + 1] = gq_[i] * (fiber_periodic(spec_) ? wrap_angle(d) : d);
        }
        return r;
    }

    [[nodiscard]] int nearest_image(const OdeState& y) const {
        int best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (int k = 0; k < static_cast<int>(images_.size()); ++k) {
            const double d = residual(y, k).norm();
            if (d < bd) {
                bd = d;
                best = k;
            }
        }
        return best;
    }

    /// Integrates direction v once to max_len with a loose tolerance and records
    /// the closest approach to each image of q.
    Candidate probe(Vec v) const {
        double pr = 0.0;
        const auto c = clairaut_of(v, pr);
        const HamiltonianFlow flow{&model_, c};
        const int ni = static_cast<int>(images_.size());
        std::vector<Hit> hits;
        hits.reserve(static_cast<std::size_t>(ni));
        for (int k = 0; k < ni; ++k) hits.push_back({k, std::numeric_limits<double>::infinity(), 0.0});
        const auto end = integrate_flow(flow, OdeState{p_.radial, pr, 0.0, 0.0}, max_len_, 1e-6, 100,
                                        [&](double s, const OdeState& y) {
                                            for (auto& h : hits) {
                                                const double d = residual(y, h.image).norm();
                                                if (d < h.residual) {
                                                    h.residual = d;
                                                    h.s = s;
                                                }
                                            }
                                        });
        Candidate out{v, 0, std::numeric_limits<double>::infinity(), {}};
        if (!std::isfinite(end[0])) return out;
        for (const auto& h : hits) {
            if (h.residual < out.residual) {
                out.residual = h.residual;
                out.image = h.image;
                out.v[out.v.size() - 1] = h.s;
            }
        }
        out.hits = std::move(hits);
        return out;
    }

    /// Angles of the first direction axis: a uniform grid plus clusters that
    /// approach the radial and tangential directions geometrically. Geodesics
    /// leaving a point where a fiber is large reach far points only within a
    /// narrow cone around these directions.
    [[nodiscard]] std::vector<double> polar_axis() const {
        std::vector<double> a;
        const bool ring = active_.size() == 1;
        const int n = ring ? 2 * opt_.seeds_polar : opt_.seeds_polar;
        const double h = (ring ? 2.0 * kPi : kPi) / n;
        for (int k = 0; k < n; ++k) a.push_back(ring ? h * k : h * (k + 0.5));
        const std::vector<double> centres = ring ? std::vector<double>{0.0, 0.5 * kPi, kPi, 1.5 * kPi, 2.0 * kPi}
                                                 : std::vector<double>{0.0, 0.5 * kPi, kPi};
        const int levels = ring ? opt_.seed_cluster : opt_.seed_cluster_2d;
        for (int k = 0; k < levels; ++k) {
            const double off = h * std::ldexp(1.0, -(k + 1));
            for (const double c : centres)
                for (const double sgn : {-1.0, 1.0}) {
                    const double v = c + sgn * off;
                    if (v > 0.0 && v < (ring ? 2.0 * kPi : kPi)) a.push_back(v);
                }
        }
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
        return a;
    }

    /// Direction grid, local minima of the closest-approach residual, then a
    /// pattern search that halves the local grid spacing around each minimum.
    std::vector<Candidate> seed_candidates() const {
        std::vector<double> axis0{0.0, 1.0};  // radial-only: direction flags
        bool wrap0 = false;
        int n1 = 1;
        if (!active_.empty()) axis0 = polar_axis();
        if (active_.size() == 1) wrap0 = true;
        if (active_.size() == 2) n1 = opt_.seeds_azimuth;
        const int n0 = static_cast<int>(axis0.size());
        const double h1 = 2.0 * kPi / n1;
        std::vector<Candidate> all;
        all.reserve(static_cast<std::size_t>(n0 * n1));
        for (int a = 0; a < n0; ++a) {
            for (int b = 0; b < n1; ++b) {
                Vec v(unknowns());
                v[0] = axis0[static_cast<std::size_t>(a)];
                if (active_.size() == 2) v[1] = h1 * b;
                all.push_back(probe(v));
            }
        }
        const auto gap = [&](int a) {
            const double period = wrap0 ? 2.0 * kPi : 0.0;
            double g = std::numeric_limits<double>::infinity();
            if (a > 0) g = axis0[a] - axis0[a - 1];
            else if (wrap0) g = axis0[0] + period - axis0[n0 - 1];
            if (a + 1 < n0) g = std::min(g, axis0[a + 1] - axis0[a]);
            else if (wrap0) g = std::min(g, axis0[0] + period - axis0[a]);
            return std::isfinite(g) ? g : kPi / n0;
        };
        struct Minimum {
            Candidate cand;
            double step0;
        };
        std::vector<Minimum> minima;
        const auto at = [&](int a, int b) -> const Candidate& { return all[static_cast<std::size_t>(a * n1 + b)]; };
        for (int a = 0; a < n0; ++a) {
            for (int b = 0; b < n1; ++b) {
                const double r = at(a, b).residual;
                if (!std::isfinite(r)) continue;
                bool is_min = true;
                for (int da = -1; da <= 1 && is_min; ++da) {
                    for (int db = -1; db <= 1; ++db) {
                        if (!da && !db) continue;
                        int aa = a + da, bb = (b + db + n1) % n1;
                        if (wrap0) aa = (aa + n0) % n0;
                        if (aa < 0 || aa >= n0) continue;
                        if (at(aa, bb).residual < r) {
                            is_min = false;
                            break;
                        }
                    }
                }
                if (is_min) minima.push_back({at(a, b), gap(a)});
            }
        }
        std::stable_sort(minima.begin(), minima.end(),
                         [](const Minimum& x, const Minimum& y) { return x.cand.residual < y.cand.residual; });
        if (static_cast<int>(minima.size()) > opt_.polish) minima.resize(static_cast<std::size_t>(opt_.polish));
        std::vector<Candidate> out;
        for (auto& m : minima) {
            Candidate cand = m.cand;
            if (!active_.empty()) {
                double s0 = m.step0, s1 = h1;
                for (int level = 0; level < 6; ++level) {
                    s0 *= 0.5;
                    s1 *= 0.5;
                    Candidate best = cand;
                    for (int da = -1; da <= 1; ++da) {
                        for (int db = -1; db <= 1; ++db) {
                            if ((!da && !db) || (active_.size() == 1 && db)) continue;
                            Vec v = cand.v;
                            v[0] += da * s0;
                            if (active_.size() == 2) v[1] += db * s1;
                            const Candidate c = probe(v);
                            if (c.residual < best.residual) best = c;
                        }
                    }
                    cand = best;
                }
            }
            out.push_back(cand);
        }
        return out;
    }

    /// Levenberg-Marquardt on the terminal mismatch with a forward-difference Jacobian.
    std::optional<DistanceResult> polish(Vec v, int image) {
        const int n = unknowns();
        const Eigen::Index m = static_cast<Eigen::Index>(active_.size()) + 1;
        const bool flag_only = active_.empty();  // radial-only: the direction is a flag, only L varies
        Vec f = residual(shoot(v), image);
        const double initial = f.norm();
        double mu = 1e-6;
        for (int it = 0; it < opt_.max_iter; ++it) {
            if (f.norm() <= tol_) break;
            Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3> J(m, n);
            for (int j = 0; j < n; ++j) {
                if (flag_only && j == 0) {
                    J.col(j).setZero();
                    continue;
                }
                const double h = j == n - 1 ? 1e-7 * std::max(1.0, length_of(v)) : 1e-7;
                Vec vh = v;
                vh[j] += h;
                J.col(j) = (residual(shoot(vh), image) - f) / h;
            }
            if (it == 20 && f.norm() > 0.5 * initial) break;  // stalled away from q
            bool improved = false;
            for (int tries = 0; tries < 12; ++tries) {
                Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3> A = J.transpose() * J;
                A.diagonal() += mu * (A.diagonal().array() + 1e-12).matrix();
                const Vec step = A.ldlt().solve(-J.transpose() * f);
                Vec vn = v + step;
                if (length_of(vn) < 0.0) vn[n - 1] = 0.5 * length_of(v);
                const Vec fn = residual(shoot(vn), image);
                if (fn.norm() < f.norm()) {
                    v = vn;
                    f = fn;
                    mu = std::max(mu / 4.0, 1e-12);
                    improved = true;
                    break;
                }
                mu *= 8.0;
            }
            if (!improved) break;
        }
        if (!(f.norm() <= tol_)) return std::nullopt;
        double pr = 0.0;
        DistanceResult out;
        out.clairaut = clairaut_of(v, pr);
        out.sign = pr < 0.0 ? -1 : 1;
        out.value = length_of(v);
        out.converged = true;
        return out;
    }

    const MetricSpec& spec_;
    ReducedModel model_;
    ReducedPoint p_, q_;
    double tol_;
    ShootingOptions opt_;
    std::array<double, 2> gp_{0.0, 0.0}, gq_{0.0, 0.0}, target_{0.0, 0.0};
    std::vector<int> active_;
    std::vector<Image> images_;
    double upper_ = 0.0, max_len_ = 0.0;
};

inline bool same_point(const MetricSpec& spec, const ReducedPoint& p, const ReducedPoint& q) {
    if (p.radial != q.radial) return false;
    const ReducedModel model(spec);
    for (int i = 0; i < model.fibers(); ++i) {
        if (model.scale(i, p.radial) < kCollapsed) continue;
        if (fiber_separation(spec, p.fiber[i], q.fiber[i]) != 0.0) return false;
    }
    return true;
}

}  // namespace detail

/// Geodesic distance between two chart points (completion-boundary points excluded).
/// Throws SolverError if no shot reaches q to within tol.
inline DistanceResult solve_distance(const MetricSpec& spec, const ReducedPoint& p, const ReducedPoint& q,
                                     double tol = 1e-8, const ShootingOptions& opt = {}) {
    check_point(spec, p, false);
    check_point(spec, q, false);
    if (!(tol > 0.0)) throw DomainError("tol must be > 0");
    if (detail::same_point(spec, p, q)) return {0.0, true, {0.0, 0.0}, 1, 1};
    detail::Shooter shooter(spec, p, q, tol, opt);
    if (shooter.radial_only()) {
        // |x_p - x_q| is a lower bound for every path and the radial segment attains it
        return {std::fabs(p.radial - q.radial), true, {0.0, 0.0}, q.radial >= p.radial ? 1 : -1, 1};
    }
    auto res = shooter.solve();
    if (opt.bidirectional) {
        // shooting from q explores a differently conditioned direction space;
        // a shorter geodesic found there is re-solved from p by continuation
        detail::Shooter reverse(spec, q, p, tol, opt);
        if (const auto back = reverse.solve(); back && (!res || back->value < res->value - tol)) {
            std::array<double, 2> c = back->clairaut;
            if (!fiber_periodic(spec)) c = {-c[0], -c[1]};
            const std::vector<detail::Shooter::Vec> warm{shooter.from_clairaut(c, 1, back->value),
                                                         shooter.from_clairaut(c, -1, back->value)};
            if (auto fwd = shooter.solve(&warm); fwd && (!res || fwd->value < res->value)) {
                fwd->converged_starts += res ? res->converged_starts : 0;
                res = fwd;
            }
        }
    }
    if (!res) throw SolverError("shooting did not converge for " + spec_name(spec) + " distance");
    return *res;
}

inline double distance(const MetricSpec& spec, const ReducedPoint& p, const ReducedPoint& q, double tol = 1e-8,
                       const ShootingOptions& opt = {}) {
    return solve_distance(spec, p, q, tol, opt).value;
}

/// The minimizing geodesic from p to q as a sampled path.
inline PathResult shortest_path(const MetricSpec& spec, const ReducedPoint& p, const ReducedPoint& q,
                                double tol = 1e-8, int samples = 256, const ShootingOptions& opt = {}) {
    const auto d = solve_distance(spec, p, q, tol, opt);
    // the solver measures fiber offsets as nonnegative separations; orient them towards q
    std::array<double, 2> c = d.clairaut;
    if (fiber_periodic(spec))
        for (int i = 0; i < 2; ++i)
            if (wrap_angle(q.fiber[i] - p.fiber[i]) < 0.0) c[i] = -c[i];
    auto path = geodesic_ivp(spec, p, c[0], c[1], d.sign, d.value, tol, samples);
    return path;
}

struct BoundaryDistance {
    double value;
    double error_estimate;
    std::array<double, 3> offsets;
    std::array<double, 3> values;
};

/// Distance when p and/or q lies on the completion boundary (x = 0 or phi = 0):
/// boundary points are moved inward by delta * scale for
/// delta in {1e-2, 5e-3, 2.5e-3}, scale = min(1, broken-path bound), and the
/// three distances are Richardson-extrapolated to delta = 0 assuming an error
/// expansion a + b delta + c delta^2.
inline BoundaryDistance boundary_distance(const MetricSpec& spec, const ReducedPoint& p, const ReducedPoint& q,
                                          double tol = 1e-8, const ShootingOptions& opt = {}) {
    if (spec.index() == 0) throw DomainError("boundary_distance applies to the hemisphere and Grushin metrics");
    check_point(spec, p, true);
    check_point(spec, q, true);
    const bool pb = on_completion_boundary(spec, p), qb = on_completion_boundary(spec, q);
    if (!pb && !qb) throw DomainError("boundary_distance needs at least one boundary point");
    if (pb && qb && fiber_separation(spec, p.fiber[0], q.fiber[0]) == 0.0) return {0.0, 0.0, {0, 0, 0}, {0, 0, 0}};
    const double scale = std::min(1.0, broken_path_bound(spec, p, q));
    const std::array<double, 3> deltas{1e-2 * scale, 5e-3 * scale, 2.5e-3 * scale};
    std::array<double, 3> d{};
    std::optional<DistanceResult> previous;
    for (int k = 0; k < 3; ++k) {
        ReducedPoint a = p, b = q;
        if (pb) a.radial = deltas[k];
        if (qb) b.radial = deltas[k];
        if (detail::same_point(spec, a, b)) {
            d[k] = 0.0;
            continue;
        }
        detail::Shooter shooter(spec, a, b, tol, opt);
        std::optional<DistanceResult> r;
        if (shooter.radial_only()) {
            r = DistanceResult{std::fabs(a.radial - b.radial), true, {0, 0}, 1, 1};
        } else {
            // continue from the previous offset through its Clairaut constants,
            // which vary smoothly with the offset (the direction angle does not)
            if (previous) {
                const std::vector<detail::Shooter::Vec> warm{
                    shooter.from_clairaut(previous->clairaut, previous->sign, previous->value)};
                r = shooter.solve(&warm);
            }
            if (!r) r = shooter.solve();
        }
        if (!r) throw SolverError("boundary distance: shooting did not converge at offset " + std::to_string(deltas[k]));
        previous = r;
        d[k] = r->value;
    }
    const double three = (8.0 * d[2] - 6.0 * d[1] + d[0]) / 3.0;
    const double two = 2.0 * d[2] - d[1];
    return {three, std::fabs(three - two), deltas, d};
}

/// Distance between any two points of the closed chart; boundary points go
/// through boundary_distance.
inline double chart_distance(const MetricSpec& spec, const ReducedPoint& p, const ReducedPoint& q, double tol = 1e-8,
                             const ShootingOptions& opt = {}) {
    if (on_completion_boundary(spec, p) || on_completion_boundary(spec, q))
        return boundary_distance(spec, p, q, tol, opt).value;
    return distance(spec, p, q, tol, opt);
}

}  // namespace grushin
