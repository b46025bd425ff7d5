#pragma once

// Brute-force distance oracle, independent of the geodesic ODE: Dijkstra on a
// chart grid whose edges are straight chart segments weighted by the metric
// (Gauss-Legendre quadrature), followed by a shortening of the graph path as
// a free polyline (nested Gauss-Seidel minimisation of the discrete energy).
// Every value returned is the length of an actual chart curve, so it bounds
// the distance from above.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "grushin/geodesics.hpp"
#include "grushin/metric.hpp"

namespace grushin {

class OracleBudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using ChartPoint = std::array<double, 3>;  // radial, fiber 0, fiber 1

namespace detail {

inline constexpr std::array<double, 3> kGL3Nodes{0.11270166537925831, 0.5, 0.88729833462074169};
inline constexpr std::array<double, 3> kGL3Weights{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
inline constexpr std::array<double, 5> kGL5Nodes{0.046910077030668, 0.230765344947158, 0.5, 0.769234655052842,
                                                 0.953089922969332};
inline constexpr std::array<double, 5> kGL5Weights{0.118463442528095, 0.239314335249683, 0.284444444444444,
                                                   0.239314335249683, 0.118463442528095};

/// Metric length of the straight chart segment a -> b.
template <std::size_t K>
double segment_length(const ReducedModel& model, const ChartPoint& a, const ChartPoint& b,
                      const std::array<double, K>& nodes, const std::array<double, K>& weights) {
    const double d0 = b[0] - a[0];
    const int fibers = model.fibers();
    double len = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        const double x = a[0] + nodes[k] * d0;
        double q = d0 * d0;
        for (int i = 0; i < fibers; ++i) {
            const double di = b[1 + i] - a[1 + i];
            if (di != 0.0) q += model.scale2(i, x) * di * di;
        }
        len += weights[k] * std::sqrt(q);
    }
    return len;
}

inline double segment_length(const ReducedModel& model, const ChartPoint& a, const ChartPoint& b) {
    return segment_length(model, a, b, kGL3Nodes, kGL3Weights);
}

inline double segment_length_fine(const ReducedModel& model, const ChartPoint& a, const ChartPoint& b) {
    return segment_length(model, a, b, kGL5Nodes, kGL5Weights);
}

}  // namespace detail

/// Uniform grid over a chart box with a stencil of primitive integer steps.
class ChartGrid {
public:
    ChartGrid(const MetricSpec& spec, const ChartPoint& lo, const ChartPoint& hi, std::array<int, 3> cells,
              int stencil_radius, std::size_t max_nodes)
        : model_(spec), dim_(1 + fiber_count(spec)), lo_(lo) {
        boundary_ = spec.index() != 0 && lo[0] == 0.0;
        std::size_t nodes = 1;
        for (int a = 0; a < 3; ++a) {
            n_[a] = a < dim_ ? std::max(cells[a], 0) + 1 : 1;
            h_[a] = a < dim_ && cells[a] > 0 ? (hi[a] - lo[a]) / cells[a] : 0.0;
            // an axis with lo == hi may be degenerate (a slice at fixed fiber coordinate)
            if (a < dim_ && cells[a] < 1 && hi[a] != lo[a]) throw DomainError("grid needs at least one cell per axis");
            nodes *= static_cast<std::size_t>(n_[a]);
        }
        if (nodes > max_nodes) throw OracleBudgetError("grid of " + std::to_string(nodes) + " nodes exceeds the budget");
        build_stencil(stencil_radius);
        build_weights();
    }

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] std::size_t size() const {
        return static_cast<std::size_t>(n_[0]) * static_cast<std::size_t>(n_[1]) * static_cast<std::size_t>(n_[2]);
    }
    [[nodiscard]] const std::array<int, 3>& counts() const { return n_; }
    [[nodiscard]] const std::array<double, 3>& spacing() const { return h_; }
    [[nodiscard]] const ReducedModel& model() const { return model_; }

    [[nodiscard]] std::uint32_t id(int i, int j, int k) const {
        return static_cast<std::uint32_t>((static_cast<std::size_t>(i) * n_[1] + j) * n_[2] + k);
    }
    [[nodiscard]] std::array<int, 3> index(std::uint32_t id) const {
        const int k = static_cast<int>(id % n_[2]);
        const std::uint32_t r = id / n_[2];
        return {static_cast<int>(r / n_[1]), static_cast<int>(r % n_[1]), k};
    }
    [[nodiscard]] ChartPoint point(std::uint32_t id) const {
        const auto ix = index(id);
        return {lo_[0] + ix[0] * h_[0], lo_[1] + ix[1] * h_[1], lo_[2] + ix[2] * h_[2]};
    }

    /// Nodes within `radius` cells of an arbitrary chart point.
    [[nodiscard]] std::vector<std::uint32_t> window(const ChartPoint& x, int radius) const {
        std::array<int, 3> c{}, from{}, to{};
        for (int a = 0; a < 3; ++a) {
            c[a] = h_[a] > 0.0 ? static_cast<int>(std::floor((x[a] - lo_[a]) / h_[a])) : 0;
            from[a] = std::clamp(c[a] - radius + 1, 0, n_[a] - 1);
            to[a] = std::clamp(c[a] + radius, 0, n_[a] - 1);
        }
        std::vector<std::uint32_t> out;
        for (int i = from[0]; i <= to[0]; ++i)
            for (int j = from[1]; j <= to[1]; ++j)
                for (int k = from[2]; k <= to[2]; ++k) out.push_back(id(i, j, k));
        return out;
    }

    /// Cost of a segment between arbitrary chart points, infinite when it moves
    /// along a fiber at the completion boundary (the integral diverges there).
    [[nodiscard]] double link_cost(const ChartPoint& a, const ChartPoint& b) const {
        if (boundary_ && (a[0] == 0.0 || b[0] == 0.0) && (a[1] != b[1] || a[2] != b[2]))
            return std::numeric_limits<double>::infinity();
        return detail::segment_length_fine(model_, a, b);
    }

    struct SourceLink {
        std::uint32_t node;
        double cost;
    };

    /// Dijkstra from weighted sources. Stops early once every node still in
    /// the queue is farther than stop_at(current best) reports.
    template <class Settle>
    void dijkstra(const std::vector<SourceLink>& sources, std::vector<double>& dist, std::vector<std::uint32_t>* pred,
                  Settle&& on_settle) const {
        constexpr auto inf = std::numeric_limits<double>::infinity();
        dist.assign(size(), inf);
        if (pred) pred->assign(size(), std::numeric_limits<std::uint32_t>::max());
        using Item = std::pair<double, std::uint32_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
        for (const auto& s : sources) {
            if (s.cost < dist[s.node]) {
                dist[s.node] = s.cost;
                queue.emplace(s.cost, s.node);
            }
        }
        const std::size_t ns = stencil_.size();
        while (!queue.empty()) {
            const auto [d, u] = queue.top();
            queue.pop();
            if (d > dist[u]) continue;
            if (!on_settle(u, d)) return;
            const auto ix = index(u);
            const double* w = &weights_[static_cast<std::size_t>(ix[0]) * ns];
            for (std::size_t s = 0; s < ns; ++s) {
                const auto& v = stencil_[s];
                const int i = ix[0] + v[0], j = ix[1] + v[1], k = ix[2] + v[2];
                if (i < 0 || i >= n_[0] || j < 0 || j >= n_[1] || k < 0 || k >= n_[2]) continue;
                const double nd = d + w[s];
                const std::uint32_t t = id(i, j, k);
                if (nd < dist[t]) {
                    dist[t] = nd;
                    if (pred) (*pred)[t] = u;
                    queue.emplace(nd, t);
                }
            }
        }
    }

    /// Visits every node within metric distance `radius` of `source`
    /// (Dijkstra truncated at the radius). `dist` must have size() entries,
    /// all +inf, and is restored to that state before returning.
    template <class Visit>
    void ball(std::uint32_t source, double radius, std::vector<double>& dist, Visit&& visit) const {
        using Item = std::pair<double, std::uint32_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
        std::vector<std::uint32_t> touched{source};
        dist[source] = 0.0;
        queue.emplace(0.0, source);
        const std::size_t ns = stencil_.size();
        while (!queue.empty()) {
            const auto [d, u] = queue.top();
            queue.pop();
            if (d > dist[u]) continue;
            visit(u, d);
            const auto ix = index(u);
            const double* w = &weights_[static_cast<std::size_t>(ix[0]) * ns];
            for (std::size_t s = 0; s < ns; ++s) {
                const auto& v = stencil_[s];
                const int i = ix[0] + v[0], j = ix[1] + v[1], k = ix[2] + v[2];
                if (i < 0 || i >= n_[0] || j < 0 || j >= n_[1] || k < 0 || k >= n_[2]) continue;
                const double nd = d + w[s];
                if (nd > radius) continue;
                const std::uint32_t t = id(i, j, k);
                if (nd < dist[t]) {
                    if (std::isinf(dist[t])) touched.push_back(t);
                    dist[t] = nd;
                    queue.emplace(nd, t);
                }
            }
        }
        for (auto t : touched) dist[t] = std::numeric_limits<double>::infinity();
    }

private:
    void build_stencil(int radius) {
        const int r1 = dim_ > 1 ? radius : 0, r2 = dim_ > 2 ? radius : 0;
        for (int a = -radius; a <= radius; ++a)
            for (int b = -r1; b <= r1; ++b)
                for (int c = -r2; c <= r2; ++c) {
                    if (!a && !b && !c) continue;
                    if (std::gcd(std::gcd(std::abs(a), std::abs(b)), std::abs(c)) != 1) continue;
                    stencil_.push_back({a, b, c});
                }
    }

    void build_weights() {
        const std::size_t ns = stencil_.size();
        weights_.assign(static_cast<std::size_t>(n_[0]) * ns, std::numeric_limits<double>::infinity());
        for (int i = 0; i < n_[0]; ++i) {
            const ChartPoint a{lo_[0] + i * h_[0], 0.0, 0.0};
            for (std::size_t s = 0; s < ns; ++s) {
                const auto& v = stencil_[s];
                if (i + v[0] < 0 || i + v[0] >= n_[0]) continue;
                const ChartPoint b{a[0] + v[0] * h_[0], v[1] * h_[1], v[2] * h_[2]};
                const bool on_edge = boundary_ && (i == 0 || i + v[0] == 0);
                if (on_edge && (v[1] || v[2])) continue;
                weights_[static_cast<std::size_t>(i) * ns + s] = detail::segment_length(model_, a, b);
            }
        }
    }

    ReducedModel model_;
    int dim_;
    ChartPoint lo_;
    std::array<int, 3> n_{1, 1, 1};
    std::array<double, 3> h_{0.0, 0.0, 0.0};
    bool boundary_ = false;
    std::vector<std::array<int, 3>> stencil_;
    std::vector<double> weights_;
};

struct OracleOptions {
    int stencil_radius = 0;       // 0: 2 in two dimensions, 1 in three
    bool refine = true;           // shorten the graph path as a free polyline
    int refine_segments = 512;    // finest polyline resolution
    std::size_t max_nodes = 40'000'000;
};

struct OracleResult {
    double value = 0.0;        // min of graph and refined lengths
    double graph_value = 0.0;  // Dijkstra path length
    std::size_t nodes = 0;
    std::vector<ChartPoint> path;  // refined polyline (chart coordinates, p first)
};

namespace detail {

/// Nested Gauss-Seidel shortening of a polyline with fixed endpoints inside a box.
class PolylineShortener {
public:
    PolylineShortener(const ReducedModel& model, int dim, const ChartPoint& lo, const ChartPoint& hi)
        : model_(model), dim_(dim), lo_(lo), hi_(hi) {}

    double run(std::vector<ChartPoint>& path, int finest) const {
        path = resample(path, 16);
        relax(path, 400);
        while (static_cast<int>(path.size()) - 1 < finest) {
            path = subdivide(path);
            relax(path, 40);
        }
        return length(path);
    }

    [[nodiscard]] double length(const std::vector<ChartPoint>& path) const {
        double len = 0.0;
        for (std::size_t k = 0; k + 1 < path.size(); ++k) len += segment_length(model_, path[k], path[k + 1]);
        return len;
    }

private:
    struct MetricJet {
        std::array<double, 3> g, dg, ddg;
    };

    [[nodiscard]] MetricJet jet(double x) const {
        MetricJet m{{1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
        const double h = 1e-4 * std::max(1e-2, std::fabs(x));
        for (int i = 0; i < dim_ - 1; ++i) {
            const double g0 = model_.scale2(i, x), gp = model_.scale2(i, x + h), gm = model_.scale2(i, x - h);
            m.g[1 + i] = g0;
            m.dg[1 + i] = (gp - gm) / (2.0 * h);
            m.ddg[1 + i] = (gp - 2.0 * g0 + gm) / (h * h);
        }
        return m;
    }

    [[nodiscard]] double energy(const ChartPoint& a, const ChartPoint& b) const {
        const double m = 0.5 * (a[0] + b[0]);
        double e = (b[0] - a[0]) * (b[0] - a[0]);
        for (int i = 0; i < dim_ - 1; ++i) {
            const double d = b[1 + i] - a[1 + i];
            if (d != 0.0) e += model_.scale2(i, m) * d * d;
        }
        return e;
    }

    /// Gradient and Hessian of energy(a, v) (sign = +1) or energy(v, b) (sign = -1) in v.
    void accumulate(const ChartPoint& fixed, const ChartPoint& v, double sign, Eigen::Vector3d& grad,
                    Eigen::Matrix3d& hess) const {
        std::array<double, 3> d{};
        for (int j = 0; j < dim_; ++j) d[j] = sign * (v[j] - fixed[j]);  // v - a, or b - v
        const auto mj = jet(0.5 * (v[0] + fixed[0]));
        double s1 = 0.0, s2 = 0.0;
        for (int i = 1; i < dim_; ++i) {
            s1 += mj.dg[i] * d[i] * d[i];
            s2 += mj.ddg[i] * d[i] * d[i];
        }
        for (int j = 0; j < dim_; ++j) {
            grad[j] += sign * 2.0 * mj.g[j] * d[j];
            hess(j, j) += 2.0 * mj.g[j];
        }
        grad[0] += 0.5 * s1;
        hess(0, 0) += 0.25 * s2;
        for (int j = 1; j < dim_; ++j) {
            hess(j, 0) += sign * mj.dg[j] * d[j];
            hess(0, j) += sign * mj.dg[j] * d[j];
        }
    }

    void clamp(ChartPoint& v) const {
        for (int j = 0; j < dim_; ++j) v[j] = std::clamp(v[j], lo_[j], hi_[j]);
    }

    void relax(std::vector<ChartPoint>& path, int sweeps) const {
        const std::size_t n = path.size();
        double scale = 0.0;
        for (int j = 0; j < dim_; ++j) scale = std::max(scale, hi_[j] - lo_[j]);
        for (int sweep = 0; sweep < sweeps; ++sweep) {
            double moved = 0.0;
            for (std::size_t k = 1; k + 1 < n; ++k) {
                const ChartPoint& a = path[k - 1];
                const ChartPoint& b = path[k + 1];
                ChartPoint v = path[k];
                const double e0 = energy(a, v) + energy(v, b);
                Eigen::Vector3d grad = Eigen::Vector3d::Zero();
                Eigen::Matrix3d hess = Eigen::Matrix3d::Zero();
                accumulate(a, v, 1.0, grad, hess);
                accumulate(b, v, -1.0, grad, hess);
                for (int j = dim_; j < 3; ++j) hess(j, j) = 1.0;
                double mu = 1e-12 * hess.trace();
                Eigen::Vector3d step;
                for (int attempt = 0; attempt < 30; ++attempt) {
                    Eigen::Matrix3d hm = hess;
                    hm.diagonal().array() += mu;
                    Eigen::LDLT<Eigen::Matrix3d> ldlt(hm);
                    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
                        step = -ldlt.solve(grad);
                        break;
                    }
                    mu = std::max(mu * 10.0, 1e-12);
                }
                double t = 1.0;
                bool accepted = false;
                for (int ls = 0; ls < 20; ++ls) {
                    ChartPoint cand = v;
                    for (int j = 0; j < dim_; ++j) cand[j] += t * step[j];
                    clamp(cand);
                    const double e1 = energy(a, cand) + energy(cand, b);
                    if (e1 <= e0) {
                        double delta = 0.0;
                        for (int j = 0; j < dim_; ++j) delta = std::max(delta, std::fabs(cand[j] - v[j]));
                        moved = std::max(moved, delta);
                        path[k] = cand;
                        accepted = true;
                        break;
                    }
                    t *= 0.5;
                }
                (void)accepted;
            }
            if (moved < 1e-13 * scale) break;
        }
    }

    [[nodiscard]] std::vector<ChartPoint> resample(const std::vector<ChartPoint>& path, int segments) const {
        if (path.size() < 2) return path;
        std::vector<double> cum{0.0};
        for (std::size_t k = 0; k + 1 < path.size(); ++k)
            cum.push_back(cum.back() + segment_length(model_, path[k], path[k + 1]));
        const double total = cum.back();
        if (!(total > 0.0) || !std::isfinite(total)) return {path.front(), path.back()};
        std::vector<ChartPoint> out{path.front()};
        std::size_t seg = 0;
        for (int s = 1; s < segments; ++s) {
            const double target = total * s / segments;
            while (seg + 2 < cum.size() && cum[seg + 1] < target) ++seg;
            const double span = cum[seg + 1] - cum[seg];
            const double t = span > 0.0 ? (target - cum[seg]) / span : 0.0;
            ChartPoint p{};
            for (int j = 0; j < 3; ++j) p[j] = path[seg][j] + t * (path[seg + 1][j] - path[seg][j]);
            out.push_back(p);
        }
        out.push_back(path.back());
        return out;
    }

    [[nodiscard]] static std::vector<ChartPoint> subdivide(const std::vector<ChartPoint>& path) {
        std::vector<ChartPoint> out;
        out.reserve(2 * path.size());
        for (std::size_t k = 0; k + 1 < path.size(); ++k) {
            out.push_back(path[k]);
            ChartPoint m{};
            for (int j = 0; j < 3; ++j) m[j] = 0.5 * (path[k][j] + path[k + 1][j]);
            out.push_back(m);
        }
        out.push_back(path.back());
        return out;
    }

    const ReducedModel& model_;
    int dim_;
    ChartPoint lo_, hi_;
};

}  // namespace detail

/// Graph-oracle distance between two chart points (completion-boundary points
/// excluded). `resolution` is the number of cells along the longest chart
/// axis in two dimensions; the three-dimensional sphere chart uses the same
/// node budget (about resolution^2 nodes).
inline OracleResult oracle_solve(const MetricSpec& spec, const ReducedPoint& p, const ReducedPoint& q, int resolution,
                                 const OracleOptions& opt = {}) {
    validate(spec);
    check_point(spec, p, false);
    check_point(spec, q, false);
    if (resolution < 64) throw DomainError("resolution must be >= 64");
    const ReducedModel model(spec);
    const int dim = 1 + model.fibers();
    std::array<double, 2> sep{0.0, 0.0};
    for (int i = 0; i < model.fibers(); ++i) {
        const double g = std::min(model.scale(i, p.radial), model.scale(i, q.radial));
        sep[i] = g < kCollapsed ? 0.0 : fiber_separation(spec, p.fiber[i], q.fiber[i]);
    }
    OracleResult out;
    if (sep[0] == 0.0 && sep[1] == 0.0) {
        // the radial segment is a path of length |dx|, which bounds every path from below
        out.value = out.graph_value = std::fabs(p.radial - q.radial);
        out.path = {{p.radial, 0, 0}, {q.radial, 0, 0}};
        return out;
    }

    ChartPoint lo{0, 0, 0}, hi{0, 0, 0};
    std::array<int, 3> cells{0, 0, 0};
    switch (spec.index()) {
        case 0: {
            const int nr = std::max(8, static_cast<int>(std::lround(std::cbrt(double(resolution) * resolution / 4.0))));
            lo = {0.0, 0.0, 0.0};
            hi = {kHalfPi, kPi, kPi};
            cells = {nr, 2 * nr, 2 * nr};
            break;
        }
        case 1:
            lo = {0.0, 0.0, 0.0};
            hi = {kHalfPi, kPi, 0.0};
            cells = {resolution / 2, resolution, 0};
            break;
        default: {
            // a shortest path never leaves the y-range between p and q and never
            // moves more than half the broken-path bound outside their x-range
            const double bound = broken_path_bound(spec, p, q);
            lo = {std::max(0.0, std::min(p.radial, q.radial) - 0.5 * bound), 0.0, 0.0};
            hi = {std::max(p.radial, q.radial) + 0.5 * bound, sep[0], 0.0};
            const double wx = hi[0] - lo[0], wy = hi[1];
            const double longest = std::max(wx, wy);
            cells = {std::max(8, static_cast<int>(std::lround(resolution * wx / longest))),
                     std::max(8, static_cast<int>(std::lround(resolution * wy / longest))), 0};
        }
    }
    const int radius = opt.stencil_radius > 0 ? opt.stencil_radius : (dim == 3 ? 1 : 2);
    const ChartGrid grid(spec, lo, hi, cells, radius, opt.max_nodes);
    out.nodes = grid.size();

    const ChartPoint a{p.radial, 0.0, 0.0};
    const ChartPoint b{q.radial, sep[0], sep[1]};
    std::vector<ChartGrid::SourceLink> sources;
    for (auto node : grid.window(a, radius + 1)) {
        const double c = grid.link_cost(a, grid.point(node));
        if (std::isfinite(c)) sources.push_back({node, c});
    }
    std::vector<std::pair<std::uint32_t, double>> sinks;
    for (auto node : grid.window(b, radius + 1)) {
        const double c = grid.link_cost(grid.point(node), b);
        if (std::isfinite(c)) sinks.push_back({node, c});
    }
    std::vector<char> is_sink(grid.size(), 0);
    std::vector<double> sink_cost(grid.size(), 0.0);
    for (const auto& [node, c] : sinks) {
        is_sink[node] = 1;
        sink_cost[node] = c;
    }
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_node = std::numeric_limits<std::uint32_t>::max();
    std::vector<double> dist;
    std::vector<std::uint32_t> pred;
    grid.dijkstra(sources, dist, &pred, [&](std::uint32_t u, double d) {
        if (d >= best) return false;
        if (is_sink[u] && d + sink_cost[u] < best) {
            best = d + sink_cost[u];
            best_node = u;
        }
        return true;
    });
    if (!std::isfinite(best)) throw SolverError("oracle: target unreachable on the grid");
    out.graph_value = best;

    std::vector<ChartPoint> path{b};
    for (std::uint32_t u = best_node; u != std::numeric_limits<std::uint32_t>::max(); u = pred[u])
        path.push_back(grid.point(u));
    path.push_back(a);
    std::reverse(path.begin(), path.end());
    out.value = best;
    if (opt.refine) {
        const detail::PolylineShortener shortener(model, dim, lo, hi);
        std::vector<ChartPoint> refined = path;
        const double len = shortener.run(refined, opt.refine_segments);
        if (std::isfinite(len) && len < out.value) {
            out.value = len;
            path = std::move(refined);
        }
    }
    out.path = std::move(path);
    return out;
}

inline double oracle_distance(const MetricSpec& spec, const ReducedPoint& p, const ReducedPoint& q, int resolution,
                              const OracleOptions& opt = {}) {
    return oracle_solve(spec, p, q, resolution, opt).value;
}

}  // namespace grushin
