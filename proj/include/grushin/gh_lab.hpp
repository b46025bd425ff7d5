#pragma once

// Gromov-Hausdorff experiments at desk scale.
//
// Nets and distance matrices live on lattices over the compact reduced charts
// (sphere family, limit hemisphere) with their shortest-path metrics. The
// collapse correspondence (r, alpha, beta) -> (r, beta) pairs a sphere net
// with its image in the hemisphere lattice, which has the same (r, beta)
// nodes and the same stencil, so both sides share the discretisation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "grushin/geodesics.hpp"
#include "grushin/grid_oracle.hpp"
#include "grushin/metric.hpp"
#include "grushin/parallel.hpp"
#include "grushin/report.hpp"

namespace grushin {

struct LabOptions {
    int radial_cells = 24;  // lattice cells along r; each fiber axis gets twice as many
    int stencil_radius = 2;
    unsigned workers = default_workers();
};

/// Shortest-path metric of a lattice over a compact chart. Edge weights depend
/// only on the radial row, so the metric is invariant under fiber translations
/// and reflections: the distance between two nodes is read from the
/// single-source table of the lower radial row at their fiber offsets.
class LatticeMetric {
public:
    LatticeMetric(const MetricSpec& spec, const LabOptions& opt) : spec_(spec), grid_(make_grid(spec, opt)) {
        const int rows = grid_.counts()[0];
        tables_.resize(static_cast<std::size_t>(rows));
        parallel_for(static_cast<std::size_t>(rows), opt.workers, [&](std::size_t i) {
            grid_.dijkstra({{grid_.id(static_cast<int>(i), 0, 0), 0.0}}, tables_[i], nullptr,
                           [](std::uint32_t, double) { return true; });
        });
    }

    [[nodiscard]] const MetricSpec& spec() const { return spec_; }
    [[nodiscard]] const ChartGrid& grid() const { return grid_; }
    [[nodiscard]] std::size_t size() const { return grid_.size(); }

    [[nodiscard]] ReducedPoint point(std::uint32_t u) const {
        const auto x = grid_.point(u);
        return {x[0], {x[1], x[2]}};
    }

    [[nodiscard]] double operator()(std::uint32_t u, std::uint32_t v) const {
        auto a = grid_.index(u), b = grid_.index(v);
        if (a[0] > b[0]) std::swap(a, b);
        return tables_[static_cast<std::size_t>(a[0])][grid_.id(b[0], std::abs(a[1] - b[1]), std::abs(a[2] - b[2]))];
    }

private:
    static ChartGrid make_grid(const MetricSpec& spec, const LabOptions& opt) {
        validate(spec);
        if (opt.radial_cells < 4) throw DomainError("radial_cells must be >= 4");
        if (opt.stencil_radius < 1) throw DomainError("stencil_radius must be >= 1");
        const int nr = opt.radial_cells;
        constexpr std::size_t budget = 40'000'000;
        switch (spec.index()) {
            case 0: return ChartGrid(spec, {0.0, 0.0, 0.0}, {kHalfPi, kPi, kPi}, {nr, 2 * nr, 2 * nr}, opt.stencil_radius, budget);
            case 1: return ChartGrid(spec, {0.0, 0.0, 0.0}, {kHalfPi, kPi, 0.0}, {nr, 2 * nr, 0}, opt.stencil_radius, budget);
            default: throw DomainError("lattice metrics need a compact chart (sphere or hemisphere)");
        }
    }

    MetricSpec spec_;
    ChartGrid grid_;
    std::vector<std::vector<double>> tables_;
};

struct NetSample {
    MetricSpec spec;
    std::vector<ReducedPoint> points;
    double epsilon = 0.0;
    bool covering_verified = false;
    double covering_radius = 0.0;       // max over lattice nodes of the distance to the net
    std::vector<std::uint32_t> nodes;  // lattice nodes of the points
};

/// Farthest-point sampling over all lattice nodes, started at a node drawn
/// from `seed`, until every node lies within epsilon of the net.
inline NetSample build_net(const LatticeMetric& metric, double epsilon, std::uint64_t seed) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("epsilon must be a finite value > 0");
    const std::size_t n = metric.size();
    std::mt19937_64 rng(seed);
    std::uint32_t current = static_cast<std::uint32_t>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    NetSample net;
    net.spec = metric.spec();
    net.epsilon = epsilon;
    for (;;) {
        net.nodes.push_back(current);
        std::size_t far = 0;
        for (std::size_t v = 0; v < n; ++v) {
            nearest[v] = std::min(nearest[v], metric(current, static_cast<std::uint32_t>(v)));
            if (nearest[v] > nearest[far]) far = v;
        }
        net.covering_radius = nearest[far];
        if (nearest[far] <= epsilon) break;
        current = static_cast<std::uint32_t>(far);
    }
    // independent pass over the probe lattice
    double radius = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
        double d = std::numeric_limits<double>::infinity();
        for (auto u : net.nodes) d = std::min(d, metric(u, static_cast<std::uint32_t>(v)));
        radius = std::max(radius, d);
    }
    net.covering_verified = radius <= epsilon;
    for (auto u : net.nodes) net.points.push_back(metric.point(u));
    return net;
}

inline NetSample build_net(const MetricSpec& spec, double epsilon, std::uint64_t seed, const LabOptions& opt = {}) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("epsilon must be a finite value > 0");
    return build_net(LatticeMetric(spec, opt), epsilon, seed);
}

struct DistanceMatrix {
    std::size_t size = 0;
    std::vector<double> entries;  // row-major, size x size
    double tol = 0.0;

    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return entries[i * size + j]; }
};

inline DistanceMatrix lattice_matrix(const LatticeMetric& metric, const std::vector<std::uint32_t>& nodes,
                                     double tol = 1e-12) {
    DistanceMatrix m{nodes.size(), std::vector<double>(nodes.size() * nodes.size(), 0.0), tol};
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            m.entries[i * m.size + j] = m.entries[j * m.size + i] = metric(nodes[i], nodes[j]);
    return m;
}

/// Matrix of geodesic distances (shooting, boundary extrapolation where
/// needed), filled in parallel over index pairs.
inline DistanceMatrix distance_matrix(const MetricSpec& spec, const std::vector<ReducedPoint>& points, double tol,
                                      unsigned workers = default_workers()) {
    const std::size_t n = points.size();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    std::vector<double> values(pairs.size());
    parallel_for(pairs.size(), workers, [&](std::size_t k) {
        values[k] = chart_distance(spec, points[pairs[k].first], points[pairs[k].second], tol);
    });
    DistanceMatrix m{n, std::vector<double>(n * n, 0.0), tol};
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto [i, j] = pairs[k];
        m.entries[i * n + j] = m.entries[j * n + i] = values[k];
    }
    return m;
}

namespace detail {

/// Hausdorff distance between two finite sets of reals.
inline double hausdorff_1d(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) return a.empty() && b.empty() ? 0.0 : std::numeric_limits<double>::infinity();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const auto one_way = [](const std::vector<double>& from, const std::vector<double>& to) {
        double worst = 0.0;
        for (const double x : from) {
            const auto it = std::lower_bound(to.begin(), to.end(), x);
            double d = std::numeric_limits<double>::infinity();
            if (it != to.end()) d = *it - x;
            if (it != to.begin()) d = std::min(d, x - *std::prev(it));
            worst = std::max(worst, d);
        }
        return worst;
    };
    return std::max(one_way(a, b), one_way(b, a));
}

}  // namespace detail

/// Lower bound on the GH distance of two finite metric spaces: half the larger
/// of the Hausdorff distances between their sets of distance values and
/// between their sets of eccentricities. Both are distortion lower bounds for
/// every correspondence.
inline double gh_lower_bound(const DistanceMatrix& a, const DistanceMatrix& b) {
    const auto values = [](const DistanceMatrix& m) {
        std::vector<double> v{0.0};
        for (std::size_t i = 0; i < m.size; ++i)
            for (std::size_t j = i + 1; j < m.size; ++j) v.push_back(m(i, j));
        return v;
    };
    const auto eccentricities = [](const DistanceMatrix& m) {
        std::vector<double> e(m.size, 0.0);
        for (std::size_t i = 0; i < m.size; ++i)
            for (std::size_t j = 0; j < m.size; ++j) e[i] = std::max(e[i], m(i, j));
        return e;
    };
    return 0.5 * std::max(detail::hausdorff_1d(values(a), values(b)),
                          detail::hausdorff_1d(eccentricities(a), eccentricities(b)));
}

struct DistortionReport {
    double lambda = 0.0;
    double epsilon = 0.0;
    std::size_t net_size_a = 0;
    std::size_t net_size_b = 0;
    double distortion = 0.0;
    std::pair<std::size_t, std::size_t> argmax_pair{0, 0};
    double gh_upper = 0.0;
    double gh_lower = 0.0;
};

/// Hemisphere lattice node with the same (r, beta) indices as a sphere node.
inline std::uint32_t project_node(const LatticeMetric& sphere, const LatticeMetric& hemisphere, std::uint32_t u) {
    const auto ix = sphere.grid().index(u);
    return hemisphere.grid().id(ix[0], ix[2], 0);
}

/// Distortion of the collapse correspondence between a sphere-family net and
/// its projection. `hemisphere` must be built with the same LabOptions.
inline DistortionReport distortion_projection(const WarpParams& params, double epsilon, double tol,
                                              const LatticeMetric& hemisphere, std::uint64_t seed = 42,
                                              const LabOptions& opt = {}) {
    params.validate();
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("epsilon must be a finite value > 0");
    if (!(tol >= 0.0)) throw DomainError("tol must be >= 0");
    if (hemisphere.spec().index() != 1) throw DomainError("projection target must be the hemisphere lattice");
    const LatticeMetric sphere(SphereDWP{params}, opt);
    if (sphere.grid().counts()[0] != hemisphere.grid().counts()[0] ||
        sphere.grid().counts()[2] != hemisphere.grid().counts()[1])
        throw DomainError("sphere and hemisphere lattices differ");
    const NetSample net = build_net(sphere, epsilon, seed);
    std::vector<std::uint32_t> image;
    for (auto u : net.nodes) image.push_back(project_node(sphere, hemisphere, u));

    DistortionReport rep;
    rep.lambda = params.lambda;
    rep.epsilon = epsilon;
    rep.net_size_a = net.nodes.size();
    for (std::size_t i = 0; i < image.size(); ++i)
        for (std::size_t j = i + 1; j < image.size(); ++j) {
            const double d = std::fabs(sphere(net.nodes[i], net.nodes[j]) - hemisphere(image[i], image[j]));
            if (d > rep.distortion) {
                rep.distortion = d;
                rep.argmax_pair = {i, j};
            }
        }
    std::vector<std::uint32_t> distinct = image;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    rep.net_size_b = distinct.size();
    rep.gh_upper = 0.5 * rep.distortion + 2.0 * epsilon;
    rep.gh_lower = gh_lower_bound(lattice_matrix(sphere, net.nodes, tol), lattice_matrix(hemisphere, distinct, tol));
    return rep;
}

inline DistortionReport distortion_projection(const WarpParams& params, double epsilon, double tol,
                                              std::uint64_t seed = 42, const LabOptions& opt = {}) {
    return distortion_projection(params, epsilon, tol, LatticeMetric(LimitHemisphere{params.n}, opt), seed, opt);
}

/// One report per lambda (nondecreasing list), sharing the hemisphere lattice.
inline std::vector<DistortionReport> convergence_sweep(int n, int m, const std::vector<double>& lambdas,
                                                       double epsilon, double tol = 1e-12, std::uint64_t seed = 42,
                                                       const LabOptions& opt = {}) {
    if (lambdas.empty()) throw DomainError("lambda list must not be empty");
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        WarpParams{lambdas[k], m, n}.validate();
        if (k && lambdas[k] < lambdas[k - 1]) throw DomainError("lambda list must be increasing");
    }
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("epsilon must be a finite value > 0");
    const LatticeMetric hemisphere(LimitHemisphere{n}, opt);
    std::vector<DistortionReport> out;
    for (const double lambda : lambdas) out.push_back(distortion_projection({lambda, m, n}, epsilon, tol, hemisphere, seed, opt));
    return out;
}

inline std::string sweep_csv(const std::vector<DistortionReport>& reports) {
    CsvWriter csv({"lambda", "epsilon", "net_size_A", "net_size_B", "distortion", "gh_upper", "gh_lower"});
    for (const auto& r : reports)
        csv.row(std::vector<double>{r.lambda, r.epsilon, static_cast<double>(r.net_size_a),
                                    static_cast<double>(r.net_size_b), r.distortion, r.gh_upper, r.gh_lower});
    return csv.str();
}

inline std::string sweep_json(const std::vector<DistortionReport>& reports) {
    std::string out = "[";
    for (std::size_t k = 0; k < reports.size(); ++k) {
        const auto& r = reports[k];
        if (k) out += ",";
        out += "{\"lambda\":" + format_real(r.lambda) + ",\"epsilon\":" + format_real(r.epsilon) +
               ",\"net_size_A\":" + std::to_string(r.net_size_a) + ",\"net_size_B\":" + std::to_string(r.net_size_b) +
               ",\"distortion\":" + format_real(r.distortion) + ",\"gh_upper\":" + format_real(r.gh_upper) +
               ",\"gh_lower\":" + format_real(r.gh_lower) + "}";
    }
    return out + "]";
}

// ---------------------------------------------------------------------------
// Covering-number dimension probes

enum class ProbeRegion { equator_band, interior_ball };

inline std::string to_string(ProbeRegion r) { return r == ProbeRegion::equator_band ? "equator-band" : "interior-ball"; }

struct DimensionProbe {
    std::vector<double> epsilons;
    std::vector<double> counts;
    double slope = 0.0;
    double residual = 0.0;  // RMS residual of the log-log fit
    bool reliable = false;  // residual <= 0.2
};

namespace detail {

inline void fit_slope(DimensionProbe& p) {
    const std::size_t k = p.epsilons.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> x(k), y(k);
    for (std::size_t i = 0; i < k; ++i) {
        x[i] = std::log(1.0 / p.epsilons[i]);
        y[i] = std::log(p.counts[i]);
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double kk = static_cast<double>(k);
    p.slope = (kk * sxy - sx * sy) / (kk * sxx - sx * sx);
    const double icpt = (sy - p.slope * sx) / kk;
    double ss = 0.0;
    for (std::size_t i = 0; i < k; ++i) ss += std::pow(y[i] - icpt - p.slope * x[i], 2);
    p.residual = std::sqrt(ss / kk);
    p.reliable = p.residual <= 0.2;
}

/// Largest fiber offset rho with boundary distance (0,0)-(0,rho) <= epsilon,
/// by bisection in log rho (the distance grows with the offset).
inline double boundary_reach(const MetricSpec& spec, double epsilon, double length, double tol) {
    const auto d = [&](double rho) { return boundary_distance(spec, {0.0, {0.0, 0.0}}, {0.0, {rho, 0.0}}, tol).value; };
    if (d(length) <= epsilon) return length;
    double lo = length * 1e-9, hi = length;
    if (d(lo) > epsilon) throw SolverError("boundary reach below the bisection bracket");
    while (hi / lo > 1.0 + 1e-5) {
        const double mid = std::sqrt(lo * hi);
        (d(mid) <= epsilon ? lo : hi) = mid;
    }
    return lo;
}

/// Chart box (radial x fiber) of the interior probe region.
inline std::array<double, 4> interior_region(const MetricSpec& spec) {
    switch (spec.index()) {
        case 0: return {0.5, 1.0, 0.0, 0.5};  // slice alpha = 0 of the sphere chart
        case 1: return {0.5, 1.0, 0.0, 0.5};
        default: return {0.5, 1.0, 0.0, 0.5};
    }
}

}  // namespace detail

/// Least-squares slope of log N(eps) against log(1/eps), N the greedy
/// covering number of the region.
///   equator-band: the completion boundary (hemisphere equator, beta in
///     [0, pi]; Grushin singular line, y in [0, 1]). Balls centred there meet
///     it in intervals of half-length rho(eps), found from boundary_distance,
///     and the greedy cover of a segment of length L has ceil(L / 2 rho) balls.
///   interior-ball: a chart box away from the singular set (for the sphere
///     family the alpha = 0 slice, a smooth surface); greedy cover by lattice
///     balls on a grid with spacing eps_min / 8.
inline DimensionProbe dimension_probe(const MetricSpec& spec, ProbeRegion region, const std::vector<double>& epsilons,
                                      double tol = 1e-8, int stencil_radius = 2) {
    validate(spec);
    if (epsilons.size() < 3) throw DomainError("dimension_probe needs at least 3 epsilon values");
    for (std::size_t k = 0; k < epsilons.size(); ++k) {
        if (!(epsilons[k] > 0.0) || !std::isfinite(epsilons[k])) throw DomainError("epsilon values must be > 0");
        if (k && !(epsilons[k] < epsilons[k - 1])) throw DomainError("epsilon list must be decreasing");
    }
    DimensionProbe out;
    out.epsilons = epsilons;
    if (region == ProbeRegion::equator_band) {
        if (spec.index() == 0) throw DomainError("the sphere family has no completion boundary; use interior-ball");
        const double length = spec.index() == 1 ? kPi : 1.0;
        for (const double eps : epsilons) {
            const double rho = detail::boundary_reach(spec, eps, length, tol);
            out.counts.push_back(std::ceil(length / (2.0 * rho)));
        }
    } else {
        const auto box = detail::interior_region(spec);
        const double eps_max = epsilons.front(), eps_min = epsilons.back();
        const ReducedModel model(spec);
        const int fiber = spec.index() == 0 ? 1 : 0;
        const double r_top = spec.index() == 2 ? box[1] + eps_max : std::min(kHalfPi, box[1] + eps_max);
        const double r_bot = std::max(0.0, box[0] - eps_max);
        // fiber spacing chosen so that steps have comparable metric length at the box centre
        const double h = eps_min / 8.0;
        const double g_mid = model.scale(fiber, 0.5 * (box[0] + box[1]));
        const double hf = h / g_mid;
        const double f_lo = box[2] - eps_max / model.scale(fiber, r_top) - hf;
        const double f_hi = box[3] + eps_max / model.scale(fiber, r_top) + hf;
        const int nr = static_cast<int>(std::ceil((r_top - r_bot) / h));
        const int nf = static_cast<int>(std::ceil((f_hi - f_lo) / hf));
        ChartPoint lo{r_bot, 0.0, 0.0}, hi{r_top, 0.0, 0.0};
        std::array<int, 3> cells{nr, 0, 0};
        lo[1 + fiber] = f_lo;
        hi[1 + fiber] = f_hi;
        cells[1 + fiber] = nf;
        const ChartGrid grid(spec, lo, hi, cells, stencil_radius, 40'000'000);
        std::vector<std::uint32_t> members;
        for (std::uint32_t u = 0; u < grid.size(); ++u) {
            const auto x = grid.point(u);
            if (x[0] >= box[0] && x[0] <= box[1] && x[1 + fiber] >= box[2] && x[1 + fiber] <= box[3]) members.push_back(u);
        }
        std::vector<double> scratch(grid.size(), std::numeric_limits<double>::infinity());
        for (const double eps : epsilons) {
            std::vector<char> covered(grid.size(), 0);
            double count = 0;
            for (const auto u : members) {
                if (covered[u]) continue;
                ++count;
                grid.ball(u, eps, scratch, [&](std::uint32_t v, double) { covered[v] = 1; });
            }
            out.counts.push_back(count);
        }
    }
    detail::fit_slope(out);
    return out;
}

inline std::string probe_csv(const DimensionProbe& p) {
    CsvWriter csv({"epsilon", "covering_number"});
    for (std::size_t k = 0; k < p.epsilons.size(); ++k) csv.row(std::vector<double>{p.epsilons[k], p.counts[k]});
    return csv.str();
}

inline std::string probe_json(const DimensionProbe& p) {
    std::string out = "{\"rows\":[";
    for (std::size_t k = 0; k < p.epsilons.size(); ++k) {
        if (k) out += ",";
        out += "{\"epsilon\":" + format_real(p.epsilons[k]) + ",\"covering_number\":" + format_real(p.counts[k]) + "}";
    }
    out += "],\"slope\":" + format_real(p.slope) + ",\"residual\":" + format_real(p.residual) +
           ",\"reliable\":" + (p.reliable ? "true" : "false") + "}";
    return out;
}

// ---------------------------------------------------------------------------
// Tangent cone at an equator point

struct TangentConeRow {
    double scale = 0.0;
    double max_rel_err = 0.0;             // (s a, s^2 b) rescaling
    double isotropic_max_rel_err = 0.0;   // (s a, s b) rescaling, for comparison
    std::vector<double> rel_errors;       // per pair, anisotropic
};

/// Pattern offsets (a, b): radial a and equatorial b on a 5 x 5 grid in [0, 1]^2.
inline std::vector<std::array<double, 2>> tangent_pattern() {
    std::vector<std::array<double, 2>> pts;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) pts.push_back({0.25 * i, 0.25 * j});
    return pts;
}

/// Compares s^-1 d_hemisphere at the equator point (0, 0) with the Grushin
/// (alpha = 1) distance on pairs from O = (0, 0) and C = (0.5, 0.5) to the
/// pattern, a point (a, b) being placed at (phi, beta) = (s a, s^2 b).
inline std::vector<TangentConeRow> tangent_cone_check(int n, const std::vector<double>& scales, double tol = 1e-9,
                                                      unsigned workers = default_workers()) {
    if (n < 2) throw DomainError("hemisphere dimension n must be >= 2");
    if (scales.empty()) throw DomainError("scale list must not be empty");
    for (std::size_t k = 0; k < scales.size(); ++k) {
        if (!(scales[k] > 0.0 && scales[k] <= 0.1)) throw DomainError("scales must lie in (0, 0.1]");
        if (k && !(scales[k] < scales[k - 1])) throw DomainError("scales must be decreasing");
    }
    const MetricSpec hemi = LimitHemisphere{n};
    const MetricSpec grushin = GrushinHalfplane{1.0};
    const auto pattern = tangent_pattern();
    std::vector<std::pair<std::array<double, 2>, std::array<double, 2>>> pairs;
    for (const auto& src : {std::array<double, 2>{0.0, 0.0}, std::array<double, 2>{0.5, 0.5}})
        for (const auto& p : pattern) pairs.emplace_back(src, p);
    const auto dist = [&](const MetricSpec& spec, const std::array<double, 2>& a, const std::array<double, 2>& b) {
        if (a == b) return 0.0;
        return chart_distance(spec, {a[0], {a[1], 0.0}}, {b[0], {b[1], 0.0}}, tol);
    };
    std::vector<double> reference(pairs.size());
    parallel_for(pairs.size(), workers, [&](std::size_t k) { reference[k] = dist(grushin, pairs[k].first, pairs[k].second); });

    std::vector<TangentConeRow> rows;
    for (const double s : scales) {
        TangentConeRow row;
        row.scale = s;
        row.rel_errors.assign(pairs.size(), 0.0);
        std::vector<double> iso(pairs.size(), 0.0);
        parallel_for(pairs.size(), workers, [&](std::size_t k) {
            const auto& [a, b] = pairs[k];
            if (reference[k] == 0.0) return;
            const double d = dist(hemi, {s * a[0], s * s * a[1]}, {s * b[0], s * s * b[1]}) / s;
            const double di = dist(hemi, {s * a[0], s * a[1]}, {s * b[0], s * b[1]}) / s;
            row.rel_errors[k] = std::fabs(d - reference[k]) / reference[k];
            iso[k] = std::fabs(di - reference[k]) / reference[k];
        });
        row.max_rel_err = *std::max_element(row.rel_errors.begin(), row.rel_errors.end());
        row.isotropic_max_rel_err = *std::max_element(iso.begin(), iso.end());
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::string tangent_csv(const std::vector<TangentConeRow>& rows) {
    CsvWriter csv({"scale", "max_rel_err"});
    for (const auto& r : rows) csv.row(std::vector<double>{r.scale, r.max_rel_err});
    return csv.str();
}

inline std::string tangent_json(const std::vector<TangentConeRow>& rows) {
    std::string out = "[";
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (k) out += ",";
        out += "{\"scale\":" + format_real(rows[k].scale) + ",\"max_rel_err\":" + format_real(rows[k].max_rel_err) +
               ",\"isotropic_max_rel_err\":" + format_real(rows[k].isotropic_max_rel_err) + "}";
    }
    return out + "]";
}

}  // namespace grushin
