// grushin: command-line front end.
//
// Exit codes: 0 success, 1 certification refuted or inconclusive,
// 2 solver failure (non-convergence, resource budget, I/O), 64 usage error.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
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

namespace {

constexpr int kExitRefuted = 1;
constexpr int kExitSolver = 2;
constexpr int kExitUsage = 64;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    double lambda = 1.0;
    int m = 8;
    int n = 2;
    double alpha = 1.0;
    double eps = 0.15;
    double tol = 1e-8;
    int depth = 48;
    std::uint64_t seed = 42;
    int resolution = 0;
    std::string format = "json";
    std::string output;
    unsigned workers = g::default_workers();
    bool verbose = false;
    bool no_timing = false;

    std::string claim = "C10";
    std::string quantity = "f";
    std::optional<double> r;
    int grid = 1001;
    std::string spec = "sphere";
    std::vector<double> p, q;
    int samples = 256;
    std::vector<double> lambdas{1, 2, 5, 10, 20, 50};
    std::vector<double> eps_list{0.2, 0.1, 0.05, 0.025};
    std::vector<double> scales{0.1, 0.05, 0.02};
    std::string region = "equator-band";
    int radial_cells = 24;
    std::size_t oracle_budget = 40'000'000;
};

void log(const RunConfig& cfg, const std::string& msg) {
    if (cfg.verbose) std::cerr << "[grushin] " << msg << '\n';
}

void emit(const RunConfig& cfg, const std::string& text) {
    std::string body = text;
    if (body.empty() || body.back() != '\n') body += '\n';
    if (cfg.output.empty()) {
        std::cout << body << std::flush;
        return;
    }
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open output file " + cfg.output);
    out << body;
    if (!out.flush()) throw std::ios_base::failure("failed writing output file " + cfg.output);
}

// ---------------------------------------------------------------------------
// shared flags

void add_format(CLI::App* app, RunConfig& cfg) {
    app->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    app->add_option("--output", cfg.output, "write the report to this file instead of stdout");
}

void add_warp(CLI::App* app, RunConfig& cfg, bool with_m_n = true) {
    app->add_option("--lambda", cfg.lambda, "warping parameter, finite and >= 1")
        ->check(CLI::Range(1.0, 1e12))
        ->capture_default_str();
    if (with_m_n) {
        app->add_option("--m", cfg.m, "dimension of the collapsing sphere, >= 1")->check(CLI::PositiveNumber)->capture_default_str();
        app->add_option("--n", cfg.n, "n - 1 is the dimension of the surviving sphere, n >= 2")
            ->check(CLI::Range(2, 1 << 20))
            ->capture_default_str();
    }
}

void add_workers(CLI::App* app, RunConfig& cfg) {
    app->add_option("--workers", cfg.workers, "worker threads, >= 1 (default: available parallelism)")
        ->check(CLI::Range(1u, 1024u))
        ->capture_default_str();
}

void add_tol(CLI::App* app, RunConfig& cfg) {
    app->add_option("--tol", cfg.tol, "solver tolerance, in [1e-14, 1e-2]")->check(CLI::Range(1e-14, 1e-2))->capture_default_str();
}

void add_spec(CLI::App* app, RunConfig& cfg) {
    app->add_option("--spec", cfg.spec, "metric: sphere (r,alpha,beta), hemisphere (phi,beta), grushin (x,y)")
        ->check(CLI::IsMember({"sphere", "hemisphere", "grushin"}))
        ->capture_default_str();
    add_warp(app, cfg);
    app->add_option("--alpha", cfg.alpha, "Grushin exponent, > 0")->check(CLI::Range(1e-6, 1e6))->capture_default_str();
}

g::MetricSpec make_spec(const RunConfig& cfg) {
    g::MetricSpec spec;
    if (cfg.spec == "sphere") spec = g::SphereDWP{{cfg.lambda, cfg.m, cfg.n}};
    else if (cfg.spec == "hemisphere") spec = g::LimitHemisphere{cfg.n};
    else spec = g::GrushinHalfplane{cfg.alpha};
    try {
        g::validate(spec);
    } catch (const g::DomainError& e) {
        throw UsageError(e.what());
    }
    return spec;
}

g::ReducedPoint make_point(const g::MetricSpec& spec, const std::vector<double>& c, const char* flag) {
    const std::size_t want = 1 + static_cast<std::size_t>(g::fiber_count(spec));
    if (c.size() != want)
        throw UsageError(std::string(flag) + " needs " + std::to_string(want) + " comma-separated coordinates for " +
                         g::spec_name(spec));
    g::ReducedPoint p{c[0], {c[1], want == 3 ? c[2] : 0.0}};
    try {
        g::check_point(spec, p, true);
    } catch (const g::DomainError& e) {
        throw UsageError(std::string(flag) + ": " + e.what());
    }
    return p;
}

// ---------------------------------------------------------------------------
// subcommands

int run_eval(const RunConfig& cfg) {
    if (!cfg.r) throw UsageError("--r is required");
    const double r = *cfg.r, lam = cfg.lambda;
    const auto value = [&](const std::string& q) -> double {
        if (q == "f") return g::warp_f(r, lam);
        if (q == "h") return g::warp_h(r, lam);
        if (q == "A") return g::aux_AB(r, lam).A;
        if (q == "B") return g::aux_AB(r, lam).B;
        if (q == "fprime") return g::fprime(r, lam);
        if (q == "hprime") return g::hprime(r, lam);
        if (q == "fsecond") return g::fsecond(r, lam);
        if (q == "hsecond") return g::hsecond(r, lam);
        if (q == "neg_fpp_over_f") return g::ratio_neg_fpp_over_f(r, lam);
        if (q == "neg_fphp_over_fh") return g::ratio_neg_fphp_over_fh(r, lam);
        if (q == "neg_hpp_over_h") return g::ratio_neg_hpp_over_h(r, lam);
        if (q == "one_minus_hp2_over_h2") return g::ratio_one_minus_hp2_over_h2(r, lam);
        return g::ratio_one_minus_fp2_over_f2(r, lam);
    };
    const double v = value(cfg.quantity);
    if (cfg.format == "csv") {
        g::CsvWriter csv({"quantity", "r", "lambda", "value"});
        csv.row(std::vector<std::string>{cfg.quantity, g::format_real(r), g::format_real(lam), g::format_real(v)});
        emit(cfg, csv.str());
    } else {
        emit(cfg, "{\"quantity\":" + g::json_string(cfg.quantity) + ",\"r\":" + g::format_real(r) +
                      ",\"lambda\":" + g::format_real(lam) + ",\"value\":" + g::format_real(v) + "}");
    }
    return 0;
}

int run_curvature(const RunConfig& cfg) {
    const g::WarpParams p{cfg.lambda, cfg.m, cfg.n};
    if (cfg.r) {
        const auto ric = g::ricci(*cfg.r, p);
        const double term = g::term_I(*cfg.r, p).value;
        if (cfg.format == "csv") {
            g::CsvWriter csv({"r", "ric_hh", "ric_uu", "ric_vv", "ric_min", "term_I"});
            csv.row(std::vector<double>{*cfg.r, ric.hh, ric.uu, ric.vv, ric.min(), term});
            emit(cfg, csv.str());
        } else {
            emit(cfg, "{\"r\":" + g::format_real(*cfg.r) + ",\"ric_hh\":" + g::format_real(ric.hh) +
                          ",\"ric_uu\":" + g::format_real(ric.uu) + ",\"ric_vv\":" + g::format_real(ric.vv) +
                          ",\"ric_min\":" + g::format_real(ric.min()) + ",\"term_I\":" + g::format_real(term) + "}");
        }
        return 0;
    }
    const auto scan = g::ric_min_scan(p, static_cast<std::size_t>(cfg.grid));
    const char* dirs[] = {"hh", "uu", "vv"};
    const std::string dir = dirs[static_cast<int>(scan.argmin_direction)];
    if (cfg.format == "csv") {
        g::CsvWriter csv({"grid", "min_value", "argmin_r", "direction"});
        csv.row(std::vector<std::string>{std::to_string(cfg.grid), g::format_real(scan.min_value),
                                         g::format_real(scan.argmin_r), dir});
        emit(cfg, csv.str());
    } else {
        emit(cfg, "{\"grid\":" + std::to_string(cfg.grid) + ",\"min_value\":" + g::format_real(scan.min_value) +
                      ",\"argmin_r\":" + g::format_real(scan.argmin_r) + ",\"direction\":" + g::json_string(dir) + "}");
    }
    return 0;
}

g::CertifyOptions certify_options(const RunConfig& cfg) {
    g::CertifyOptions opt;
    opt.max_depth = cfg.depth;
    opt.workers = cfg.workers;
    return opt;
}

std::string certificate_csv_header() { return "claim,lambda,m,n,status,witness_r,witness_value,witness_bound,min_lo,min_hi,boxes,depth,wall_ms"; }

std::string certificate_csv_row(const g::Certificate& c, bool timing) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::ostringstream os;
    os << c.claim_id << ',' << g::format_real(c.params.lambda) << ',' << c.params.m << ',' << c.params.n << ','
       << g::to_string(c.status) << ',' << g::format_real(c.witness ? c.witness->r : nan) << ','
       << g::format_real(c.witness ? c.witness->value : nan) << ',' << g::format_real(c.witness ? c.witness->bound : nan)
       << ',' << g::format_real(c.min_enclosure.lo()) << ',' << g::format_real(c.min_enclosure.hi()) << ','
       << c.boxes_processed << ',' << c.max_depth << ',' << g::format_real(timing ? c.wall_ms : 0.0);
    return os.str();
}

int run_certify(const RunConfig& cfg) {
    const g::WarpParams p{cfg.lambda, cfg.m, cfg.n};
    const auto& claim = g::find_claim(cfg.claim);
    if (!claim.guard(p)) throw UsageError("claim " + claim.id + " requires " + claim.guard_text);
    log(cfg, "certifying " + claim.id + ": " + claim.description);
    const auto cert = g::certify_claim(cfg.claim, p, certify_options(cfg));
    log(cfg, "status " + std::string(g::to_string(cert.status)) + " after " + std::to_string(cert.boxes_processed) + " boxes");
    if (cfg.format == "csv") emit(cfg, certificate_csv_header() + "\n" + certificate_csv_row(cert, !cfg.no_timing));
    else emit(cfg, g::to_json(cert, !cfg.no_timing));
    return cert.status == g::Status::verified ? 0 : kExitRefuted;
}

int run_registry(const RunConfig& cfg) {
    for (double l : cfg.lambdas)
        if (!(l >= 1.0) || !std::isfinite(l)) throw UsageError("--lambdas: every value must be finite and >= 1");
    log(cfg, "registry over " + std::to_string(g::claim_registry().size()) + " claims");
    const auto rows = g::registry_report(cfg.m, cfg.n, cfg.lambdas, certify_options(cfg));
    std::string out;
    if (cfg.format == "csv") {
        out = certificate_csv_header() + "\n";
        for (const auto& e : rows) {
            if (e.certificate) {
                out += certificate_csv_row(*e.certificate, !cfg.no_timing) + "\n";
            } else {
                out += e.claim_id + "," + g::format_real(e.lambda) + "," + std::to_string(cfg.m) + "," +
                       std::to_string(cfg.n) + ",not_applicable,null,null,null,null,null,0,0,0\n";
            }
        }
    } else {
        out = "[";
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (k) out += ",";
            const auto& e = rows[k];
            out += e.certificate ? g::to_json(*e.certificate, !cfg.no_timing)
                                 : "{\"claim\":" + g::json_string(e.claim_id) + ",\"lambda\":" + g::format_real(e.lambda) +
                                       ",\"m\":" + std::to_string(cfg.m) + ",\"n\":" + std::to_string(cfg.n) +
                                       ",\"status\":\"not_applicable\"}";
        }
        out += "]";
    }
    emit(cfg, out);
    return 0;
}

int run_dist(const RunConfig& cfg) {
    const auto spec = make_spec(cfg);
    const auto p = make_point(spec, cfg.p, "--p"), q = make_point(spec, cfg.q, "--q");
    double value = 0.0, error = 0.0;
    const bool boundary = g::on_completion_boundary(spec, p) || g::on_completion_boundary(spec, q);
    if (boundary) {
        const auto b = g::boundary_distance(spec, p, q, cfg.tol);
        value = b.value;
        error = b.error_estimate;
    } else {
        value = g::distance(spec, p, q, cfg.tol);
    }
    std::optional<double> oracle;
    if (cfg.resolution > 0) {
        if (boundary) throw UsageError("--resolution: the grid oracle needs interior points");
        log(cfg, "grid oracle at resolution " + std::to_string(cfg.resolution));
        g::OracleOptions opt;
        opt.max_nodes = cfg.oracle_budget;
        oracle = g::oracle_distance(spec, p, q, cfg.resolution, opt);
    }
    if (cfg.format == "csv") {
        g::CsvWriter csv({"spec", "distance", "error_estimate", "oracle"});
        csv.row(std::vector<std::string>{g::spec_name(spec), g::format_real(value), g::format_real(error),
                                         oracle ? g::format_real(*oracle) : "null"});
        emit(cfg, csv.str());
    } else {
        emit(cfg, "{\"spec\":" + g::json_string(g::spec_name(spec)) + ",\"distance\":" + g::format_real(value) +
                      ",\"error_estimate\":" + g::format_real(error) +
                      ",\"oracle\":" + (oracle ? g::format_real(*oracle) : "null") + "}");
    }
    return 0;
}

int run_geodesic(const RunConfig& cfg) {
    const auto spec = make_spec(cfg);
    const auto p = make_point(spec, cfg.p, "--p"), q = make_point(spec, cfg.q, "--q");
    if (g::on_completion_boundary(spec, p) || g::on_completion_boundary(spec, q))
        throw UsageError("geodesic paths need interior endpoints");
    const auto path = g::shortest_path(spec, p, q, cfg.tol, cfg.samples);
    if (cfg.format == "csv") {
        g::CsvWriter csv({"s", "r", "alpha", "beta"});
        for (const auto& s : path.samples) {
            // two-dimensional charts have a single fiber, reported as beta
            const double alpha = spec.index() == 0 ? s.point.fiber[0] : 0.0;
            const double beta = spec.index() == 0 ? s.point.fiber[1] : s.point.fiber[0];
            csv.row(std::vector<double>{s.s, s.point.radial, alpha, beta});
        }
        emit(cfg, csv.str());
    } else {
        std::string out = "{\"spec\":" + g::json_string(g::spec_name(spec)) + ",\"length\":" + g::format_real(path.length) +
                          ",\"clairaut\":[" + g::format_real(path.clairaut[0]) + "," + g::format_real(path.clairaut[1]) +
                          "],\"energy_drift\":" + g::format_real(path.energy_drift) + ",\"samples\":[";
        for (std::size_t k = 0; k < path.samples.size(); ++k) {
            const auto& s = path.samples[k];
            if (k) out += ",";
            out += "[" + g::format_real(s.s) + "," + g::format_real(s.point.radial) + "," +
                   g::format_real(s.point.fiber[0]) + "," + g::format_real(s.point.fiber[1]) + "]";
        }
        emit(cfg, out + "]}");
    }
    return 0;
}

int run_sweep(const RunConfig& cfg) {
    if (cfg.lambdas.empty()) throw UsageError("--lambdas must not be empty");
    for (std::size_t k = 0; k < cfg.lambdas.size(); ++k) {
        if (!(cfg.lambdas[k] >= 1.0) || !std::isfinite(cfg.lambdas[k]))
            throw UsageError("--lambdas: every value must be finite and >= 1");
        if (k && cfg.lambdas[k] < cfg.lambdas[k - 1]) throw UsageError("--lambdas must be nondecreasing");
    }
    g::LabOptions opt;
    opt.radial_cells = cfg.radial_cells;
    opt.workers = cfg.workers;
    log(cfg, "sweep over " + std::to_string(cfg.lambdas.size()) + " lambda values");
    const auto rows = g::convergence_sweep(cfg.n, cfg.m, cfg.lambdas, cfg.eps, 1e-12, cfg.seed, opt);
    emit(cfg, cfg.format == "csv" ? g::sweep_csv(rows) : g::sweep_json(rows));
    return 0;
}

int run_probe(const RunConfig& cfg) {
    const auto spec = make_spec(cfg);
    const auto region = cfg.region == "equator-band" ? g::ProbeRegion::equator_band : g::ProbeRegion::interior_ball;
    if (region == g::ProbeRegion::equator_band && spec.index() == 0)
        throw UsageError("--region equator-band needs --spec hemisphere or grushin");
    if (cfg.eps_list.size() < 3) throw UsageError("--eps-list needs at least 3 values");
    for (std::size_t k = 0; k < cfg.eps_list.size(); ++k)
        if (!(cfg.eps_list[k] > 0.0) || (k && !(cfg.eps_list[k] < cfg.eps_list[k - 1])))
            throw UsageError("--eps-list must be positive and strictly decreasing");
    const auto probe = g::dimension_probe(spec, region, cfg.eps_list, cfg.tol);
    log(cfg, "slope " + g::format_real(probe.slope) + (probe.reliable ? "" : " (unreliable fit)"));
    emit(cfg, cfg.format == "csv" ? g::probe_csv(probe) : g::probe_json(probe));
    return 0;
}

int run_tangent(const RunConfig& cfg) {
    for (std::size_t k = 0; k < cfg.scales.size(); ++k)
        if (!(cfg.scales[k] > 0.0 && cfg.scales[k] <= 0.1) || (k && !(cfg.scales[k] < cfg.scales[k - 1])))
            throw UsageError("--scales must be strictly decreasing values in (0, 0.1]");
    const auto rows = g::tangent_cone_check(cfg.n, cfg.scales, std::min(cfg.tol, 1e-9), cfg.workers);
    emit(cfg, cfg.format == "csv" ? g::tangent_csv(rows) : g::tangent_json(rows));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"Doubly warped sphere metrics, their Ricci bounds, and their collapse to the Grushin hemisphere"};
    app.require_subcommand(1);
    app.add_flag("--verbose", cfg.verbose, "progress messages on stderr");

    std::vector<std::string> quantities{"f", "h", "A", "B", "fprime", "hprime", "fsecond", "hsecond",
                                        "neg_fpp_over_f", "neg_fphp_over_fh", "neg_hpp_over_h",
                                        "one_minus_hp2_over_h2", "one_minus_fp2_over_f2"};
    std::vector<std::string> claim_ids;
    for (const auto& c : g::claim_registry()) claim_ids.push_back(c.id);

    auto* eval = app.add_subcommand("eval", "evaluate a closed-form warping quantity at r");
    eval->add_option("--quantity", cfg.quantity, "quantity to evaluate")->check(CLI::IsMember(quantities))->capture_default_str();
    eval->add_option("--r", cfg.r, "radius in [0, pi/2]")->check(CLI::Range(0.0, g::kHalfPi))->required();
    add_warp(eval, cfg, false);
    add_format(eval, cfg);

    auto* curv = app.add_subcommand("curvature", "Ricci components at r, or their minimum over a grid");
    curv->add_option("--r", cfg.r, "radius in [0, pi/2]; omit for a grid scan")->check(CLI::Range(0.0, g::kHalfPi));
    curv->add_option("--grid", cfg.grid, "scan grid size, >= 2")->check(CLI::Range(2, 100'000'000))->capture_default_str();
    add_warp(curv, cfg);
    add_format(curv, cfg);

    auto* cert = app.add_subcommand("certify", "certify or refute a registered inequality by interval arithmetic");
    cert->add_option("--claim", cfg.claim, "claim id")->check(CLI::IsMember(claim_ids))->capture_default_str();
    cert->add_option("--depth", cfg.depth, "maximum bisection depth, in [1, 60]")->check(CLI::Range(1, 60))->capture_default_str();
    cert->add_flag("--no-timing", cfg.no_timing, "write wall_ms as 0 (byte-stable output)");
    add_warp(cert, cfg);
    add_workers(cert, cfg);
    add_format(cert, cfg);

    auto* reg = app.add_subcommand("registry", "status of every registered claim over a lambda list");
    reg->add_option("--lambdas", cfg.lambdas, "lambda values, each >= 1")->delimiter(',')->capture_default_str();
    reg->add_option("--depth", cfg.depth, "maximum bisection depth, in [1, 60]")->check(CLI::Range(1, 60))->capture_default_str();
    reg->add_flag("--no-timing", cfg.no_timing, "write wall_ms as 0 (byte-stable output)");
    add_warp(reg, cfg);
    add_workers(reg, cfg);
    add_format(reg, cfg);

    auto* dist = app.add_subcommand("dist", "geodesic distance between two chart points");
    add_spec(dist, cfg);
    dist->add_option("--p", cfg.p, "first point, comma separated chart coordinates")->delimiter(',')->required();
    dist->add_option("--q", cfg.q, "second point, comma separated chart coordinates")->delimiter(',')->required();
    dist->add_option("--resolution", cfg.resolution, "also run the grid oracle at this resolution, in [64, 4096]")
        ->check(CLI::Range(64, 4096));
    dist->add_option("--oracle-budget", cfg.oracle_budget, "grid oracle node budget, >= 1; exceeding it is a solver failure")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_tol(dist, cfg);
    add_format(dist, cfg);

    auto* geo = app.add_subcommand("geodesic", "sampled minimizing geodesic between two interior points");
    add_spec(geo, cfg);
    geo->add_option("--p", cfg.p, "start point, comma separated chart coordinates")->delimiter(',')->required();
    geo->add_option("--q", cfg.q, "end point, comma separated chart coordinates")->delimiter(',')->required();
    geo->add_option("--samples", cfg.samples, "path samples, in [2, 100000]")->check(CLI::Range(2, 100'000))->capture_default_str();
    add_tol(geo, cfg);
    add_format(geo, cfg);

    auto* sweep = app.add_subcommand("gh-sweep", "distortion of the collapse correspondence over lambda");
    sweep->add_option("--lambdas", cfg.lambdas, "nondecreasing lambda values, each >= 1")->delimiter(',')->capture_default_str();
    sweep->add_option("--eps", cfg.eps, "net radius, in [0.05, 4]")->check(CLI::Range(0.05, 4.0))->capture_default_str();
    sweep->add_option("--seed", cfg.seed, "net start seed")->capture_default_str();
    sweep->add_option("--radial-cells", cfg.radial_cells, "lattice cells along r, in [4, 64]")
        ->check(CLI::Range(4, 64))
        ->capture_default_str();
    sweep->add_option("--m", cfg.m, "dimension of the collapsing sphere, >= 1")->check(CLI::PositiveNumber)->capture_default_str();
    sweep->add_option("--n", cfg.n, "n - 1 is the dimension of the surviving sphere, n >= 2")
        ->check(CLI::Range(2, 1 << 20))
        ->capture_default_str();
    add_workers(sweep, cfg);
    add_format(sweep, cfg);

    auto* probe = app.add_subcommand("probe-dim", "covering-number dimension estimate of a region");
    add_spec(probe, cfg);
    probe->add_option("--region", cfg.region, "region to cover")
        ->check(CLI::IsMember({"equator-band", "interior-ball"}))
        ->capture_default_str();
    probe->add_option("--eps-list", cfg.eps_list, "strictly decreasing radii, at least 3")->delimiter(',')->capture_default_str();
    add_tol(probe, cfg);
    add_format(probe, cfg);

    auto* tangent = app.add_subcommand("tangent-cone", "rescaled hemisphere distances against the Grushin plane");
    tangent->add_option("--n", cfg.n, "hemisphere dimension, >= 2")->check(CLI::Range(2, 1 << 20))->capture_default_str();
    tangent->add_option("--scales", cfg.scales, "strictly decreasing scales in (0, 0.1]")->delimiter(',')->capture_default_str();
    add_tol(tangent, cfg);
    add_workers(tangent, cfg);
    add_format(tangent, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*eval) return run_eval(cfg);
        if (*curv) return run_curvature(cfg);
        if (*cert) return run_certify(cfg);
        if (*reg) return run_registry(cfg);
        if (*dist) return run_dist(cfg);
        if (*geo) return run_geodesic(cfg);
        if (*sweep) return run_sweep(cfg);
        if (*probe) return run_probe(cfg);
        if (*tangent) return run_tangent(cfg);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const g::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const g::SolverError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kExitSolver;
    } catch (const g::OracleBudgetError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kExitSolver;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitSolver;
    }
    return kExitUsage;
}
