// Command-line front end: graph verification, process sampling and exact
// covariances, Markov-property checks, the heat-equation and rhombus-grid
// experiments, Galton-Watson trees, bridge maxima and the construction
// counterexample.  Every stochastic command takes a 64-bit seed (flag or
// TLG_SEED) and emits a manifest with checksums of all outputs.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "tlg/bridge_stats.hpp"
#include "tlg/cells.hpp"
#include "tlg/embed.hpp"
#include "tlg/fixtures.hpp"
#include "tlg/gwtree.hpp"
#include "tlg/io.hpp"
#include "tlg/process.hpp"
#include "tlg/rhombus.hpp"
#include "tlg/rng.hpp"
#include "tlg/she.hpp"
#include "tlg/tower.hpp"

#ifndef TLG_GIT_DESCRIBE
#define TLG_GIT_DESCRIBE "unknown"
#endif

namespace {

namespace fs = std::filesystem;
using namespace tlg;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNegative = 2;

std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t value) {
    if (opt->count() > 0) return value;
    if (const char* env = std::getenv("TLG_SEED")) return std::stoull(env);
    throw CLI::ValidationError("seed", "stochastic commands need --seed or TLG_SEED");
}

void prepare_output_dir(const std::string& dir, bool force) {
    if (fs::exists(dir) && !fs::is_directory(dir))
        throw std::runtime_error(dir + " exists and is not a directory");
    fs::create_directories(dir);
    if (!force) {
        for (const auto& entry : fs::directory_iterator(dir))
            throw std::runtime_error("output directory " + dir +
                                     " is not empty (use --force to overwrite); found " +
                                     entry.path().filename().string());
    }
}

std::shared_ptr<const ProcessFamily> family_from_json(const nlohmann::json& spec) {
    const std::string kind = spec.at("kind").get<std::string>();
    if (kind == "homogeneous-brownian") return std::make_shared<BrownianFamily>();
    if (kind == "two-sided-brownian") return std::make_shared<TwoSidedBrownianFamily>();
    if (kind == "scaled-brownian-bridge") {
        const double scale = spec.value("variance", 1.0);
        return std::make_shared<ScaledBrownianBridgeFamily>(scale);
    }
    if (kind == "time-changed") {
        auto fam = std::make_shared<TimeChangedFamily>(spec.value("markov", false));
        for (const auto& entry : spec.at("warps")) {
            std::vector<int> path;
            for (const auto& e : entry.at("path")) path.push_back(e.get<int>());
            std::vector<std::pair<double, double>> pts;
            for (const auto& row : entry.at("table")) pts.emplace_back(row.at(0), row.at(1));
            fam->set_path_warp(path, [pts](double t) {
                if (t <= pts.front().first) return pts.front().second;
                for (std::size_t i = 1; i < pts.size(); ++i) {
                    if (t <= pts[i].first) {
                        const double w =
                            (t - pts[i - 1].first) / (pts[i].first - pts[i - 1].first);
                        return (1 - w) * pts[i - 1].second + w * pts[i].second;
                    }
                }
                return pts.back().second;
            });
        }
        return fam;
    }
    if (kind == "glued-diffusion") {
        auto fam = std::make_shared<GluedDiffusionFamily>();
        for (const auto& [edge, table] : spec.at("clocks").items()) {
            // Piecewise-linear clock table: [[t, V(t)], ...].
            std::vector<std::pair<double, double>> pts;
            for (const auto& row : table) pts.emplace_back(row.at(0), row.at(1));
            fam->set_edge_clock(std::stoi(edge), [pts](double t) {
                if (t <= pts.front().first) return pts.front().second;
                for (std::size_t i = 1; i < pts.size(); ++i) {
                    if (t <= pts[i].first) {
                        const double w =
                            (t - pts[i - 1].first) / (pts[i].first - pts[i - 1].first);
                        return (1 - w) * pts[i - 1].second + w * pts[i].second;
                    }
                }
                return pts.back().second;
            });
        }
        return fam;
    }
    throw std::runtime_error("unknown family kind '" + kind + "'");
}

struct ModelSpec {
    TimeLikeGraph graph;
    std::shared_ptr<const ProcessFamily> family;
};

ModelSpec load_model_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    in >> j;
    ModelSpec out;
    const fs::path base = fs::path(path).parent_path();
    out.graph = load_graph((base / j.at("graph").get<std::string>()).string());
    out.family = family_from_json(j.at("family"));
    return out;
}

std::vector<GraphPoint> parse_points(const TimeLikeGraph& g, const std::string& text) {
    // "edge:time,edge:time,..."
    std::vector<GraphPoint> pts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw std::runtime_error("point must be edge:time");
        GraphPoint p{std::stoi(item.substr(0, colon)), std::stod(item.substr(colon + 1))};
        g.edge(p.edge);
        pts.push_back(p);
    }
    return pts;
}

int cmd_verify(const std::string& graph_path, const std::string& tower_path) {
    TimeLikeGraph g = load_graph(graph_path);
    auto report = validate_tlg(g);
    std::cout << "TLG: " << (report.valid() ? "yes" : "no") << "\n";
    for (const auto& issue : report.issues) std::cout << "  issue: " << issue << "\n";
    if (!report.valid()) return kExitNegative;

    bool negative = false;
    ConstructionTower tower;
    bool have_tower = false;
    if (g.kind == GraphKind::simple) {
        auto v = is_tlg_star(g);
        std::cout << "TLG*: " << (v.is_star ? "yes" : "no") << "\n";
        if (v.is_star) {
            std::cout << "TLG**: yes\n";
            tower = v.tower;
            have_tower = true;
        } else {
            std::cout << "  refused path:";
            for (int e : v.offending.edges) std::cout << " " << e;
            std::cout << "\n  " << v.reason << "\n";
            negative = true;
        }
    } else {
        auto v = is_tlg_star_star(g);
        std::cout << "TLG**: " << (v.is_star_star ? "yes" : "no") << "\n";
        if (v.is_star_star) {
            tower = v.tower;
            have_tower = true;
        } else {
            std::cout << "  " << v.reason << "\n";
            negative = true;
        }
    }
    if (have_tower && !tower_path.empty()) {
        save_tower(tower, tower_path);
        std::cout << "tower written to " << tower_path << "\n";
    }
    return negative ? kExitNegative : kExitOk;
}

int cmd_covariance(const std::string& model_path, const std::string& points_text,
                   const std::string& out_path) {
    auto spec = load_model_spec(model_path);
    auto model = build_model(spec.graph, spec.family);
    auto pts = parse_points(spec.graph, points_text);
    auto gv = exact_joint(model, pts);
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        out = &file;
    }
    (*out) << "edge,time";
    for (const auto& p : pts) (*out) << ",e" << p.edge << "@" << csv_num(p.time);
    (*out) << "\n";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        (*out) << pts[i].edge << "," << csv_num(pts[i].time);
        for (std::size_t j = 0; j < pts.size(); ++j)
            (*out) << "," << csv_num(gv.cov(static_cast<int>(i), static_cast<int>(j)));
        (*out) << "\n";
    }
    return kExitOk;
}

int cmd_sample(const std::string& model_path, int grid, std::size_t reps, std::uint64_t seed,
               const std::string& out_dir, bool force) {
    auto spec = load_model_spec(model_path);
    auto model = build_model(spec.graph, spec.family);
    prepare_output_dir(out_dir, force);
    auto real = sample_paths(model, grid, reps, seed);
    const std::string csv_path = (fs::path(out_dir) / "realizations.csv").string();
    {
        CsvWriter csv(csv_path, {"replicate", "edge", "time", "value"});
        for (std::size_t r = 0; r < real.draws.size(); ++r)
            for (std::size_t i = 0; i < real.points.size(); ++i)
                csv.row({std::to_string(r), std::to_string(real.points[i].edge),
                         csv_num(real.points[i].time), csv_num(real.draws[r](static_cast<int>(i)))});
    }
    Manifest m;
    m.command = "sample";
    m.config = {{"model", model_path}, {"grid", grid}, {"reps", reps}};
    m.seed = seed;
    m.build = TLG_GIT_DESCRIBE;
    m.outputs = {csv_path};
    m.write((fs::path(out_dir) / "manifest.json").string());
    std::cout << "wrote " << csv_path << "\n";
    return kExitOk;
}

int cmd_cellcheck(const std::string& model_path) {
    auto spec = load_model_spec(model_path);
    auto model = build_model(spec.graph, spec.family);
    auto cells = find_cells(spec.graph);
    int checked = 0;
    bool all_pass = true;
    for (const auto& c : cells) {
        if (c.kind != Cell::Kind::cell || !c.truly_simple) continue;
        auto res = check_cell_markov(model, c);
        ++checked;
        std::cout << "cell " << c.start << "->" << c.end
                  << ": conditional cross-covariance = " << res.conditional_cov << " => "
                  << (res.pass ? "pass" : "FAIL") << "\n";
        all_pass = all_pass && res.pass;
    }
    std::cout << checked << " truly simple cells checked\n";
    auto moral = check_moral_graph_markov(model);
    std::cout << "moralized precision window:";
    for (int v : moral.window) std::cout << " " << v;
    std::cout << "\n";
    for (int v : moral.dropped) std::cout << "  dropped zero-variance vertex " << v << "\n";
    for (const auto& e : moral.entries)
        std::cout << "  (" << e.v1 << "," << e.v2 << ") " << (e.adjacent ? "adjacent" : "non-adjacent")
                  << " precision " << e.precision << (e.ok ? "" : "  VIOLATION") << "\n";
    std::cout << "moralized graph-Markov: " << (moral.pass ? "pass" : "FAIL") << "\n";
    return (all_pass && moral.pass) ? kExitOk : kExitNegative;
}

int cmd_she(int n, double alpha, double horizon, double extent, std::uint64_t seed,
            bool sqrt2_variance, const std::string& out_dir, bool force) {
    prepare_output_dir(out_dir, force);
    const auto conv = sqrt2_variance ? NoiseConvention::sqrt2 : NoiseConvention::derived;
    Rng rng = derive_stream(seed, "cli-she");
    auto field = euler_she(n, horizon, extent, rng, conv, alpha);
    const int kmax = static_cast<int>(std::ceil(extent * std::sqrt(static_cast<double>(n))));
    const std::string csv_path = (fs::path(out_dir) / "field.csv").string();
    {
        CsvWriter csv(csv_path, {"j", "k", "t", "x", "value"});
        for (int j = 0; j <= field.rows; ++j)
            for (int k = 0; k <= kmax; ++k) {
                if (!field.on_lattice(j, k)) continue;
                csv.row({std::to_string(j), std::to_string(k), csv_num(j * field.dt),
                         csv_num(k * field.dx), csv_num(field.at(j, k))});
            }
    }
    const std::string pgm_path = (fs::path(out_dir) / "field.pgm").string();
    {
        FieldInterpolator interp(field);
        std::vector<std::vector<double>> img;
        const int h = 200, w = 200;
        for (int row = 0; row < h; ++row) {
            std::vector<double> line;
            for (int col = 0; col < w; ++col)
                line.push_back(interp(horizon * (h - 1 - row) / (h - 1.0),
                                      extent * col / (w - 1.0)));
            img.push_back(line);
        }
        write_pgm(pgm_path, img);
    }
    Manifest m;
    m.command = "she";
    m.config = {{"n", n},
                {"alpha", alpha},
                {"horizon", horizon},
                {"extent", extent},
                {"variance_convention", sqrt2_variance ? "sqrt2" : "derived"}};
    m.seed = seed;
    m.build = TLG_GIT_DESCRIBE;
    m.outputs = {csv_path, pgm_path};
    m.write((fs::path(out_dir) / "manifest.json").string());
    std::cout << "wrote " << csv_path << " and " << pgm_path << "\n";
    return kExitOk;
}

int cmd_rhombus(double alpha, int n, double window, const std::string& probes_text,
                std::size_t reps, std::uint64_t seed, const std::string& out_dir, bool force) {
    prepare_output_dir(out_dir, force);
    std::vector<std::pair<double, double>> probes;
    {
        std::stringstream ss(probes_text);
        std::string item;
        while (std::getline(ss, item, ';')) {
            const auto colon = item.find(':');
            if (colon == std::string::npos) throw std::runtime_error("probe must be t:x");
            probes.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
        }
    }
    if (probes.empty()) probes = {{window / 2, window / 4}};
    RhombusGrid grid{n, alpha, window, window};

    std::vector<double> sums(probes.size(), 0.0), sumsq(probes.size(), 0.0);
    for (std::size_t r = 0; r < reps; ++r) {
        auto field = sample_grid_nbm(grid, seed + r * 0x9e3779b97f4a7c15ULL);
        RhombusInterpolator y(field);
        for (std::size_t i = 0; i < probes.size(); ++i) {
            const double v = y(probes[i].first, probes[i].second);
            sums[i] += v;
            sumsq[i] += v * v;
        }
    }
    const std::string csv_path = (fs::path(out_dir) / "probes.csv").string();
    {
        CsvWriter csv(csv_path, {"t", "x", "variance", "stderr", "target_alpha0"});
        for (std::size_t i = 0; i < probes.size(); ++i) {
            const double mean = sums[i] / static_cast<double>(reps);
            const double var = sumsq[i] / static_cast<double>(reps) - mean * mean;
            const double se = var * std::sqrt(2.0 / (static_cast<double>(reps) - 1.0));
            csv.row({csv_num(probes[i].first), csv_num(probes[i].second), csv_num(var),
                     csv_num(se), csv_num(std::fabs(probes[i].first))});
        }
    }
    const std::string pgm_path = (fs::path(out_dir) / "grid.pgm").string();
    {
        auto field = sample_grid_nbm(grid, seed);
        RhombusInterpolator y(field);
        std::vector<std::vector<double>> img;
        const int h = 200, w = 200;
        const double lim = window * 0.7;
        for (int row = 0; row < h; ++row) {
            std::vector<double> line;
            for (int col = 0; col < w; ++col)
                line.push_back(y(lim * (2.0 * (h - 1 - row) / (h - 1.0) - 1.0),
                                 lim * (2.0 * col / (w - 1.0) - 1.0)));
            img.push_back(line);
        }
        write_pgm(pgm_path, img);
    }
    Manifest m;
    m.command = "rhombus";
    m.config = {{"alpha", alpha}, {"n", n}, {"window", window}, {"reps", reps}};
    m.seed = seed;
    m.build = TLG_GIT_DESCRIBE;
    m.outputs = {csv_path, pgm_path};
    m.write((fs::path(out_dir) / "manifest.json").string());
    std::cout << "wrote " << csv_path << " and " << pgm_path << "\n";
    return kExitOk;
}

int cmd_gwtree(double rate, const std::string& offspring_text, double horizon, double grid_dt,
               std::uint64_t seed, const std::string& out_dir, bool force) {
    prepare_output_dir(out_dir, force);
    std::vector<double> table;
    {
        std::stringstream ss(offspring_text);
        std::string item;
        while (std::getline(ss, item, ',')) table.push_back(std::stod(item));
    }
    Rng rng = derive_stream(seed, "cli-gwtree");
    auto tree = sample_gw_tlt(rate, table, horizon, rng);
    auto graph = tlt_to_tlg(tree);
    const std::string graph_path = (fs::path(out_dir) / "tree_graph.json").string();
    save_graph(graph, graph_path);
    const std::string nodes_path = (fs::path(out_dir) / "tree_nodes.csv").string();
    {
        CsvWriter csv(nodes_path, {"node", "label", "parent", "birth", "death", "offspring",
                                   "truncated"});
        for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
            const auto& nd = tree.nodes[i];
            csv.row({std::to_string(i), ulam_harris_label(nd), std::to_string(nd.parent),
                     csv_num(nd.birth), csv_num(nd.death()), std::to_string(nd.offspring),
                     nd.truncated ? "1" : "0"});
        }
    }
    Rng rng_field = derive_stream(seed, "cli-gwtree-field");
    auto field = sample_branching_markov(tree, grid_dt, rng_field);
    const std::string field_path = (fs::path(out_dir) / "tree_field.csv").string();
    {
        CsvWriter csv(field_path, {"node", "time", "value"});
        for (const auto& path : field.paths)
            for (std::size_t i = 0; i < path.times.size(); ++i)
                csv.row({ulam_harris_label(tree.nodes[static_cast<std::size_t>(path.node)]),
                         csv_num(path.times[i]), csv_num(path.values[i])});
    }
    const std::string pop_path = (fs::path(out_dir) / "population.csv").string();
    {
        std::vector<double> times;
        for (int i = 0; i <= 40; ++i) times.push_back(horizon * i / 40.0);
        auto curve = population_curve(tree, times);
        CsvWriter csv(pop_path, {"t", "born", "alive"});
        for (std::size_t i = 0; i < times.size(); ++i)
            csv.row({csv_num(times[i]), csv_num(curve.born[i]), csv_num(curve.alive[i])});
    }
    auto verdict = is_tlg_star_star(graph);
    std::cout << "tree nodes: " << tree.nodes.size() << ", TLG**: "
              << (verdict.is_star_star ? "yes" : "no") << "\n";
    Manifest m;
    m.command = "gwtree";
    m.config = {{"rate", rate}, {"offspring", offspring_text}, {"horizon", horizon},
                {"grid_dt", grid_dt}};
    m.seed = seed;
    m.build = TLG_GIT_DESCRIBE;
    m.outputs = {graph_path, nodes_path, field_path, pop_path};
    m.write((fs::path(out_dir) / "manifest.json").string());
    return verdict.is_star_star ? kExitOk : kExitNegative;
}

int cmd_maxima(const std::string& n_list, std::size_t reps, std::size_t grid_log2,
               std::uint64_t seed, const std::string& out_dir, bool force) {
    prepare_output_dir(out_dir, force);
    std::vector<std::size_t> ns;
    {
        std::stringstream ss(n_list);
        std::string item;
        while (std::getline(ss, item, ',')) ns.push_back(std::stoul(item));
    }
    const std::string csv_path = (fs::path(out_dir) / "maxima.csv").string();
    {
        CsvWriter csv(csv_path, {"n", "estimate_2EMsq", "stderr", "harmonic", "bound_ln",
                                 "tail_estimate", "tail_stderr", "tail_target"});
        for (std::size_t n : ns) {
            auto stats = bridge_max_stats(n, reps, seed, grid_log2);
            csv.row({std::to_string(n), csv_num(2.0 * stats.max_plus_sq.mean),
                     csv_num(2.0 * stats.max_plus_sq.stderr_), csv_num(harmonic_number(n)),
                     csv_num(std::log(static_cast<double>(n) + 1.0)),
                     csv_num(stats.tail_prob.mean), csv_num(stats.tail_prob.stderr_),
                     csv_num(std::exp(-2.0))});
        }
    }
    Manifest m;
    m.command = "maxima";
    m.config = {{"n_list", n_list}, {"reps", reps}, {"grid_log2", grid_log2}};
    m.seed = seed;
    m.build = TLG_GIT_DESCRIBE;
    m.outputs = {csv_path};
    m.write((fs::path(out_dir) / "manifest.json").string());
    std::cout << "wrote " << csv_path << "\n";
    return kExitOk;
}

int cmd_counterexample(std::size_t reps, std::uint64_t seed) {
    auto out = naive_counterexample(reps, seed);
    std::cout << "naive sequential build on the double-crossing graph:\n";
    std::cout << "  exact E[X(t1) X(t3)]     = " << out.exact_cov << " (2/15)\n";
    std::cout << "  Monte Carlo              = " << out.mc_mean << " +- " << out.mc_stderr << "\n";
    std::cout << "  Brownian motion requires = " << out.bm_reference << " (t1 = 1/5)\n";
    std::cout << "  sometimes quoted         = " << out.quoted_value
              << " (inconsistent with the bridge representations)\n";
    std::cout << "bridge-pair covariance (s1=2/5, s2=1, tau1=3/5, tau2=4/5) = "
              << bridge_pair_cov(0.4, 1.0, 0.6, 0.8) << " (8/15)\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"time-like graphs, natural Gaussian processes, and their numerics"};
    app.require_subcommand(1);

    // verify
    std::string graph_path, tower_path;
    auto* verify = app.add_subcommand("verify", "validate a graph and decide TLG*/TLG**");
    verify->add_option("graph", graph_path, "graph JSON file")->required();
    verify->add_option("--tower", tower_path, "write the construction tower here");

    // covariance
    std::string model_path, points_text, cov_out;
    auto* covariance = app.add_subcommand("covariance", "exact joint covariance at points");
    covariance->add_option("--model", model_path, "model descriptor JSON")->required();
    covariance->add_option("--points", points_text, "edge:time,edge:time,...")->required();
    covariance->add_option("--out", cov_out, "CSV output path (default stdout)");

    // sample
    std::string sample_model, sample_out;
    int sample_grid = 8;
    std::size_t sample_reps = 100;
    std::uint64_t seed = 0;
    bool force = false;
    auto* sample_cmd = app.add_subcommand("sample", "Monte Carlo realizations of a model");
    sample_cmd->add_option("--model", sample_model)->required();
    sample_cmd->add_option("--grid", sample_grid, "interior points per edge");
    sample_cmd->add_option("--reps", sample_reps);
    auto* sample_seed = sample_cmd->add_option("--seed", seed);
    sample_cmd->add_option("--out", sample_out)->required();
    sample_cmd->add_flag("--force", force);

    // cellcheck
    std::string cell_model;
    auto* cellcheck = app.add_subcommand("cellcheck", "cell-Markov and precision-zero checks");
    cellcheck->add_option("--model", cell_model)->required();

    // she
    int she_n = 256;
    double she_alpha = 0.0, she_horizon = 1.0, she_extent = 1.0;
    std::string she_out;
    bool she_sqrt2 = false;
    auto* she = app.add_subcommand("she", "Euler scheme for the stochastic heat equation");
    she->add_option("--n", she_n);
    she->add_option("--alpha", she_alpha, "0 = SHE scaling, > 0 weakens the noise");
    she->add_option("--horizon", she_horizon);
    she->add_option("--extent", she_extent);
    auto* she_seed = she->add_option("--seed", seed);
    she->add_flag("--sqrt2-variance", she_sqrt2,
                  "inflate the noise variance to 1/sqrt(2n) instead of the derived 1/(2 sqrt n)");
    she->add_option("--out", she_out)->required();
    she->add_flag("--force", force);

    // rhombus
    double rh_alpha = 0.0, rh_window = 1.0;
    int rh_n = 256;
    std::size_t rh_reps = 100;
    std::string rh_probes, rh_out;
    auto* rhombus = app.add_subcommand("rhombus", "natural Brownian motion on a rhombus grid");
    rhombus->add_option("--alpha", rh_alpha);
    rhombus->add_option("--n", rh_n);
    rhombus->add_option("--window", rh_window);
    rhombus->add_option("--probes", rh_probes, "t:x;t:x;...");
    rhombus->add_option("--reps", rh_reps);
    auto* rh_seed = rhombus->add_option("--seed", seed);
    rhombus->add_option("--out", rh_out)->required();
    rhombus->add_flag("--force", force);

    // gwtree
    double gw_rate = 1.0, gw_horizon = 2.0, gw_dt = 0.01;
    std::string gw_offspring = "0,0,1", gw_out;
    auto* gwtree = app.add_subcommand("gwtree", "Galton-Watson time-like tree + branching field");
    gwtree->add_option("--rate", gw_rate);
    gwtree->add_option("--offspring", gw_offspring, "p0,p1,p2,...");
    gwtree->add_option("--horizon", gw_horizon);
    gwtree->add_option("--grid-dt", gw_dt);
    auto* gw_seed = gwtree->add_option("--seed", seed);
    gwtree->add_option("--out", gw_out)->required();
    gwtree->add_flag("--force", force);

    // maxima
    std::string mx_ns = "1,2,5,10", mx_out;
    std::size_t mx_reps = 100000, mx_grid = 12;
    auto* maxima = app.add_subcommand("maxima", "Brownian-bridge maxima statistics");
    maxima->add_option("--n-list", mx_ns);
    maxima->add_option("--reps", mx_reps);
    maxima->add_option("--grid-log2", mx_grid);
    auto* mx_seed = maxima->add_option("--seed", seed);
    maxima->add_option("--out", mx_out)->required();
    maxima->add_flag("--force", force);

    // counterexample
    std::size_t ce_reps = 100000;
    auto* counterexample =
        app.add_subcommand("counterexample", "naive construction vs Brownian motion");
    counterexample->add_option("--reps", ce_reps);
    auto* ce_seed = counterexample->add_option("--seed", seed);

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return cmd_verify(graph_path, tower_path);
        if (covariance->parsed()) return cmd_covariance(model_path, points_text, cov_out);
        if (sample_cmd->parsed())
            return cmd_sample(sample_model, sample_grid, sample_reps,
                              resolve_seed(sample_seed, seed), sample_out, force);
        if (cellcheck->parsed()) return cmd_cellcheck(cell_model);
        if (she->parsed())
            return cmd_she(she_n, she_alpha, she_horizon, she_extent,
                           resolve_seed(she_seed, seed), she_sqrt2, she_out, force);
        if (rhombus->parsed())
            return cmd_rhombus(rh_alpha, rh_n, rh_window, rh_probes, rh_reps,
                               resolve_seed(rh_seed, seed), rh_out, force);
        if (gwtree->parsed())
            return cmd_gwtree(gw_rate, gw_offspring, gw_horizon, gw_dt,
                              resolve_seed(gw_seed, seed), gw_out, force);
        if (maxima->parsed())
            return cmd_maxima(mx_ns, mx_reps, mx_grid, resolve_seed(mx_seed, seed), mx_out, force);
        if (counterexample->parsed())
            return cmd_counterexample(ce_reps, resolve_seed(ce_seed, seed));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
