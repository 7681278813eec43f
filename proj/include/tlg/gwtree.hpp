#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tlg/graph.hpp"
#include "tlg/rng.hpp"

namespace tlg {

// ---------------------------------------------------------------------------
// Galton-Watson time-like trees: exponential lifetimes with rate V,
// reproduction at death with an explicit offspring table, truncated at a
// horizon T.  Individuals alive at T get a terminal vertex at T.

struct GwNode {
    std::vector<int> label;   // Ulam-Harris sequence; empty for the root
    int parent = -1;          // index into nodes, -1 for the root
    double birth = 0.0;       // tau_x
    double lifetime = 0.0;    // lambda_x (exponential, rate V)
    int offspring = 0;        // R_x, realized only when death <= horizon
    bool truncated = false;   // alive at the horizon
    std::vector<int> children;

    double death() const { return birth + lifetime; }
};

struct GwTree {
    double rate = 1.0;
    double horizon = 1.0;
    std::vector<double> offspring_table;  // p_0 ... p_K
    std::vector<GwNode> nodes;            // breadth-first order, root first
};

/// Probability generating function of the offspring table.
inline double offspring_pgf(const std::vector<double>& table, double s) {
    double total = 0.0, power = 1.0;
    for (double p : table) {
        total += p * power;
        power *= s;
    }
    return total;
}

inline GwTree sample_gw_tlt(double rate, const std::vector<double>& offspring_table, double horizon,
                            Rng& rng, std::size_t node_cap = 1000000) {
    if (rate <= 0) throw std::runtime_error("sample_gw_tlt: rate must be positive");
    double total = 0.0;
    for (double p : offspring_table) {
        if (p < 0) throw std::runtime_error("sample_gw_tlt: negative offspring probability");
        total += p;
    }
    if (std::fabs(total - 1.0) > 1e-12)
        throw std::runtime_error("sample_gw_tlt: offspring table must sum to 1");

    auto draw_lifetime = [&]() { return -std::log(rng.uniform()) / rate; };
    auto draw_offspring = [&]() {
        const double u = rng.uniform();
        double acc = 0.0;
        for (std::size_t k = 0; k < offspring_table.size(); ++k) {
            acc += offspring_table[k];
            if (u <= acc) return static_cast<int>(k);
        }
        return static_cast<int>(offspring_table.size()) - 1;
    };

    GwTree tree;
    tree.rate = rate;
    tree.horizon = horizon;
    tree.offspring_table = offspring_table;

    GwNode root;
    root.birth = 0.0;
    root.lifetime = draw_lifetime();
    tree.nodes.push_back(root);

    // Breadth-ordered generation: process nodes in index order; children are
    // appended, so a whole generation finishes before the next begins.
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        if (tree.nodes[i].death() >= horizon) {
            tree.nodes[i].truncated = true;
            tree.nodes[i].lifetime = horizon - tree.nodes[i].birth;  // terminal vertex at T
            tree.nodes[i].offspring = 0;
            continue;
        }
        const int n_children = draw_offspring();
        tree.nodes[i].offspring = n_children;
        const std::vector<int> parent_label = tree.nodes[i].label;
        const double parent_death = tree.nodes[i].death();
        for (int c = 0; c < n_children; ++c) {
            if (tree.nodes.size() >= node_cap)
                throw std::runtime_error("sample_gw_tlt: node cap exceeded (runaway growth)");
            GwNode child;
            child.label = parent_label;
            child.label.push_back(c + 1);
            child.parent = static_cast<int>(i);
            child.birth = parent_death;  // reproduction at death
            child.lifetime = draw_lifetime();
            tree.nodes.push_back(child);
            tree.nodes[i].children.push_back(static_cast<int>(tree.nodes.size()) - 1);
        }
    }
    return tree;
}

/// Encodes the tree as a general TLG: one vertex per birth/death event, one
/// edge per lifetime.  Vertex id i+1 is the endpoint of node i's lifetime;
/// vertex 0 is the root's birth.
inline TimeLikeGraph tlt_to_tlg(const GwTree& tree) {
    TimeLikeGraph g;
    g.kind = GraphKind::general;
    g.vertices.push_back({0, 0.0});
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const GwNode& node = tree.nodes[i];
        g.vertices.push_back({static_cast<int>(i) + 1, node.death()});
        const int start_vertex = node.parent < 0 ? 0 : node.parent + 1;
        g.edges.push_back({static_cast<int>(i), start_vertex, static_cast<int>(i) + 1});
    }
    g.canonicalize();
    return g;
}

inline std::string ulam_harris_label(const GwNode& node) {
    if (node.label.empty()) return "root";
    std::string out;
    for (std::size_t i = 0; i < node.label.size(); ++i) {
        if (i) out += ".";
        out += std::to_string(node.label[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Branching Brownian motion on a sampled tree: each node's spatial path is
// Brownian over its lifetime, started at the parent's terminal value.

struct BranchingField {
    struct NodePath {
        int node = -1;
        std::vector<double> times;
        std::vector<double> values;
    };
    std::vector<NodePath> paths;
    double root_value = 0.0;
};

inline BranchingField sample_branching_markov(const GwTree& tree, double grid_dt, Rng& rng,
                                              double root_value = 0.0) {
    BranchingField field;
    field.root_value = root_value;
    field.paths.resize(tree.nodes.size());
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const GwNode& node = tree.nodes[i];
        auto& path = field.paths[i];
        path.node = static_cast<int>(i);
        const double start_value =
            node.parent < 0 ? root_value
                            : field.paths[static_cast<std::size_t>(node.parent)].values.back();
        const int steps = std::max(1, static_cast<int>(std::ceil(node.lifetime / grid_dt)));
        path.times.resize(static_cast<std::size_t>(steps) + 1);
        path.values.resize(static_cast<std::size_t>(steps) + 1);
        path.times[0] = node.birth;
        path.values[0] = start_value;  // continuity across the birth event
        const double dt = node.lifetime / steps;
        for (int s = 1; s <= steps; ++s) {
            path.times[static_cast<std::size_t>(s)] = node.birth + s * dt;
            path.values[static_cast<std::size_t>(s)] =
                path.values[static_cast<std::size_t>(s) - 1] + std::sqrt(dt) * rng.normal();
        }
    }
    return field;
}

// ---------------------------------------------------------------------------
// Population counts.

struct PopulationCurve {
    std::vector<double> times;
    std::vector<double> born;   // # individuals with tau_x <= t
    std::vector<double> alive;  // # with tau_x <= t < tau_x + lambda_x
};

inline PopulationCurve population_curve(const GwTree& tree, const std::vector<double>& times) {
    PopulationCurve out;
    out.times = times;
    out.born.assign(times.size(), 0.0);
    out.alive.assign(times.size(), 0.0);
    for (const auto& node : tree.nodes) {
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double t = times[i];
            if (node.birth <= t) {
                out.born[i] += 1.0;
                // Truncated individuals are alive through the horizon.
                if (t < node.death() || (node.truncated && t <= tree.horizon)) out.alive[i] += 1.0;
            }
        }
    }
    return out;
}

/// Mean population of a Markov branching process with offspring mean m:
/// E N(t) = exp(V (m - 1) t).
inline double expected_population(double rate, const std::vector<double>& offspring_table,
                                  double t) {
    double mean = 0.0;
    for (std::size_t k = 0; k < offspring_table.size(); ++k)
        mean += static_cast<double>(k) * offspring_table[k];
    return std::exp(rate * (mean - 1.0) * t);
}

}  // namespace tlg
