#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "tlg/embed.hpp"
#include "tlg/gwtree.hpp"
#include "tlg/rng.hpp"

using namespace tlg;
using Catch::Approx;

TEST_CASE("degenerate offspring tables") {
    Rng rng = derive_stream(1, "gw");
    // Offspring identically one: a single lineage, population one forever.
    auto line = sample_gw_tlt(1.0, {0.0, 1.0}, 3.0, rng);
    auto curve = population_curve(line, {0.0, 1.0, 2.0, 2.9});
    for (double alive : curve.alive) REQUIRE(alive == 1.0);
    for (const auto& node : line.nodes) REQUIRE(node.children.size() <= 1);

    // Offspring identically zero: the root dies childless.
    auto dead = sample_gw_tlt(1.0, {1.0}, 100.0, rng);
    REQUIRE(dead.nodes.size() == 1);
    REQUIRE(dead.nodes[0].offspring == 0);
}

TEST_CASE("birth times satisfy the reproduction-at-death recursion exactly") {
    Rng rng = derive_stream(2, "gw");
    for (int rep = 0; rep < 50; ++rep) {
        auto tree = sample_gw_tlt(1.5, {0.2, 0.3, 0.5}, 2.0, rng);
        for (const auto& node : tree.nodes) {
            if (node.parent < 0) continue;
            const auto& parent = tree.nodes[static_cast<std::size_t>(node.parent)];
            REQUIRE(node.birth == parent.death());
        }
    }
}

TEST_CASE("node cap guards runaway growth") {
    Rng rng = derive_stream(3, "gw");
    REQUIRE_THROWS_AS(sample_gw_tlt(30.0, {0.0, 0.0, 1.0}, 4.0, rng, 2000), std::runtime_error);
}

TEST_CASE("offspring pgf evaluates the table") {
    REQUIRE(offspring_pgf({0.25, 0.25, 0.5}, 1.0) == Approx(1.0));
    REQUIRE(offspring_pgf({0.25, 0.25, 0.5}, 0.0) == Approx(0.25));
    REQUIRE(offspring_pgf({0.0, 0.0, 1.0}, 0.5) == Approx(0.25));
}

TEST_CASE("population mean matches exp(V (m-1) t) for binary splitting") {
    const int reps = 3000;
    const std::vector<double> probes{0.5, 1.0};
    std::vector<double> sums(probes.size(), 0.0), sumsq(probes.size(), 0.0);
    for (int r = 0; r < reps; ++r) {
        Rng rng = derive_stream(40, "gw-pop", static_cast<std::uint64_t>(r));
        auto tree = sample_gw_tlt(1.0, {0.0, 0.0, 1.0}, 1.0, rng);
        auto curve = population_curve(tree, probes);
        for (std::size_t i = 0; i < probes.size(); ++i) {
            sums[i] += curve.alive[i];
            sumsq[i] += curve.alive[i] * curve.alive[i];
        }
    }
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const double mean = sums[i] / reps;
        const double se = std::sqrt((sumsq[i] / reps - mean * mean) / reps);
        REQUIRE(std::fabs(mean - expected_population(1.0, {0.0, 0.0, 1.0}, probes[i])) < 5 * se);
    }
}

TEST_CASE("tree-to-TLG conversion validates and passes TLG**") {
    Rng rng = derive_stream(5, "gw");
    for (int rep = 0; rep < 30; ++rep) {
        auto tree = sample_gw_tlt(1.0, {0.3, 0.3, 0.4}, 1.5, rng);
        auto g = tlt_to_tlg(tree);
        REQUIRE(validate_tlg(g).valid());
        REQUIRE(g.edges.size() == tree.nodes.size());
        REQUIRE(is_tlg_star_star(g).is_star_star);
    }
}

TEST_CASE("single lineage converts to a chain graph") {
    Rng rng = derive_stream(6, "gw");
    auto tree = sample_gw_tlt(2.0, {0.0, 1.0}, 1.0, rng);
    auto g = tlt_to_tlg(tree);
    REQUIRE(g.edges.size() == g.vertices.size() - 1);
    REQUIRE(entrances(g).size() == 1);
    REQUIRE(exits(g).size() == 1);
}

TEST_CASE("branching field is continuous across births") {
    Rng rng = derive_stream(7, "gw");
    auto tree = sample_gw_tlt(1.0, {0.2, 0.2, 0.6}, 1.5, rng);
    Rng rng2 = derive_stream(8, "gw-field");
    auto field = sample_branching_markov(tree, 0.05, rng2);
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const auto& node = tree.nodes[i];
        if (node.parent < 0) {
            REQUIRE(field.paths[i].values.front() == 0.0);
        } else {
            REQUIRE(field.paths[i].values.front() ==
                    field.paths[static_cast<std::size_t>(node.parent)].values.back());
        }
    }
}

TEST_CASE("ancestral variance grows like t and siblings decorrelate") {
    const int reps = 4000;
    double var_sum = 0, var_sumsq = 0;
    double sib_cross = 0, sib_a = 0, sib_b = 0, sib_aa = 0, sib_bb = 0;
    int sib_count = 0;
    const double probe_t = 0.5;
    for (int r = 0; r < reps; ++r) {
        Rng rng = derive_stream(70, "gw-anc", static_cast<std::uint64_t>(r));
        auto tree = sample_gw_tlt(1.0, {0.0, 0.0, 1.0}, 1.0, rng);
        Rng rng2 = derive_stream(71, "gw-anc-field", static_cast<std::uint64_t>(r));
        auto field = sample_branching_markov(tree, 0.02, rng2);
        // Value of the leftmost ancestral line at probe_t.
        int node = 0;
        while (true) {
            const auto& nd = tree.nodes[static_cast<std::size_t>(node)];
            if (probe_t <= nd.death() || nd.children.empty()) break;
            node = nd.children.front();
        }
        const auto& path = field.paths[static_cast<std::size_t>(node)];
        double value = path.values.back();
        for (std::size_t i = 0; i + 1 < path.times.size(); ++i) {
            if (path.times[i] <= probe_t && probe_t <= path.times[i + 1]) {
                const double w = (probe_t - path.times[i]) / (path.times[i + 1] - path.times[i]);
                value = (1 - w) * path.values[i] + w * path.values[i + 1];
                break;
            }
        }
        if (probe_t <= tree.nodes[static_cast<std::size_t>(node)].death()) {
            var_sum += value;
            var_sumsq += value * value;
        }
        // Sibling increments after the first split: uncorrelated.
        if (tree.nodes[0].children.size() == 2) {
            const int c1 = tree.nodes[0].children[0];
            const int c2 = tree.nodes[0].children[1];
            const double start = field.paths[0].values.back();
            const double d1 = field.paths[static_cast<std::size_t>(c1)].values.back() - start;
            const double d2 = field.paths[static_cast<std::size_t>(c2)].values.back() - start;
            sib_cross += d1 * d2;
            sib_a += d1;
            sib_b += d2;
            sib_aa += d1 * d1;
            sib_bb += d2 * d2;
            ++sib_count;
        }
    }
    const double mean = var_sum / reps;
    const double var = var_sumsq / reps - mean * mean;
    const double se = probe_t * std::sqrt(2.0 / (reps - 1.0));
    REQUIRE(std::fabs(var - probe_t) < 5 * se);

    REQUIRE(sib_count > 300);
    const double cov = sib_cross / sib_count - (sib_a / sib_count) * (sib_b / sib_count);
    const double sd1 = std::sqrt(sib_aa / sib_count);
    const double sd2 = std::sqrt(sib_bb / sib_count);
    const double rho = cov / (sd1 * sd2);
    REQUIRE(std::fabs(rho) < 5.0 / std::sqrt(static_cast<double>(sib_count)));
}

TEST_CASE("ulam harris labels render") {
    Rng rng = derive_stream(9, "gw");
    auto tree = sample_gw_tlt(1.0, {0.0, 0.0, 1.0}, 1.2, rng);
    REQUIRE(ulam_harris_label(tree.nodes[0]) == "root");
    if (tree.nodes.size() > 1) REQUIRE(ulam_harris_label(tree.nodes[1]) == "1");
}
