#include <catch2/catch_amalgamated.hpp>

#include "tlg/embed.hpp"
#include "tlg/fixtures.hpp"
#include "tlg/gwtree.hpp"
#include "tlg/rng.hpp"

using namespace tlg;

TEST_CASE("minimal embedding of the minimal graph is a 4-vertex chain") {
    auto g = fixtures::minimal();
    g.kind = GraphKind::general;
    auto emb = embed(g, EmbedMode::minimal);
    REQUIRE(emb.graph.vertices.size() == 4);
    REQUIRE(emb.graph.edges.size() == 3);
    REQUIRE(validate_tlg(emb.graph).valid());
    REQUIRE(emb.graph.time_of(emb.source_vertex) == -1.0);
    REQUIRE(emb.graph.time_of(emb.sink_vertex) == 2.0);
}

TEST_CASE("minimal embedding wires entrances and exits to the synthetic endpoints") {
    auto g = fixtures::sl25a();
    auto emb = embed(g, EmbedMode::minimal);
    REQUIRE(validate_tlg(emb.graph).valid());
    auto ens = entrances(g);
    auto exs = exits(g);
    int from_source = 0, to_sink = 0;
    for (const auto& e : emb.graph.edges) {
        if (e.tail == emb.source_vertex) {
            ++from_source;
            REQUIRE(std::find(ens.begin(), ens.end(), e.head) != ens.end());
        }
        if (e.head == emb.sink_vertex) {
            ++to_sink;
            REQUIRE(std::find(exs.begin(), exs.end(), e.tail) != exs.end());
        }
    }
    REQUIRE(from_source == static_cast<int>(ens.size()));
    REQUIRE(to_sink == static_cast<int>(exs.size()));
}

TEST_CASE("maximal embedding wires every vertex to both endpoints") {
    auto g = fixtures::sl25a();
    auto emb = embed(g, EmbedMode::maximal);
    REQUIRE(validate_tlg(emb.graph).valid());
    REQUIRE(emb.graph.edges.size() == g.edges.size() + 2 * g.vertices.size());
}

TEST_CASE("embedding preserves the induced order between original points") {
    for (auto mode : {EmbedMode::minimal, EmbedMode::maximal}) {
        for (auto& [name, g] : fixtures::all()) {
            INFO(name);
            auto emb = embed(g, mode);
            for (const auto& a : g.vertices) {
                for (const auto& b : g.vertices) {
                    auto mj_before = meet_join_vertices(g, a.id, b.id);
                    (void)mj_before;
                    Reachability rg(g);
                    Reachability re(emb.graph);
                    const bool leq_g = a.time <= b.time && rg.reaches(a.id, b.id);
                    const bool leq_e = a.time <= b.time && re.reaches(a.id, b.id);
                    REQUIRE(leq_g == leq_e);
                }
            }
        }
    }
}

TEST_CASE("time-like trees are TLG**") {
    auto v = is_tlg_star_star(fixtures::small_tree());
    REQUIRE(v.is_star_star);
    auto replayed = replay_tower(v.tower, GraphKind::general);
    REQUIRE(graphs_equal_canonical(replayed, fixtures::small_tree()));
}

TEST_CASE("the no-meet example is not a TLG**") {
    auto v = is_tlg_star_star(fixtures::sl27());
    REQUIRE_FALSE(v.is_star_star);
}

TEST_CASE("planar graphs with aligned entrances and exits are TLG**") {
    REQUIRE(is_tlg_star_star(fixtures::aligned_entrances()).is_star_star);
}

TEST_CASE("disconnected general TLG** towers replay through components") {
    auto v = is_tlg_star_star(fixtures::sl25a());
    REQUIRE(v.is_star_star);
    auto replayed = replay_tower(v.tower, GraphKind::general);
    REQUIRE(graphs_equal_canonical(replayed, fixtures::sl25a()));
}

TEST_CASE("simple TLG* graphs pass the TLG** check as well") {
    for (auto& [name, g] : fixtures::star_fixtures()) {
        INFO(name);
        TimeLikeGraph general = g;
        general.kind = GraphKind::general;
        auto v = is_tlg_star_star(general);
        REQUIRE(v.is_star_star);
        REQUIRE(graphs_equal_canonical(replay_tower(v.tower, GraphKind::general), general));
    }
}

TEST_CASE("sampled Galton-Watson trees convert to TLG** graphs") {
    Rng rng = derive_stream(99, "embed-test");
    for (int rep = 0; rep < 25; ++rep) {
        auto tree = sample_gw_tlt(1.0, {0.25, 0.25, 0.5}, 1.5, rng);
        auto g = tlt_to_tlg(tree);
        REQUIRE(validate_tlg(g).valid());
        auto v = is_tlg_star_star(g);
        REQUIRE(v.is_star_star);
        REQUIRE(graphs_equal_canonical(replay_tower(v.tower, GraphKind::general), g));
    }
}
