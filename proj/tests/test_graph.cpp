#include <catch2/catch_amalgamated.hpp>

#include "tlg/fixtures.hpp"
#include "tlg/graph.hpp"

using namespace tlg;

TEST_CASE("minimal graph validates as a simple TLG") {
    auto g = fixtures::minimal();
    auto r = validate_tlg(g);
    REQUIRE(r.valid());
}

TEST_CASE("edges between equal times are rejected with the offending edge") {
    TimeLikeGraph g;
    g.kind = GraphKind::simple;
    g.vertices = {{0, 0.0}, {1, 0.5}, {2, 0.5}, {3, 1.0}};
    g.edges = {{1, 0, 1}, {2, 0, 2}, {3, 1, 2}, {4, 1, 3}, {5, 2, 3}};
    auto r = validate_tlg(g);
    REQUIRE_FALSE(r.valid());
    REQUIRE_FALSE(r.time_order_ok);
    bool cites_edge = false;
    for (const auto& msg : r.issues)
        if (msg.find("edge 3") != std::string::npos) cites_edge = true;
    REQUIRE(cites_edge);
}

TEST_CASE("disconnected graphs are general but not simple") {
    auto g = fixtures::sl25a();
    REQUIRE(validate_tlg(g).valid());
    TimeLikeGraph as_simple = g;
    as_simple.kind = GraphKind::simple;
    REQUIRE_FALSE(validate_tlg(as_simple).valid());
}

TEST_CASE("dangling edge ids are rejected") {
    TimeLikeGraph g;
    g.vertices = {{0, 0.0}, {1, 1.0}};
    g.edges = {{1, 0, 7}};
    auto r = validate_tlg(g);
    REQUIRE_FALSE(r.structure_ok);
}

TEST_CASE("order is reflexive and respects entrance/exit") {
    auto g = fixtures::minimal();
    GraphPoint mid{1, 0.5};
    REQUIRE(order_leq(g, mid, mid));
    REQUIRE(order_leq(g, GraphPoint{1, 0.0}, GraphPoint{1, 1.0}));
    REQUIRE_FALSE(order_leq(g, GraphPoint{1, 1.0}, GraphPoint{1, 0.0}));
}

TEST_CASE("in the double-crossing graph t1 and t2 are incomparable") {
    auto g = fixtures::pic1();
    // Brute-force oracle: enumerate every full path and look for one through
    // both vertices.
    auto paths = full_time_paths(g);
    bool both_on_some_path = false;
    for (const auto& p : paths) {
        auto vs = path_vertices(g, p);
        bool has1 = false, has2 = false;
        for (int v : vs) {
            if (v == 1) has1 = true;
            if (v == 2) has2 = true;
        }
        if (has1 && has2) both_on_some_path = true;
    }
    REQUIRE_FALSE(both_on_some_path);
    GraphPoint p1{1, 0.2};  // edge 1 = (0,1), head time
    GraphPoint p2{2, 0.4};  // edge 2 = (0,2), head time
    REQUIRE_FALSE(order_leq(g, p1, p2));
    REQUIRE_FALSE(order_leq(g, p2, p1));
}

TEST_CASE("full path enumeration") {
    REQUIRE(full_time_paths(fixtures::minimal()).size() == 1);
    REQUIRE(full_time_paths(fixtures::one_cell()).size() == 2);
    // Brute-force DFS count for the double-crossing graph: 0-1-3-5, 0-1-4-5,
    // 0-2-3-5, 0-2-4-5.
    REQUIRE(full_time_paths(fixtures::pic1()).size() == 4);
    REQUIRE_THROWS_AS(full_time_paths(fixtures::pic1(), 2), CapExceeded);
}

TEST_CASE("interval subgraphs") {
    auto g = fixtures::minimal();
    auto whole = interval(g, 0, 1);
    REQUIRE(graphs_equal_canonical(whole, g));

    auto p = fixtures::pic1();
    auto w = interval(p, 0, 5);
    REQUIRE(w.vertices.size() == 6);
    REQUIRE(w.edges.size() == 8);

    // t1 and t2 are not connected by a time-path: empty interval.
    auto empty = interval(p, 1, 2);
    REQUIRE(empty.vertices.empty());

    REQUIRE_THROWS(interval(p, 0, 99));
}

TEST_CASE("meet and join on the lattice example reproduce the table") {
    auto g = fixtures::pic33();
    auto table = fixtures::pic33_table();
    for (int a = 1; a <= 8; ++a) {
        for (int b = 1; b <= 8; ++b) {
            auto mj = meet_join_vertices(g, a, b);
            REQUIRE(mj.unique());
            REQUIRE(mj.meet.has_value());
            REQUIRE(mj.join.has_value());
            const int expected = table.at({a, b});
            if (a < b) {
                REQUIRE(mj.meet->vertex == expected);
            } else if (a > b) {
                REQUIRE(mj.join->vertex == expected);
            } else {
                REQUIRE(mj.meet->vertex == a);
                REQUIRE(mj.join->vertex == a);
            }
        }
    }
    // Sanity rows for the endpoints.
    for (int a = 1; a <= 8; ++a) {
        auto mj = meet_join_vertices(g, 0, a);
        REQUIRE(mj.meet->vertex == 0);
        REQUIRE(mj.join->vertex == a);
    }
}

TEST_CASE("join of t1, t2 in the double-crossing graph is not unique") {
    auto g = fixtures::pic1();
    auto mj = meet_join_vertices(g, 1, 2);
    REQUIRE_FALSE(mj.join_unique);
}

TEST_CASE("meet falls back to the bottom sentinel on general graphs") {
    auto g = fixtures::sl25a();
    auto mj = meet_join_vertices(g, 1, 4);  // different components
    REQUIRE_FALSE(mj.meet.has_value());
    REQUIRE_FALSE(mj.join.has_value());
}

TEST_CASE("meet/join of comparable points are the points themselves") {
    auto g = fixtures::minimal();
    GraphPoint p{1, 0.25}, q{1, 0.75};
    auto mj = meet_join(g, p, q);
    REQUIRE(mj.unique());
    REQUIRE(mj.meet->time == 0.25);
    REQUIRE(mj.join->time == 0.75);
}

TEST_CASE("lattice meets and joins are associative and commutative on TLG* fixtures") {
    for (auto& [name, g] : fixtures::star_fixtures()) {
        if (g.vertices.size() > 12) continue;
        std::vector<int> ids;
        for (const auto& v : g.vertices) ids.push_back(v.id);
        auto meet_of = [&](int a, int b) {
            auto mj = meet_join_vertices(g, a, b);
            REQUIRE(mj.unique());
            REQUIRE(mj.meet.has_value());
            return mj.meet->vertex;
        };
        auto join_of = [&](int a, int b) {
            auto mj = meet_join_vertices(g, a, b);
            REQUIRE(mj.unique());
            REQUIRE(mj.join.has_value());
            return mj.join->vertex;
        };
        for (int a : ids)
            for (int b : ids) {
                REQUIRE(meet_of(a, b) == meet_of(b, a));
                REQUIRE(join_of(a, b) == join_of(b, a));
            }
        for (int a : ids)
            for (int b : ids)
                for (int c : ids) {
                    REQUIRE(meet_of(meet_of(a, b), c) == meet_of(a, meet_of(b, c)));
                    REQUIRE(join_of(join_of(a, b), c) == join_of(a, join_of(b, c)));
                }
    }
}
