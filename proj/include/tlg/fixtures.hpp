#pragma once

#include <map>
#include <string>

#include "tlg/graph.hpp"

namespace tlg::fixtures {

// Example graphs used throughout the tests and shipped as JSON fixtures.
// Times are unit-window unless noted.

/// Two vertices, one edge.
inline TimeLikeGraph minimal() {
    TimeLikeGraph g;
    g.kind = GraphKind::simple;
    g.vertices = {{0, 0.0}, {1, 1.0}};
    g.edges = {{1, 0, 1}};
    g.canonicalize();
    return g;
}

/// One cell: two parallel edges between 0 and 1.
inline TimeLikeGraph one_cell() {
    TimeLikeGraph g;
    g.kind = GraphKind::simple;
    g.vertices = {{0, 0.0}, {1, 1.0}};
    g.edges = {{1, 0, 1}, {2, 0, 1}};
    g.canonicalize();
    return g;
}

/// Six vertices t_j = j/5 with a double crossing; a TLG that is not a TLG*.
inline TimeLikeGraph pic1() {
    TimeLikeGraph g;
    g.kind = GraphKind::simple;
    for (int j = 0; j <= 5; ++j) g.vertices.push_back({j, j / 5.0});
    g.edges = {{1, 0, 1}, {2, 0, 2}, {3, 1, 4}, {4, 1, 3},
               {5, 2, 3}, {6, 2, 4}, {7, 4, 5}, {8, 3, 5}};
    g.canonicalize();
    return g;
}

/// Eight vertices t_j = j/7, a chain with three chords; a non-planar TLG*.
inline TimeLikeGraph sl3() {
    TimeLikeGraph g;
    g.kind = GraphKind::simple;
    for (int j = 0; j <= 7; ++j) g.vertices.push_back({j, j / 7.0});
    g.edges = {{1, 0, 1}, {2, 1, 2}, {3, 2, 3}, {4, 3, 4}, {5, 4, 5},
               {6, 5, 6}, {7, 6, 7}, {8, 1, 4}, {9, 2, 5}, {10, 3, 6}};
    g.canonicalize();
    return g;
}

/// Ten vertices t_j = j/9; a topological lattice that is not a TLG*.  Its
/// meet/join table is pinned entry for entry in pic33_table().
inline TimeLikeGraph pic33() {
    TimeLikeGraph g;
    g.kind = GraphKind::simple;
    for (int j = 0; j <= 9; ++j) g.vertices.push_back({j, j / 9.0});
    g.edges = {{1, 0, 1},  {2, 0, 2},  {3, 0, 4},  {4, 1, 3},  {5, 2, 3},
               {6, 1, 5},  {7, 4, 5},  {8, 4, 6},  {9, 5, 7},  {10, 6, 7},
               {11, 2, 8}, {12, 6, 8}, {13, 3, 9}, {14, 7, 9}, {15, 8, 9}};
    g.canonicalize();
    return g;
}

/// Meet/join table of pic33: meets above the diagonal (row < col), joins
/// below.  Indexed by vertex ids 1..8.
inline std::map<std::pair<int, int>, int> pic33_table() {
    // Row-major listing of the 8x8 table body; diagonal entries are the
    // vertices themselves.
    const int meet[8][8] = {
        // columns t1..t8; -1 marks the diagonal
        {-1, 0, 1, 0, 1, 0, 1, 0},  // t1 meets
        {3, -1, 2, 0, 0, 0, 0, 2},  // t2: join with t1 = 3, meets rightward
        {3, 3, -1, 0, 1, 0, 1, 2},
        {5, 8, 9, -1, 4, 4, 4, 4},
        {5, 9, 9, 5, -1, 4, 5, 4},
        {7, 8, 9, 6, 7, -1, 6, 6},
        {7, 9, 9, 7, 7, 7, -1, 6},
        {9, 8, 9, 8, 9, 8, 9, -1}};
    std::map<std::pair<int, int>, int> out;
    for (int r = 1; r <= 8; ++r)
        for (int c = 1; c <= 8; ++c) {
            if (r == c) {
                out[{r, c}] = r;  // x ^ x = x v x = x
                continue;
            }
            out[{r, c}] = meet[r - 1][c - 1];
        }
    return out;
}

/**
 * A TLG* carrying a simple cell that is not truly simple: sides 0-4-5 and
 * 0-1-5, with the interiors 1 and 4 linked through 2 and 3 inside the
 * interval graph.  Collapsing the cell fuses 0-1-4-5 into a chain, which
 * manufactures the missing 1-4 connection of the double-crossing pattern:
 * in the collapsed graph the pairs {1,2} and {3,4} are joined by all four
 * crossing edges, so it is no longer a TLG*.
 */
inline TimeLikeGraph pic34() {
    TimeLikeGraph g;
    g.kind = GraphKind::simple;
    for (int j = 0; j <= 5; ++j) g.vertices.push_back({j, j / 5.0});
    g.edges = {{1, 0, 1}, {2, 0, 2}, {3, 1, 3}, {4, 2, 3}, {5, 2, 4},
               {6, 0, 4}, {7, 4, 5}, {8, 1, 5}, {9, 3, 5}};
    g.canonicalize();
    return g;
}

/// The simple-but-not-truly-simple cell of pic34 as (side edges, start, end).
inline std::pair<std::vector<int>, std::vector<int>> pic34_cell_sides() {
    return {{6, 7}, {1, 8}};  // 0-4-5 and 0-1-5
}

/// A TLG* whose cell sides carry the equal-time pair Q1(id 2), Q2(id 3):
/// collapsing identifies them (the result happens to remain a TLG*).
inline TimeLikeGraph equal_time_cell() {
    TimeLikeGraph g;
    g.kind = GraphKind::simple;
    g.vertices = {{0, 0.0}, {1, 0.2}, {2, 0.4}, {3, 0.4}, {4, 0.6}, {5, 0.8}, {6, 1.0}};
    g.edges = {{1, 0, 2}, {2, 2, 5}, {3, 5, 6},  // side A-Q1-S, S-B
               {4, 0, 3}, {5, 3, 4}, {6, 4, 6},  // side A-Q2-R, R-B
               {7, 0, 1}, {8, 1, 5}, {9, 1, 4}};  // connector A-P, P-S, P-R
    g.canonicalize();
    return g;
}

/// Double cell: parallel edges 0-a, a single bridge a-b, parallel edges b-1.
inline TimeLikeGraph double_cell() {
    TimeLikeGraph g;
    g.kind = GraphKind::simple;
    g.vertices = {{0, 0.0}, {1, 0.25}, {2, 0.75}, {3, 1.0}};
    g.edges = {{1, 0, 1}, {2, 0, 1}, {3, 1, 2}, {4, 2, 3}, {5, 2, 3}};
    g.canonicalize();
    return g;
}

/// The coupling/branching graph: together on [1/3, 2/3], apart outside.
inline TimeLikeGraph coupling() {
    TimeLikeGraph g;
    g.kind = GraphKind::simple;
    g.vertices = {{0, 0.0}, {1, 1.0 / 3.0}, {2, 2.0 / 3.0}, {3, 1.0}};
    g.edges = {{1, 0, 1}, {2, 0, 1}, {3, 1, 2}, {4, 2, 3}, {5, 2, 3}};
    g.canonicalize();
    return g;
}

/// Five-vertex planar general TLG that is not a TLG**: the meet of the two
/// middle vertices does not exist (two maximal common lower bounds).
inline TimeLikeGraph sl27() {
    TimeLikeGraph g;
    g.kind = GraphKind::general;
    g.vertices = {{1, 0.1}, {2, 0.2}, {3, 0.3}, {4, 0.4}, {5, 0.5}};
    g.edges = {{1, 1, 3}, {2, 1, 4}, {3, 2, 3}, {4, 2, 4}, {5, 3, 5}, {6, 4, 5}};
    g.canonicalize();
    return g;
}

/// Disconnected general TLG with two entrances and three exits.
inline TimeLikeGraph sl25a() {
    TimeLikeGraph g;
    g.kind = GraphKind::general;
    g.vertices = {{1, 0.2}, {2, 0.5}, {3, 0.8}, {4, 0.3}, {5, 0.6}, {6, 0.7}};
    g.edges = {{1, 1, 2}, {2, 2, 3}, {3, 4, 5}, {4, 4, 6}};
    g.canonicalize();
    return g;
}

/// Hand-built forward time-like tree (one entrance, three exits).
inline TimeLikeGraph small_tree() {
    TimeLikeGraph g;
    g.kind = GraphKind::general;
    g.vertices = {{0, 0.0}, {1, 0.3}, {2, 0.6}, {3, 0.8}, {4, 1.0}, {5, 0.9}};
    g.edges = {{1, 0, 1}, {2, 1, 2}, {3, 1, 3}, {4, 2, 4}, {5, 2, 5}};
    g.canonicalize();
    return g;
}

/// Planar general TLG with all entrances at one time and all exits at
/// another; such graphs are always TLG**.
inline TimeLikeGraph aligned_entrances() {
    TimeLikeGraph g;
    g.kind = GraphKind::general;
    g.vertices = {{1, 0.0}, {2, 0.0}, {3, 0.5}, {4, 1.0}, {5, 1.0}};
    g.edges = {{1, 1, 3}, {2, 2, 3}, {3, 3, 4}, {4, 3, 5}, {5, 1, 4}};
    g.canonicalize();
    return g;
}

inline std::map<std::string, TimeLikeGraph> all() {
    return {{"minimal", minimal()},   {"one_cell", one_cell()},
            {"pic1", pic1()},         {"sl3", sl3()},
            {"pic33", pic33()},       {"pic34", pic34()},
            {"equal_time_cell", equal_time_cell()},
            {"double_cell", double_cell()},
            {"coupling", coupling()}, {"sl27", sl27()},
            {"sl25a", sl25a()},       {"small_tree", small_tree()},
            {"aligned_entrances", aligned_entrances()}};
}

/// The TLG* fixtures used by exhaustive spine/engine sweeps.
inline std::map<std::string, TimeLikeGraph> star_fixtures() {
    return {{"minimal", minimal()},       {"one_cell", one_cell()},
            {"sl3", sl3()},               {"pic34", pic34()},
            {"equal_time_cell", equal_time_cell()},
            {"double_cell", double_cell()}};
}

}  // namespace tlg::fixtures
