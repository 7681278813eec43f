#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "tlg/graph.hpp"

namespace tlg {

// ---------------------------------------------------------------------------
// Cells, half-cells, cell collapse and moralization.

struct Cell {
    enum class Kind { cell, right_half, left_half };
    Kind kind = Kind::cell;
    TimePath side_a, side_b;
    int start = -1;  // right_half: the two sides start at different entrances
    int end = -1;    // left_half: the two sides end at different exits
    bool simple = false;
    bool truly_simple = false;
};

namespace detail {

inline std::vector<int> interior_vertices(const TimeLikeGraph& g, const TimePath& p) {
    auto vs = path_vertices(g, p);
    if (vs.size() <= 2) return {};
    return std::vector<int>(vs.begin() + 1, vs.end() - 1);
}

inline bool disjoint_interiors(const TimeLikeGraph& g, const TimePath& a, const TimePath& b) {
    auto ia = interior_vertices(g, a);
    auto ib = interior_vertices(g, b);
    std::set<int> sa(ia.begin(), ia.end());
    for (int v : ib)
        if (sa.count(v)) return false;
    return true;
}

/// Undirected connected components over a vertex subset with induced edges.
inline std::map<int, int> undirected_components(const TimeLikeGraph& g,
                                                const std::set<int>& verts) {
    std::map<int, int> comp;
    int next = 0;
    for (int v : verts)
        if (!comp.count(v)) {
            std::vector<int> stack{v};
            comp[v] = next;
            while (!stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                for (const auto& e : g.edges) {
                    int other = -1;
                    if (e.tail == u && verts.count(e.head)) other = e.head;
                    if (e.head == u && verts.count(e.tail)) other = e.tail;
                    if (other >= 0 && !comp.count(other)) {
                        comp[other] = next;
                        stack.push_back(other);
                    }
                }
            }
            ++next;
        }
    return comp;
}

// No time-path between interior vertices of the two sides, in either
// direction.
inline bool cell_is_simple(const TimeLikeGraph& g, const Reachability& reach, const TimePath& a,
                           const TimePath& b) {
    for (int u : interior_vertices(g, a))
        for (int v : interior_vertices(g, b))
            if (reach.reaches(u, v) || reach.reaches(v, u)) return false;
    return true;
}

// No undirected path inside G[start,end] minus the endpoints joining the
// interiors of the two sides.
inline bool cell_is_truly_simple(const TimeLikeGraph& g, const Cell& c) {
    TimeLikeGraph inter = interval(g, c.start, c.end);
    std::set<int> verts;
    for (const auto& v : inter.vertices)
        if (v.id != c.start && v.id != c.end) verts.insert(v.id);
    auto comp = undirected_components(inter, verts);
    for (int u : interior_vertices(g, c.side_a))
        for (int v : interior_vertices(g, c.side_b))
            if (comp.count(u) && comp.count(v) && comp.at(u) == comp.at(v)) return false;
    return true;
}

// Half-cell version: connectivity within the strict past (or future) of the
// junction vertex.
inline bool half_cell_is_truly_simple(const TimeLikeGraph& g, const Reachability& reach,
                                      const Cell& c) {
    const bool right = c.kind == Cell::Kind::right_half;
    const int junction = right ? c.end : c.start;
    std::set<int> verts;
    for (const auto& v : g.vertices) {
        if (v.id == junction) continue;
        if (right ? reach.reaches(v.id, junction) : reach.reaches(junction, v.id))
            verts.insert(v.id);
    }
    auto comp = undirected_components(g, verts);
    auto side_without_junction = [&](const TimePath& p) {
        std::vector<int> out;
        for (int v : path_vertices(g, p))
            if (v != junction) out.push_back(v);
        return out;
    };
    for (int u : side_without_junction(c.side_a))
        for (int v : side_without_junction(c.side_b))
            if (comp.count(u) && comp.count(v) && comp.at(u) == comp.at(v)) return false;
    return true;
}

}  // namespace detail

/// Enumerates cells between every co-terminal vertex pair, with simple /
/// truly-simple classification; for general TLGs also right and left
/// half-cells.
inline std::vector<Cell> find_cells(const TimeLikeGraph& g, std::size_t cap = 1000000) {
    Reachability reach(g);
    std::vector<Cell> cells;

    for (const auto& u : g.vertices) {
        for (const auto& v : g.vertices) {
            if (!(u.time < v.time) || !reach.reaches(u.id, v.id)) continue;
            auto paths = time_paths_between(g, u.id, v.id, cap);
            for (std::size_t i = 0; i < paths.size(); ++i) {
                for (std::size_t j = i + 1; j < paths.size(); ++j) {
                    if (!detail::disjoint_interiors(g, paths[i], paths[j])) continue;
                    Cell c;
                    c.kind = Cell::Kind::cell;
                    c.side_a = paths[i];
                    c.side_b = paths[j];
                    c.start = u.id;
                    c.end = v.id;
                    c.simple = detail::cell_is_simple(g, reach, c.side_a, c.side_b);
                    c.truly_simple = c.simple && detail::cell_is_truly_simple(g, c);
                    cells.push_back(c);
                }
            }
        }
    }

    if (g.kind == GraphKind::general) {
        auto ens = entrances(g);
        auto exs = exits(g);
        // Right half-cells: paths from two different entrances meeting only
        // at their common end.
        for (std::size_t a = 0; a < ens.size(); ++a) {
            for (std::size_t b = a + 1; b < ens.size(); ++b) {
                for (const auto& m : g.vertices) {
                    if (!reach.reaches(ens[a], m.id) || !reach.reaches(ens[b], m.id)) continue;
                    auto pa = time_paths_between(g, ens[a], m.id, cap);
                    auto pb = time_paths_between(g, ens[b], m.id, cap);
                    for (const auto& sa : pa) {
                        for (const auto& sb : pb) {
                            auto va = path_vertices(g, sa);
                            auto vb = path_vertices(g, sb);
                            std::set<int> seta(va.begin(), va.end());
                            int shared = 0;
                            for (int w : vb)
                                if (seta.count(w)) ++shared;
                            if (shared != 1) continue;  // only the junction m
                            Cell c;
                            c.kind = Cell::Kind::right_half;
                            c.side_a = sa;
                            c.side_b = sb;
                            c.start = -1;
                            c.end = m.id;
                            c.simple = true;
                            c.truly_simple = detail::half_cell_is_truly_simple(g, reach, c);
                            cells.push_back(c);
                        }
                    }
                }
            }
        }
        // Left half-cells: paths from a common start, meeting only there,
        // ending at two different exits.
        for (const auto& k : g.vertices) {
            for (std::size_t a = 0; a < exs.size(); ++a) {
                for (std::size_t b = a + 1; b < exs.size(); ++b) {
                    if (!reach.reaches(k.id, exs[a]) || !reach.reaches(k.id, exs[b])) continue;
                    auto pa = time_paths_between(g, k.id, exs[a], cap);
                    auto pb = time_paths_between(g, k.id, exs[b], cap);
                    for (const auto& sa : pa) {
                        for (const auto& sb : pb) {
                            auto va = path_vertices(g, sa);
                            auto vb = path_vertices(g, sb);
                            std::set<int> seta(va.begin(), va.end());
                            int shared = 0;
                            for (int w : vb)
                                if (seta.count(w)) ++shared;
                            if (shared != 1) continue;
                            Cell c;
                            c.kind = Cell::Kind::left_half;
                            c.side_a = sa;
                            c.side_b = sb;
                            c.start = k.id;
                            c.end = -1;
                            c.simple = true;
                            c.truly_simple = detail::half_cell_is_truly_simple(g, reach, c);
                            cells.push_back(c);
                        }
                    }
                }
            }
        }
    }
    return cells;
}

/**
 * Cell collapse: glues the two sides of a cell into one time-path.  Side
 * vertices are ordered by time along the fused path, equal-time vertices
 * are identified, and every non-cell edge is re-attached to the image of
 * its endpoints.
 */
inline TimeLikeGraph cell_collapse(const TimeLikeGraph& g, const Cell& cell) {
    if (cell.kind != Cell::Kind::cell)
        throw std::runtime_error("cell_collapse: expects a full cell");
    std::set<int> side_edges(cell.side_a.edges.begin(), cell.side_a.edges.end());
    for (int e : cell.side_b.edges) side_edges.insert(e);
    for (int e : side_edges)
        if (!g.find_edge(e)) throw std::runtime_error("cell_collapse: cell is not part of the graph");

    auto va = path_vertices(g, cell.side_a);
    auto vb = path_vertices(g, cell.side_b);
    std::vector<int> side_verts;
    side_verts.insert(side_verts.end(), va.begin(), va.end());
    for (int v : vb)
        if (std::find(side_verts.begin(), side_verts.end(), v) == side_verts.end())
            side_verts.push_back(v);
    std::sort(side_verts.begin(), side_verts.end(), [&](int a, int b) {
        if (g.time_of(a) != g.time_of(b)) return g.time_of(a) < g.time_of(b);
        return a < b;
    });

    // Merge equal-time side vertices; the image keeps the smaller id.
    std::map<int, int> image;
    std::vector<std::pair<int, double>> fused;  // (id, time) in time order
    for (int v : side_verts) {
        if (!fused.empty() && fused.back().second == g.time_of(v)) {
            image[v] = fused.back().first;
        } else {
            image[v] = v;
            fused.emplace_back(v, g.time_of(v));
        }
    }

    TimeLikeGraph out;
    out.kind = g.kind;
    std::set<int> side_set(side_verts.begin(), side_verts.end());
    for (const auto& v : g.vertices) {
        if (side_set.count(v.id)) {
            if (image[v.id] == v.id) out.vertices.push_back(v);
        } else {
            out.vertices.push_back(v);
        }
    }
    int next_edge = g.max_edge_id() + 1;
    for (std::size_t i = 0; i + 1 < fused.size(); ++i)
        out.edges.push_back({next_edge++, fused[i].first, fused[i + 1].first});
    for (const auto& e : g.edges) {
        if (side_edges.count(e.id)) continue;
        int tail = image.count(e.tail) ? image[e.tail] : e.tail;
        int head = image.count(e.head) ? image[e.head] : e.head;
        out.edges.push_back({e.id, tail, head});
    }
    out.canonicalize();
    auto rep = validate_tlg(out);
    if (!rep.valid()) throw std::runtime_error("cell_collapse: result is not a valid TLG");
    return out;
}

/// Adds one edge between the start and the end of every truly simple cell.
/// Half-cells lack one endpoint of the pair and get no moral edge.
inline TimeLikeGraph moralize(const TimeLikeGraph& g, std::size_t cap = 1000000) {
    auto cells = find_cells(g, cap);
    std::set<std::pair<int, int>> pairs;
    for (const auto& c : cells)
        if (c.kind == Cell::Kind::cell && c.truly_simple) pairs.insert({c.start, c.end});
    TimeLikeGraph out = g;
    int next_edge = g.max_edge_id() + 1;
    for (const auto& [s, e] : pairs) out.edges.push_back({next_edge++, s, e});
    out.canonicalize();
    return out;
}

/// Moral-graph adjacency used by the Markov-field checks: w1 ~ w2 when the
/// moralized graph has a time-path between them whose interior avoids W.
inline bool mrf_adjacent(const TimeLikeGraph& moralized, int w1, int w2,
                         const std::set<int>& W, std::size_t cap = 1000000) {
    int from = w1, to = w2;
    if (moralized.time_of(from) > moralized.time_of(to)) std::swap(from, to);
    auto paths = time_paths_between(moralized, from, to, cap);
    for (const auto& p : paths) {
        auto vs = path_vertices(moralized, p);
        bool clean = true;
        for (std::size_t i = 1; i + 1 < vs.size(); ++i)
            if (W.count(vs[i])) clean = false;
        if (clean) return true;
    }
    return false;
}

}  // namespace tlg
