#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "tlg/graph.hpp"

namespace tlg {

// ---------------------------------------------------------------------------
// Construction towers
//
// A tower witnesses TLG*/TLG** membership as a replayable list of moves from
// a minimal seed graph.  Replaying reproduces the target graph with its
// original vertex/edge ids; intermediate edges that are later subdivided
// carry temporary ids above the target's id range.

struct SeedComponent {
    Vertex tail, head;
    int edge_id = -1;
};

struct Move {
    enum class Op { add_vertex, add_edge, add_leaf, new_component };
    Op op = Op::add_vertex;

    // add_vertex: subdivide split_edge at (vertex_id, time) into lo/hi.
    // add_edge:   new edge edge_id between existing tail_id -> head_id
    //             (requires an existing time-path between them).
    // add_leaf:   new vertex (vertex_id, time) joined to existing attach_id;
    //             new_is_earlier says whether the edge runs new -> attach.
    // new_component: disjoint minimal graph (general TLG** only).
    int vertex_id = -1;
    double time = 0.0;
    int split_edge = -1;
    int lo_edge = -1;
    int hi_edge = -1;
    int edge_id = -1;
    int tail_id = -1;
    int head_id = -1;
    int attach_id = -1;
    bool new_is_earlier = false;
    SeedComponent component;
};

struct ConstructionTower {
    SeedComponent seed;
    std::vector<Move> moves;
};

inline TimeLikeGraph replay_tower(const ConstructionTower& tower,
                                  GraphKind kind = GraphKind::simple) {
    TimeLikeGraph g;
    g.kind = kind;
    g.vertices.push_back(tower.seed.tail);
    g.vertices.push_back(tower.seed.head);
    g.edges.push_back({tower.seed.edge_id, tower.seed.tail.id, tower.seed.head.id});

    auto check_new_vertex = [&](int id) {
        if (g.find_vertex(id)) throw std::runtime_error("tower replay: vertex id reused");
    };
    auto check_new_edge = [&](int id) {
        if (g.find_edge(id)) throw std::runtime_error("tower replay: edge id reused");
    };

    for (const auto& m : tower.moves) {
        switch (m.op) {
            case Move::Op::add_vertex: {
                const Edge e = g.edge(m.split_edge);
                if (!(g.time_of(e.tail) < m.time && m.time < g.time_of(e.head)))
                    throw std::runtime_error("tower replay: subdivision time outside edge");
                check_new_vertex(m.vertex_id);
                check_new_edge(m.lo_edge);
                check_new_edge(m.hi_edge);
                g.edges.erase(std::find_if(g.edges.begin(), g.edges.end(),
                                           [&](const Edge& x) { return x.id == m.split_edge; }));
                g.vertices.push_back({m.vertex_id, m.time});
                g.edges.push_back({m.lo_edge, e.tail, m.vertex_id});
                g.edges.push_back({m.hi_edge, m.vertex_id, e.head});
                break;
            }
            case Move::Op::add_edge: {
                Reachability reach(g);
                if (!reach.reaches(m.tail_id, m.head_id))
                    throw std::runtime_error("tower replay: add_edge endpoints not time-path connected");
                check_new_edge(m.edge_id);
                g.edges.push_back({m.edge_id, m.tail_id, m.head_id});
                break;
            }
            case Move::Op::add_leaf: {
                check_new_vertex(m.vertex_id);
                check_new_edge(m.edge_id);
                const double t_attach = g.time_of(m.attach_id);
                if (m.new_is_earlier) {
                    if (!(m.time < t_attach))
                        throw std::runtime_error("tower replay: leaf vertex must be earlier");
                    g.vertices.push_back({m.vertex_id, m.time});
                    g.edges.push_back({m.edge_id, m.vertex_id, m.attach_id});
                } else {
                    if (!(m.time > t_attach))
                        throw std::runtime_error("tower replay: leaf vertex must be later");
                    g.vertices.push_back({m.vertex_id, m.time});
                    g.edges.push_back({m.edge_id, m.attach_id, m.vertex_id});
                }
                break;
            }
            case Move::Op::new_component: {
                check_new_vertex(m.component.tail.id);
                check_new_vertex(m.component.head.id);
                check_new_edge(m.component.edge_id);
                g.vertices.push_back(m.component.tail);
                g.vertices.push_back(m.component.head);
                g.edges.push_back({m.component.edge_id, m.component.tail.id, m.component.head.id});
                break;
            }
        }
    }
    g.canonicalize();
    return g;
}

// ---------------------------------------------------------------------------
// TLG* verification (the stingy algorithm)

struct StarVerdict {
    bool is_star = false;
    ConstructionTower tower;
    TimePath offending;  // the refused path when is_star is false
    std::string reason;
};

namespace detail {

/// Candidate extension paths for the stingy loop: endpoints in `vset`,
/// interior vertices outside it, every edge outside `eset`.
inline std::vector<TimePath> stingy_candidates(const TimeLikeGraph& g, const std::set<int>& vset,
                                               const std::set<int>& eset, std::size_t cap) {
    auto out_edges = out_edge_map(g);
    std::vector<TimePath> found;
    TimePath current;
    // Depth-first walk from each member vertex through unused edges.
    std::function<void(int)> walk = [&](int at) {
        auto it = out_edges.find(at);
        if (it == out_edges.end()) return;
        for (int eid : it->second) {
            if (eset.count(eid)) continue;
            current.edges.push_back(eid);
            const int next = g.edge(eid).head;
            if (vset.count(next)) {
                if (found.size() >= cap) throw CapExceeded("stingy path search exceeded cap");
                found.push_back(current);
            } else {
                walk(next);
            }
            current.edges.pop_back();
        }
    };
    for (int v : vset) walk(v);
    return found;
}

/// Emits tower moves realizing one path whose endpoints already exist:
/// a temporary edge followed by left-to-right subdivisions, so the final
/// edge ids are exactly the original ones.
inline void emit_path_moves(const TimeLikeGraph& g, const TimePath& path,
                            std::vector<Move>& moves, int& next_temp_id) {
    const auto vs = path_vertices(g, path);
    const std::size_t m = path.edges.size();
    if (m == 1) {
        Move mv;
        mv.op = Move::Op::add_edge;
        mv.edge_id = path.edges[0];
        mv.tail_id = vs.front();
        mv.head_id = vs.back();
        moves.push_back(mv);
        return;
    }
    int covering = next_temp_id++;
    {
        Move mv;
        mv.op = Move::Op::add_edge;
        mv.edge_id = covering;
        mv.tail_id = vs.front();
        mv.head_id = vs.back();
        moves.push_back(mv);
    }
    for (std::size_t i = 1; i < m; ++i) {
        Move mv;
        mv.op = Move::Op::add_vertex;
        mv.vertex_id = vs[i];
        mv.time = g.time_of(vs[i]);
        mv.split_edge = covering;
        mv.lo_edge = path.edges[i - 1];
        mv.hi_edge = (i + 1 == m) ? path.edges[m - 1] : next_temp_id++;
        covering = mv.hi_edge;
        moves.push_back(mv);
    }
}

/// Seed + subdivisions reproducing the starting spine.
inline ConstructionTower spine_tower(const TimeLikeGraph& g, const TimePath& spine,
                                     int& next_temp_id) {
    ConstructionTower tower;
    const auto vs = path_vertices(g, spine);
    tower.seed.tail = g.vertex(vs.front());
    tower.seed.head = g.vertex(vs.back());
    const std::size_t m = spine.edges.size();
    tower.seed.edge_id = (m == 1) ? spine.edges[0] : next_temp_id++;
    int covering = tower.seed.edge_id;
    for (std::size_t i = 1; i < m; ++i) {
        Move mv;
        mv.op = Move::Op::add_vertex;
        mv.vertex_id = vs[i];
        mv.time = g.time_of(vs[i]);
        mv.split_edge = covering;
        mv.lo_edge = spine.edges[i - 1];
        mv.hi_edge = (i + 1 == m) ? spine.edges[m - 1] : next_temp_id++;
        covering = mv.hi_edge;
        tower.moves.push_back(mv);
    }
    return tower;
}

}  // namespace detail

/**
 * Decides TLG* membership by growing the graph from a full time-path: each
 * round adds an unused time-path of minimal time span between two current
 * vertices, and accepts only if its endpoints are already time-path
 * connected in the partial graph.  Ties are broken by the lexicographically
 * smallest edge-id sequence so returned towers are reproducible.
 */
inline StarVerdict is_tlg_star(const TimeLikeGraph& g, std::optional<TimePath> start = std::nullopt,
                               std::size_t cap = 1000000) {
    auto report = validate_tlg(g);
    if (!report.valid()) throw std::runtime_error("is_tlg_star: invalid simple TLG");
    if (g.kind != GraphKind::simple) throw std::runtime_error("is_tlg_star: expects a simple TLG");

    TimePath spine;
    if (start) {
        spine = *start;
    } else {
        auto all = time_paths_between(g, entrance_of(g), exit_of(g), cap);
        if (all.empty()) throw std::runtime_error("is_tlg_star: no full time-path");
        spine = all.front();  // lexicographically smallest
    }
    {
        const auto vs = path_vertices(g, spine);
        if (vs.front() != entrance_of(g) || vs.back() != exit_of(g))
            throw std::runtime_error("is_tlg_star: start path is not a full time-path");
    }

    int next_temp_id = g.max_edge_id() + 1;
    StarVerdict verdict;
    verdict.tower = detail::spine_tower(g, spine, next_temp_id);

    std::set<int> vset, eset;
    for (int v : path_vertices(g, spine)) vset.insert(v);
    for (int e : spine.edges) eset.insert(e);

    std::vector<Edge> partial_edges;
    for (int e : spine.edges) partial_edges.push_back(g.edge(e));

    while (eset.size() < g.edges.size()) {
        auto candidates = detail::stingy_candidates(g, vset, eset, cap);
        if (candidates.empty())
            throw std::runtime_error("is_tlg_star: no extension path found on a valid TLG");
        auto span = [&](const TimePath& p) {
            const auto vs = path_vertices(g, p);
            return g.time_of(vs.back()) - g.time_of(vs.front());
        };
        const TimePath* best = &candidates.front();
        for (const auto& c : candidates) {
            const double ds = span(c) - span(*best);
            if (ds < 0 || (ds == 0 && c.edges < best->edges)) best = &c;
        }
        const auto vs = path_vertices(g, *best);

        // Connectivity test inside the partial graph built so far.
        TimeLikeGraph partial;
        partial.kind = GraphKind::general;
        for (const auto& v : g.vertices)
            if (vset.count(v.id)) partial.vertices.push_back(v);
        partial.edges = partial_edges;
        Reachability reach(partial);
        if (!reach.reaches(vs.front(), vs.back())) {
            verdict.is_star = false;
            verdict.offending = *best;
            verdict.reason = "minimal path endpoints " + std::to_string(vs.front()) + " -> " +
                             std::to_string(vs.back()) + " not connected in the partial graph";
            return verdict;
        }
        detail::emit_path_moves(g, *best, verdict.tower.moves, next_temp_id);
        for (int v : vs) vset.insert(v);
        for (int e : best->edges) {
            eset.insert(e);
            partial_edges.push_back(g.edge(e));
        }
    }
    verdict.is_star = true;
    return verdict;
}

// ---------------------------------------------------------------------------
// Planar construction (minimal-path growth)
//
// For graphs supplied with a planar ordering of edges (a y-coordinate per
// edge id, constant along the edge), grows the graph by repeatedly adding a
// minimal full path with respect to the pointwise-below order.

namespace detail {

// sigma' <= sigma'' pointwise: wherever the paths cover a common time range,
// the y of sigma' does not exceed the y of sigma''.
inline bool path_below(const TimeLikeGraph& g, const std::map<int, double>& y, const TimePath& a,
                       const TimePath& b) {
    for (int ea : a.edges) {
        const Edge& xa = g.edge(ea);
        for (int eb : b.edges) {
            const Edge& xb = g.edge(eb);
            const double lo = std::max(g.time_of(xa.tail), g.time_of(xb.tail));
            const double hi = std::min(g.time_of(xa.head), g.time_of(xb.head));
            if (lo < hi && y.at(ea) > y.at(eb)) return false;
        }
    }
    return true;
}

}  // namespace detail

/// Algorithm for constructing a planar TLG as a TLG*, driven by a per-edge
/// y-order annotation.  Throws when a chosen path cannot legally extend the
/// partial graph (annotation not planar-consistent).
inline ConstructionTower planar_tower(const TimeLikeGraph& g, const std::map<int, double>& y_order,
                                      std::size_t cap = 1000000) {
    auto report = validate_tlg(g);
    if (!report.valid() || g.kind != GraphKind::simple)
        throw std::runtime_error("planar_tower: expects a valid simple TLG");
    for (const auto& e : g.edges)
        if (!y_order.count(e.id))
            throw std::runtime_error("planar_tower: missing y-order for edge " + std::to_string(e.id));

    auto all = full_time_paths(g, cap);
    auto minimal_of = [&](const std::vector<const TimePath*>& cands) {
        const TimePath* best = nullptr;
        for (const TimePath* c : cands) {
            bool is_min = true;
            for (const TimePath* d : cands) {
                if (c == d) continue;
                if (detail::path_below(g, y_order, *d, *c) &&
                    !detail::path_below(g, y_order, *c, *d)) {
                    is_min = false;
                    break;
                }
            }
            if (is_min && (!best || c->edges < best->edges)) best = c;
        }
        return best;
    };

    std::set<int> eset, vset;
    std::vector<const TimePath*> remaining;
    for (const auto& p : all) remaining.push_back(&p);
    const TimePath* spine = minimal_of(remaining);
    int next_temp_id = g.max_edge_id() + 1;
    ConstructionTower tower = detail::spine_tower(g, *spine, next_temp_id);
    for (int e : spine->edges) eset.insert(e);
    for (int v : path_vertices(g, *spine)) vset.insert(v);

    while (eset.size() < g.edges.size()) {
        std::vector<const TimePath*> cands;
        for (const TimePath* p : remaining) {
            bool has_new = false;
            for (int e : p->edges)
                if (!eset.count(e)) has_new = true;
            if (has_new) cands.push_back(p);
        }
        const TimePath* sigma = minimal_of(cands);
        if (!sigma) throw std::runtime_error("planar_tower: no candidate path");
        // New edges of sigma form runs between vertices already present.
        const auto vs = path_vertices(g, *sigma);
        std::size_t i = 0;
        while (i < sigma->edges.size()) {
            if (eset.count(sigma->edges[i])) {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < sigma->edges.size() && !eset.count(sigma->edges[j]) &&
                   (j == i || !vset.count(vs[j])))
                ++j;
            TimePath run;
            run.edges.assign(sigma->edges.begin() + static_cast<long>(i),
                             sigma->edges.begin() + static_cast<long>(j));
            if (!vset.count(vs[i]) || !vset.count(vs[j]))
                throw std::runtime_error("planar_tower: run endpoints missing from partial graph");
            TimeLikeGraph partial;
            partial.kind = GraphKind::general;
            for (const auto& v : g.vertices)
                if (vset.count(v.id)) partial.vertices.push_back(v);
            for (const auto& e : g.edges)
                if (eset.count(e.id)) partial.edges.push_back(e);
            Reachability reach(partial);
            if (!reach.reaches(vs[i], vs[j]))
                throw std::runtime_error("planar_tower: y-order is not planar-consistent");
            detail::emit_path_moves(g, run, tower.moves, next_temp_id);
            for (std::size_t k = i; k <= j; ++k) vset.insert(vs[k]);
            for (int e : run.edges) eset.insert(e);
            i = j;
        }
    }
    return tower;
}

}  // namespace tlg
