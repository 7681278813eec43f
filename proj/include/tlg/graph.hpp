#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace tlg {

struct Vertex {
    int id = -1;
    double time = 0.0;
};

struct Edge {
    int id = -1;
    int tail = -1;  // earlier vertex
    int head = -1;  // later vertex
};

enum class GraphKind { simple, general };

/**
 * Time-like graph: a DAG whose vertices carry real time stamps and whose
 * edges run strictly forward in time.  Parallel edges between the same
 * vertex pair are allowed and distinguished by edge id.
 *
 * `simple` graphs have a unique earliest vertex (entrance) and a unique
 * latest vertex (exit), and every interior vertex has an incoming and an
 * outgoing edge.  `general` graphs only require nonzero degree and may be
 * disconnected.
 */
struct TimeLikeGraph {
    GraphKind kind = GraphKind::simple;
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;

    const Vertex* find_vertex(int id) const {
        for (const auto& v : vertices)
            if (v.id == id) return &v;
        return nullptr;
    }
    const Edge* find_edge(int id) const {
        for (const auto& e : edges)
            if (e.id == id) return &e;
        return nullptr;
    }
    const Vertex& vertex(int id) const {
        const Vertex* v = find_vertex(id);
        if (!v) throw std::runtime_error("unknown vertex id " + std::to_string(id));
        return *v;
    }
    const Edge& edge(int id) const {
        const Edge* e = find_edge(id);
        if (!e) throw std::runtime_error("unknown edge id " + std::to_string(id));
        return *e;
    }
    double time_of(int vertex_id) const { return vertex(vertex_id).time; }

    int max_vertex_id() const {
        int m = -1;
        for (const auto& v : vertices) m = std::max(m, v.id);
        return m;
    }
    int max_edge_id() const {
        int m = -1;
        for (const auto& e : edges) m = std::max(m, e.id);
        return m;
    }

    /// Vertices sorted by (time, id), edges sorted by id.
    void canonicalize() {
        std::sort(vertices.begin(), vertices.end(), [](const Vertex& a, const Vertex& b) {
            if (a.time != b.time) return a.time < b.time;
            return a.id < b.id;
        });
        std::sort(edges.begin(), edges.end(),
                  [](const Edge& a, const Edge& b) { return a.id < b.id; });
    }
};

inline bool graphs_equal_canonical(TimeLikeGraph a, TimeLikeGraph b) {
    a.canonicalize();
    b.canonicalize();
    if (a.kind != b.kind) return false;
    if (a.vertices.size() != b.vertices.size() || a.edges.size() != b.edges.size()) return false;
    for (std::size_t i = 0; i < a.vertices.size(); ++i)
        if (a.vertices[i].id != b.vertices[i].id || a.vertices[i].time != b.vertices[i].time)
            return false;
    for (std::size_t i = 0; i < a.edges.size(); ++i)
        if (a.edges[i].id != b.edges[i].id || a.edges[i].tail != b.edges[i].tail ||
            a.edges[i].head != b.edges[i].head)
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// Validation

struct ValidationReport {
    bool structure_ok = true;   // ids unique, endpoints resolve, times finite
    bool time_order_ok = true;  // time(tail) < time(head) on every edge
    bool degree_ok = true;      // degree conditions for the declared kind
    bool endpoints_ok = true;   // simple: unique entrance and exit
    std::vector<std::string> issues;

    bool valid() const { return structure_ok && time_order_ok && degree_ok && endpoints_ok; }
};

inline ValidationReport validate_tlg(const TimeLikeGraph& g) {
    ValidationReport r;
    auto complain = [&r](bool& flag, const std::string& msg) {
        flag = false;
        r.issues.push_back(msg);
    };

    if (g.vertices.size() < 2)
        complain(r.structure_ok, "graph needs at least two vertices");
    std::set<int> vids, eids;
    for (const auto& v : g.vertices) {
        if (!vids.insert(v.id).second)
            complain(r.structure_ok, "duplicate vertex id " + std::to_string(v.id));
        if (!std::isfinite(v.time))
            complain(r.structure_ok, "non-finite time at vertex " + std::to_string(v.id));
    }
    std::map<int, int> in_deg, out_deg;
    for (const auto& e : g.edges) {
        if (!eids.insert(e.id).second)
            complain(r.structure_ok, "duplicate edge id " + std::to_string(e.id));
        if (!vids.count(e.tail) || !vids.count(e.head)) {
            complain(r.structure_ok, "edge " + std::to_string(e.id) + " references unknown vertex");
            continue;
        }
        out_deg[e.tail]++;
        in_deg[e.head]++;
        if (!(g.vertex(e.tail).time < g.vertex(e.head).time))
            complain(r.time_order_ok, "edge " + std::to_string(e.id) +
                                          " does not advance time (tail " + std::to_string(e.tail) +
                                          ", head " + std::to_string(e.head) + ")");
    }
    if (!r.structure_ok) return r;

    if (g.kind == GraphKind::simple) {
        double tmin = g.vertices.front().time, tmax = g.vertices.front().time;
        for (const auto& v : g.vertices) {
            tmin = std::min(tmin, v.time);
            tmax = std::max(tmax, v.time);
        }
        int n_min = 0, n_max = 0;
        for (const auto& v : g.vertices) {
            if (v.time == tmin) n_min++;
            if (v.time == tmax) n_max++;
        }
        if (n_min != 1) complain(r.endpoints_ok, "simple TLG must have a unique entrance");
        if (n_max != 1) complain(r.endpoints_ok, "simple TLG must have a unique exit");
        for (const auto& v : g.vertices) {
            if (v.time == tmin || v.time == tmax) continue;
            if (in_deg[v.id] < 1 || out_deg[v.id] < 1)
                complain(r.degree_ok, "interior vertex " + std::to_string(v.id) +
                                          " must have incoming and outgoing edges");
        }
    } else {
        for (const auto& v : g.vertices) {
            if (in_deg[v.id] + out_deg[v.id] < 1)
                complain(r.degree_ok, "vertex " + std::to_string(v.id) + " has zero degree");
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Reachability and the induced order

inline std::vector<int> entrances(const TimeLikeGraph& g) {
    std::set<int> has_in;
    for (const auto& e : g.edges) has_in.insert(e.head);
    std::vector<int> out;
    for (const auto& v : g.vertices)
        if (!has_in.count(v.id)) out.push_back(v.id);
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<int> exits(const TimeLikeGraph& g) {
    std::set<int> has_out;
    for (const auto& e : g.edges) has_out.insert(e.tail);
    std::vector<int> out;
    for (const auto& v : g.vertices)
        if (!has_out.count(v.id)) out.push_back(v.id);
    std::sort(out.begin(), out.end());
    return out;
}

inline int entrance_of(const TimeLikeGraph& g) {
    auto en = entrances(g);
    if (en.size() != 1) throw std::runtime_error("graph has no unique entrance");
    return en.front();
}

inline int exit_of(const TimeLikeGraph& g) {
    auto ex = exits(g);
    if (ex.size() != 1) throw std::runtime_error("graph has no unique exit");
    return ex.front();
}

/// Forward reachability oracle over vertices (reflexive).
class Reachability {
public:
    explicit Reachability(const TimeLikeGraph& g) {
        int idx = 0;
        for (const auto& v : g.vertices) index_[v.id] = idx++;
        adj_.resize(g.vertices.size());
        for (const auto& e : g.edges) adj_[index_.at(e.tail)].push_back(index_.at(e.head));
        const std::size_t n = g.vertices.size();
        reach_.assign(n, std::vector<bool>(n, false));
        // DFS from each vertex; graphs at this scale are tiny.
        for (std::size_t s = 0; s < n; ++s) {
            std::vector<std::size_t> stack{s};
            reach_[s][s] = true;
            while (!stack.empty()) {
                std::size_t u = stack.back();
                stack.pop_back();
                for (int w : adj_[u]) {
                    if (!reach_[s][static_cast<std::size_t>(w)]) {
                        reach_[s][static_cast<std::size_t>(w)] = true;
                        stack.push_back(static_cast<std::size_t>(w));
                    }
                }
            }
        }
    }

    bool reaches(int from_vertex, int to_vertex) const {
        return reach_[index_.at(from_vertex)][index_.at(to_vertex)];
    }

private:
    std::map<int, int> index_;
    std::vector<std::vector<int>> adj_;
    std::vector<std::vector<bool>> reach_;
};

// ---------------------------------------------------------------------------
// Points and the order induced by the graph

/// A location on an edge at a given time.  Points at a shared vertex of two
/// edges are identified as the same point.
struct GraphPoint {
    int edge = -1;
    double time = 0.0;
};

/// Either a vertex, or a point strictly inside an edge.
struct ResolvedPoint {
    int vertex = -1;  // >= 0 when located at a vertex
    int edge = -1;    // host edge when interior
    double time = 0.0;

    bool at_vertex() const { return vertex >= 0; }
};

inline ResolvedPoint resolve_point(const TimeLikeGraph& g, const GraphPoint& p) {
    const Edge& e = g.edge(p.edge);
    const double t0 = g.time_of(e.tail), t1 = g.time_of(e.head);
    if (p.time < t0 || p.time > t1)
        throw std::runtime_error("point time outside host edge " + std::to_string(p.edge));
    ResolvedPoint r;
    r.time = p.time;
    if (p.time == t0)
        r.vertex = e.tail;
    else if (p.time == t1)
        r.vertex = e.head;
    else
        r.edge = p.edge;
    return r;
}

inline ResolvedPoint vertex_point(const TimeLikeGraph& g, int vertex_id) {
    ResolvedPoint r;
    r.vertex = vertex_id;
    r.time = g.time_of(vertex_id);
    return r;
}

inline bool resolved_leq(const TimeLikeGraph& g, const Reachability& reach, const ResolvedPoint& p,
                         const ResolvedPoint& q) {
    if (p.time > q.time) return false;
    if (p.at_vertex() && q.at_vertex()) return reach.reaches(p.vertex, q.vertex);
    if (p.at_vertex()) return reach.reaches(p.vertex, g.edge(q.edge).tail);
    if (q.at_vertex()) return reach.reaches(g.edge(p.edge).head, q.vertex);
    if (p.edge == q.edge) return p.time <= q.time;
    return reach.reaches(g.edge(p.edge).head, g.edge(q.edge).tail);
}

/// The order t1 <= t2 induced by the graph: times are ordered and a
/// time-path passes through both points.
inline bool order_leq(const TimeLikeGraph& g, const GraphPoint& p, const GraphPoint& q) {
    Reachability reach(g);
    return resolved_leq(g, reach, resolve_point(g, p), resolve_point(g, q));
}

// ---------------------------------------------------------------------------
// Time-paths

struct TimePath {
    std::vector<int> edges;

    bool operator==(const TimePath& o) const { return edges == o.edges; }
    bool operator<(const TimePath& o) const { return edges < o.edges; }
};

inline std::vector<int> path_vertices(const TimeLikeGraph& g, const TimePath& p) {
    std::vector<int> vs;
    if (p.edges.empty()) return vs;
    vs.push_back(g.edge(p.edges.front()).tail);
    for (int eid : p.edges) vs.push_back(g.edge(eid).head);
    return vs;
}

struct CapExceeded : std::runtime_error {
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void enumerate_paths_rec(const TimeLikeGraph& g,
                                const std::map<int, std::vector<int>>& out_edges, int at, int goal,
                                TimePath& current, std::vector<TimePath>& found, std::size_t cap) {
    if (at == goal && !current.edges.empty()) {
        if (found.size() >= cap) throw CapExceeded("time-path enumeration exceeded cap");
        found.push_back(current);
        return;
    }
    auto it = out_edges.find(at);
    if (it == out_edges.end()) return;
    for (int eid : it->second) {
        current.edges.push_back(eid);
        enumerate_paths_rec(g, out_edges, g.edge(eid).head, goal, current, found, cap);
        current.edges.pop_back();
    }
}

inline std::map<int, std::vector<int>> out_edge_map(const TimeLikeGraph& g) {
    std::map<int, std::vector<int>> m;
    for (const auto& e : g.edges) m[e.tail].push_back(e.id);
    for (auto& [v, es] : m) std::sort(es.begin(), es.end());
    return m;
}

}  // namespace detail

/// All time-paths from vertex `from` to vertex `to`, in lexicographic
/// edge-id order.  Throws CapExceeded beyond `cap` paths.
inline std::vector<TimePath> time_paths_between(const TimeLikeGraph& g, int from, int to,
                                                std::size_t cap = 1000000) {
    auto out_edges = detail::out_edge_map(g);
    std::vector<TimePath> found;
    TimePath current;
    detail::enumerate_paths_rec(g, out_edges, from, to, current, found, cap);
    return found;
}

/// Full (entrance-to-exit) time-paths.  For general graphs this enumerates
/// full paths over every entrance/exit pair.
inline std::vector<TimePath> full_time_paths(const TimeLikeGraph& g, std::size_t cap = 1000000) {
    std::vector<TimePath> all;
    for (int en : entrances(g)) {
        for (int ex : exits(g)) {
            auto paths = time_paths_between(g, en, ex, cap);
            if (all.size() + paths.size() > cap) throw CapExceeded("full-path enumeration exceeded cap");
            all.insert(all.end(), paths.begin(), paths.end());
        }
    }
    std::sort(all.begin(), all.end());
    return all;
}

// ---------------------------------------------------------------------------
// Interval subgraph

/// G[v1, v2]: all vertices on time-paths from v1 to v2 with the induced
/// edges.  Empty when v1 and v2 are not connected by a time-path.
inline TimeLikeGraph interval(const TimeLikeGraph& g, int v1, int v2) {
    g.vertex(v1);
    g.vertex(v2);
    if (g.time_of(v1) > g.time_of(v2)) throw std::runtime_error("interval endpoints out of order");
    Reachability reach(g);
    TimeLikeGraph sub;
    sub.kind = GraphKind::simple;
    if (!reach.reaches(v1, v2)) {
        sub.kind = GraphKind::general;
        return sub;  // empty vertex set
    }
    std::set<int> keep;
    for (const auto& v : g.vertices)
        if (reach.reaches(v1, v.id) && reach.reaches(v.id, v2)) keep.insert(v.id);
    for (const auto& v : g.vertices)
        if (keep.count(v.id)) sub.vertices.push_back(v);
    for (const auto& e : g.edges)
        if (keep.count(e.tail) && keep.count(e.head)) sub.edges.push_back(e);
    sub.canonicalize();
    return sub;
}

// ---------------------------------------------------------------------------
// Meet and join

struct MeetJoinResult {
    // Empty optionals are the bottom/top sentinels of the TLG** convention.
    std::optional<ResolvedPoint> meet;
    std::optional<ResolvedPoint> join;
    bool meet_unique = true;
    bool join_unique = true;
    bool unique() const { return meet_unique && join_unique; }
};

namespace detail {

// Maximal (resp. minimal) vertices of the common past (resp. future).
inline std::vector<int> extremal_common(const TimeLikeGraph& g, const Reachability& reach,
                                        const ResolvedPoint& p, const ResolvedPoint& q,
                                        bool past) {
    std::vector<int> common;
    for (const auto& v : g.vertices) {
        ResolvedPoint w = vertex_point(g, v.id);
        const bool in = past ? (resolved_leq(g, reach, w, p) && resolved_leq(g, reach, w, q))
                             : (resolved_leq(g, reach, p, w) && resolved_leq(g, reach, q, w));
        if (in) common.push_back(v.id);
    }
    std::vector<int> extremal;
    for (int a : common) {
        bool dominated = false;
        for (int b : common) {
            if (a == b) continue;
            const bool above = past ? reach.reaches(a, b) : reach.reaches(b, a);
            if (above) {
                dominated = true;
                break;
            }
        }
        if (!dominated) extremal.push_back(a);
    }
    // Deterministic representative first: latest (earliest) time, then id.
    std::sort(extremal.begin(), extremal.end(), [&](int a, int b) {
        const double ta = g.time_of(a), tb = g.time_of(b);
        if (ta != tb) return past ? ta > tb : ta < tb;
        return a < b;
    });
    return extremal;
}

}  // namespace detail

/// Meet (greatest common lower bound) and join of two points under the
/// induced order.  Non-uniqueness is reported, not thrown; an empty common
/// past or future yields the bottom/top sentinel.
inline MeetJoinResult meet_join(const TimeLikeGraph& g, const GraphPoint& pp,
                                const GraphPoint& qq) {
    Reachability reach(g);
    ResolvedPoint p = resolve_point(g, pp), q = resolve_point(g, qq);
    MeetJoinResult res;
    if (resolved_leq(g, reach, p, q)) {
        res.meet = p;
        res.join = q;
        return res;
    }
    if (resolved_leq(g, reach, q, p)) {
        res.meet = q;
        res.join = p;
        return res;
    }
    auto meets = detail::extremal_common(g, reach, p, q, /*past=*/true);
    auto joins = detail::extremal_common(g, reach, p, q, /*past=*/false);
    if (!meets.empty()) {
        res.meet = vertex_point(g, meets.front());
        res.meet_unique = meets.size() == 1;
    }
    if (!joins.empty()) {
        res.join = vertex_point(g, joins.front());
        res.join_unique = joins.size() == 1;
    }
    return res;
}

inline MeetJoinResult meet_join_vertices(const TimeLikeGraph& g, int v1, int v2) {
    auto as_point = [&](int v) {
        for (const auto& e : g.edges) {
            if (e.tail == v) return GraphPoint{e.id, g.time_of(v)};
            if (e.head == v) return GraphPoint{e.id, g.time_of(v)};
        }
        throw std::runtime_error("vertex " + std::to_string(v) + " has no incident edge");
    };
    return meet_join(g, as_point(v1), as_point(v2));
}

}  // namespace tlg
