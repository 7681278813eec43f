#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tlg/graph.hpp"
#include "tlg/rng.hpp"
#include "tlg/tower.hpp"

namespace tlg {

// ---------------------------------------------------------------------------
// Graph file format (JSON), byte-stable under canonical ordering.

inline nlohmann::ordered_json graph_to_json(TimeLikeGraph g) {
    g.canonicalize();
    nlohmann::ordered_json j;
    j["kind"] = g.kind == GraphKind::simple ? "simple" : "general";
    j["vertices"] = nlohmann::ordered_json::array();
    for (const auto& v : g.vertices) j["vertices"].push_back({{"id", v.id}, {"time", v.time}});
    j["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : g.edges)
        j["edges"].push_back({{"id", e.id}, {"tail", e.tail}, {"head", e.head}});
    return j;
}

inline TimeLikeGraph graph_from_json(const nlohmann::json& j) {
    TimeLikeGraph g;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "simple")
        g.kind = GraphKind::simple;
    else if (kind == "general")
        g.kind = GraphKind::general;
    else
        throw std::runtime_error("graph kind must be 'simple' or 'general', got '" + kind + "'");
    for (const auto& v : j.at("vertices"))
        g.vertices.push_back({v.at("id").get<int>(), v.at("time").get<double>()});
    for (const auto& e : j.at("edges"))
        g.edges.push_back({e.at("id").get<int>(), e.at("tail").get<int>(), e.at("head").get<int>()});
    g.canonicalize();
    return g;
}

inline void save_graph(const TimeLikeGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << graph_to_json(g).dump(2) << "\n";
}

inline TimeLikeGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("parse error in " + path + ": " + e.what());
    }
    return graph_from_json(j);
}

// ---------------------------------------------------------------------------
// Tower file format.

inline nlohmann::ordered_json tower_to_json(const ConstructionTower& t) {
    nlohmann::ordered_json j;
    j["seed"] = {{"tail", {{"id", t.seed.tail.id}, {"time", t.seed.tail.time}}},
                 {"head", {{"id", t.seed.head.id}, {"time", t.seed.head.time}}},
                 {"edge", t.seed.edge_id}};
    j["moves"] = nlohmann::ordered_json::array();
    for (const auto& m : t.moves) {
        nlohmann::ordered_json mj;
        switch (m.op) {
            case Move::Op::add_vertex:
                mj["op"] = "add_vertex";
                mj["id"] = m.vertex_id;
                mj["time"] = m.time;
                mj["edge"] = m.split_edge;
                mj["lo"] = m.lo_edge;
                mj["hi"] = m.hi_edge;
                break;
            case Move::Op::add_edge:
                mj["op"] = "add_edge";
                mj["id"] = m.edge_id;
                mj["tail"] = m.tail_id;
                mj["head"] = m.head_id;
                break;
            case Move::Op::add_leaf:
                mj["op"] = "add_leaf";
                mj["id"] = m.vertex_id;
                mj["time"] = m.time;
                mj["edge"] = m.edge_id;
                mj["attach"] = m.attach_id;
                mj["dir"] = m.new_is_earlier ? "before" : "after";
                break;
            case Move::Op::new_component:
                mj["op"] = "new_component";
                mj["tail"] = {{"id", m.component.tail.id}, {"time", m.component.tail.time}};
                mj["head"] = {{"id", m.component.head.id}, {"time", m.component.head.time}};
                mj["edge"] = m.component.edge_id;
                break;
        }
        j["moves"].push_back(mj);
    }
    return j;
}

inline ConstructionTower tower_from_json(const nlohmann::json& j) {
    ConstructionTower t;
    t.seed.tail = {j.at("seed").at("tail").at("id").get<int>(),
                   j.at("seed").at("tail").at("time").get<double>()};
    t.seed.head = {j.at("seed").at("head").at("id").get<int>(),
                   j.at("seed").at("head").at("time").get<double>()};
    t.seed.edge_id = j.at("seed").at("edge").get<int>();
    for (const auto& mj : j.at("moves")) {
        Move m;
        const std::string op = mj.at("op").get<std::string>();
        if (op == "add_vertex") {
            m.op = Move::Op::add_vertex;
            m.vertex_id = mj.at("id").get<int>();
            m.time = mj.at("time").get<double>();
            m.split_edge = mj.at("edge").get<int>();
            m.lo_edge = mj.at("lo").get<int>();
            m.hi_edge = mj.at("hi").get<int>();
        } else if (op == "add_edge") {
            m.op = Move::Op::add_edge;
            m.edge_id = mj.at("id").get<int>();
            m.tail_id = mj.at("tail").get<int>();
            m.head_id = mj.at("head").get<int>();
        } else if (op == "add_leaf") {
            m.op = Move::Op::add_leaf;
            m.vertex_id = mj.at("id").get<int>();
            m.time = mj.at("time").get<double>();
            m.edge_id = mj.at("edge").get<int>();
            m.attach_id = mj.at("attach").get<int>();
            m.new_is_earlier = mj.at("dir").get<std::string>() == "before";
        } else if (op == "new_component") {
            m.op = Move::Op::new_component;
            m.component.tail = {mj.at("tail").at("id").get<int>(),
                                mj.at("tail").at("time").get<double>()};
            m.component.head = {mj.at("head").at("id").get<int>(),
                                mj.at("head").at("time").get<double>()};
            m.component.edge_id = mj.at("edge").get<int>();
        } else {
            throw std::runtime_error("unknown tower move op '" + op + "'");
        }
        t.moves.push_back(m);
    }
    return t;
}

inline void save_tower(const ConstructionTower& t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << tower_to_json(t).dump(2) << "\n";
}

inline ConstructionTower load_tower(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return tower_from_json(j);
}

// ---------------------------------------------------------------------------
// CSV and PGM emission.

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path, const std::vector<std::string>& header)
        : out_(path) {
        if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) out_ << ",";
            out_ << header[i];
        }
        out_ << "\n";
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ",";
            out_ << cells[i];
        }
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

inline std::string csv_num(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

/// Plain-text PGM ("P2") heatmap.  The affine value-to-gray map is recorded
/// in a comment: gray = round((v - vmin) / (vmax - vmin) * maxgray).
inline void write_pgm(const std::string& path, const std::vector<std::vector<double>>& rows,
                      int maxgray = 255) {
    double vmin = 0.0, vmax = 0.0;
    bool first = true;
    for (const auto& r : rows)
        for (double v : r) {
            if (first || v < vmin) vmin = v;
            if (first || v > vmax) vmax = v;
            first = false;
        }
    if (vmax - vmin < 1e-300) vmax = vmin + 1.0;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "P2\n";
    out << "# gray = round((value - vmin)/(vmax - vmin) * " << maxgray << "), vmin=" << csv_num(vmin)
        << " vmax=" << csv_num(vmax) << "\n";
    out << rows.front().size() << " " << rows.size() << "\n" << maxgray << "\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out << " ";
            out << static_cast<int>(std::lround((r[i] - vmin) / (vmax - vmin) * maxgray));
        }
        out << "\n";
    }
}

// ---------------------------------------------------------------------------
// Run manifests.

inline std::uint64_t file_checksum(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return fnv1a64(ss.str());
}

struct Manifest {
    std::string command;
    nlohmann::ordered_json config;
    std::uint64_t seed = 0;
    std::string build = "unknown";
    std::vector<std::string> outputs;

    void write(const std::string& path) const {
        nlohmann::ordered_json j;
        j["command"] = command;
        j["config"] = config;
        j["seed"] = seed;
        j["build"] = build;
        j["outputs"] = nlohmann::ordered_json::array();
        for (const auto& p : outputs) {
            std::ostringstream hex;
            hex << std::hex << file_checksum(p);
            j["outputs"].push_back(
                {{"path", std::filesystem::path(p).filename().string()}, {"fnv64", hex.str()}});
        }
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open " + path + " for writing");
        out << j.dump(2) << "\n";
    }
};

}  // namespace tlg
