#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "avd/colouring.hpp"
#include "avd/list_assignment.hpp"
#include "avd/multigraph.hpp"

namespace avd {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Graph text format: first line "n m", then m lines "u v" (0-based).
// Parallel edges appear as repeated lines.
// ---------------------------------------------------------------------------

inline MultiGraph parse_graph_text(const std::string& text) {
    std::istringstream in(text);
    long long n = 0, m = 0;
    if (!(in >> n >> m)) throw InvalidInput("graph text: missing 'n m' header");
    if (n < 0 || m < 0) throw InvalidInput("graph text: negative counts");
    MultiGraph g(static_cast<int>(n));
    for (long long i = 0; i < m; ++i) {
        long long u = 0, v = 0;
        if (!(in >> u >> v)) throw InvalidInput("graph text: truncated edge list");
        g.add_edge(static_cast<int>(u), static_cast<int>(v));
    }
    return g;
}

inline std::string graph_to_text(const MultiGraph& g) {
    std::ostringstream out;
    out << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (const auto& rec : g.edges()) out << rec.u << ' ' << rec.v << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// Instance JSON: {"n": int, "edges": [[u,v],...], "lists": {"<edge-id>":
// [colours]}}; total-colouring instances additionally carry
// "vertex_lists": {"<vertex-id>": [colours]}. Keys are emitted in nlohmann's
// sorted order and colour arrays are sorted, so serialization is canonical.
// ---------------------------------------------------------------------------

struct Instance {
    MultiGraph graph;
    ListAssignment lists;
    std::vector<colour_set> vertex_lists; // empty unless a total instance
    bool has_vertex_lists() const { return !vertex_lists.empty(); }
};

inline json instance_to_json(const Instance& inst) {
    json j;
    j["n"] = inst.graph.vertex_count();
    json edges = json::array();
    for (const auto& rec : inst.graph.edges()) edges.push_back({rec.u, rec.v});
    j["edges"] = std::move(edges);
    json lists = json::object();
    for (int e = 0; e < inst.graph.edge_count(); ++e) {
        lists[std::to_string(e)] = inst.lists.list(e);
    }
    j["lists"] = std::move(lists);
    if (inst.has_vertex_lists()) {
        json vl = json::object();
        for (int v = 0; v < inst.graph.vertex_count(); ++v) {
            vl[std::to_string(v)] = inst.vertex_lists[static_cast<std::size_t>(v)];
        }
        j["vertex_lists"] = std::move(vl);
    }
    return j;
}

inline int parse_id_key(const std::string& key, const char* what) {
    try {
        std::size_t pos = 0;
        const int id = std::stoi(key, &pos);
        if (pos != key.size() || id < 0) throw std::invalid_argument(key);
        return id;
    } catch (const std::exception&) {
        throw InvalidInput(std::string(what) + ": bad id key '" + key + "'");
    }
}

inline Instance instance_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("edges")) {
        throw InvalidInput("instance json: expected object with 'n' and 'edges'");
    }
    Instance inst;
    inst.graph = MultiGraph(j.at("n").get<int>());
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw InvalidInput("instance json: bad edge entry");
        inst.graph.add_edge(e[0].get<int>(), e[1].get<int>());
    }
    inst.lists = ListAssignment(inst.graph.edge_count());
    if (j.contains("lists")) {
        for (const auto& [key, val] : j.at("lists").items()) {
            const int e = parse_id_key(key, "lists");
            inst.graph.check_edge(e);
            inst.lists.set_list(e, val.get<std::vector<colour_t>>());
        }
    }
    if (j.contains("vertex_lists")) {
        inst.vertex_lists.resize(static_cast<std::size_t>(inst.graph.vertex_count()));
        for (const auto& [key, val] : j.at("vertex_lists").items()) {
            const int v = parse_id_key(key, "vertex_lists");
            inst.graph.check_vertex(v);
            inst.vertex_lists[static_cast<std::size_t>(v)] =
                make_colour_set(val.get<std::vector<colour_t>>());
        }
    }
    return inst;
}

// ---------------------------------------------------------------------------
// Colouring JSON: {"edges": {"<edge-id>": colour}} with optional
// {"stages": {"<edge-id>": tag}}. Missing ids are uncoloured edges.
// ---------------------------------------------------------------------------

inline json colouring_to_json(const PartialColouring& c, bool with_stages = false) {
    json edges = json::object();
    json stages = json::object();
    for (int e = 0; e < c.edge_count(); ++e) {
        if (!c.is_coloured(e)) continue;
        edges[std::to_string(e)] = c.colour(e);
        if (with_stages) stages[std::to_string(e)] = to_string(c.tag(e));
    }
    json j;
    j["edges"] = std::move(edges);
    if (with_stages) j["stages"] = std::move(stages);
    return j;
}

inline StageTag stage_tag_from_string(const std::string& s) {
    if (s == "InitialProper") return StageTag::InitialProper;
    if (s == "Reserved") return StageTag::Reserved;
    if (s == "GreedyFinish") return StageTag::GreedyFinish;
    if (s == "SmallDeltaGreedy") return StageTag::SmallDeltaGreedy;
    if (s == "LowDegreeFinish") return StageTag::LowDegreeFinish;
    throw InvalidInput("unknown stage tag: " + s);
}

inline PartialColouring colouring_from_json(const json& j, int edge_count) {
    if (!j.is_object() || !j.contains("edges")) {
        throw InvalidInput("colouring json: expected object with 'edges'");
    }
    PartialColouring c(edge_count);
    for (const auto& [key, val] : j.at("edges").items()) {
        const int e = parse_id_key(key, "colouring");
        if (e >= edge_count) throw InvalidInput("colouring json: edge id out of range");
        c.set(e, val.get<colour_t>(), StageTag::InitialProper);
    }
    if (j.contains("stages")) {
        for (const auto& [key, val] : j.at("stages").items()) {
            const int e = parse_id_key(key, "colouring stages");
            if (e >= edge_count) throw InvalidInput("colouring json: stage edge id out of range");
            if (c.is_coloured(e)) c.set(e, c.colour(e), stage_tag_from_string(val.get<std::string>()));
        }
    }
    return c;
}

inline json report_to_json(const VerifyReport& rep) {
    json j;
    j["proper_violations"] = json::array();
    for (const auto& [a, b] : rep.proper_violations) j["proper_violations"].push_back({a, b});
    j["avd_violations"] = json::array();
    for (const auto& [a, b] : rep.avd_violations) j["avd_violations"].push_back({a, b});
    j["list_violations"] = rep.list_violations;
    j["uncoloured"] = rep.uncoloured;
    j["empty"] = rep.empty();
    return j;
}

// ---------------------------------------------------------------------------
// Canonical dump, file helpers, hashing.
// ---------------------------------------------------------------------------

inline std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write file: " + path);
    out << content;
}

inline json parse_json(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw InvalidInput(std::string(what) + ": malformed JSON");
    return j;
}

/// Sniffs JSON vs text graph format by the first non-space byte.
inline Instance load_instance(const std::string& path) {
    const std::string text = read_file(path);
    for (char ch : text) {
        if (ch == ' ' || ch == '\n' || ch == '\r' || ch == '\t') continue;
        if (ch == '{') return instance_from_json(parse_json(text, "instance"));
        break;
    }
    Instance inst;
    inst.graph = parse_graph_text(text);
    inst.lists = ListAssignment(inst.graph.edge_count());
    return inst;
}

inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char byte : data) {
        h ^= byte;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hash_hex(const std::string& data) {
    static const char* digits = "0123456789abcdef";
    std::uint64_t h = fnv1a64(data);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

inline std::string instance_hash(const Instance& inst) {
    return hash_hex(canonical_dump(instance_to_json(inst)));
}

} // namespace avd
