#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "avd/errors.hpp"

namespace avd {

struct EdgeRecord {
    int id = 0;
    int u = 0;
    int v = 0;
};

/// Undirected multigraph with edge multiplicity at most 2 and no self-loops.
/// Parallel edges are distinct records with distinct ids; the degree of a
/// vertex counts every incident record.
class MultiGraph {
public:
    MultiGraph() = default;

    explicit MultiGraph(int vertex_count) {
        if (vertex_count < 0) throw InvalidInput("vertex count must be non-negative");
        incident_.resize(static_cast<std::size_t>(vertex_count));
    }

    static MultiGraph from_edges(int vertex_count, const std::vector<std::pair<int, int>>& edges) {
        MultiGraph g(vertex_count);
        for (const auto& [u, v] : edges) g.add_edge(u, v);
        return g;
    }

    /// Appends an edge record and returns its id.
    int add_edge(int u, int v) {
        check_vertex(u);
        check_vertex(v);
        if (u == v) throw InvalidInput("self-loop rejected: vertex " + std::to_string(u));
        if (multiplicity(u, v) >= 2) {
            throw InvalidInput("edge multiplicity above 2 rejected: " + std::to_string(u) + "-" +
                               std::to_string(v));
        }
        const int id = static_cast<int>(edges_.size());
        edges_.push_back({id, u, v});
        incident_[static_cast<std::size_t>(u)].push_back(id);
        incident_[static_cast<std::size_t>(v)].push_back(id);
        return id;
    }

    int vertex_count() const { return static_cast<int>(incident_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    const EdgeRecord& edge(int e) const {
        check_edge(e);
        return edges_[static_cast<std::size_t>(e)];
    }

    const std::vector<EdgeRecord>& edges() const { return edges_; }

    /// Edge ids incident to v, in insertion order.
    const std::vector<int>& incident_edges(int v) const {
        check_vertex(v);
        return incident_[static_cast<std::size_t>(v)];
    }

    int degree(int v) const { return static_cast<int>(incident_edges(v).size()); }

    int other_end(int e, int v) const {
        const auto& rec = edge(e);
        if (rec.u == v) return rec.v;
        if (rec.v == v) return rec.u;
        throw InvalidInput("edge " + std::to_string(e) + " not incident to vertex " + std::to_string(v));
    }

    int multiplicity(int u, int v) const {
        check_vertex(u);
        check_vertex(v);
        const auto& at_u = incident_[static_cast<std::size_t>(u)];
        int count = 0;
        for (int e : at_u) {
            const auto& rec = edges_[static_cast<std::size_t>(e)];
            if ((rec.u == u && rec.v == v) || (rec.u == v && rec.v == u)) ++count;
        }
        return count;
    }

    /// Distinct adjacent vertices, sorted ascending.
    std::vector<int> neighbours(int v) const {
        std::vector<int> out;
        for (int e : incident_edges(v)) out.push_back(other_end(e, v));
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    int max_degree() const {
        int d = 0;
        for (int v = 0; v < vertex_count(); ++v) d = std::max(d, degree(v));
        return d;
    }

    /// Minimum degree over non-isolated vertices; 0 when there are no edges.
    int min_degree_nonisolated() const {
        int d = -1;
        for (int v = 0; v < vertex_count(); ++v) {
            const int dv = degree(v);
            if (dv == 0) continue;
            if (d < 0 || dv < d) d = dv;
        }
        return d < 0 ? 0 : d;
    }

    bool is_simple() const {
        for (const auto& rec : edges_) {
            if (multiplicity(rec.u, rec.v) > 1) return false;
        }
        return true;
    }

    /// True if some component consists of exactly two vertices joined by
    /// one or two edges. Palettes of such a pair can never differ.
    bool has_isolated_edge() const {
        for (const auto& rec : edges_) {
            if (component_is_pair(rec.u, rec.v)) return true;
        }
        return false;
    }

    /// Component id per vertex (isolated vertices get their own component).
    std::vector<int> component_ids() const {
        std::vector<int> comp(static_cast<std::size_t>(vertex_count()), -1);
        int next = 0;
        std::vector<int> stack;
        for (int s = 0; s < vertex_count(); ++s) {
            if (comp[static_cast<std::size_t>(s)] >= 0) continue;
            comp[static_cast<std::size_t>(s)] = next;
            stack.assign(1, s);
            while (!stack.empty()) {
                const int v = stack.back();
                stack.pop_back();
                for (int e : incident_edges(v)) {
                    const int w = other_end(e, v);
                    if (comp[static_cast<std::size_t>(w)] < 0) {
                        comp[static_cast<std::size_t>(w)] = next;
                        stack.push_back(w);
                    }
                }
            }
            ++next;
        }
        return comp;
    }

    bool is_connected_ignoring_isolated() const {
        const auto comp = component_ids();
        int with_edges = -1;
        for (int v = 0; v < vertex_count(); ++v) {
            if (degree(v) == 0) continue;
            if (with_edges < 0) with_edges = comp[static_cast<std::size_t>(v)];
            else if (comp[static_cast<std::size_t>(v)] != with_edges) return false;
        }
        return true;
    }

    void check_vertex(int v) const {
        if (v < 0 || v >= vertex_count()) {
            throw InvalidInput("vertex id out of range: " + std::to_string(v));
        }
    }

    void check_edge(int e) const {
        if (e < 0 || e >= edge_count()) {
            throw InvalidInput("edge id out of range: " + std::to_string(e));
        }
    }

private:
    bool component_is_pair(int u, int v) const {
        for (int e : incident_edges(u)) {
            if (other_end(e, u) != v) return false;
        }
        for (int e : incident_edges(v)) {
            if (other_end(e, v) != u) return false;
        }
        return true;
    }

    std::vector<EdgeRecord> edges_;
    std::vector<std::vector<int>> incident_;
};

/// Throws IsolatedEdgeError when g has a two-vertex component with an edge.
inline void require_no_isolated_edges(const MultiGraph& g) {
    if (g.has_isolated_edge()) {
        throw IsolatedEdgeError("graph has an isolated edge (two-vertex component)");
    }
}

} // namespace avd
