#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "avd/colouring.hpp"
#include "avd/errors.hpp"
#include "avd/list_assignment.hpp"
#include "avd/multigraph.hpp"

namespace avd {

/// Doubling budget exhausted in boost_min_degree.
class DoublingBudgetExceeded : public Error {
public:
    using Error::Error;
};

inline bool low_degree(int degree, int delta) { return 4 * degree < delta; }

struct Contraction {
    int kept = 0;
    int absorbed = 0;
    int edge_id = 0; // in the input graph
};

struct DoublingStep {
    int pre_vertex_count = 0;
    int pre_edge_count = 0;
    std::vector<int> matched_vertices; // ascending, pre-step ids
};

/// Invertible record of the two reduction phases. Replaying the log on the
/// input graph reproduces the reduced graph exactly; edge ids of the
/// contracted graph survive as the prefix of every later doubling step, so
/// restricting a colouring to the first copy is a prefix read.
struct ReductionLog {
    int original_vertex_count = 0;
    int original_edge_count = 0;
    std::vector<Contraction> contractions;
    std::vector<int> edge_map; // contracted edge id -> original edge id
    std::vector<DoublingStep> doublings;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["original_vertex_count"] = original_vertex_count;
        j["original_edge_count"] = original_edge_count;
        j["contractions"] = nlohmann::json::array();
        for (const auto& c : contractions) {
            j["contractions"].push_back({{"kept", c.kept}, {"absorbed", c.absorbed}, {"edge", c.edge_id}});
        }
        j["edge_map"] = edge_map;
        j["doublings"] = nlohmann::json::array();
        for (const auto& d : doublings) {
            j["doublings"].push_back({{"pre_vertex_count", d.pre_vertex_count},
                                      {"pre_edge_count", d.pre_edge_count},
                                      {"matched_vertices", d.matched_vertices}});
        }
        return j;
    }
};

namespace detail {

inline ReductionLog identity_log(const MultiGraph& g) {
    ReductionLog log;
    log.original_vertex_count = g.vertex_count();
    log.original_edge_count = g.edge_count();
    log.edge_map.resize(static_cast<std::size_t>(g.edge_count()));
    for (int e = 0; e < g.edge_count(); ++e) log.edge_map[static_cast<std::size_t>(e)] = e;
    return log;
}

} // namespace detail

/// Contracts every edge uv whose endpoints are each other's unique
/// low-degree neighbour (degree < delta/4, measured in the input graph).
/// These pairs are exactly the future single-edge components of the
/// low-degree subgraph; merging them makes the endpoints' palettes disjoint
/// once the contraction is undone. Absorbed vertices stay behind as
/// isolated vertices so that vertex ids are stable.
inline std::pair<MultiGraph, ReductionLog> contract_low_degree_edges(const MultiGraph& g, int delta) {
    if (!g.is_simple()) throw InvalidInput("contract_low_degree_edges: input must be simple");
    require_no_isolated_edges(g);

    const int n = g.vertex_count();
    std::vector<char> low(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v) {
        low[static_cast<std::size_t>(v)] = g.degree(v) > 0 && low_degree(g.degree(v), delta);
    }
    auto unique_low_neighbour = [&](int v) -> int {
        int found = -1;
        for (int w : g.neighbours(v)) {
            if (!low[static_cast<std::size_t>(w)]) continue;
            if (found >= 0) return -1;
            found = w;
        }
        return found;
    };

    ReductionLog log;
    log.original_vertex_count = n;
    log.original_edge_count = g.edge_count();

    std::vector<int> merged_into(static_cast<std::size_t>(n), -1);
    std::vector<char> drop_edge(static_cast<std::size_t>(g.edge_count()), 0);
    for (int u = 0; u < n; ++u) {
        if (!low[static_cast<std::size_t>(u)] || merged_into[static_cast<std::size_t>(u)] >= 0) continue;
        const int v = unique_low_neighbour(u);
        if (v < 0 || v < u || merged_into[static_cast<std::size_t>(v)] >= 0) continue;
        if (unique_low_neighbour(v) != u) continue;
        // higher-degree endpoint keeps its identity; ties break to lower id
        int kept = v, absorbed = u;
        if (g.degree(u) > g.degree(v)) {
            kept = u;
            absorbed = v;
        } else if (g.degree(u) == g.degree(v)) {
            kept = std::min(u, v);
            absorbed = std::max(u, v);
        }
        int edge_id = -1;
        for (int e : g.incident_edges(u)) {
            if (g.other_end(e, u) == v) {
                edge_id = e;
                break;
            }
        }
        merged_into[static_cast<std::size_t>(absorbed)] = kept;
        drop_edge[static_cast<std::size_t>(edge_id)] = 1;
        log.contractions.push_back({kept, absorbed, edge_id});
    }

    MultiGraph out(n);
    for (const auto& rec : g.edges()) {
        if (drop_edge[static_cast<std::size_t>(rec.id)]) continue;
        int u = rec.u, v = rec.v;
        if (merged_into[static_cast<std::size_t>(u)] >= 0) u = merged_into[static_cast<std::size_t>(u)];
        if (merged_into[static_cast<std::size_t>(v)] >= 0) v = merged_into[static_cast<std::size_t>(v)];
        out.add_edge(u, v);
        log.edge_map.push_back(rec.id);
    }
    return {std::move(out), std::move(log)};
}

/// Repeatedly doubles the graph, joining every still-low vertex to its twin,
/// until the minimum non-isolated degree reaches delta/4. Each step the
/// first copy keeps its vertex and edge ids as a prefix.
inline std::pair<MultiGraph, ReductionLog> boost_min_degree(const MultiGraph& g, int delta,
                                                            int max_doublings) {
    ReductionLog log = detail::identity_log(g);
    MultiGraph cur = g;
    int steps = 0;
    for (;;) {
        std::vector<int> lows;
        for (int v = 0; v < cur.vertex_count(); ++v) {
            const int d = cur.degree(v);
            if (d > 0 && low_degree(d, delta)) lows.push_back(v);
        }
        if (lows.empty()) break;
        if (steps == max_doublings) {
            throw DoublingBudgetExceeded("doubling budget " + std::to_string(max_doublings) +
                                         " exhausted; minimum degree still below " +
                                         std::to_string(delta) + "/4");
        }
        const int pre_n = cur.vertex_count();
        const int pre_m = cur.edge_count();
        MultiGraph next(2 * pre_n);
        for (const auto& rec : cur.edges()) next.add_edge(rec.u, rec.v);
        for (const auto& rec : cur.edges()) next.add_edge(rec.u + pre_n, rec.v + pre_n);
        for (int v : lows) next.add_edge(v, v + pre_n);
        log.doublings.push_back({pre_n, pre_m, lows});
        cur = std::move(next);
        ++steps;
    }
    return {std::move(cur), std::move(log)};
}

/// Composes the contraction log with a doubling log produced from the
/// contracted graph.
inline ReductionLog compose_logs(const ReductionLog& contract, const ReductionLog& boost) {
    if (boost.original_edge_count != static_cast<int>(contract.edge_map.size()) ||
        boost.original_vertex_count != contract.original_vertex_count) {
        throw LogMismatch("compose_logs: boost log does not continue the contraction log");
    }
    ReductionLog out = contract;
    out.doublings = boost.doublings;
    return out;
}

/// Restricts a colouring of the reduced graph to the first copy, undoes the
/// contractions and uncolours every edge of the original graph with both
/// endpoints of degree < delta/4. Vertices of degree >= delta/4 come out
/// fully coloured and set-distinguished from all their neighbours.
inline PartialColouring lift_and_strip(const MultiGraph& g_original,
                                       const PartialColouring& c_on_reduced,
                                       const ReductionLog& log, int delta) {
    if (log.original_vertex_count != g_original.vertex_count() ||
        log.original_edge_count != g_original.edge_count()) {
        throw LogMismatch("lift_and_strip: log does not match the input graph");
    }
    const int m_contracted = static_cast<int>(log.edge_map.size());
    if (c_on_reduced.edge_count() < m_contracted) {
        throw LogMismatch("lift_and_strip: reduced colouring smaller than the contracted graph");
    }
    PartialColouring out(g_original.edge_count());
    for (int i = 0; i < m_contracted; ++i) {
        if (!c_on_reduced.is_coloured(i)) continue;
        const int orig = log.edge_map[static_cast<std::size_t>(i)];
        g_original.check_edge(orig);
        out.set(orig, c_on_reduced.colour(i), c_on_reduced.tag(i));
    }
    for (const auto& rec : g_original.edges()) {
        if (low_degree(g_original.degree(rec.u), delta) && low_degree(g_original.degree(rec.v), delta)) {
            out.unset(rec.id);
        }
    }
    return out;
}

namespace detail {

/// Greedy colour choice for edge e=(u,v): proper against coloured adjacent
/// edges, and the grown palette of each endpoint must stay different from
/// every neighbour's current palette (the other endpoint excepted). Returns
/// the first admissible colour of the list, or nullopt.
inline std::optional<colour_t> greedy_admissible_colour(const MultiGraph& g,
                                                        const PartialColouring& c, int e,
                                                        const colour_set& list) {
    const auto& rec = g.edge(e);
    colour_set banned;
    for (int end : {rec.u, rec.v}) {
        for (int f : g.incident_edges(end)) {
            if (f != e && c.is_coloured(f)) banned.push_back(c.colour(f));
        }
    }
    banned = make_colour_set(std::move(banned));

    // a neighbour w of u bans colour x when palette(u) + x == palette(w)
    auto collect_palette_bans = [&](int endpoint, int excepted, colour_set* out) {
        const colour_set mine = palette(g, c, endpoint);
        for (int w : g.neighbours(endpoint)) {
            if (w == excepted) continue;
            const colour_set theirs = palette(g, c, w);
            if (theirs.size() != mine.size() + 1) continue;
            colour_set extra = set_difference(theirs, mine);
            if (extra.size() == 1) out->push_back(extra.front());
        }
    };
    colour_set palette_bans;
    collect_palette_bans(rec.u, rec.v, &palette_bans);
    collect_palette_bans(rec.v, rec.u, &palette_bans);
    palette_bans = make_colour_set(std::move(palette_bans));

    for (colour_t x : list) {
        if (set_contains(banned, x)) continue;
        if (set_contains(palette_bans, x)) continue;
        return x;
    }
    return std::nullopt;
}

/// Edges of the component containing root, in BFS discovery order,
/// restricted to edges passing the filter.
template <typename EdgeFilter>
std::vector<int> bfs_edge_order(const MultiGraph& g, int root, std::vector<char>& seen_vertex,
                                std::vector<char>& seen_edge, EdgeFilter&& take_edge) {
    std::vector<int> order;
    std::deque<int> queue;
    queue.push_back(root);
    seen_vertex[static_cast<std::size_t>(root)] = 1;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        std::vector<int> inc = g.incident_edges(v);
        std::sort(inc.begin(), inc.end());
        for (int e : inc) {
            if (!take_edge(e)) continue;
            if (!seen_edge[static_cast<std::size_t>(e)]) {
                seen_edge[static_cast<std::size_t>(e)] = 1;
                order.push_back(e);
            }
            const int w = g.other_end(e, v);
            if (!seen_vertex[static_cast<std::size_t>(w)]) {
                seen_vertex[static_cast<std::size_t>(w)] = 1;
                queue.push_back(w);
            }
        }
    }
    return order;
}

} // namespace detail

/// Greedy adjacent-vertex-distinguishing colouring of the whole graph,
/// component by component in BFS edge order. Guaranteed when every list is
/// longer than 4(Delta-1).
inline PartialColouring greedy_small_delta(const MultiGraph& g, const ListAssignment& lists) {
    require_no_isolated_edges(g);
    const int delta = g.max_degree();
    if (g.edge_count() > 0 && delta < 2) throw InvalidInput("greedy_small_delta: max degree below 2");
    if (lists.edge_count() != g.edge_count()) throw InvalidInput("greedy_small_delta: list count mismatch");
    if (g.edge_count() > 0 && lists.min_size() <= 4 * (delta - 1)) {
        throw ListTooShort("greedy_small_delta needs list sizes above 4(Delta-1) = " +
                           std::to_string(4 * (delta - 1)) + ", got " + std::to_string(lists.min_size()));
    }
    PartialColouring c(g.edge_count());
    std::vector<char> seen_vertex(static_cast<std::size_t>(g.vertex_count()), 0);
    std::vector<char> seen_edge(static_cast<std::size_t>(g.edge_count()), 0);
    for (int root = 0; root < g.vertex_count(); ++root) {
        if (seen_vertex[static_cast<std::size_t>(root)] || g.degree(root) == 0) continue;
        const auto order =
            detail::bfs_edge_order(g, root, seen_vertex, seen_edge, [](int) { return true; });
        for (int e : order) {
            const auto pick = detail::greedy_admissible_colour(g, c, e, lists.list(e));
            if (!pick) {
                throw ListTooShort("greedy_small_delta: no admissible colour for edge " +
                                   std::to_string(e));
            }
            c.set(e, *pick, StageTag::SmallDeltaGreedy);
        }
    }
    return c;
}

/// Completes a lifted colouring on the edges with both endpoints of degree
/// < delta/4 (the graph H of the reduction), greedily per component of H in
/// BFS order. Needs the lists of those edges to be longer than 4(Delta-1).
inline PartialColouring finish_low_degree(const MultiGraph& g, const ListAssignment& lists,
                                          const PartialColouring& c_in, int delta) {
    if (lists.edge_count() != g.edge_count() || c_in.edge_count() != g.edge_count()) {
        throw InvalidInput("finish_low_degree: size mismatch");
    }
    std::vector<int> h_edges;
    for (int e = 0; e < g.edge_count(); ++e) {
        if (c_in.is_coloured(e)) continue;
        const auto& rec = g.edge(e);
        if (!low_degree(g.degree(rec.u), delta) || !low_degree(g.degree(rec.v), delta)) {
            throw InvalidInput("finish_low_degree: uncoloured edge " + std::to_string(e) +
                               " has a high-degree endpoint");
        }
        h_edges.push_back(e);
        if (static_cast<int>(lists.list(e).size()) <= 4 * (delta - 1)) {
            throw ListTooShort("finish_low_degree needs list sizes above 4(Delta-1) = " +
                               std::to_string(4 * (delta - 1)) + " on the low-degree edges");
        }
    }
    PartialColouring c = c_in;
    if (h_edges.empty()) return c;

    std::vector<char> in_h(static_cast<std::size_t>(g.edge_count()), 0);
    for (int e : h_edges) in_h[static_cast<std::size_t>(e)] = 1;
    std::vector<char> seen_vertex(static_cast<std::size_t>(g.vertex_count()), 0);
    std::vector<char> seen_edge(static_cast<std::size_t>(g.edge_count()), 0);
    for (int e : h_edges) {
        const int root = std::min(g.edge(e).u, g.edge(e).v);
        if (seen_vertex[static_cast<std::size_t>(root)]) continue;
        const auto order = detail::bfs_edge_order(
            g, root, seen_vertex, seen_edge,
            [&](int f) { return in_h[static_cast<std::size_t>(f)] != 0; });
        for (int f : order) {
            const auto pick = detail::greedy_admissible_colour(g, c, f, lists.list(f));
            if (!pick) {
                throw ListTooShort("finish_low_degree: no admissible colour for edge " +
                                   std::to_string(f));
            }
            c.set(f, *pick, StageTag::LowDegreeFinish);
        }
    }
    return c;
}

/// Reconstructs the reduced graph by replaying a log (test aid).
inline MultiGraph replay_log(const MultiGraph& g_original, const ReductionLog& log) {
    if (log.original_vertex_count != g_original.vertex_count() ||
        log.original_edge_count != g_original.edge_count()) {
        throw LogMismatch("replay_log: log does not match the input graph");
    }
    std::vector<int> merged_into(static_cast<std::size_t>(g_original.vertex_count()), -1);
    std::vector<char> drop(static_cast<std::size_t>(g_original.edge_count()), 0);
    for (const auto& c : log.contractions) {
        merged_into[static_cast<std::size_t>(c.absorbed)] = c.kept;
        drop[static_cast<std::size_t>(c.edge_id)] = 1;
    }
    MultiGraph cur(g_original.vertex_count());
    for (const auto& rec : g_original.edges()) {
        if (drop[static_cast<std::size_t>(rec.id)]) continue;
        int u = rec.u, v = rec.v;
        if (merged_into[static_cast<std::size_t>(u)] >= 0) u = merged_into[static_cast<std::size_t>(u)];
        if (merged_into[static_cast<std::size_t>(v)] >= 0) v = merged_into[static_cast<std::size_t>(v)];
        cur.add_edge(u, v);
    }
    for (const auto& step : log.doublings) {
        if (step.pre_vertex_count != cur.vertex_count() || step.pre_edge_count != cur.edge_count()) {
            throw LogMismatch("replay_log: doubling step does not match");
        }
        MultiGraph next(2 * step.pre_vertex_count);
        for (const auto& rec : cur.edges()) next.add_edge(rec.u, rec.v);
        for (const auto& rec : cur.edges()) {
            next.add_edge(rec.u + step.pre_vertex_count, rec.v + step.pre_vertex_count);
        }
        for (int v : step.matched_vertices) next.add_edge(v, v + step.pre_vertex_count);
        cur = std::move(next);
    }
    return cur;
}

} // namespace avd
