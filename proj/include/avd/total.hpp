#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "avd/colouring.hpp"
#include "avd/errors.hpp"
#include "avd/list_assignment.hpp"
#include "avd/multigraph.hpp"
#include "avd/pipeline.hpp"
#include "avd/profile.hpp"
#include "avd/reduction.hpp"

namespace avd {

struct TotalLists {
    std::vector<colour_set> vertex_lists;
    ListAssignment edge_lists;
};

struct TotalColouring {
    std::vector<colour_t> vertex_colours;
    PartialColouring edge_colours;

    nlohmann::json to_json() const {
        nlohmann::json vertices = nlohmann::json::object();
        for (int v = 0; v < static_cast<int>(vertex_colours.size()); ++v) {
            vertices[std::to_string(v)] = vertex_colours[static_cast<std::size_t>(v)];
        }
        nlohmann::json j;
        j["vertices"] = std::move(vertices);
        j["edges"] = colouring_to_json(edge_colours).at("edges");
        return j;
    }
};

/// Total palette S'_c(v) = {c(v)} union {c(e) : e in E(v)}.
inline colour_set total_palette(const MultiGraph& g, const TotalColouring& tc, int v) {
    colour_set out = palette(g, tc.edge_colours, v);
    out.push_back(tc.vertex_colours[static_cast<std::size_t>(v)]);
    return make_colour_set(std::move(out));
}

struct TotalVerifyReport {
    std::vector<std::pair<int, int>> vertex_violations;      // adjacent vertices, same colour
    std::vector<std::pair<int, int>> edge_violations;        // adjacent edges, same colour
    std::vector<std::pair<int, int>> vertex_edge_violations; // (vertex, incident edge), same colour
    std::vector<int> vertex_list_violations;
    std::vector<int> edge_list_violations;
    std::vector<std::pair<int, int>> palette_violations;     // adjacent vertices, equal total palettes
    std::vector<int> uncoloured_edges;

    bool empty() const {
        return vertex_violations.empty() && edge_violations.empty() &&
               vertex_edge_violations.empty() && vertex_list_violations.empty() &&
               edge_list_violations.empty() && palette_violations.empty() &&
               uncoloured_edges.empty();
    }

    nlohmann::json to_json() const {
        auto pairs = [](const std::vector<std::pair<int, int>>& v) {
            nlohmann::json a = nlohmann::json::array();
            for (const auto& [x, y] : v) a.push_back({x, y});
            return a;
        };
        nlohmann::json j;
        j["vertex_violations"] = pairs(vertex_violations);
        j["edge_violations"] = pairs(edge_violations);
        j["vertex_edge_violations"] = pairs(vertex_edge_violations);
        j["vertex_list_violations"] = vertex_list_violations;
        j["edge_list_violations"] = edge_list_violations;
        j["palette_violations"] = pairs(palette_violations);
        j["uncoloured_edges"] = uncoloured_edges;
        j["empty"] = empty();
        return j;
    }
};

/// Audits a total colouring: proper as a total colouring, on-list, and
/// adjacent total palettes distinct.
inline TotalVerifyReport verify_total(const MultiGraph& g, const TotalLists& lists,
                                      const TotalColouring& tc) {
    TotalVerifyReport rep;
    const int n = g.vertex_count();
    if (static_cast<int>(tc.vertex_colours.size()) != n ||
        static_cast<int>(lists.vertex_lists.size()) != n ||
        lists.edge_lists.edge_count() != g.edge_count() ||
        tc.edge_colours.edge_count() != g.edge_count()) {
        throw InvalidInput("verify_total: size mismatch");
    }
    for (int e = 0; e < g.edge_count(); ++e) {
        if (!tc.edge_colours.is_coloured(e)) {
            rep.uncoloured_edges.push_back(e);
        } else if (!lists.edge_lists.contains(e, tc.edge_colours.colour(e))) {
            rep.edge_list_violations.push_back(e);
        }
    }
    for (int v = 0; v < n; ++v) {
        if (!set_contains(lists.vertex_lists[static_cast<std::size_t>(v)],
                          tc.vertex_colours[static_cast<std::size_t>(v)])) {
            rep.vertex_list_violations.push_back(v);
        }
    }
    const VerifyReport edge_rep = verify(g, lists.edge_lists, tc.edge_colours);
    rep.edge_violations = edge_rep.proper_violations;

    std::vector<std::pair<int, int>> vv;
    for (const auto& rec : g.edges()) {
        const int u = std::min(rec.u, rec.v), v = std::max(rec.u, rec.v);
        if (tc.vertex_colours[static_cast<std::size_t>(u)] ==
            tc.vertex_colours[static_cast<std::size_t>(v)]) {
            vv.emplace_back(u, v);
        }
    }
    std::sort(vv.begin(), vv.end());
    vv.erase(std::unique(vv.begin(), vv.end()), vv.end());
    rep.vertex_violations = std::move(vv);

    for (int v = 0; v < n; ++v) {
        for (int e : g.incident_edges(v)) {
            if (tc.edge_colours.is_coloured(e) &&
                tc.edge_colours.colour(e) == tc.vertex_colours[static_cast<std::size_t>(v)]) {
                rep.vertex_edge_violations.emplace_back(v, e);
            }
        }
    }
    std::sort(rep.vertex_edge_violations.begin(), rep.vertex_edge_violations.end());

    std::vector<colour_set> pals(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) pals[static_cast<std::size_t>(v)] = total_palette(g, tc, v);
    std::vector<std::pair<int, int>> pv;
    for (const auto& rec : g.edges()) {
        const int u = std::min(rec.u, rec.v), v = std::max(rec.u, rec.v);
        if (pals[static_cast<std::size_t>(u)] == pals[static_cast<std::size_t>(v)]) pv.emplace_back(u, v);
    }
    std::sort(pv.begin(), pv.end());
    pv.erase(std::unique(pv.begin(), pv.end()), pv.end());
    rep.palette_violations = std::move(pv);
    return rep;
}

/// First-fit proper vertex colouring from the vertex lists, ascending ids.
inline std::vector<colour_t> greedy_vertex_colouring(const MultiGraph& g,
                                                     const std::vector<colour_set>& vertex_lists) {
    const int n = g.vertex_count();
    if (static_cast<int>(vertex_lists.size()) != n) {
        throw InvalidInput("greedy_vertex_colouring: list count mismatch");
    }
    std::vector<colour_t> colours(static_cast<std::size_t>(n), -1);
    for (int v = 0; v < n; ++v) {
        colour_set banned;
        for (int w : g.neighbours(v)) {
            if (colours[static_cast<std::size_t>(w)] >= 0) {
                banned.push_back(colours[static_cast<std::size_t>(w)]);
            }
        }
        banned = make_colour_set(std::move(banned));
        const colour_set avail = set_difference(vertex_lists[static_cast<std::size_t>(v)], banned);
        if (avail.empty()) {
            throw ListTooShort("vertex list of " + std::to_string(v) +
                               " too short for the greedy vertex colouring");
        }
        colours[static_cast<std::size_t>(v)] = avail.front();
    }
    return colours;
}

namespace detail {

/// Recolours `targets` (ascending) so that the total colouring stays proper
/// and each target's total palette differs from all of its neighbours'.
inline void recolour_vertices(const MultiGraph& g, const std::vector<colour_set>& vertex_lists,
                              const std::vector<int>& targets, TotalColouring* tc) {
    for (int v : targets) {
        const colour_set edge_pal = palette(g, tc->edge_colours, v);
        colour_set banned = edge_pal; // total properness against incident edges
        colour_set palette_bans;
        for (int w : g.neighbours(v)) {
            banned.push_back(tc->vertex_colours[static_cast<std::size_t>(w)]);
            const colour_set theirs = total_palette(g, *tc, w);
            // S'(v) will be edge_pal + x; only one x can make the sets equal
            if (theirs.size() != edge_pal.size() + 1) continue;
            const colour_set extra = set_difference(theirs, edge_pal);
            if (extra.size() == 1) palette_bans.push_back(extra.front());
        }
        banned = make_colour_set(std::move(banned));
        palette_bans = make_colour_set(std::move(palette_bans));
        std::optional<colour_t> pick;
        for (colour_t x : vertex_lists[static_cast<std::size_t>(v)]) {
            if (set_contains(banned, x) || set_contains(palette_bans, x)) continue;
            pick = x;
            break;
        }
        if (!pick) {
            throw ListTooShort("vertex list of " + std::to_string(v) +
                               " too short to repair total distinctness");
        }
        tc->vertex_colours[static_cast<std::size_t>(v)] = *pick;
    }
}

/// Proper edge colouring for the small-degree total route: prefers the
/// palette-distinguishing greedy choice, falls back to any proper colour.
inline PartialColouring small_total_edge_colouring(const MultiGraph& g, const ListAssignment& lists) {
    PartialColouring c(g.edge_count());
    std::vector<char> seen_vertex(static_cast<std::size_t>(g.vertex_count()), 0);
    std::vector<char> seen_edge(static_cast<std::size_t>(g.edge_count()), 0);
    for (int root = 0; root < g.vertex_count(); ++root) {
        if (seen_vertex[static_cast<std::size_t>(root)] || g.degree(root) == 0) continue;
        const auto order = bfs_edge_order(g, root, seen_vertex, seen_edge, [](int) { return true; });
        for (int e : order) {
            auto pick = greedy_admissible_colour(g, c, e, lists.list(e));
            if (!pick) {
                const auto& rec = g.edge(e);
                colour_set banned;
                for (int end : {rec.u, rec.v}) {
                    for (int f : g.incident_edges(end)) {
                        if (f != e && c.is_coloured(f)) banned.push_back(c.colour(f));
                    }
                }
                banned = make_colour_set(std::move(banned));
                const colour_set avail = set_difference(lists.list(e), banned);
                if (avail.empty()) {
                    throw ListTooShort("total colouring: edge list of " + std::to_string(e) +
                                       " too short for a proper colouring");
                }
                pick = avail.front();
            }
            c.set(e, *pick, StageTag::SmallDeltaGreedy);
        }
    }
    return c;
}

} // namespace detail

/// Corollary construction: auxiliary proper vertex colouring, edge lists
/// trimmed by both endpoint colours, min-degree boost, pipeline edge
/// colouring with final margin >= 4 on the boosted graph, restriction to
/// the input graph, then greedy vertex recolouring of the low-degree
/// vertices. Graphs whose boosted core cannot support the margin (max
/// degree below 9) instead take a greedy edge colouring and recolour every
/// vertex, which enforces total distinctness directly.
inline TotalColouring avd_list_total_colour(const MultiGraph& g, const TotalLists& lists,
                                            const ThresholdProfile& prof, std::uint64_t seed,
                                            const PipelineOptions& options = {},
                                            RunStats* stats = nullptr) {
    if (!g.is_simple()) throw InvalidInput("avd_list_total_colour: input must be simple");
    const int n = g.vertex_count();
    if (static_cast<int>(lists.vertex_lists.size()) != n ||
        lists.edge_lists.edge_count() != g.edge_count()) {
        throw InvalidInput("avd_list_total_colour: list sizes do not match the graph");
    }
    const int delta = g.max_degree();
    for (int v = 0; v < n; ++v) {
        if (static_cast<int>(lists.vertex_lists[static_cast<std::size_t>(v)].size()) <= delta) {
            throw ListTooShort("vertex list of " + std::to_string(v) +
                               " at or below the greedy requirement Delta=" + std::to_string(delta));
        }
    }

    TotalColouring tc;
    tc.vertex_colours = greedy_vertex_colouring(g, lists.vertex_lists);
    tc.edge_colours = PartialColouring(g.edge_count());
    if (g.edge_count() == 0) return tc;

    // trim each edge list by its endpoints' auxiliary colours, then pad the
    // trim down to a uniform size for the pipeline's equal-size requirement
    const auto esize = lists.edge_lists.uniform_size();
    if (!esize) throw InvalidInput("avd_list_total_colour: edge lists must be equal-sized");
    const int trimmed_size = *esize - 2;
    if (trimmed_size < 1) throw ListTooShort("edge lists too short to trim endpoint colours");
    ListAssignment trimmed(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) {
        const auto& rec = g.edge(e);
        colour_set l = set_difference(
            lists.edge_lists.list(e),
            make_colour_set({tc.vertex_colours[static_cast<std::size_t>(rec.u)],
                             tc.vertex_colours[static_cast<std::size_t>(rec.v)]}));
        while (static_cast<int>(l.size()) > trimmed_size) l.pop_back();
        trimmed.set_list(e, std::move(l));
    }

    const int core_floor = (delta + 3) / 4;
    if (delta >= 9 && core_floor >= 3) {
        // corollary route: margin >= 4 is attainable on the boosted core
        auto [core, log] = boost_min_degree(g, delta, options.max_doublings);
        const int core_min = core.min_degree_nonisolated();
        const ThresholdProfile total_prof = prof.adjusted_for_total(core_min);
        total_prof.validate();

        ListAssignment core_lists(core.edge_count());
        for (int e = 0; e < g.edge_count(); ++e) core_lists.set_list(e, trimmed.list(e));
        if (core.edge_count() > g.edge_count()) {
            Rng list_rng(Rng::derive(seed, 0x70741));
            const colour_set universe = trimmed.universe();
            for (int e = g.edge_count(); e < core.edge_count(); ++e) {
                colour_set fresh = options.list_factory
                                       ? options.list_factory(e, trimmed_size, list_rng)
                                       : detail::default_new_list(universe, trimmed_size, list_rng);
                core_lists.set_list(e, std::move(fresh));
            }
        }
        if (stats) stats->route = "total-pipeline";
        const auto core_run = detail::run_stages(core, core_lists, total_prof, seed, stats);
        for (int e = 0; e < g.edge_count(); ++e) {
            tc.edge_colours.set(e, core_run.colouring.colour(e), core_run.colouring.tag(e));
        }
        std::vector<int> low;
        for (int v = 0; v < n; ++v) {
            if (g.degree(v) > 0 && low_degree(g.degree(v), delta)) low.push_back(v);
        }
        detail::recolour_vertices(g, lists.vertex_lists, low, &tc);
    } else {
        // small-degree route: margins are vacuous, vertex recolouring of
        // every vertex enforces total distinctness on its own
        if (stats) stats->route = "total-greedy";
        tc.edge_colours = detail::small_total_edge_colouring(g, trimmed);
        std::vector<int> all(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) all[static_cast<std::size_t>(v)] = v;
        detail::recolour_vertices(g, lists.vertex_lists, all, &tc);
    }
    return tc;
}

} // namespace avd
