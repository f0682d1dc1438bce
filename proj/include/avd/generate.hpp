#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "avd/errors.hpp"
#include "avd/io.hpp"
#include "avd/list_assignment.hpp"
#include "avd/multigraph.hpp"
#include "avd/rng.hpp"

namespace avd {

inline MultiGraph gen_path(int n) {
    MultiGraph g(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

inline MultiGraph gen_cycle(int n) {
    if (n < 3) throw InvalidInput("cycle needs at least 3 vertices");
    MultiGraph g(n);
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
    return g;
}

inline MultiGraph gen_complete(int n) {
    MultiGraph g(n);
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
    }
    return g;
}

inline MultiGraph gen_complete_bipartite(int a, int b) {
    MultiGraph g(a + b);
    for (int u = 0; u < a; ++u) {
        for (int v = 0; v < b; ++v) g.add_edge(u, a + v);
    }
    return g;
}

/// Uniform simple graph with n vertices and m edges; regenerated while it
/// has an isolated edge (or is disconnected, when required).
inline MultiGraph gen_random_gnm(int n, int m, Rng& rng, bool require_connected = false,
                                 int max_retries = 500) {
    if (n < 2) throw InvalidInput("random-gnm needs at least 2 vertices");
    const long long max_edges = static_cast<long long>(n) * (n - 1) / 2;
    if (m < 0 || m > max_edges) throw InvalidInput("random-gnm: edge count out of range");
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
        std::set<std::pair<int, int>> chosen;
        while (static_cast<int>(chosen.size()) < m) {
            const int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
            const int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
            if (u == v) continue;
            chosen.insert({std::min(u, v), std::max(u, v)});
        }
        MultiGraph g(n);
        for (const auto& [u, v] : chosen) g.add_edge(u, v);
        if (g.has_isolated_edge()) continue;
        if (require_connected && !g.is_connected_ignoring_isolated()) continue;
        return g;
    }
    throw InvalidInput("random-gnm: could not generate a graph without isolated edges");
}

/// d-regular simple graph on an even number of vertices: the union of d
/// random perfect matchings, with conflict edges repaired by random swaps.
inline MultiGraph gen_random_near_regular(int n, int d, Rng& rng) {
    if (n < 4 || n % 2 != 0) throw InvalidInput("random-near-regular needs an even n >= 4");
    if (d < 2 || d >= n) throw InvalidInput("random-near-regular needs 2 <= d < n");
    std::vector<std::pair<int, int>> edges;
    std::map<std::pair<int, int>, int> count;
    for (int round = 0; round < d; ++round) {
        std::vector<int> perm(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
        rng.shuffle(perm);
        for (int i = 0; i < n; i += 2) {
            const int a = std::min(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(i + 1)]);
            const int b = std::max(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(i + 1)]);
            edges.emplace_back(a, b);
            ++count[{a, b}];
        }
    }
    // swap repair: replace duplicate pairs until the multigraph is simple
    const std::int64_t swap_budget = 1000LL * static_cast<std::int64_t>(edges.size()) + 10000;
    std::int64_t swaps = 0;
    for (;;) {
        int dup = -1;
        for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
            if (count[edges[static_cast<std::size_t>(i)]] > 1) {
                dup = i;
                break;
            }
        }
        if (dup < 0) break;
        if (++swaps > swap_budget) {
            throw InvalidInput("random-near-regular: swap repair budget exhausted");
        }
        const int j = static_cast<int>(rng.below(edges.size()));
        const auto [a, b] = edges[static_cast<std::size_t>(dup)];
        const auto [c, dd] = edges[static_cast<std::size_t>(j)];
        if (a == c || a == dd || b == c || b == dd) continue;
        const std::pair<int, int> e1{std::min(a, c), std::max(a, c)};
        const std::pair<int, int> e2{std::min(b, dd), std::max(b, dd)};
        if (count[e1] > 0 || count[e2] > 0) continue;
        --count[edges[static_cast<std::size_t>(dup)]];
        --count[edges[static_cast<std::size_t>(j)]];
        edges[static_cast<std::size_t>(dup)] = e1;
        edges[static_cast<std::size_t>(j)] = e2;
        ++count[e1];
        ++count[e2];
    }
    std::sort(edges.begin(), edges.end());
    return MultiGraph::from_edges(n, edges);
}

/// Independent random list of `list_size` colours from {0..universe-1} per
/// edge.
inline ListAssignment gen_random_lists(int edge_count, int list_size, int universe, Rng& rng) {
    if (list_size > universe) throw InvalidInput("list size above the colour universe");
    ListAssignment la(edge_count);
    for (int e = 0; e < edge_count; ++e) la.set_list(e, rng.sample_sorted(universe, list_size));
    return la;
}

inline std::vector<colour_set> gen_random_vertex_lists(int vertex_count, int list_size, int universe,
                                                       Rng& rng) {
    if (list_size > universe) throw InvalidInput("list size above the colour universe");
    std::vector<colour_set> out(static_cast<std::size_t>(vertex_count));
    for (int v = 0; v < vertex_count; ++v) out[static_cast<std::size_t>(v)] = rng.sample_sorted(universe, list_size);
    return out;
}

} // namespace avd
