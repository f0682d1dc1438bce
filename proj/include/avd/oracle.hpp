#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "avd/colouring.hpp"
#include "avd/errors.hpp"
#include "avd/list_assignment.hpp"
#include "avd/multigraph.hpp"

namespace avd {

namespace detail {

/// Backtracking search for an on-list proper AVD colouring. Edges are
/// tried by descending degree-sum; pruning on properness and on palette
/// equality of endpoint pairs whose incident edges are all assigned.
/// pin_first restricts the edge with id 0 to the first colour of its list
/// (sound for colour-symmetric, uniform lists only).
class AvdSolver {
public:
    AvdSolver(const MultiGraph& g, const ListAssignment& lists, bool pin_first)
        : g_(g), lists_(lists), pin_first_(pin_first) {
        const int m = g.edge_count();
        order_.resize(static_cast<std::size_t>(m));
        for (int e = 0; e < m; ++e) order_[static_cast<std::size_t>(e)] = e;
        std::sort(order_.begin(), order_.end(), [&](int a, int b) {
            const int da = g.degree(g.edge(a).u) + g.degree(g.edge(a).v);
            const int db = g.degree(g.edge(b).u) + g.degree(g.edge(b).v);
            if (da != db) return da > db;
            return a < b;
        });
        assigned_.assign(static_cast<std::size_t>(m), -1);
        remaining_.resize(static_cast<std::size_t>(g.vertex_count()));
        for (int v = 0; v < g.vertex_count(); ++v) {
            remaining_[static_cast<std::size_t>(v)] = g.degree(v);
        }
    }

    std::optional<PartialColouring> solve() {
        if (dfs(0)) {
            PartialColouring c(g_.edge_count());
            for (int e = 0; e < g_.edge_count(); ++e) {
                c.set(e, assigned_[static_cast<std::size_t>(e)], StageTag::SmallDeltaGreedy);
            }
            return c;
        }
        return std::nullopt;
    }

private:
    bool dfs(std::size_t pos) {
        if (pos == order_.size()) return true;
        const int e = order_[pos];
        const auto& rec = g_.edge(e);
        const auto& list = lists_.list(e);
        for (colour_t x : list) {
            if (pin_first_ && e == 0 && x != list.front()) break;
            if (clashes(e, x)) continue;
            assigned_[static_cast<std::size_t>(e)] = x;
            --remaining_[static_cast<std::size_t>(rec.u)];
            --remaining_[static_cast<std::size_t>(rec.v)];
            const bool ok = !saturated_palette_clash(rec.u) && !saturated_palette_clash(rec.v) &&
                            dfs(pos + 1);
            ++remaining_[static_cast<std::size_t>(rec.u)];
            ++remaining_[static_cast<std::size_t>(rec.v)];
            assigned_[static_cast<std::size_t>(e)] = -1;
            if (ok) return true;
        }
        return false;
    }

    bool clashes(int e, colour_t x) const {
        const auto& rec = g_.edge(e);
        for (int end : {rec.u, rec.v}) {
            for (int f : g_.incident_edges(end)) {
                if (f != e && assigned_[static_cast<std::size_t>(f)] == x) return true;
            }
        }
        return false;
    }

    /// After v became fully assigned: does some fully assigned neighbour
    /// have the same palette?
    bool saturated_palette_clash(int v) const {
        if (remaining_[static_cast<std::size_t>(v)] != 0) return false;
        const colour_set mine = full_palette(v);
        for (int w : g_.neighbours(v)) {
            if (remaining_[static_cast<std::size_t>(w)] != 0) continue;
            if (full_palette(w) == mine) return true;
        }
        return false;
    }

    colour_set full_palette(int v) const {
        colour_set out;
        for (int e : g_.incident_edges(v)) out.push_back(assigned_[static_cast<std::size_t>(e)]);
        return make_colour_set(std::move(out));
    }

    const MultiGraph& g_;
    const ListAssignment& lists_;
    bool pin_first_;
    std::vector<int> order_;
    std::vector<colour_t> assigned_;
    std::vector<int> remaining_;
};

} // namespace detail

/// Smallest k <= k_max admitting a proper AVD colouring with colours
/// {1..k}, or -1 when none exists within k_max. Exhaustive search with the
/// first edge pinned to colour 1.
inline int chromatic_avd_index(const MultiGraph& g, int k_max, int edge_cap = 12) {
    require_no_isolated_edges(g);
    if (g.edge_count() > edge_cap) {
        throw CapExceeded("chromatic_avd_index: " + std::to_string(g.edge_count()) +
                          " edges above the cap " + std::to_string(edge_cap));
    }
    if (g.edge_count() == 0) return 0;
    for (int k = std::max(1, g.max_degree()); k <= k_max; ++k) {
        colour_set list(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) list[static_cast<std::size_t>(i)] = i + 1;
        detail::AvdSolver solver(g, ListAssignment::uniform(g.edge_count(), list), true);
        if (solver.solve()) return k;
    }
    return -1;
}

/// Is there an on-list proper AVD colouring for this particular list
/// assignment?
inline bool avd_colourable_from_lists(const MultiGraph& g, const ListAssignment& lists) {
    require_no_isolated_edges(g);
    detail::AvdSolver solver(g, lists, false);
    return solver.solve().has_value();
}

/// Decides whether every assignment of k-element lists admits an on-list
/// proper AVD colouring. List assignments are enumerated up to colour
/// renaming: colours are introduced in first-use order, which makes a
/// universe of k*|E| colours sufficient. Returns a violating assignment as
/// witness when the answer is no.
inline std::pair<bool, std::optional<ListAssignment>> check_choosability(const MultiGraph& g, int k) {
    require_no_isolated_edges(g);
    if (g.edge_count() > 5 || k > 5) {
        throw CapExceeded("check_choosability caps: |E| <= 5 and k <= 5");
    }
    if (k < 1) throw InvalidInput("check_choosability: k must be positive");
    const int m = g.edge_count();

    std::vector<colour_set> lists(static_cast<std::size_t>(m));
    std::optional<ListAssignment> witness;

    // enumerate k-subsets of {0..used-1} plus a fresh tail, lexicographically
    auto for_each_list = [&](int used, auto&& visit) {
        std::vector<colour_t> subset;
        auto rec = [&](auto&& self, int next, int remaining) -> bool {
            if (remaining == 0) return visit(subset);
            // fresh colours are interchangeable: once we go past `used`, take
            // the next fresh block in one step
            if (next >= used) {
                const int base = used;
                for (int i = 0; i < remaining; ++i) subset.push_back(base + i);
                const bool cont = visit(subset);
                for (int i = 0; i < remaining; ++i) subset.pop_back();
                return cont;
            }
            subset.push_back(next);
            if (!self(self, next + 1, remaining - 1)) return false;
            subset.pop_back();
            return self(self, next + 1, remaining);
        };
        return rec(rec, 0, k);
    };

    auto assign = [&](auto&& self, int edge, int used) -> bool {
        if (edge == m) {
            ListAssignment la(m);
            for (int e = 0; e < m; ++e) la.set_list(e, lists[static_cast<std::size_t>(e)]);
            if (!avd_colourable_from_lists(g, la)) {
                witness = std::move(la);
                return false;
            }
            return true;
        }
        return for_each_list(used, [&](const std::vector<colour_t>& subset) {
            lists[static_cast<std::size_t>(edge)] = subset;
            int next_used = used;
            for (colour_t c : subset) next_used = std::max(next_used, c + 1);
            return self(self, edge + 1, next_used);
        });
    };
    const bool all_ok = assign(assign, 0, 0);
    return {all_ok, std::move(witness)};
}

/// Independent re-implementation of graph-core's verify, used for
/// differential checking. Deliberately shares no helper code with it.
inline VerifyReport naive_verify(const MultiGraph& g, const ListAssignment& lists,
                                 const PartialColouring& c) {
    if (lists.edge_count() != g.edge_count() || c.edge_count() != g.edge_count()) {
        throw InvalidInput("naive_verify: edge counts disagree");
    }
    VerifyReport rep;
    for (int e = 0; e < g.edge_count(); ++e) {
        if (!c.is_coloured(e)) {
            rep.uncoloured.push_back(e);
            continue;
        }
        bool on_list = false;
        for (colour_t x : lists.list(e)) {
            if (x == c.colour(e)) on_list = true;
        }
        if (!on_list) rep.list_violations.push_back(e);
    }
    std::set<std::pair<int, int>> proper;
    for (int e1 = 0; e1 < g.edge_count(); ++e1) {
        for (int e2 = e1 + 1; e2 < g.edge_count(); ++e2) {
            if (!c.is_coloured(e1) || !c.is_coloured(e2)) continue;
            if (c.colour(e1) != c.colour(e2)) continue;
            const auto& a = g.edge(e1);
            const auto& b = g.edge(e2);
            if (a.u == b.u || a.u == b.v || a.v == b.u || a.v == b.v) proper.insert({e1, e2});
        }
    }
    rep.proper_violations.assign(proper.begin(), proper.end());

    auto palette_of = [&](int v) {
        std::set<colour_t> s;
        for (int e = 0; e < g.edge_count(); ++e) {
            const auto& rec = g.edge(e);
            if ((rec.u == v || rec.v == v) && c.is_coloured(e)) s.insert(c.colour(e));
        }
        return s;
    };
    std::set<std::pair<int, int>> avd;
    for (int e = 0; e < g.edge_count(); ++e) {
        const auto& rec = g.edge(e);
        const int u = rec.u < rec.v ? rec.u : rec.v;
        const int v = rec.u < rec.v ? rec.v : rec.u;
        if (palette_of(u) == palette_of(v)) avd.insert({u, v});
    }
    rep.avd_violations.assign(avd.begin(), avd.end());
    return rep;
}

} // namespace avd
