#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "avd/colouring.hpp"
#include "avd/errors.hpp"
#include "avd/list_assignment.hpp"
#include "avd/multigraph.hpp"
#include "avd/profile.hpp"
#include "avd/reduction.hpp"
#include "avd/rng.hpp"

namespace avd {

/// Stage I output: the per-vertex reserve draws R_v and the per-edge
/// partition they induce, R_uv = R_u & R_v & L_uv (reserved) and
/// L'_uv = L_uv - (R_u | R_v) (leftover).
struct ReservedLists {
    std::vector<colour_set> vertex_reserves; // R_v
    std::vector<colour_set> edge_reserves;   // R_e
    std::vector<colour_set> leftover;        // L'_e

    ListAssignment leftover_assignment() const {
        ListAssignment la(static_cast<int>(leftover.size()));
        for (int e = 0; e < la.edge_count(); ++e) la.set_list(e, leftover[static_cast<std::size_t>(e)]);
        return la;
    }
};

/// A partial colouring together with the set U of logically uncoloured
/// edges (which are unset in `colouring`).
struct UncolourState {
    PartialColouring colouring;
    std::vector<int> uncoloured;             // U, ascending
    std::vector<std::vector<int>> per_vertex; // U_v, ascending edge ids

    static UncolourState from_membership(const MultiGraph& g, PartialColouring base,
                                         const std::vector<char>& in_u) {
        UncolourState st;
        st.per_vertex.resize(static_cast<std::size_t>(g.vertex_count()));
        for (int e = 0; e < g.edge_count(); ++e) {
            if (!in_u[static_cast<std::size_t>(e)]) continue;
            base.unset(e);
            st.uncoloured.push_back(e);
            st.per_vertex[static_cast<std::size_t>(g.edge(e).u)].push_back(e);
            st.per_vertex[static_cast<std::size_t>(g.edge(e).v)].push_back(e);
        }
        st.colouring = std::move(base);
        return st;
    }

    /// Partial palette S_v of the state.
    colour_set partial_palette(const MultiGraph& g, int v) const { return palette(g, colouring, v); }
};

struct StageCounters {
    std::int64_t reserve_resamples = 0;
    std::int64_t uncolour_resamples = 0;
    std::int64_t naive_resamples = 0;
};

struct RunStats {
    std::string input_hash;
    std::uint64_t seed = 0;
    nlohmann::json profile;
    std::string route;
    std::string stage_error; // empty on success
    StageCounters counters;
    std::map<std::string, double> stage_seconds;
    std::map<std::int64_t, std::int64_t> margin_histogram; // reduced-core margins
    nlohmann::json reduction_log;                          // filled on the pipeline route

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["input_hash"] = input_hash;
        j["seed"] = seed;
        j["profile"] = profile;
        j["route"] = route;
        j["stage_error"] = stage_error;
        j["resamples"] = {{"reserve", counters.reserve_resamples},
                          {"uncolour", counters.uncolour_resamples},
                          {"naive", counters.naive_resamples}};
        j["stage_seconds"] = stage_seconds;
        nlohmann::json hist = nlohmann::json::object();
        for (const auto& [margin, count] : margin_histogram) hist[std::to_string(margin)] = count;
        j["margin_histogram"] = std::move(hist);
        return j;
    }
};

namespace detail {

class StageTimer {
public:
    StageTimer(RunStats* stats, const char* key) : stats_(stats), key_(key) {
        start_ = std::chrono::steady_clock::now();
    }
    ~StageTimer() {
        if (!stats_) return;
        const auto end = std::chrono::steady_clock::now();
        stats_->stage_seconds[key_] += std::chrono::duration<double>(end - start_).count();
    }

private:
    RunStats* stats_;
    std::string key_;
    std::chrono::steady_clock::time_point start_;
};

/// Adjacent vertex pairs with equal (multiplicity-counting) degrees; one
/// event per unordered pair even when the pair is joined by two edges.
inline std::vector<std::pair<int, int>> equal_degree_pairs(const MultiGraph& g) {
    std::vector<std::pair<int, int>> pairs;
    for (const auto& rec : g.edges()) {
        if (g.degree(rec.u) != g.degree(rec.v)) continue;
        pairs.emplace_back(std::min(rec.u, rec.v), std::max(rec.u, rec.v));
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    return pairs;
}

/// FIFO queue over event ids with membership dedup.
class EventQueue {
public:
    explicit EventQueue(std::size_t n_events) : queued_(n_events, 0) {}
    void push(int ev) {
        if (queued_[static_cast<std::size_t>(ev)]) return;
        queued_[static_cast<std::size_t>(ev)] = 1;
        q_.push_back(ev);
    }
    std::optional<int> pop() {
        if (q_.empty()) return std::nullopt;
        const int ev = q_.front();
        q_.pop_front();
        queued_[static_cast<std::size_t>(ev)] = 0;
        return ev;
    }

private:
    std::deque<int> q_;
    std::vector<char> queued_;
};

} // namespace detail

// ---------------------------------------------------------------------------
// Stage I: reserving colours
// ---------------------------------------------------------------------------

/// Samples the per-vertex reserves R_v (every colour of the union of
/// incident lists independently with probability p1) and resamples the pair
/// (R_u, R_v) of any edge violating |R_e| >= t_reserve or
/// |L'_e| >= t_leftover until all edges comply.
inline ReservedLists reserve_colours(const MultiGraph& g, const ListAssignment& lists,
                                     const ThresholdProfile& prof, std::uint64_t seed,
                                     StageCounters* counters = nullptr) {
    prof.validate();
    if (lists.edge_count() != g.edge_count()) throw InvalidInput("reserve_colours: list count mismatch");
    const auto usize = lists.uniform_size();
    if (!usize) throw InvalidInput("reserve_colours: lists must be equal-sized");
    const std::int64_t L = *usize;
    if (prof.t_reserve > L || prof.t_leftover > L || prof.t_reserve + prof.t_leftover > L) {
        throw InfeasibleThresholds("reserve thresholds impossible for list size " + std::to_string(L) +
                                   ": t_reserve=" + std::to_string(prof.t_reserve) +
                                   ", t_leftover=" + std::to_string(prof.t_leftover));
    }

    const int n = g.vertex_count();
    const int m = g.edge_count();
    Rng rng(Rng::derive(seed, 0x51));

    std::vector<colour_set> vertex_union(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        colour_set u;
        for (int e : g.incident_edges(v)) u = set_union(u, lists.list(e));
        vertex_union[static_cast<std::size_t>(v)] = std::move(u);
    }

    ReservedLists res;
    res.vertex_reserves.resize(static_cast<std::size_t>(n));
    res.edge_reserves.resize(static_cast<std::size_t>(m));
    res.leftover.resize(static_cast<std::size_t>(m));

    auto draw_vertex = [&](int v) {
        colour_set r;
        for (colour_t c : vertex_union[static_cast<std::size_t>(v)]) {
            if (rng.bernoulli(prof.p1)) r.push_back(c);
        }
        res.vertex_reserves[static_cast<std::size_t>(v)] = std::move(r);
    };
    auto refresh_edge = [&](int e) {
        const auto& rec = g.edge(e);
        const auto& ru = res.vertex_reserves[static_cast<std::size_t>(rec.u)];
        const auto& rv = res.vertex_reserves[static_cast<std::size_t>(rec.v)];
        res.edge_reserves[static_cast<std::size_t>(e)] =
            set_intersection(set_intersection(ru, rv), lists.list(e));
        res.leftover[static_cast<std::size_t>(e)] = set_difference(lists.list(e), set_union(ru, rv));
    };
    auto violated = [&](int e) {
        return static_cast<std::int64_t>(res.edge_reserves[static_cast<std::size_t>(e)].size()) <
                   prof.t_reserve ||
               static_cast<std::int64_t>(res.leftover[static_cast<std::size_t>(e)].size()) <
                   prof.t_leftover;
    };

    for (int v = 0; v < n; ++v) draw_vertex(v);
    for (int e = 0; e < m; ++e) refresh_edge(e);

    detail::EventQueue queue(static_cast<std::size_t>(m));
    for (int e = 0; e < m; ++e) {
        if (violated(e)) queue.push(e);
    }
    std::int64_t resamples = 0;
    while (auto ev = queue.pop()) {
        const int e = *ev;
        if (!violated(e)) continue;
        if (resamples >= prof.max_resample) {
            throw ResampleBudgetExhausted("stage I (reserve): resample budget " +
                                          std::to_string(prof.max_resample) + " exhausted");
        }
        ++resamples;
        const auto& rec = g.edge(e);
        const int a = std::min(rec.u, rec.v);
        const int b = std::max(rec.u, rec.v);
        draw_vertex(a);
        draw_vertex(b);
        std::vector<int> touched;
        for (int end : {a, b}) {
            for (int f : g.incident_edges(end)) touched.push_back(f);
        }
        touched = make_colour_set(std::move(touched));
        for (int f : touched) refresh_edge(f);
        for (int f : touched) {
            if (violated(f)) queue.push(f);
        }
    }
    if (counters) counters->reserve_resamples += resamples;

    for (int e = 0; e < m; ++e) {
        if (violated(e)) throw Error("stage I: postcondition recheck failed (internal)");
    }
    return res;
}

// ---------------------------------------------------------------------------
// Stage II part 1: initial proper colouring from the leftover lists
// ---------------------------------------------------------------------------

/// Proper colouring with every colour drawn from the edge's leftover list.
/// Greedy in a seeded random order (guaranteed when all lists have at least
/// 2*Delta-1 colours); shorter lists fall back to conflict-kick repair with
/// a bounded budget.
inline PartialColouring initial_proper_colouring(const MultiGraph& g, const ListAssignment& leftover,
                                                 std::uint64_t seed) {
    if (leftover.edge_count() != g.edge_count()) {
        throw InvalidInput("initial_proper_colouring: list count mismatch");
    }
    const int m = g.edge_count();
    Rng rng(Rng::derive(seed, 0x52));
    for (int e = 0; e < m; ++e) {
        if (leftover.list(e).empty()) {
            throw ColouringNotFound("initial colouring: empty leftover list at edge " +
                                    std::to_string(e));
        }
    }

    PartialColouring c(m);
    std::vector<int> order(static_cast<std::size_t>(m));
    for (int e = 0; e < m; ++e) order[static_cast<std::size_t>(e)] = e;
    rng.shuffle(order);

    std::deque<int> work(order.begin(), order.end());
    const std::int64_t kick_budget = 20 * static_cast<std::int64_t>(m) + 1000;
    std::int64_t kicks = 0;
    while (!work.empty()) {
        const int e = work.front();
        work.pop_front();
        if (c.is_coloured(e)) continue;
        const auto& rec = g.edge(e);
        colour_set banned;
        for (int end : {rec.u, rec.v}) {
            for (int f : g.incident_edges(end)) {
                if (f != e && c.is_coloured(f)) banned.push_back(c.colour(f));
            }
        }
        banned = make_colour_set(std::move(banned));
        const colour_set avail = set_difference(leftover.list(e), banned);
        if (!avail.empty()) {
            c.set(e, avail[rng.below(avail.size())], StageTag::InitialProper);
            continue;
        }
        if (++kicks > kick_budget) {
            throw ColouringNotFound("initial colouring: repair budget exhausted (lists below the "
                                    "2*Delta-1 greedy guarantee)");
        }
        const auto& list = leftover.list(e);
        const colour_t pick = list[rng.below(list.size())];
        for (int end : {rec.u, rec.v}) {
            for (int f : g.incident_edges(end)) {
                if (f != e && c.is_coloured(f) && c.colour(f) == pick) {
                    c.unset(f);
                    work.push_back(f);
                }
            }
        }
        c.set(e, pick, StageTag::InitialProper);
    }
    return c;
}

// ---------------------------------------------------------------------------
// Stage II part 2: random uncolouring
// ---------------------------------------------------------------------------

/// Uncolours every edge independently with probability p2, then resamples
/// the coins around any vertex violating u_lo <= |U_v| <= u_hi and around
/// any equal-degree adjacent pair violating |S_u sym S_v| >= t_diff2.
inline UncolourState random_uncolour(const MultiGraph& g, const PartialColouring& c,
                                     const ThresholdProfile& prof, std::uint64_t seed,
                                     StageCounters* counters = nullptr) {
    prof.validate();
    if (c.edge_count() != g.edge_count() || !c.complete() || !is_proper(g, c)) {
        throw InvalidInput("random_uncolour: colouring must be complete and proper");
    }
    const int n = g.vertex_count();
    const int m = g.edge_count();
    Rng rng(Rng::derive(seed, 0x53));

    for (int v = 0; v < n; ++v) {
        const int d = g.degree(v);
        if (d > 0 && prof.u_lo > d) {
            throw InfeasibleThresholds("u_lo=" + std::to_string(prof.u_lo) +
                                       " above degree of vertex " + std::to_string(v));
        }
    }
    const auto pairs = detail::equal_degree_pairs(g);
    for (const auto& [u, v] : pairs) {
        const std::int64_t d = g.degree(u);
        const colour_set full_sym = symmetric_difference(palette(g, c, u), palette(g, c, v));
        const std::int64_t cap =
            std::min(2 * d - 2,
                     static_cast<std::int64_t>(full_sym.size()) + 2 * std::min<std::int64_t>(prof.u_hi, d));
        if (prof.t_diff2 > cap) {
            throw InfeasibleThresholds("t_diff2=" + std::to_string(prof.t_diff2) +
                                       " unattainable for pair (" + std::to_string(u) + "," +
                                       std::to_string(v) + ")");
        }
    }

    std::vector<char> in_u(static_cast<std::size_t>(m), 0);
    auto draw_edge = [&](int e) { in_u[static_cast<std::size_t>(e)] = rng.bernoulli(prof.p2) ? 1 : 0; };
    for (int e = 0; e < m; ++e) draw_edge(e);

    auto count_u = [&](int v) {
        std::int64_t k = 0;
        for (int e : g.incident_edges(v)) k += in_u[static_cast<std::size_t>(e)];
        return k;
    };
    auto partial_palette = [&](int v) {
        colour_set out;
        for (int e : g.incident_edges(v)) {
            if (!in_u[static_cast<std::size_t>(e)]) out.push_back(c.colour(e));
        }
        return make_colour_set(std::move(out));
    };

    // event ids: [0, n) vertex events, [n, n + pairs.size()) pair events
    const int n_events = n + static_cast<int>(pairs.size());
    std::vector<std::vector<int>> pair_events_at(static_cast<std::size_t>(n));
    for (int i = 0; i < static_cast<int>(pairs.size()); ++i) {
        pair_events_at[static_cast<std::size_t>(pairs[static_cast<std::size_t>(i)].first)].push_back(n + i);
        pair_events_at[static_cast<std::size_t>(pairs[static_cast<std::size_t>(i)].second)].push_back(n + i);
    }
    auto violated = [&](int ev) {
        if (ev < n) {
            if (g.degree(ev) == 0) return false;
            const std::int64_t k = count_u(ev);
            return k < prof.u_lo || k > prof.u_hi;
        }
        const auto& [u, v] = pairs[static_cast<std::size_t>(ev - n)];
        const auto sym = symmetric_difference(partial_palette(u), partial_palette(v));
        return static_cast<std::int64_t>(sym.size()) < prof.t_diff2;
    };

    detail::EventQueue queue(static_cast<std::size_t>(n_events));
    for (int ev = 0; ev < n_events; ++ev) {
        if (violated(ev)) queue.push(ev);
    }
    std::int64_t resamples = 0;
    while (auto evo = queue.pop()) {
        const int ev = *evo;
        if (!violated(ev)) continue;
        if (resamples >= prof.max_resample) {
            throw ResampleBudgetExhausted("stage II (uncolour): resample budget " +
                                          std::to_string(prof.max_resample) + " exhausted");
        }
        ++resamples;
        std::vector<int> unit;
        if (ev < n) {
            unit = g.incident_edges(ev);
        } else {
            const auto& [u, v] = pairs[static_cast<std::size_t>(ev - n)];
            unit = g.incident_edges(u);
            for (int e : g.incident_edges(v)) unit.push_back(e);
            unit = make_colour_set(std::move(unit));
        }
        for (int e : unit) draw_edge(e);
        std::vector<int> verts;
        for (int e : unit) {
            verts.push_back(g.edge(e).u);
            verts.push_back(g.edge(e).v);
        }
        verts = make_colour_set(std::move(verts));
        std::vector<int> affected;
        for (int w : verts) {
            affected.push_back(w);
            for (int pe : pair_events_at[static_cast<std::size_t>(w)]) affected.push_back(pe);
        }
        affected = make_colour_set(std::move(affected));
        for (int aev : affected) {
            if (violated(aev)) queue.push(aev);
        }
    }
    if (counters) counters->uncolour_resamples += resamples;

    for (int ev = 0; ev < n_events; ++ev) {
        if (violated(ev)) throw Error("stage II: postcondition recheck failed (internal)");
    }
    return UncolourState::from_membership(g, c, in_u);
}

// ---------------------------------------------------------------------------
// Stage III: naive colouring from the reserved lists
// ---------------------------------------------------------------------------

/// Draws a uniform reserved colour for every edge of U, uncolours the draws
/// that clash with an adjacent member of U (producing U'), and resamples
/// the draws within distance one of any vertex violating |U'_v| <= t_u3 or
/// any equal-degree pair violating |S'_u sym S'_v| >= t_diff3.
inline std::pair<PartialColouring, UncolourState> reserved_naive_colour(
    const MultiGraph& g, const UncolourState& st, const ReservedLists& res,
    const ThresholdProfile& prof, std::uint64_t seed, StageCounters* counters = nullptr) {
    prof.validate();
    const int n = g.vertex_count();
    const int m = g.edge_count();
    if (st.colouring.edge_count() != m) throw InvalidInput("reserved_naive_colour: size mismatch");
    Rng rng(Rng::derive(seed, 0x54));

    const auto& u_edges = st.uncoloured;
    std::vector<char> in_u(static_cast<std::size_t>(m), 0);
    for (int e : u_edges) {
        in_u[static_cast<std::size_t>(e)] = 1;
        if (res.edge_reserves[static_cast<std::size_t>(e)].empty()) {
            throw InfeasibleThresholds("reserved list of uncoloured edge " + std::to_string(e) +
                                       " is empty");
        }
    }

    std::vector<colour_t> draw(static_cast<std::size_t>(m), -1);
    auto redraw = [&](int e) {
        const auto& re = res.edge_reserves[static_cast<std::size_t>(e)];
        draw[static_cast<std::size_t>(e)] = re[rng.below(re.size())];
    };
    for (int e : u_edges) redraw(e);

    auto conflicted = [&](int e) {
        const auto& rec = g.edge(e);
        for (int end : {rec.u, rec.v}) {
            for (int f : g.incident_edges(end)) {
                if (f != e && in_u[static_cast<std::size_t>(f)] &&
                    draw[static_cast<std::size_t>(f)] == draw[static_cast<std::size_t>(e)]) {
                    return true;
                }
            }
        }
        return false;
    };
    auto u_prime_count = [&](int v) {
        std::int64_t k = 0;
        for (int e : st.per_vertex[static_cast<std::size_t>(v)]) k += conflicted(e);
        return k;
    };
    auto stage3_palette = [&](int v) {
        colour_set out;
        for (int e : g.incident_edges(v)) {
            if (in_u[static_cast<std::size_t>(e)]) {
                if (!conflicted(e)) out.push_back(draw[static_cast<std::size_t>(e)]);
            } else if (st.colouring.is_coloured(e)) {
                out.push_back(st.colouring.colour(e));
            }
        }
        return make_colour_set(std::move(out));
    };

    const auto pairs = detail::equal_degree_pairs(g);
    const int n_events = n + static_cast<int>(pairs.size());
    std::vector<std::vector<int>> pair_events_at(static_cast<std::size_t>(n));
    for (int i = 0; i < static_cast<int>(pairs.size()); ++i) {
        pair_events_at[static_cast<std::size_t>(pairs[static_cast<std::size_t>(i)].first)].push_back(n + i);
        pair_events_at[static_cast<std::size_t>(pairs[static_cast<std::size_t>(i)].second)].push_back(n + i);
    }
    auto violated = [&](int ev) {
        if (ev < n) {
            if (g.degree(ev) == 0) return false;
            return u_prime_count(ev) > prof.t_u3;
        }
        const auto& [u, v] = pairs[static_cast<std::size_t>(ev - n)];
        const auto sym = symmetric_difference(stage3_palette(u), stage3_palette(v));
        return static_cast<std::int64_t>(sym.size()) < prof.t_diff3;
    };

    /// U-edges incident to v or adjacent to a U-edge incident to v.
    auto unit_of_vertex = [&](int v, std::vector<int>* out) {
        for (int e : st.per_vertex[static_cast<std::size_t>(v)]) {
            out->push_back(e);
            const auto& rec = g.edge(e);
            for (int end : {rec.u, rec.v}) {
                for (int f : g.incident_edges(end)) {
                    if (in_u[static_cast<std::size_t>(f)]) out->push_back(f);
                }
            }
        }
    };

    detail::EventQueue queue(static_cast<std::size_t>(n_events));
    for (int ev = 0; ev < n_events; ++ev) {
        if (violated(ev)) queue.push(ev);
    }
    std::int64_t resamples = 0;
    while (auto evo = queue.pop()) {
        const int ev = *evo;
        if (!violated(ev)) continue;
        if (resamples >= prof.max_resample) {
            throw ResampleBudgetExhausted("stage III (naive colour): resample budget " +
                                          std::to_string(prof.max_resample) + " exhausted");
        }
        ++resamples;
        std::vector<int> unit;
        if (ev < n) {
            unit_of_vertex(ev, &unit);
        } else {
            const auto& [u, v] = pairs[static_cast<std::size_t>(ev - n)];
            unit_of_vertex(u, &unit);
            unit_of_vertex(v, &unit);
        }
        unit = make_colour_set(std::move(unit));
        for (int e : unit) redraw(e);
        // conflict status may flip for the unit and for U-edges adjacent to it
        std::vector<int> verts;
        for (int e : unit) {
            verts.push_back(g.edge(e).u);
            verts.push_back(g.edge(e).v);
        }
        verts = make_colour_set(std::move(verts));
        std::vector<int> affected_vertices;
        for (int w : verts) {
            affected_vertices.push_back(w);
            for (int e : st.per_vertex[static_cast<std::size_t>(w)]) {
                affected_vertices.push_back(g.edge(e).u);
                affected_vertices.push_back(g.edge(e).v);
            }
        }
        affected_vertices = make_colour_set(std::move(affected_vertices));
        std::vector<int> affected;
        for (int w : affected_vertices) {
            affected.push_back(w);
            for (int pe : pair_events_at[static_cast<std::size_t>(w)]) affected.push_back(pe);
        }
        affected = make_colour_set(std::move(affected));
        for (int aev : affected) {
            if (violated(aev)) queue.push(aev);
        }
    }
    if (counters) counters->naive_resamples += resamples;

    for (int ev = 0; ev < n_events; ++ev) {
        if (violated(ev)) throw Error("stage III: postcondition recheck failed (internal)");
    }

    PartialColouring out = st.colouring;
    std::vector<char> in_u_prime(static_cast<std::size_t>(m), 0);
    for (int e : u_edges) {
        if (conflicted(e)) {
            in_u_prime[static_cast<std::size_t>(e)] = 1;
        } else {
            out.set(e, draw[static_cast<std::size_t>(e)], StageTag::Reserved);
        }
    }
    if (!is_proper(g, out)) throw Error("stage III: produced an improper colouring (internal)");
    UncolourState st_prime = UncolourState::from_membership(g, out, in_u_prime);
    return {std::move(out), std::move(st_prime)};
}

// ---------------------------------------------------------------------------
// Stage IV: greedy finish from the reserved lists
// ---------------------------------------------------------------------------

/// Colours every remaining edge with a reserved colour absent from all
/// currently adjacent edge colours, in ascending edge id order.
inline PartialColouring greedy_finish(const MultiGraph& g, const PartialColouring& c,
                                      const UncolourState& u_prime, const ReservedLists& res) {
    PartialColouring out = c;
    for (int e : u_prime.uncoloured) {
        const auto& rec = g.edge(e);
        colour_set banned;
        for (int end : {rec.u, rec.v}) {
            for (int f : g.incident_edges(end)) {
                if (f != e && out.is_coloured(f)) banned.push_back(out.colour(f));
            }
        }
        banned = make_colour_set(std::move(banned));
        const colour_set avail = set_difference(res.edge_reserves[static_cast<std::size_t>(e)], banned);
        if (avail.empty()) {
            throw NoFreeReservedColour("stage IV: reserved list of edge " + std::to_string(e) +
                                       " fully blocked by adjacent edges");
        }
        out.set(e, avail.front(), StageTag::GreedyFinish);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Orchestrator
// ---------------------------------------------------------------------------

enum class Route { Auto, Greedy, Pipeline };

struct PipelineOptions {
    Route route = Route::Auto;
    int max_doublings = 12;
    /// Lists for edges created by contraction-free doubling; arguments are
    /// the new edge id in the boosted graph, the list size and the rng.
    std::function<colour_set(int, int, Rng&)> list_factory;
};

namespace detail {

inline colour_set default_new_list(const colour_set& universe, int list_size, Rng& rng) {
    if (static_cast<int>(universe.size()) < list_size) {
        throw InvalidInput("list factory: colour universe smaller than the list size");
    }
    const auto idx = rng.sample_sorted(static_cast<int>(universe.size()), list_size);
    colour_set out;
    out.reserve(idx.size());
    for (int i : idx) out.push_back(universe[static_cast<std::size_t>(i)]);
    return out;
}

struct CoreRun {
    PartialColouring colouring;
    ReservedLists reserves;
};

/// Stages I-IV on a graph that already satisfies the multiplicity and
/// minimum-degree requirements.
inline CoreRun run_stages(const MultiGraph& g, const ListAssignment& lists,
                          const ThresholdProfile& prof, std::uint64_t seed, RunStats* stats) {
    StageCounters local;
    StageCounters* counters = stats ? &stats->counters : &local;
    ReservedLists res;
    {
        StageTimer t(stats, "reserve");
        res = reserve_colours(g, lists, prof, Rng::derive(seed, 1), counters);
    }
    PartialColouring c2;
    {
        StageTimer t(stats, "initial");
        c2 = initial_proper_colouring(g, res.leftover_assignment(), Rng::derive(seed, 2));
    }
    UncolourState st;
    {
        StageTimer t(stats, "uncolour");
        st = random_uncolour(g, c2, prof, Rng::derive(seed, 3), counters);
    }
    std::pair<PartialColouring, UncolourState> stage3;
    {
        StageTimer t(stats, "naive");
        stage3 = reserved_naive_colour(g, st, res, prof, Rng::derive(seed, 4), counters);
    }
    PartialColouring final_colouring;
    {
        StageTimer t(stats, "finish");
        final_colouring = greedy_finish(g, stage3.first, stage3.second, res);
    }
    if (stats) {
        for (const auto& [u, v] : equal_degree_pairs(g)) {
            const auto sym = symmetric_difference(palette(g, final_colouring, u),
                                                  palette(g, final_colouring, v));
            ++stats->margin_histogram[static_cast<std::int64_t>(sym.size())];
        }
    }
    return {std::move(final_colouring), std::move(res)};
}

} // namespace detail

/// Full construction: routes small instances with long lists to the greedy,
/// otherwise reduces the graph to the multiplicity-2, min-degree >= Delta/4
/// core, runs stages I-IV on it, lifts the colouring back and finishes the
/// low-degree edges.
inline PartialColouring avd_list_edge_colour(const MultiGraph& g, const ListAssignment& lists,
                                             const ThresholdProfile& prof, std::uint64_t seed,
                                             const PipelineOptions& options = {},
                                             RunStats* stats = nullptr) {
    require_no_isolated_edges(g);
    if (lists.edge_count() != g.edge_count()) throw InvalidInput("avd_list_edge_colour: list count mismatch");
    if (g.edge_count() == 0) {
        if (stats) stats->route = "empty";
        return PartialColouring(0);
    }
    const int delta = g.max_degree();

    const bool greedy_eligible = lists.min_size() > 4 * (delta - 1);
    const bool use_greedy =
        options.route == Route::Greedy || (options.route == Route::Auto && greedy_eligible);
    if (use_greedy) {
        if (stats) stats->route = "greedy";
        detail::StageTimer t(stats, "greedy");
        return greedy_small_delta(g, lists);
    }
    if (stats) stats->route = "pipeline";
    prof.validate();

    // reduction to the core
    MultiGraph core = g;
    ReductionLog log = detail::identity_log(g);
    {
        detail::StageTimer t(stats, "reduce");
        if (g.is_simple()) {
            auto [g1, contract_log] = contract_low_degree_edges(g, delta);
            auto [g2, boost_log] = boost_min_degree(g1, delta, options.max_doublings);
            log = compose_logs(contract_log, boost_log);
            core = std::move(g2);
        } else {
            auto [g2, boost_log] = boost_min_degree(g, delta, options.max_doublings);
            log = boost_log;
            core = std::move(g2);
        }
    }
    const bool reduced = !log.contractions.empty() || !log.doublings.empty();
    if (stats) stats->reduction_log = log.to_json();

    // lists for the core: originals through the edge map, fresh lists for
    // edges created by doubling
    const auto usize = lists.uniform_size();
    if (!usize) throw InvalidInput("pipeline route: lists must be equal-sized");
    const int list_size = *usize;
    ListAssignment core_lists(core.edge_count());
    for (int i = 0; i < static_cast<int>(log.edge_map.size()); ++i) {
        core_lists.set_list(i, lists.list(log.edge_map[static_cast<std::size_t>(i)]));
    }
    if (core.edge_count() > static_cast<int>(log.edge_map.size())) {
        Rng list_rng(Rng::derive(seed, 0x11575));
        const colour_set universe = lists.universe();
        for (int e = static_cast<int>(log.edge_map.size()); e < core.edge_count(); ++e) {
            colour_set fresh = options.list_factory
                                   ? options.list_factory(e, list_size, list_rng)
                                   : detail::default_new_list(universe, list_size, list_rng);
            core_lists.set_list(e, std::move(fresh));
        }
    }

    const auto core_run = detail::run_stages(core, core_lists, prof, seed, stats);
    if (!reduced) return core_run.colouring;

    PartialColouring lifted;
    {
        detail::StageTimer t(stats, "lift");
        lifted = lift_and_strip(g, core_run.colouring, log, delta);
    }
    {
        detail::StageTimer t(stats, "low_degree_finish");
        return finish_low_degree(g, lists, lifted, delta);
    }
}

} // namespace avd
