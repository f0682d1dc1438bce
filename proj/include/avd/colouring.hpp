#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "avd/errors.hpp"
#include "avd/list_assignment.hpp"
#include "avd/multigraph.hpp"

namespace avd {

/// Which part of the construction assigned an edge its colour.
enum class StageTag : std::uint8_t {
    InitialProper,
    Reserved,
    GreedyFinish,
    SmallDeltaGreedy,
    LowDegreeFinish,
};

inline const char* to_string(StageTag t) {
    switch (t) {
        case StageTag::InitialProper: return "InitialProper";
        case StageTag::Reserved: return "Reserved";
        case StageTag::GreedyFinish: return "GreedyFinish";
        case StageTag::SmallDeltaGreedy: return "SmallDeltaGreedy";
        case StageTag::LowDegreeFinish: return "LowDegreeFinish";
    }
    return "?";
}

/// Per-edge optional colour plus the stage that assigned it.
class PartialColouring {
public:
    PartialColouring() = default;

    explicit PartialColouring(int edge_count)
        : colours_(static_cast<std::size_t>(edge_count), kNone),
          tags_(static_cast<std::size_t>(edge_count), StageTag::InitialProper) {}

    int edge_count() const { return static_cast<int>(colours_.size()); }

    void set(int e, colour_t c, StageTag tag) {
        check_edge(e);
        if (c < 0) throw InvalidInput("negative colour token");
        colours_[static_cast<std::size_t>(e)] = c;
        tags_[static_cast<std::size_t>(e)] = tag;
    }

    void unset(int e) {
        check_edge(e);
        colours_[static_cast<std::size_t>(e)] = kNone;
    }

    bool is_coloured(int e) const {
        check_edge(e);
        return colours_[static_cast<std::size_t>(e)] != kNone;
    }

    colour_t colour(int e) const {
        check_edge(e);
        return colours_[static_cast<std::size_t>(e)];
    }

    StageTag tag(int e) const {
        check_edge(e);
        return tags_[static_cast<std::size_t>(e)];
    }

    int coloured_count() const {
        int n = 0;
        for (colour_t c : colours_) n += (c != kNone);
        return n;
    }

    bool complete() const { return coloured_count() == edge_count(); }

private:
    static constexpr colour_t kNone = -1;

    void check_edge(int e) const {
        if (e < 0 || e >= edge_count()) {
            throw InvalidInput("colouring: edge id out of range: " + std::to_string(e));
        }
    }

    std::vector<colour_t> colours_;
    std::vector<StageTag> tags_;
};

/// Palette S_c(v): colours on coloured edges incident to v. Uncoloured
/// edges contribute nothing, so this is the partial palette for partial
/// colourings.
inline colour_set palette(const MultiGraph& g, const PartialColouring& c, int v) {
    g.check_vertex(v);
    colour_set out;
    for (int e : g.incident_edges(v)) {
        if (c.is_coloured(e)) out.push_back(c.colour(e));
    }
    return make_colour_set(std::move(out));
}

inline colour_set symmetric_difference(const colour_set& a, const colour_set& b) {
    colour_set out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

/// True iff no two distinct coloured edges sharing an endpoint carry the
/// same colour. Parallel edges count as adjacent.
inline bool is_proper(const MultiGraph& g, const PartialColouring& c) {
    for (int v = 0; v < g.vertex_count(); ++v) {
        const auto& inc = g.incident_edges(v);
        for (std::size_t i = 0; i < inc.size(); ++i) {
            if (!c.is_coloured(inc[i])) continue;
            for (std::size_t j = i + 1; j < inc.size(); ++j) {
                if (c.is_coloured(inc[j]) && c.colour(inc[i]) == c.colour(inc[j])) return false;
            }
        }
    }
    return true;
}

struct VerifyReport {
    /// Pairs of distinct coloured edges sharing an endpoint and a colour
    /// (lower id first, sorted, deduplicated).
    std::vector<std::pair<int, int>> proper_violations;
    /// Adjacent vertex pairs with equal palettes (lower id first, sorted,
    /// deduplicated over parallel edges).
    std::vector<std::pair<int, int>> avd_violations;
    /// Edges whose colour is not in their list, sorted.
    std::vector<int> list_violations;
    /// Uncoloured edges, sorted.
    std::vector<int> uncoloured;

    bool empty() const {
        return proper_violations.empty() && avd_violations.empty() && list_violations.empty() &&
               uncoloured.empty();
    }
};

/// Full audit of a (partial) colouring against the graph and lists. An
/// empty report means the colouring is a complete, proper, list-respecting
/// adjacent vertex distinguishing colouring.
inline VerifyReport verify(const MultiGraph& g, const ListAssignment& lists,
                           const PartialColouring& c) {
    if (lists.edge_count() != g.edge_count() || c.edge_count() != g.edge_count()) {
        throw InvalidInput("verify: edge counts of graph, lists and colouring disagree");
    }
    VerifyReport rep;

    for (int e = 0; e < g.edge_count(); ++e) {
        if (!c.is_coloured(e)) {
            rep.uncoloured.push_back(e);
        } else if (!lists.contains(e, c.colour(e))) {
            rep.list_violations.push_back(e);
        }
    }

    for (int v = 0; v < g.vertex_count(); ++v) {
        const auto& inc = g.incident_edges(v);
        for (std::size_t i = 0; i < inc.size(); ++i) {
            if (!c.is_coloured(inc[i])) continue;
            for (std::size_t j = i + 1; j < inc.size(); ++j) {
                if (c.is_coloured(inc[j]) && c.colour(inc[i]) == c.colour(inc[j])) {
                    rep.proper_violations.emplace_back(std::min(inc[i], inc[j]),
                                                       std::max(inc[i], inc[j]));
                }
            }
        }
    }
    std::sort(rep.proper_violations.begin(), rep.proper_violations.end());
    rep.proper_violations.erase(
        std::unique(rep.proper_violations.begin(), rep.proper_violations.end()),
        rep.proper_violations.end());

    std::vector<colour_set> pals(static_cast<std::size_t>(g.vertex_count()));
    for (int v = 0; v < g.vertex_count(); ++v) pals[static_cast<std::size_t>(v)] = palette(g, c, v);
    for (const auto& rec : g.edges()) {
        const int u = std::min(rec.u, rec.v);
        const int v = std::max(rec.u, rec.v);
        if (pals[static_cast<std::size_t>(u)] == pals[static_cast<std::size_t>(v)]) {
            rep.avd_violations.emplace_back(u, v);
        }
    }
    std::sort(rep.avd_violations.begin(), rep.avd_violations.end());
    rep.avd_violations.erase(std::unique(rep.avd_violations.begin(), rep.avd_violations.end()),
                             rep.avd_violations.end());
    return rep;
}

} // namespace avd
