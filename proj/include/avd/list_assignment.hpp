#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "avd/errors.hpp"

namespace avd {

using colour_t = int;

/// Sorted vector of distinct colour tokens.
using colour_set = std::vector<colour_t>;

inline colour_set make_colour_set(std::vector<colour_t> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline bool set_contains(const colour_set& s, colour_t c) {
    return std::binary_search(s.begin(), s.end(), c);
}

inline colour_set set_union(const colour_set& a, const colour_set& b) {
    colour_set out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline colour_set set_intersection(const colour_set& a, const colour_set& b) {
    colour_set out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline colour_set set_difference(const colour_set& a, const colour_set& b) {
    colour_set out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

/// One colour list per edge. Colours are opaque non-negative tokens; lists
/// may differ arbitrarily between edges.
class ListAssignment {
public:
    ListAssignment() = default;

    explicit ListAssignment(int edge_count)
        : lists_(static_cast<std::size_t>(edge_count)) {}

    static ListAssignment uniform(int edge_count, colour_set list) {
        ListAssignment la(edge_count);
        for (int e = 0; e < edge_count; ++e) la.set_list(e, list);
        return la;
    }

    void set_list(int e, colour_set list) {
        check_edge(e);
        for (colour_t c : list) {
            if (c < 0) throw InvalidInput("negative colour token in list of edge " + std::to_string(e));
        }
        lists_[static_cast<std::size_t>(e)] = make_colour_set(std::move(list));
    }

    const colour_set& list(int e) const {
        check_edge(e);
        return lists_[static_cast<std::size_t>(e)];
    }

    int edge_count() const { return static_cast<int>(lists_.size()); }

    bool contains(int e, colour_t c) const { return set_contains(list(e), c); }

    int min_size() const {
        if (lists_.empty()) return 0;
        std::size_t m = lists_.front().size();
        for (const auto& l : lists_) m = std::min(m, l.size());
        return static_cast<int>(m);
    }

    /// List size if all lists are equal-sized, otherwise nullopt.
    std::optional<int> uniform_size() const {
        if (lists_.empty()) return 0;
        const std::size_t s = lists_.front().size();
        for (const auto& l : lists_) {
            if (l.size() != s) return std::nullopt;
        }
        return static_cast<int>(s);
    }

    /// Sorted union of all lists.
    colour_set universe() const {
        colour_set out;
        for (const auto& l : lists_) {
            colour_set next = set_union(out, l);
            out.swap(next);
        }
        return out;
    }

private:
    void check_edge(int e) const {
        if (e < 0 || e >= edge_count()) {
            throw InvalidInput("list for unknown edge id " + std::to_string(e));
        }
    }

    std::vector<colour_set> lists_;
};

} // namespace avd
