#include <catch2/catch_amalgamated.hpp>

#include "avd/colouring.hpp"
#include "avd/generate.hpp"
#include "avd/multigraph.hpp"
#include "avd/oracle.hpp"
#include "avd/reduction.hpp"
#include "avd/rng.hpp"

using namespace avd;

namespace {

MultiGraph path3() { return MultiGraph::from_edges(3, {{0, 1}, {1, 2}}); }

PartialColouring coloured(const MultiGraph& g, const std::vector<colour_t>& colours) {
    PartialColouring c(g.edge_count());
    for (int e = 0; e < static_cast<int>(colours.size()); ++e) {
        if (colours[static_cast<std::size_t>(e)] >= 0) {
            c.set(e, colours[static_cast<std::size_t>(e)], StageTag::SmallDeltaGreedy);
        }
    }
    return c;
}

} // namespace

TEST_CASE("multigraph invariants") {
    MultiGraph g(3);
    g.add_edge(0, 1);
    g.add_edge(0, 1);
    REQUIRE_THROWS_AS(g.add_edge(0, 1), InvalidInput); // multiplicity capped at 2
    REQUIRE_THROWS_AS(g.add_edge(1, 1), InvalidInput); // no self-loops
    REQUIRE(g.degree(0) == 2);                         // parallel edges both count
    REQUIRE(g.multiplicity(1, 0) == 2);
    REQUIRE(g.neighbours(0) == std::vector<int>{1});
}

TEST_CASE("isolated edge detection") {
    REQUIRE(MultiGraph::from_edges(2, {{0, 1}}).has_isolated_edge());
    REQUIRE(MultiGraph::from_edges(4, {{0, 1}, {2, 3}}).has_isolated_edge());
    REQUIRE_FALSE(path3().has_isolated_edge());
    // a double edge forming its own component is just as indistinguishable
    REQUIRE(MultiGraph::from_edges(2, {{0, 1}, {0, 1}}).has_isolated_edge());
    // isolated vertices are ignored
    REQUIRE_FALSE(MultiGraph::from_edges(5, {{0, 1}, {1, 2}}).has_isolated_edge());
}

TEST_CASE("palette") {
    const MultiGraph g = path3();
    const auto c = coloured(g, {1, 2});
    REQUIRE(palette(g, c, 1) == colour_set{1, 2});
    REQUIRE(palette(g, c, 0) == colour_set{1});
    REQUIRE(palette(g, PartialColouring(g.edge_count()), 1).empty());

    const MultiGraph dbl = MultiGraph::from_edges(3, {{0, 1}, {0, 1}, {1, 2}});
    const auto cd = coloured(dbl, {1, 3, 2});
    REQUIRE(palette(dbl, cd, 0) == colour_set{1, 3});

    REQUIRE_THROWS_AS(palette(g, c, 7), InvalidInput);
}

TEST_CASE("symmetric difference") {
    REQUIRE(symmetric_difference({1, 2}, {2, 3}) == colour_set{1, 3});
    REQUIRE(symmetric_difference({4, 5, 6}, {4, 5, 6}).empty());
    REQUIRE(symmetric_difference({1}, {}) == colour_set{1});
}

TEST_CASE("symmetric difference properties") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        colour_set a, b;
        for (int x = 0; x < 20; ++x) {
            if (rng.bernoulli(0.4)) a.push_back(x);
            if (rng.bernoulli(0.4)) b.push_back(x);
        }
        const auto ab = symmetric_difference(a, b);
        REQUIRE(ab == symmetric_difference(b, a));
        const auto inter = set_intersection(a, b);
        REQUIRE(ab.size() == a.size() + b.size() - 2 * inter.size());
    }
}

TEST_CASE("is_proper") {
    const MultiGraph k3 = gen_complete(3);
    REQUIRE(is_proper(k3, coloured(k3, {1, 2, 3})));

    const MultiGraph g = path3();
    REQUIRE_FALSE(is_proper(g, coloured(g, {1, 1})));

    const MultiGraph dbl = MultiGraph::from_edges(2, {{0, 1}, {0, 1}});
    REQUIRE_FALSE(is_proper(dbl, coloured(dbl, {1, 1})));
    REQUIRE(is_proper(dbl, coloured(dbl, {1, 2})));
    // partial colourings allowed
    REQUIRE(is_proper(g, coloured(g, {1, -1})));
}

TEST_CASE("verify examples") {
    const MultiGraph g = path3();
    ListAssignment lists = ListAssignment::uniform(2, {1, 2, 3});

    SECTION("clean path colouring") {
        const auto rep = verify(g, lists, coloured(g, {1, 2}));
        REQUIRE(rep.empty());
    }
    SECTION("C4 alternating palettes collide everywhere") {
        const MultiGraph c4 = gen_cycle(4);
        const auto rep = verify(c4, ListAssignment::uniform(4, {1, 2}), coloured(c4, {1, 2, 1, 2}));
        REQUIRE(rep.proper_violations.empty());
        REQUIRE(rep.avd_violations ==
                std::vector<std::pair<int, int>>{{0, 1}, {0, 3}, {1, 2}, {2, 3}});
    }
    SECTION("missing edge is reported") {
        const auto rep = verify(g, lists, coloured(g, {1, -1}));
        REQUIRE(rep.uncoloured == std::vector<int>{1});
    }
    SECTION("off-list colour is reported") {
        const auto rep = verify(g, lists, coloured(g, {1, 9}));
        REQUIRE(rep.list_violations == std::vector<int>{1});
    }
}

TEST_CASE("complete proper colourings: palette size equals degree") {
    Rng rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 5 + static_cast<int>(rng.below(6));
        const int m = std::min<int>(18, n + static_cast<int>(rng.below(8)));
        MultiGraph g;
        try {
            g = gen_random_gnm(n, m, rng);
        } catch (const InvalidInput&) {
            continue;
        }
        // big uniform lists make the greedy AVD colouring trivially feasible
        colour_set big;
        for (int x = 0; x < 200; ++x) big.push_back(x);
        const auto lists = ListAssignment::uniform(g.edge_count(), big);
        const auto c = greedy_small_delta(g, lists);
        REQUIRE(verify(g, lists, c).empty());
        for (int v = 0; v < g.vertex_count(); ++v) {
            REQUIRE(static_cast<int>(palette(g, c, v).size()) == g.degree(v));
        }
        // unequal degrees never collide in a complete proper colouring
        const auto rep = verify(g, lists, c);
        for (const auto& [u, v] : rep.avd_violations) {
            REQUIRE(g.degree(u) == g.degree(v));
        }
    }
}

TEST_CASE("verify agrees with the independent naive implementation") {
    Rng rng(23);
    int done = 0;
    for (int trial = 0; done < 60 && trial < 200; ++trial) {
        const int n = 4 + static_cast<int>(rng.below(5));
        const int m = std::min<int>(14, 3 + static_cast<int>(rng.below(10)));
        MultiGraph g;
        try {
            g = gen_random_gnm(n, m, rng);
        } catch (const InvalidInput&) {
            continue;
        }
        ++done;
        const auto lists = gen_random_lists(g.edge_count(), 4, 9, rng);
        PartialColouring c(g.edge_count());
        for (int e = 0; e < g.edge_count(); ++e) {
            if (rng.bernoulli(0.85)) {
                const colour_t x = rng.bernoulli(0.8)
                                       ? lists.list(e)[rng.below(lists.list(e).size())]
                                       : static_cast<colour_t>(rng.below(9));
                c.set(e, x, StageTag::SmallDeltaGreedy);
            }
        }
        const auto a = verify(g, lists, c);
        const auto b = naive_verify(g, lists, c);
        REQUIRE(a.proper_violations == b.proper_violations);
        REQUIRE(a.avd_violations == b.avd_violations);
        REQUIRE(a.list_violations == b.list_violations);
        REQUIRE(a.uncoloured == b.uncoloured);
    }
    REQUIRE(done >= 40);
}
