// Strong-core construction: most-preferred subgraph, absorbing sets, cycle
// covers, emptiness detection, and full enumeration against the brute-force
// oracle.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "hm/errors.hpp"
#include "hm/instances.hpp"
#include "hm/market.hpp"
#include "hm/solver.hpp"
#include "hm/strong_core.hpp"
#include "hm/ttc.hpp"

using namespace hm;

namespace {

std::vector<std::vector<AgentId>> full_graph(const Market& m) {
    return acceptability_graph(m).out;
}

}  // namespace

TEST_CASE("most-preferred subgraph keeps exactly the top-tier edges") {
    // 1: 2 | 3 | own, 2: {1,3} | own, 3: 2 | 1 | own
    const Market m = fixture("sotomayor-wako").market;
    const auto top = most_preferred_edges(full_graph(m), m.prefs);
    REQUIRE(top.size() == 3);
    CHECK(top[0] == std::vector<AgentId>{1});
    CHECK(top[1] == std::vector<AgentId>{0, 2});
    CHECK(top[2] == std::vector<AgentId>{1});
}

TEST_CASE("absorbing sets are the sink components of the top graph") {
    const Market m = fixture("sotomayor-wako").market;
    const auto sets = absorbing_sets(most_preferred_edges(full_graph(m), m.prefs), 1);
    REQUIRE(sets.size() == 1);
    CHECK(sets[0].nodes == std::vector<AgentId>{0, 1, 2});
    CHECK(sets[0].edges.size() == 4);
    CHECK(sets[0].round == 1);

    // two rivals for one top object: both agents 1 and 3 need object 2
    CHECK_FALSE(cycle_cover(sets[0]).has_value());
}

TEST_CASE("a coverable absorbing set decodes into trading cycles") {
    const Market m = fixture("example1").market;
    const auto sets = absorbing_sets(most_preferred_edges(full_graph(m), m.prefs), 1);
    REQUIRE(sets.size() == 1);
    CHECK(sets[0].nodes == std::vector<AgentId>{0, 1, 2});

    const auto cover = cycle_cover(sets[0]);
    REQUIRE(cover.has_value());
    REQUIRE(cover->cycles.size() == 1);
    CHECK(cover->cycles[0] == ExchangeCycle{0, 2, 1});  // 1 takes 3's object, 3 takes 2's
}

TEST_CASE("strong core of the six-agent market") {
    const Fixture f = fixture("example1");
    const auto found = strong_core(f.market);
    REQUIRE(found.has_value());
    CHECK(found->first == from_cycles(6, {{1, 3, 2}}));
    // absorbing sets removed per round: {1,2,3}, then {4} and {6}, then {5}
    CHECK(found->second.round == std::vector<int>{1, 1, 1, 2, 3, 2});

    CHECK(enumerate_strong_core(f.market) == f.expected.at("strong-core"));
}

TEST_CASE("uncoverable absorbing set means an empty strong core") {
    const Fixture f = fixture("sotomayor-wako");
    CHECK_FALSE(strong_core(f.market).has_value());
    CHECK(enumerate_strong_core(f.market).empty());
    CHECK(f.expected.at("strong-core").empty());
}

TEST_CASE("strict preferences: the strong core is the ttc allocation") {
    for (std::uint64_t seed : {21, 22, 23, 24, 25, 26, 27, 28}) {
        GenConfig cfg;
        cfg.n = 7;
        cfg.edge_prob = 0.5;
        cfg.seed = seed;
        const Market m = random_market(cfg);
        const auto found = strong_core(m);
        REQUIRE(found.has_value());
        CHECK(found->first == ttc(m, identity_tie_break(m)).allocation);
        CHECK(enumerate_strong_core(m) == std::set<Allocation>{found->first});
    }
}

TEST_CASE("enumeration matches the brute-force oracle on weak-preference markets") {
    int nonempty = 0;
    for (std::uint64_t seed = 31; seed < 51; ++seed) {
        GenConfig cfg;
        cfg.n = 6;
        cfg.edge_prob = 0.55;
        cfg.ties = true;
        cfg.seed = seed;
        const Market m = random_market(cfg);
        const auto sc = enumerate_strong_core(m);
        CHECK(sc == oracle(m, Concept::StrongCore));
        CHECK(strong_core(m).has_value() == !sc.empty());
        if (!sc.empty()) ++nonempty;
    }
    CHECK(nonempty > 0);  // the family exercises both branches
}

TEST_CASE("all strong-core allocations are welfare equivalent") {
    for (std::uint64_t seed = 61; seed < 76; ++seed) {
        GenConfig cfg;
        cfg.n = 7;
        cfg.edge_prob = 0.6;
        cfg.ties = true;
        cfg.seed = seed;
        const Market m = random_market(cfg);
        const auto sc = enumerate_strong_core(m);
        for (const auto& a : sc)
            for (const auto& b : sc) CHECK(welfare_equivalent(m, a, b));
    }
}

TEST_CASE("cover enumeration refuses to explode") {
    // eight agents, everyone indifferent among all foreign objects: every
    // derangement is a cover selection
    std::vector<std::vector<std::vector<int>>> tiers(8);
    for (int i = 0; i < 8; ++i) {
        tiers[i].emplace_back();
        for (int j = 1; j <= 8; ++j)
            if (j != i + 1) tiers[i][0].push_back(j);
    }
    const Market m = market_from_tiers(8, tiers);
    CHECK_THROWS_AS(enumerate_strong_core(m, 1000), CoverExplosion);
}
