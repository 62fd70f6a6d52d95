// Top trading cycles, tie-break handling, the trade certificate graph, and
// the tie-break enumeration of the competitive set.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <stdexcept>

#include "hm/blocking.hpp"
#include "hm/errors.hpp"
#include "hm/instances.hpp"
#include "hm/solver.hpp"
#include "hm/ttc.hpp"

using namespace hm;

TEST_CASE("identity tie-break lists acceptable objects best-first, ties by id") {
    const Market m = fixture("example1").market;
    const TieBreak tb = identity_tie_break(m);
    REQUIRE(tb.order.size() == 6);
    CHECK(tb.order[0] == std::vector<AgentId>{1, 2, 4, 0});  // ties {2,3} resolved toward 2
    CHECK(tb.order[5] == std::vector<AgentId>{0, 5});
}

TEST_CASE("tie-break validation") {
    const Market m = fixture("example1").market;

    // swapping the tied pair of agent 1 is a legal refinement
    auto order = identity_tie_break(m).order;
    std::swap(order[0][0], order[0][1]);
    CHECK_NOTHROW(tie_break_from_orders(m, order));

    // putting a strictly worse object first is not
    auto bad = identity_tie_break(m).order;
    std::swap(bad[0][0], bad[0][2]);  // object 5 ahead of the top tier
    CHECK_THROWS_AS(tie_break_from_orders(m, bad), std::invalid_argument);

    // dropping an acceptable object is not
    auto missing = identity_tie_break(m).order;
    missing[0].pop_back();
    CHECK_THROWS_AS(tie_break_from_orders(m, missing), std::invalid_argument);

    auto short_list = identity_tie_break(m).order;
    short_list.pop_back();
    CHECK_THROWS_AS(tie_break_from_orders(m, short_list), std::invalid_argument);
}

TEST_CASE("ttc run on the six-agent market under the identity tie-break") {
    const Market m = fixture("example1").market;
    const TradeGraph g = ttc(m, identity_tie_break(m));

    CHECK(g.allocation == from_cycles(6, {{1, 2}, {3, 4}}));
    // removal order: (1,2), then (3,4), then 6 alone, then 5 alone
    CHECK(g.round == std::vector<int>{1, 1, 2, 2, 4, 3});
    // agent 5 was pointing at 6 when 6's self-cycle was removed
    const std::pair<AgentId, AgentId> p{4, 5};
    CHECK(std::count(g.pointing_edges.begin(), g.pointing_edges.end(), p) == 1);
}

TEST_CASE("ttc outcome flips with the tie-break") {
    const Market m = fixture("example1").market;
    auto order = identity_tie_break(m).order;
    std::swap(order[0][0], order[0][1]);  // agent 1 now points at 3 first
    const TradeGraph g = ttc(m, tie_break_from_orders(m, order));
    CHECK(g.allocation == from_cycles(6, {{1, 3, 2}}));  // x^a
}

TEST_CASE("certificate graph classification") {
    // 1: 2 | own; 2: 1 | 3 | own; 3: 1 | 4 | own; 4: own only
    const Market m = fixture("triangle-or-pairs").market;
    const TradeGraph g = ttc(m, identity_tie_break(m));

    CHECK(g.allocation == from_cycles(4, {{1, 2}}));
    CHECK(g.round == std::vector<int>{1, 1, 3, 2});

    CHECK(classify(g, 0, 1) == Relation::CycleMembers);
    CHECK(classify(g, 1, 0) == Relation::CycleMembers);
    CHECK(classify(g, 2, 0) == Relation::PredecessorOf);  // 3 pointed at 1's cycle
    CHECK(classify(g, 0, 2) == Relation::SuccessorOf);
    CHECK(classify(g, 2, 3) == Relation::PredecessorOf);  // then at 4's self-cycle
    CHECK(classify(g, 3, 0) == Relation::Independent);
    CHECK_THROWS_AS(classify(g, 1, 1), std::invalid_argument);
}

TEST_CASE("tie-break enumeration reproduces the documented competitive set") {
    const Fixture f = fixture("example1");
    CHECK(competitive_set_by_tiebreak(f.market) == f.expected.at("competitive"));
}

TEST_CASE("strict markets: single competitive allocation, equal to the ttc outcome") {
    for (std::uint64_t seed : {1, 2, 3, 4, 5, 6, 7, 8}) {
        GenConfig cfg;
        cfg.n = 6;
        cfg.edge_prob = 0.5;
        cfg.seed = seed;
        const Market m = random_market(cfg);
        REQUIRE(m.prefs.is_strict());
        const Allocation x = ttc(m, identity_tie_break(m)).allocation;

        const auto comp = competitive_set_by_tiebreak(m);
        CHECK(comp == std::set<Allocation>{x});
        CHECK(oracle(m, Concept::Competitive) == comp);
        CHECK(oracle(m, Concept::StrongCore) == comp);
    }
}

TEST_CASE("every tie-break outcome is individually rational and in the weak-preference core") {
    for (std::uint64_t seed : {11, 12, 13, 14, 15, 16}) {
        GenConfig cfg;
        cfg.n = 7;
        cfg.edge_prob = 0.5;
        cfg.ties = true;
        cfg.seed = seed;
        const Market m = random_market(cfg);
        for (const Allocation& x : competitive_set_by_tiebreak(m)) {
            CHECK(is_individually_rational(m, x));
            CHECK(in_core(m, x));
        }
    }
}

TEST_CASE("tie-break enumeration refuses to explode") {
    // 9 agents all indifferent among everything: 8!^9 linearizations
    std::vector<std::vector<std::vector<int>>> tiers(9);
    for (int i = 0; i < 9; ++i) {
        tiers[i].emplace_back();
        for (int j = 1; j <= 9; ++j)
            if (j != i + 1) tiers[i][0].push_back(j);
    }
    const Market m = market_from_tiers(9, tiers);
    CHECK_THROWS_AS(competitive_set_by_tiebreak(m, 1000), TieBreakExplosion);
}

TEST_CASE("competitive set of the two-market improvement pair") {
    const Fixture before = fixture("example2-R");
    const Fixture after = fixture("example2-Rtilde");
    CHECK(competitive_set_by_tiebreak(before.market) == before.expected.at("competitive"));
    CHECK(competitive_set_by_tiebreak(after.market) == after.expected.at("competitive"));
}
