// Market primitives: validation, cycle decomposition, allocation measures,
// and the JSON instance format.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>

#include "hm/instances.hpp"
#include "hm/json_io.hpp"
#include "hm/market.hpp"

using namespace hm;

namespace {

// 1: 23|5, 2: 1|3, 3: 2|4, 4: 3|2, 5: 2|6, 6: 1  (tiers, best first)
Market six_agent_market() {
    return market_from_tiers(6, {{{2, 3}, {5}},
                                 {{1}, {3}},
                                 {{2}, {4}},
                                 {{3}, {2}},
                                 {{2}, {6}},
                                 {{1}}});
}

}  // namespace

TEST_CASE("tier construction produces a valid market") {
    const Market m = six_agent_market();
    CHECK(validate(m).empty());
    CHECK(m.n() == 6);

    // agent 1 is indifferent between objects 2 and 3, both above 5, own last
    CHECK(m.prefs.indifferent(0, 1, 2));
    CHECK(m.prefs.strictly_prefers(0, 1, 4));
    CHECK(m.prefs.strictly_prefers(0, 4, 0));
    CHECK_FALSE(m.prefs.acceptable(0, 3));
    CHECK_FALSE(m.prefs.is_strict());

    const auto tiers1 = m.prefs.tiers(0);
    REQUIRE(tiers1.size() == 3);
    CHECK(tiers1[0] == std::vector<AgentId>{1, 2});
    CHECK(tiers1[1] == std::vector<AgentId>{4});
    CHECK(tiers1[2] == std::vector<AgentId>{0});

    // agent 6 finds only its own object acceptable
    CHECK(m.prefs.acceptable_objects(5) == std::vector<AgentId>{0, 5});
}

TEST_CASE("tier construction rejects bad ids") {
    CHECK_THROWS_AS(market_from_tiers(3, {{{4}}, {}, {}}), std::invalid_argument);
    CHECK_THROWS_AS(market_from_tiers(3, {{{2}, {2}}, {}, {}}), std::invalid_argument);
    CHECK_THROWS_AS(market_from_tiers(3, {{{1}}, {}, {}}), std::invalid_argument);  // own id listed
}

TEST_CASE("validate flags structural problems") {
    Market m = six_agent_market();

    SUBCASE("clean") { CHECK(validate(m).empty()); }

    SUBCASE("missing self rank") {
        m.prefs.rank[2][2].reset();
        const auto v = validate(m);
        REQUIRE(v.size() >= 1);
        CHECK(v[0].code == "missing-self-rank");
    }

    SUBCASE("own object not strictly worst") {
        m.prefs.rank[1][1] = *m.prefs.rank[1][0];  // own ties with best
        const auto v = validate(m);
        REQUIRE(v.size() == 2);  // one report per no-longer-worse object
        CHECK(v[0].code == "self-not-worst");
        CHECK(v[1].code == "self-not-worst");
    }

    SUBCASE("weight missing for an acceptable edge") {
        m.weight.erase({0, 1});
        const auto v = validate(m);
        REQUIRE(v.size() == 1);
        CHECK(v[0].code == "missing-weight");
    }

    SUBCASE("weight outside (0,1)") {
        m.weight[{0, 1}] = 1.0;
        const auto v = validate(m);
        REQUIRE(v.size() == 1);
        CHECK(v[0].code == "weight-out-of-range");
    }

    SUBCASE("weight on a non-edge") {
        m.weight[{0, 3}] = 0.5;
        const auto v = validate(m);
        REQUIRE(v.size() == 1);
        CHECK(v[0].code == "stray-weight");
    }

    SUBCASE("ragged rank matrix") {
        m.prefs.rank[4].pop_back();
        const auto v = validate(m);
        REQUIRE(v.size() == 1);
        CHECK(v[0].code == "ragged-rank-matrix");
    }
}

TEST_CASE("acceptability graph carries self-loops and every acceptable edge") {
    const Market m = six_agent_market();
    const AcceptabilityGraph g = acceptability_graph(m);
    CHECK(g.n == 6);
    // 12 non-self edges + 6 self-loops
    CHECK(g.edge_count() == 18);
    CHECK(g.has_edge(0, 1));
    CHECK(g.has_edge(0, 0));
    CHECK_FALSE(g.has_edge(0, 3));
    CHECK(g.edges().size() == 18);
}

TEST_CASE("decompose and recompose are inverse") {
    const Allocation x{{2, 0, 1, 3, 5, 4}};  // (1 3 2)(4)(5 6)
    const auto cycles = decompose(x);
    REQUIRE(cycles.size() == 3);
    CHECK(cycles[0] == ExchangeCycle{0, 2, 1});
    CHECK(cycles[1] == ExchangeCycle{3});
    CHECK(cycles[2] == ExchangeCycle{4, 5});
    CHECK(recompose(6, cycles) == x);

    // agents missing from the cycle list keep their own object
    CHECK(recompose(4, {{1, 2}}) == Allocation{{0, 2, 1, 3}});
}

TEST_CASE("decompose rejects non-permutations") {
    CHECK_THROWS_AS(decompose(Allocation{{0, 0, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(decompose(Allocation{{0, 3, 2}}), std::invalid_argument);
}

TEST_CASE("allocation measures") {
    const Market m = six_agent_market();
    const Allocation id{{0, 1, 2, 3, 4, 5}};
    const Allocation x = from_cycles(6, {{1, 3, 2}});  // 1->3's object? (1 3 2): 1 gets 3, 3 gets 2, 2 gets 1

    CHECK(allocation_size(id) == 0);
    CHECK(allocation_size(x) == 3);
    CHECK(allocation_weight(m, id) == doctest::Approx(0.0));
    CHECK(allocation_weight(m, x) ==
          doctest::Approx(m.edge_weight(0, 2) + m.edge_weight(2, 1) + m.edge_weight(1, 0)));

    CHECK(is_individually_rational(m, id));
    CHECK(is_individually_rational(m, x));
    // agent 1 cannot consume object 4
    CHECK_FALSE(is_individually_rational(m, from_cycles(6, {{1, 4}})));

    CHECK(is_k_allocation(x, 3));
    CHECK_FALSE(is_k_allocation(x, 2));
    CHECK(is_k_allocation(id, 1));
}

TEST_CASE("welfare equivalence is indifference everywhere") {
    const Market m = six_agent_market();
    const Allocation a = from_cycles(6, {{1, 3, 2}});
    const Allocation b = from_cycles(6, {{1, 2}, {3, 4}});
    // agent 1 is indifferent between objects 2 and 3; agents 2 and 3 both move
    // between their two tiers, so a and b are not welfare equivalent
    CHECK(welfare_equivalent(m, a, a));
    CHECK_FALSE(welfare_equivalent(m, a, b));

    // swapping which tied object agent 1 receives keeps everyone indifferent
    Market tied = market_from_tiers(3, {{{2, 3}}, {{1}}, {{1}}});
    (void)tied;
    const Allocation p = from_cycles(3, {{1, 2}});
    const Allocation q = from_cycles(3, {{1, 3}});
    CHECK(welfare_equivalent(tied, p, p));
    CHECK_FALSE(welfare_equivalent(tied, p, q));  // agents 2,3 swap own/foreign
}

TEST_CASE("market JSON round-trip preserves ranks and weights") {
    const Market m = six_agent_market();
    const Market back = market_from_json(market_to_json(m));
    CHECK(back.prefs.rank == m.prefs.rank);
    CHECK(back.weight == m.weight);
}

TEST_CASE("instance JSON without weights derives them from ranks") {
    const nlohmann::json j = {{"n", 3}, {"prefs", {{{2}, {3}}, {{1}}, nlohmann::json::array()}}};
    const Market m = market_from_json(j);
    CHECK(validate(m).empty());
    CHECK(m.prefs.acceptable(0, 1));
    CHECK(m.prefs.strictly_prefers(0, 1, 2));
    CHECK(m.edge_weight(0, 1) == doctest::Approx(derived_weight(1, 3)));
    CHECK(m.edge_weight(0, 2) == doctest::Approx(derived_weight(2, 3)));
    CHECK(m.edge_weight(1, 0) == doctest::Approx(derived_weight(1, 3)));
    // better rank, larger weight, all inside (0,1)
    CHECK(derived_weight(1, 3) > derived_weight(2, 3));
    CHECK(derived_weight(1, 3) < 1.0);
    CHECK(derived_weight(3, 3) > 0.0);
}

TEST_CASE("allocation JSON accepts cycle and allot spellings") {
    const Allocation x = from_cycles(5, {{1, 3, 2}, {4, 5}});
    const nlohmann::json j = allocation_to_json(x);
    REQUIRE(j.contains("cycles"));
    CHECK(allocation_from_json(j, 5) == x);

    const nlohmann::json direct = {{"allot", {3, 1, 2, 5, 4}}};
    CHECK(allocation_from_json(direct, 5) == x);

    // out-of-range and non-permutation inputs are rejected
    CHECK_THROWS(allocation_from_json(nlohmann::json{{"cycles", {{1, 6}}}}, 5));
    CHECK_THROWS(allocation_from_json(nlohmann::json{{"allot", {1, 1, 3, 4, 5}}}, 5));
}

TEST_CASE("file save and load round-trip") {
    const Market m = six_agent_market();
    const std::string path = "market_roundtrip_tmp.json";
    save_market(m, path);
    const Market back = load_market(path);
    CHECK(back.prefs.rank == m.prefs.rank);
    CHECK(back.weight == m.weight);
    std::remove(path.c_str());
}
