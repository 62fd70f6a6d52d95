#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hm/market.hpp"

// Random instance generation (bit-reproducible across platforms) and the
// small library of named markets with documented solution sets used
// throughout the tests and docs.

namespace hm {

struct GenConfig {
    int n = 10;
    double edge_prob = 0.3;  // each ordered non-self pair independently, (0, 1]
    bool ties = false;       // weak orders via utility bucketing
    std::uint64_t seed = 0;
};

// Draws from std::mt19937_64(seed) with the fixed mapping
// u = (rng() >> 11) * 2^-53 (uniform in [0,1), redrawn while u == 0).  For
// each agent i = 0..n-1 and object j = 0..n-1, j != i, in that order: one
// draw decides presence (u < edge_prob), and if present one more draw is the
// edge weight.  Strict preferences rank an agent's acceptable objects by
// descending weight (an exact within-agent collision redraws the later
// weight); with `ties`, objects whose weights share the length-1/n interval
// [b/n, (b+1)/n) form one indifference tier and tiers are ordered by
// descending interval.  The drawn weights are the market's edge weights
// either way.
Market random_market(const GenConfig& cfg);

// Build a market from 1-based tier lists (best tier first, own object
// implicit and ranked strictly last).  Weights derived from ranks.
Market market_from_tiers(int n, const std::vector<std::vector<std::vector<int>>>& tiers);

// Allocation from 1-based trading cycles; agents not mentioned keep their own
// object.
Allocation from_cycles(int n, const std::vector<std::vector<int>>& cycles);

// A named market plus its documented solution sets, keyed by concept name
// ("core", "competitive", "strong-core", "max-size", "3-core", "2-core",
// "2-strong-core", ...).  Only sets with a documented exact answer appear.
struct Fixture {
    Market market;
    std::map<std::string, std::set<Allocation>> expected;
};

// Throws std::invalid_argument for an unknown name.
Fixture fixture(const std::string& name);
std::vector<std::string> fixture_names();

}  // namespace hm
