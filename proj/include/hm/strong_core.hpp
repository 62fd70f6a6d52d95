#pragma once

#include <optional>
#include <set>
#include <vector>

#include "hm/market.hpp"
#include "hm/ttc.hpp"

// Strong-core construction for weak preferences: repeatedly take the
// most-preferred-edge subgraph of the surviving agents, extract its absorbing
// sets (strongly connected components without outgoing edges), and try to
// cover each with node-disjoint trading cycles.  The strong core is non-empty
// exactly when every absorbing set along the way admits such a cover.

namespace hm {

struct AbsorbingSet {
    std::vector<AgentId> nodes;                        // sorted
    std::vector<std::pair<AgentId, AgentId>> edges;    // most-preferred edges within nodes
    int round = 0;
};

struct CycleCover {
    std::vector<ExchangeCycle> cycles;
};

// Out-edge lists of the most-preferred subgraph of `sub` (an acceptability
// subgraph given as out-lists; agents with empty rows are treated as absent).
std::vector<std::vector<AgentId>> most_preferred_edges(
    const std::vector<std::vector<AgentId>>& sub, const PreferenceProfile& prefs);

// Sink components of the condensation of `top`.  Every non-empty graph whose
// nodes all have out-edges has at least one.
std::vector<AbsorbingSet> absorbing_sets(const std::vector<std::vector<AgentId>>& top,
                                         int round = 1);

// Some(cover) iff the set's bipartite agent/object graph has a perfect
// matching; the matching decoded back into cycles.
std::optional<CycleCover> cycle_cover(const AbsorbingSet& s);

// One strong-core allocation plus the certificate graph, or nullopt when some
// absorbing set has no cover.  All sink components of a round are removed
// together.
std::optional<std::pair<Allocation, TradeGraph>> strong_core(const Market& m);

// The full strong core via every cover selection; empty set when the strong
// core is empty.  Throws CoverExplosion past `cap` total selections (or 10^5
// covers within one absorbing set).
std::set<Allocation> enumerate_strong_core(const Market& m, long cap = 100'000);

}  // namespace hm
