#pragma once

#include <set>
#include <vector>

#include "hm/market.hpp"

// Top trading cycles over a strict linearization of the preferences, plus the
// trade certificate graph the run leaves behind: cycle edges connect members
// of removed cycles, pointing edges record who was pointing at a cycle from
// outside when it was removed.  Rounds are 1-based removal times.

namespace hm {

// A strict per-agent order over the acceptable objects (best first) that
// refines the market's weak preferences.
struct TieBreak {
    std::vector<std::vector<AgentId>> order;
};

// Ties broken towards the smaller object id.
TieBreak identity_tie_break(const Market& m);

// Validates that `order` refines m's preferences (throws std::invalid_argument).
TieBreak tie_break_from_orders(const Market& m, std::vector<std::vector<AgentId>> order);

struct TradeGraph {
    int n = 0;
    Allocation allocation;
    std::vector<std::pair<AgentId, AgentId>> cycle_edges;
    std::vector<std::pair<AgentId, AgentId>> pointing_edges;
    std::vector<int> round;
};

enum class Relation { Independent, CycleMembers, PredecessorOf, SuccessorOf };

// One top cycle is removed per iteration; among the simultaneous top cycles
// the one containing the smallest agent id goes first.
TradeGraph ttc(const Market& m, const TieBreak& tb);

// All distinct ttc outcomes over every linearization of the ties; with strict
// preferences this is a singleton.  Throws TieBreakExplosion past `cap`.
std::set<Allocation> competitive_set_by_tiebreak(const Market& m, long cap = 1'000'000);

// How the removal of i relates to the removal of j in a completed run:
// same removed cycle, i upstream of j (a path i -> j uses a pointing edge),
// the reverse, or neither.
Relation classify(const TradeGraph& g, AgentId i, AgentId j);

}  // namespace hm
