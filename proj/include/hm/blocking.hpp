#pragma once

#include <optional>
#include <set>
#include <vector>

#include "hm/market.hpp"

// Blocking-cycle search.  A coalition blocks by re-trading along a cycle of
// the acceptability graph; checking cycles up to length n is exact for the
// unbounded concepts, and up to length k for the k-bounded ones.

namespace hm {

enum class BlockMode {
    Strict,       // every member strictly better off
    Weak,         // all weakly better, at least one strictly
    AntisymWeak,  // weak, and indifferent members keep their current object
};

struct BlockReport {
    std::vector<ExchangeCycle> cycles;
    std::set<AgentId> improvable;  // strictly better off in >= 1 reported cycle
};

// All blocking cycles of length 2..l under `mode`, deduplicated up to
// rotation (every cycle starts at its smallest member).  Throws
// SearchLimitExceeded after `limit` visited partial paths.
BlockReport find_blocking_cycles(const Market& m, const Allocation& x, int l, BlockMode mode,
                                 long limit = 10'000'000);

// First blocking cycle found, or nullopt; same search, early exit.
std::optional<ExchangeCycle> first_blocking_cycle(const Market& m, const Allocation& x, int l,
                                                  BlockMode mode, long limit = 10'000'000);

// Membership tests.  k bounds both the allocation's cycles and the blocking
// coalitions; omitted k means unbounded.  Throw NotKAllocation when x has a
// cycle longer than k.
bool in_core(const Market& m, const Allocation& x, std::optional<int> k = std::nullopt);
bool in_wako_core(const Market& m, const Allocation& x, std::optional<int> k = std::nullopt);
bool in_strong_core(const Market& m, const Allocation& x, std::optional<int> k = std::nullopt);

}  // namespace hm
