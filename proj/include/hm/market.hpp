#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

// Housing-market primitives: agents 0..n-1, each endowed with the object of
// the same index.  Preferences are weak orders over acceptable objects,
// encoded as integer ranks (smaller = better, equal = indifferent).  An
// agent's own object is always acceptable and, by construction of every
// loader in this library, ranked strictly below all other acceptable objects.

namespace hm {

using AgentId = int;

// rank[i][j] = position of object j in agent i's weak order, or nullopt when
// j is unacceptable to i.  rank[i][i] is always present.
struct PreferenceProfile {
    std::vector<std::vector<std::optional<int>>> rank;

    int n() const { return static_cast<int>(rank.size()); }

    bool acceptable(AgentId i, AgentId j) const { return rank[i][j].has_value(); }

    // j weakly preferred to k by agent i.  Both must be acceptable.
    bool weakly_prefers(AgentId i, AgentId j, AgentId k) const {
        return *rank[i][j] <= *rank[i][k];
    }
    bool strictly_prefers(AgentId i, AgentId j, AgentId k) const {
        return *rank[i][j] < *rank[i][k];
    }
    bool indifferent(AgentId i, AgentId j, AgentId k) const {
        return *rank[i][j] == *rank[i][k];
    }

    // No two distinct acceptable objects share a rank anywhere.
    bool is_strict() const;

    // Acceptable objects of agent i sorted by (rank, id); own object included.
    std::vector<AgentId> acceptable_objects(AgentId i) const;

    // Tiers of agent i from best to worst; own object included.
    std::vector<std::vector<AgentId>> tiers(AgentId i) const;
};

struct Market {
    PreferenceProfile prefs;
    // weight[{i,j}] for every acceptable pair i != j, each in (0, 1).
    std::map<std::pair<AgentId, AgentId>, double> weight;

    int n() const { return prefs.n(); }
    double edge_weight(AgentId i, AgentId j) const { return weight.at({i, j}); }
};

// Directed acceptability graph: (i, j) present iff j is acceptable to i.
// Self-loops are always present.
struct AcceptabilityGraph {
    int n = 0;
    std::vector<std::vector<AgentId>> out;  // sorted out-neighbourhoods, self included

    bool has_edge(AgentId i, AgentId j) const;
    std::vector<std::pair<AgentId, AgentId>> edges() const;  // lexicographic
    int edge_count() const;
};

// An allocation is a permutation of 0..n-1; allot[i] is the object agent i
// consumes.  Cycle structure is recovered with decompose().
struct Allocation {
    std::vector<AgentId> allot;

    int n() const { return static_cast<int>(allot.size()); }
    AgentId operator[](AgentId i) const { return allot[i]; }
    bool operator==(const Allocation&) const = default;
    bool operator<(const Allocation& o) const { return allot < o.allot; }
};

// One trading cycle (i1 i2 ... ik): agent i1 consumes i2's object, ..., ik
// consumes i1's.  Canonical form starts at the smallest member.
using ExchangeCycle = std::vector<AgentId>;

struct Violation {
    std::string code;    // e.g. "not-permutation", "missing-self-rank"
    std::string detail;  // human-readable, 1-based ids
};

// Structural checks: rank matrix square, self ranks present and strictly
// worst, weights exactly on the non-self acceptable pairs and inside (0,1).
std::vector<Violation> validate(const Market& m);

AcceptabilityGraph acceptability_graph(const Market& m);

// Cycle decomposition in canonical order: each cycle starts at its smallest
// agent, cycles sorted by that agent.  Throws std::invalid_argument when
// allot is not a permutation.
std::vector<ExchangeCycle> decompose(const Allocation& x);

// Inverse of decompose; agents absent from every cycle keep their own object.
Allocation recompose(int n, const std::vector<ExchangeCycle>& cycles);

// Every agent's allotment acceptable to them.
bool is_individually_rational(const Market& m, const Allocation& x);

// All exchange cycles have length <= k (self-loops count as length 1).
bool is_k_allocation(const Allocation& x, int k);

// Number of agents not consuming their own object.
int allocation_size(const Allocation& x);

// Sum of edge weights over non-self allotments.
double allocation_weight(const Market& m, const Allocation& x);

// Same indifference class for every agent.
bool welfare_equivalent(const Market& m, const Allocation& a, const Allocation& b);

}  // namespace hm
