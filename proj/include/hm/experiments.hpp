#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hm/ip_model.hpp"
#include "hm/market.hpp"
#include "hm/solver.hpp"

// Batch experiment harness: efficiency loss of each solution concept
// relative to the unconstrained optimum, blocking-cycle statistics of the
// chosen allocations, and the respecting-improvement audit.  Everything is
// deterministic given the RunSpec: instance i of size s uses seed
// spec.seed + 1000003 * s + i, and all tables are emitted in a fixed order.

namespace hm {

// --- CSV plumbing -----------------------------------------------------------

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const CsvTable& t);
void write_csv(const CsvTable& t, const std::string& path);

// --- batch experiments ------------------------------------------------------

// One optimization cell: the best allocation under `objective` within the
// concept's feasible set (Concept::None = all IR allocations).
struct ModelCell {
    Concept stability = Concept::None;
    std::optional<int> k;
    Objective::Kind objective = Objective::MaxSize;  // MaxSize or MaxWeight
};

struct RunSpec {
    std::vector<int> sizes = {20, 30, 40, 50, 60};
    int per_size = 50;
    std::uint64_t seed = 1;
    double edge_prob = 0.3;
    bool ties = false;
    std::vector<ModelCell> cells;  // empty = each experiment's documented default
    int blocking_length = 5;       // l for blocking_stats
    SolveLimits limits;
};

// The best allocation of one cell on one market, or nullopt when the cell's
// feasible set is empty.  Exact: strict-preference competitive/strong-core
// cells short-circuit through top trading cycles (the set is that singleton),
// max cells go through the assignment routine, core cells through
// branch-and-bound whose nodes are bounded by an assignment relaxation and
// branched over strictly blocking cycles; everything else is a direct
// integer-program solve.  Throws on solver limits.
std::optional<Allocation> solve_cell(const Market& m, const ModelCell& cell,
                                     const SolveLimits& limits = {});

// columns: size,model,objective,mean_pct,feasible_count.  mean_pct is the
// mean percentage shortfall in trade count against the max-size optimum,
// over the instances where the cell is feasible.  Default cells: max/core/
// competitive/strong-core under both size and weight objectives.
CsvTable price_of_fairness(const RunSpec& spec);

// columns: size,model,mean_blocking_cycles,mean_improvable — weakly blocking
// cycles of length <= spec.blocking_length against each cell's chosen
// allocation, and agents strictly improved by at least one such cycle.
// Default cells: max/core/competitive/strong-core under the size objective.
CsvTable blocking_stats(const RunSpec& spec);

// --- respecting-improvement audit -------------------------------------------

// One promotion of object i in agent j's list: an unacceptable i enters just
// above j's own object; in a strict list i then swaps with the immediately
// preferred object; in a list with ties i merges into the nearest strictly
// preferred tier.  Every other pairwise comparison in j's list is unchanged
// (checked; std::logic_error otherwise).  Returns false when i already sits
// in j's top tier.  A newly acceptable edge gets a rank-derived weight.
bool promote(Market& m, AgentId i, AgentId j);

// Evaluates "the rank of agent i's best (or worst) achievable allotment"
// under some rule; nullopt = not applicable here (empty concept, capacity
// cap), which the audit records as a skipped step.  Exceptions abort the
// chain.
using BestRankFn = std::function<std::optional<int>(const Market&, AgentId)>;

// Best-for-i over the formulation's optimal set: pure concepts minimize i's
// rank over the feasible set; Max models optimize their objective first,
// then i's rank.
BestRankFn model_best_rank(const Formulation& f, SolveLimits limits = {});

// The unique competitive (= strong core) allotment of a strict market, via
// top trading cycles.
BestRankFn ttc_best_rank();

// Best (or worst) competitive allotment over every tie-break linearization.
BestRankFn competitive_best_rank(bool worst = false, long cap = 1'000'000);

// Best allotment over the whole strong core; nullopt when it is empty.
BestRankFn strong_core_best_rank(long cap = 100'000);

struct RIAuditRecord {
    std::string instance;
    AgentId i = -1, j = -1;  // 0-based here, 1-based in CSV
    int step = 0;            // promotion number within the chain, from 1
    int rank_before = -1;    // -1 = undefined (empty concept / failed solve)
    int rank_after = -1;
    bool violated = false;   // defined ranks and strictly worse after the step
    std::string status;      // "ok" | "skipped" | "aborted"
};

// One (i, j) chain: starting from m, promote i in j's list step by step until
// i tops the list, re-evaluating i's best rank after every promotion and
// carrying the modified preferences forward.  A record per step.
std::vector<RIAuditRecord> ri_audit_chain(Market m, const std::string& instance, AgentId i,
                                          AgentId j, const BestRankFn& best_rank);

// All n(n-1) ordered chains, each starting from the unmodified market.
std::vector<RIAuditRecord> ri_audit(const Market& m, const std::string& instance,
                                    const BestRankFn& best_rank);

// columns: instance,i,j,step,rank_before,rank_after,violated,status
CsvTable ri_table(const std::vector<RIAuditRecord>& records);

}  // namespace hm
