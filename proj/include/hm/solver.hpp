#pragma once

#include <optional>
#include <set>
#include <vector>

#include "hm/blocking.hpp"
#include "hm/ip_model.hpp"
#include "hm/market.hpp"

// Exact branch-and-bound over the binary variables with interval constraint
// propagation.  Integer (price) variables are never branched: once the
// binaries are fixed, the surviving price rows form a difference system that
// a shortest-path sweep settles exactly.

namespace hm {

struct SolveLimits {
    long max_nodes = 10'000'000;
    double time_limit_s = 300.0;
    // Known-feasible allocations used as starting incumbents (checked, never
    // trusted).
    std::vector<Allocation> warm_starts;
};

enum class SolveStatus { Optimal, Feasible, Infeasible, LimitHit };

struct SolveResult {
    SolveStatus status = SolveStatus::Infeasible;
    std::vector<int> assignment;  // per variable; meaningful when a point was found
    double objective = 0.0;
    long nodes = 0;
    double wall_s = 0.0;
    std::vector<double> incumbents;  // objective of each incumbent, in discovery order

    bool found() const {
        return status == SolveStatus::Optimal || status == SolveStatus::Feasible ||
               (status == SolveStatus::LimitHit && !assignment.empty());
    }
};

// Optimal ⇒ exhausted tree with best incumbent; Feasible ⇒ pure feasibility
// run, first point returned; Infeasible ⇒ exhausted tree, no point.
// Lexicographic stages are solved in order under optimality-fixing rows.
SolveResult solve(const IlpModel& model, const SolveLimits& limits = {});

// All distinct allocations encoded by feasible points, by solve–exclude with
// no-good rows over the non-self y-support.  Throws EnumerationCapExceeded.
std::set<Allocation> enumerate_feasible(const IlpModel& model, long cap = 100'000,
                                        const SolveLimits& limits = {});

// Definitional brute force for n <= 10: every IR allocation (cycles bounded
// by k when given), membership decided by blocking-cycle search; for n <= 6
// each verdict is re-derived from the raw coalition definition and any
// disagreement throws.  Concept::None returns all IR (k-)allocations;
// Concept::Competitive is the Wako (k-)core.
std::set<Allocation> oracle(const Market& m, Concept stability,
                            std::optional<int> k = std::nullopt);

// Everything individually rational (cycle lengths <= k when given), each
// allocation exactly once.
std::vector<Allocation> all_ir_allocations(const Market& m,
                                           std::optional<int> k = std::nullopt);

// Raw definition: some coalition of size <= max_size (default n) re-trades
// among itself and defeats x under `mode`.  Exponential; test apparatus.
bool coalition_blocked(const Market& m, const Allocation& x, BlockMode mode,
                       std::optional<int> max_size = std::nullopt);

}  // namespace hm
