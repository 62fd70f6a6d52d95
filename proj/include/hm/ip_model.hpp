#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hm/market.hpp"

// Integer-programming views of a market.  Binary y_ij picks the allotment
// edges of an individually rational allocation; integer prices p_i in {1..n}
// turn no-blocking conditions into big-M rows (the big-M constant is exactly
// n).  Bounded-k variants replace prices with explicit cycle variables.
//
// Variable names are load-bearing: y_<i>_<j>, p_<i>, z_<i>_<j>_... (1-based)
// are how allocations are decoded back out of a solution and how an LP file
// round-trips into an equivalent model.

namespace hm {

enum class VarKind { Binary, Integer };

struct IlpVar {
    std::string name;
    VarKind kind = VarKind::Binary;
    int lb = 0;
    int ub = 1;
};

struct LinTerm {
    int var;
    double coef;
};

enum class RowSense { LE, GE, EQ };

struct LinRow {
    std::string name;
    std::vector<LinTerm> terms;
    RowSense sense = RowSense::LE;
    double rhs = 0.0;
};

struct ObjectiveStage {
    bool maximize = true;
    std::vector<LinTerm> terms;
};

struct IlpModel {
    int n_agents = 0;
    std::vector<IlpVar> vars;
    std::vector<LinRow> rows;
    // Lexicographic objective: stage 0 is solved first, later stages under
    // optimality-fixing constraints.  Empty = pure feasibility.
    std::vector<ObjectiveStage> stages;

    int var_index(const std::string& name) const;
    int add_var(IlpVar v);
};

enum class Concept { None, Core, Competitive, StrongCore };

struct Objective {
    enum Kind { Feasibility, MaxSize, MaxWeight, BestFor, Lexi };
    Kind kind = Feasibility;
    AgentId agent = -1;              // BestFor
    std::vector<Objective> stages;   // Lexi

    static Objective feasibility() { return {}; }
    static Objective max_size() { return {MaxSize, -1, {}}; }
    static Objective max_weight() { return {MaxWeight, -1, {}}; }
    static Objective best_for(AgentId i) { return {BestFor, i, {}}; }
};

struct Formulation {
    Concept stability = Concept::None;
    std::optional<int> k;  // bounded cycle length; nullopt = unbounded
    Objective objective;
};

// Assignment rows over the acceptability edges; feasible points are exactly
// the individually rational allocations.
IlpModel base_model(const Market& m);

// Unbounded edge-and-price rows.  Each call layers onto the previous one:
// base -> core -> competitive -> strong core.
IlpModel add_core(IlpModel model, const Market& m);
IlpModel add_competitive(IlpModel model, const Market& m);
IlpModel add_strong_core(IlpModel model, const Market& m);

// Bounded-k rewrite of a base model: keeps only edges that lie on some cycle
// of length <= k (plus self-loops), introduces one binary per enumerated
// cycle with linking rows, and adds one no-blocking row per cycle for the
// chosen concept (Concept::None adds no concept rows and just pins the
// feasible set to the k-allocations).  Concept::Competitive is the Wako
// k-core.  Throws CycleEnumerationLimit.
IlpModel add_cycle_formulation(IlpModel model, const Market& m, int k, Concept stability,
                               long cycle_limit = 1'000'000);

IlpModel set_objective(IlpModel model, const Market& m, const Objective& o);

// base/add_*/set_objective composed per the formulation.
IlpModel build_model(const Market& m, const Formulation& f);

// The allocation encoded by the y variables of a solved assignment.
Allocation decode_allocation(const IlpModel& model, const std::vector<int>& assignment);

// y_<i>_<j> expected in `model` for every non-self edge of x (self-loops
// implicit); nullopt when x uses an edge the model dropped.
std::optional<std::vector<int>> encode_allocation(const IlpModel& model, const Allocation& x);

std::string export_lp(const IlpModel& model);
IlpModel import_lp(const std::string& text);

}  // namespace hm
