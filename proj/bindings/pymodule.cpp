// Python bindings for the housing-market toolkit.  The boundary speaks the
// same conventions as the file formats: agent/object ids are 1-based,
// allocations travel as lists of trading cycles, markets as the JSON schema
// of load_market/save_market.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hm/blocking.hpp"
#include "hm/errors.hpp"
#include "hm/experiments.hpp"
#include "hm/instances.hpp"
#include "hm/ip_model.hpp"
#include "hm/json_io.hpp"
#include "hm/market.hpp"
#include "hm/solver.hpp"
#include "hm/strong_core.hpp"
#include "hm/ttc.hpp"
#include "json.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

using Cycles = std::vector<std::vector<int>>;

Cycles cycles_out(const hm::Allocation& x) {
    Cycles out;
    for (const auto& c : hm::decompose(x)) {
        std::vector<int> jc;
        jc.reserve(c.size());
        for (hm::AgentId v : c) jc.push_back(v + 1);
        out.push_back(std::move(jc));
    }
    return out;
}

hm::Allocation cycles_in(int n, const Cycles& cycles) { return hm::from_cycles(n, cycles); }

std::vector<Cycles> set_out(const std::set<hm::Allocation>& xs) {
    std::vector<Cycles> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(cycles_out(x));
    return out;
}

std::vector<std::pair<int, int>> edges_out(const std::vector<std::pair<hm::AgentId, hm::AgentId>>& es) {
    std::vector<std::pair<int, int>> out;
    out.reserve(es.size());
    for (auto [a, b] : es) out.emplace_back(a + 1, b + 1);
    return out;
}

hm::Concept parse_concept(const std::string& s) {
    if (s == "none") return hm::Concept::None;
    if (s == "core") return hm::Concept::Core;
    if (s == "competitive") return hm::Concept::Competitive;
    if (s == "strong-core") return hm::Concept::StrongCore;
    throw std::invalid_argument("concept: expected none|core|competitive|strong-core, got '" + s +
                                "'");
}

hm::Objective parse_objective(const std::string& s) {
    if (s == "size") return hm::Objective::max_size();
    if (s == "weight") return hm::Objective::max_weight();
    if (s == "feasibility") return hm::Objective::feasibility();
    throw std::invalid_argument("objective: expected size|weight|feasibility, got '" + s + "'");
}

hm::BlockMode parse_mode(const std::string& s) {
    if (s == "strict") return hm::BlockMode::Strict;
    if (s == "weak") return hm::BlockMode::Weak;
    if (s == "antisym-weak") return hm::BlockMode::AntisymWeak;
    throw std::invalid_argument("mode: expected strict|weak|antisym-weak, got '" + s + "'");
}

hm::SolveLimits make_limits(long max_nodes, double time_limit) {
    hm::SolveLimits limits;
    limits.max_nodes = max_nodes;
    limits.time_limit_s = time_limit;
    return limits;
}

hm::RunSpec make_run_spec(const std::optional<std::vector<int>>& sizes, int per_size,
                          std::uint64_t seed, double edge_prob, bool ties, int blocking_length,
                          long max_nodes, double time_limit) {
    hm::RunSpec spec;
    if (sizes) spec.sizes = *sizes;
    spec.per_size = per_size;
    spec.seed = seed;
    spec.edge_prob = edge_prob;
    spec.ties = ties;
    spec.blocking_length = blocking_length;
    spec.limits = make_limits(max_nodes, time_limit);
    return spec;
}

int check_agent(const hm::Market& m, int id, const char* what) {
    if (id < 1 || id > m.n())
        throw std::invalid_argument(std::string(what) + ": expected a 1-based agent id in 1.." +
                                    std::to_string(m.n()) + ", got " + std::to_string(id));
    return id - 1;
}

py::dict record_out(const hm::RIAuditRecord& r) {
    py::dict d;
    d["instance"] = r.instance;
    d["i"] = r.i + 1;
    d["j"] = r.j + 1;
    d["step"] = r.step;
    d["rank_before"] = r.rank_before < 0 ? py::object(py::none()) : py::object(py::int_(r.rank_before));
    d["rank_after"] = r.rank_after < 0 ? py::object(py::none()) : py::object(py::int_(r.rank_after));
    d["violated"] = r.violated;
    d["status"] = r.status;
    return d;
}

}  // namespace

PYBIND11_MODULE(_hmcore, mod) {
    mod.doc() =
        "Exact solvers for housing markets with weak preferences: top trading "
        "cycles, core / competitive / strong-core membership and optimisation "
        "(unbounded and cycle-length-bounded), integer-programming export, and "
        "the experiment tables.  Ids are 1-based; allocations are lists of "
        "trading cycles.";

    py::class_<hm::Market>(mod, "Market",
                           "A housing market: one indivisible object per agent, weak "
                           "preferences over acceptable objects, one weight per "
                           "acceptable non-self edge.")
        .def_property_readonly("n", &hm::Market::n, "number of agents")
        .def_static(
            "from_json",
            [](const std::string& text) { return hm::market_from_json(json::parse(text)); },
            py::arg("text"), "Parse the instance-file JSON schema.")
        .def(
            "to_json", [](const hm::Market& m) { return hm::market_to_json(m).dump(2); },
            "Instance-file JSON text.")
        .def(
            "tiers",
            [](const hm::Market& m, int i) {
                const int a = check_agent(m, i, "agent");
                Cycles out;
                for (const auto& t : m.prefs.tiers(a)) {
                    std::vector<int> tier;
                    for (hm::AgentId v : t) tier.push_back(v + 1);
                    out.push_back(std::move(tier));
                }
                return out;
            },
            py::arg("agent"),
            "Agent's indifference tiers, best first, own object included last.")
        .def(
            "acceptable",
            [](const hm::Market& m, int i, int j) {
                return m.prefs.acceptable(check_agent(m, i, "agent"), check_agent(m, j, "object"));
            },
            py::arg("agent"), py::arg("object"))
        .def(
            "edge_weight",
            [](const hm::Market& m, int i, int j) {
                return m.edge_weight(check_agent(m, i, "agent"), check_agent(m, j, "object"));
            },
            py::arg("agent"), py::arg("object"))
        .def(
            "validate",
            [](const hm::Market& m) {
                std::vector<std::pair<std::string, std::string>> out;
                for (const auto& v : hm::validate(m)) out.emplace_back(v.code, v.detail);
                return out;
            },
            "Structural violations as (code, detail) pairs; empty when well-formed.")
        .def("__repr__", [](const hm::Market& m) {
            return "<hmcore.Market n=" + std::to_string(m.n()) + ">";
        });

    mod.def(
        "random_market",
        [](int n, double edge_prob, bool ties, std::uint64_t seed) {
            hm::GenConfig cfg;
            cfg.n = n;
            cfg.edge_prob = edge_prob;
            cfg.ties = ties;
            cfg.seed = seed;
            return hm::random_market(cfg);
        },
        py::arg("n") = 10, py::arg("edge_prob") = 0.3, py::arg("ties") = false,
        py::arg("seed") = 0,
        "Reproducible random market; same bits as the `hmx gen` subcommand.");

    mod.def(
        "market_from_tiers",
        [](int n, const std::vector<Cycles>& tiers) { return hm::market_from_tiers(n, tiers); },
        py::arg("n"), py::arg("tiers"),
        "Market from per-agent tier lists (1-based, best tier first, own object "
        "implicit and last); weights derived from ranks.");

    mod.def("fixture_names", &hm::fixture_names, "Names of the built-in documented markets.");
    mod.def(
        "fixture",
        [](const std::string& name) {
            const hm::Fixture f = hm::fixture(name);
            py::dict expected;
            for (const auto& [key, xs] : f.expected) expected[py::str(key)] = set_out(xs);
            py::dict out;
            out["market"] = f.market;
            out["expected"] = expected;
            return out;
        },
        py::arg("name"),
        "A built-in market plus its documented solution sets keyed by concept name.");

    mod.def(
        "ttc",
        [](const hm::Market& m, const std::optional<Cycles>& order) {
            hm::TieBreak tb;
            if (order) {
                std::vector<std::vector<hm::AgentId>> rows;
                for (const auto& row : *order) {
                    std::vector<hm::AgentId> r;
                    for (int v : row) r.push_back(check_agent(m, v, "order entry"));
                    rows.push_back(std::move(r));
                }
                tb = hm::tie_break_from_orders(m, std::move(rows));
            } else {
                tb = hm::identity_tie_break(m);
            }
            const hm::TradeGraph g = hm::ttc(m, tb);
            py::dict out;
            out["allocation"] = cycles_out(g.allocation);
            out["round"] = g.round;
            out["cycle_edges"] = edges_out(g.cycle_edges);
            out["pointing_edges"] = edges_out(g.pointing_edges);
            return out;
        },
        py::arg("market"), py::arg("order") = py::none(),
        "Top trading cycles under a strict tie-break (default: smaller object id "
        "first).  Returns the allocation, 1-based removal rounds, and the trade "
        "certificate edges.");

    mod.def(
        "competitive_set",
        [](const hm::Market& m, long cap) { return set_out(hm::competitive_set_by_tiebreak(m, cap)); },
        py::arg("market"), py::arg("cap") = 1'000'000,
        "All distinct top-trading-cycle outcomes over the tie-break linearizations.");

    mod.def(
        "strong_core",
        [](const hm::Market& m) -> std::optional<Cycles> {
            const auto r = hm::strong_core(m);
            if (!r) return std::nullopt;
            return cycles_out(r->first);
        },
        py::arg("market"),
        "One strong-core allocation via absorbing-set cycle covers, or None.");

    mod.def(
        "strong_core_set",
        [](const hm::Market& m, long cap) { return set_out(hm::enumerate_strong_core(m, cap)); },
        py::arg("market"), py::arg("cap") = 100'000, "The full strong core (possibly empty).");

    mod.def(
        "in_core",
        [](const hm::Market& m, const Cycles& x, std::optional<int> k) {
            return hm::in_core(m, cycles_in(m.n(), x), k);
        },
        py::arg("market"), py::arg("allocation"), py::arg("k") = py::none());
    mod.def(
        "in_wako_core",
        [](const hm::Market& m, const Cycles& x, std::optional<int> k) {
            return hm::in_wako_core(m, cycles_in(m.n(), x), k);
        },
        py::arg("market"), py::arg("allocation"), py::arg("k") = py::none());
    mod.def(
        "in_strong_core",
        [](const hm::Market& m, const Cycles& x, std::optional<int> k) {
            return hm::in_strong_core(m, cycles_in(m.n(), x), k);
        },
        py::arg("market"), py::arg("allocation"), py::arg("k") = py::none());

    mod.def(
        "blocking_cycles",
        [](const hm::Market& m, const Cycles& x, std::optional<int> length, const std::string& mode,
           long limit) {
            const hm::BlockReport r = hm::find_blocking_cycles(
                m, cycles_in(m.n(), x), length.value_or(m.n()), parse_mode(mode), limit);
            std::vector<int> improvable;
            for (hm::AgentId a : r.improvable) improvable.push_back(a + 1);
            py::dict out;
            Cycles cycles;
            for (const auto& c : r.cycles) {
                std::vector<int> jc;
                for (hm::AgentId v : c) jc.push_back(v + 1);
                cycles.push_back(std::move(jc));
            }
            out["cycles"] = cycles;
            out["improvable"] = improvable;
            return out;
        },
        py::arg("market"), py::arg("allocation"), py::arg("length") = py::none(),
        py::arg("mode") = "weak", py::arg("limit") = 10'000'000,
        "All blocking cycles up to the given length (default n) under "
        "strict|weak|antisym-weak blocking, plus the strictly improved agents.");

    mod.def(
        "oracle",
        [](const hm::Market& m, const std::string& stability, std::optional<int> k) {
            return set_out(hm::oracle(m, parse_concept(stability), k));
        },
        py::arg("market"), py::arg("concept") = "core", py::arg("k") = py::none(),
        "Brute-force solution set for n <= 10 (concept 'none' = all individually "
        "rational (k-)allocations).");

    mod.def(
        "solve",
        [](const hm::Market& m, const std::string& stability, std::optional<int> k,
           const std::string& objective, long max_nodes, double time_limit)
            -> std::optional<Cycles> {
            hm::ModelCell cell;
            cell.stability = parse_concept(stability);
            cell.k = k;
            const hm::Objective o = parse_objective(objective);
            if (o.kind != hm::Objective::MaxSize && o.kind != hm::Objective::MaxWeight)
                throw std::invalid_argument("objective: expected size|weight");
            cell.objective = o.kind;
            const auto x = hm::solve_cell(m, cell, make_limits(max_nodes, time_limit));
            if (!x) return std::nullopt;
            return cycles_out(*x);
        },
        py::arg("market"), py::arg("concept") = "none", py::arg("k") = py::none(),
        py::arg("objective") = "size", py::arg("max_nodes") = 10'000'000,
        py::arg("time_limit") = 300.0,
        "Best allocation subject to the stability concept and cycle-length bound, "
        "maximising trade count ('size') or total edge weight ('weight'); None "
        "when the concept is empty on this market.");

    mod.def(
        "build_lp",
        [](const hm::Market& m, const std::string& stability, std::optional<int> k,
           const std::string& objective) {
            return hm::export_lp(
                hm::build_model(m, {parse_concept(stability), k, parse_objective(objective)}));
        },
        py::arg("market"), py::arg("concept") = "core", py::arg("k") = py::none(),
        py::arg("objective") = "feasibility",
        "The integer program for a concept/bound/objective in LP file format.");

    mod.def(
        "solve_lp",
        [](const std::string& text, long max_nodes, double time_limit) {
            const hm::IlpModel model = hm::import_lp(text);
            const hm::SolveResult r = hm::solve(model, make_limits(max_nodes, time_limit));
            py::dict out;
            const char* status = "unknown";
            switch (r.status) {
                case hm::SolveStatus::Optimal: status = "optimal"; break;
                case hm::SolveStatus::Feasible: status = "feasible"; break;
                case hm::SolveStatus::Infeasible: status = "infeasible"; break;
                case hm::SolveStatus::LimitHit: status = "limit-hit"; break;
            }
            out["status"] = status;
            out["objective"] = r.objective;
            out["nodes"] = r.nodes;
            py::dict nonzero;
            if (r.found())
                for (std::size_t v = 0; v < model.vars.size(); ++v)
                    if (r.assignment[v] != 0) nonzero[py::str(model.vars[v].name)] = r.assignment[v];
            out["nonzero"] = nonzero;
            return out;
        },
        py::arg("text"), py::arg("max_nodes") = 10'000'000, py::arg("time_limit") = 300.0,
        "Parse an LP file and solve it exactly; nonzero variables of the best "
        "point by name.");

    mod.def(
        "enumerate_lp",
        [](const std::string& text, long cap, long max_nodes, double time_limit) {
            return set_out(
                hm::enumerate_feasible(hm::import_lp(text), cap, make_limits(max_nodes, time_limit)));
        },
        py::arg("text"), py::arg("cap") = 100'000, py::arg("max_nodes") = 10'000'000,
        py::arg("time_limit") = 300.0,
        "All distinct allocations encoded by an LP file's feasible points.");

    mod.def(
        "promote",
        [](hm::Market& m, int i, int j) {
            return hm::promote(m, check_agent(m, i, "object"), check_agent(m, j, "agent"));
        },
        py::arg("market"), py::arg("object"), py::arg("agent"),
        "Move `object` one position up in `agent`'s preference list, in place.  "
        "False when it is already in the top tier.");

    mod.def(
        "ri_audit",
        [](const hm::Market& m, const std::string& name, const std::string& rule,
           const std::string& stability, std::optional<int> k, const std::string& objective,
           long max_nodes, double time_limit) {
            const hm::SolveLimits limits = make_limits(max_nodes, time_limit);
            hm::BestRankFn best_rank;
            if (rule == "model")
                best_rank = hm::model_best_rank(
                    {parse_concept(stability), k, parse_objective(objective)}, limits);
            else if (rule == "ttc")
                best_rank = hm::ttc_best_rank();
            else if (rule == "competitive-best")
                best_rank = hm::competitive_best_rank(false);
            else if (rule == "competitive-worst")
                best_rank = hm::competitive_best_rank(true);
            else if (rule == "strong-core-enum")
                best_rank = hm::strong_core_best_rank();
            else
                throw std::invalid_argument(
                    "rule: expected model|ttc|competitive-best|competitive-worst|strong-core-enum");
            py::list out;
            for (const auto& r : hm::ri_audit(m, name, best_rank)) out.append(record_out(r));
            return out;
        },
        py::arg("market"), py::arg("name") = "instance", py::arg("rule") = "model",
        py::arg("concept") = "strong-core", py::arg("k") = py::none(),
        py::arg("objective") = "feasibility", py::arg("max_nodes") = 10'000'000,
        py::arg("time_limit") = 300.0,
        "Respecting-improvement audit: for every ordered pair, promote object i "
        "step by step in agent j's list and record how i's best achievable rank "
        "moves.  One dict per step; 'violated' flags a strictly worse rank after "
        "an improvement.");

    mod.def(
        "price_of_fairness",
        [](const std::optional<std::vector<int>>& sizes, int per_size, std::uint64_t seed,
           double edge_prob, bool ties, long max_nodes, double time_limit) {
            return hm::to_csv(hm::price_of_fairness(
                make_run_spec(sizes, per_size, seed, edge_prob, ties, 5, max_nodes, time_limit)));
        },
        py::arg("sizes") = py::none(), py::arg("per_size") = 50, py::arg("seed") = 1,
        py::arg("edge_prob") = 0.3, py::arg("ties") = false, py::arg("max_nodes") = 10'000'000,
        py::arg("time_limit") = 300.0,
        "CSV: mean percentage trade-count shortfall of each stability concept "
        "against the unconstrained maximum, per size.");

    mod.def(
        "blocking_stats",
        [](const std::optional<std::vector<int>>& sizes, int per_size, std::uint64_t seed,
           double edge_prob, bool ties, int blocking_length, long max_nodes, double time_limit) {
            return hm::to_csv(hm::blocking_stats(make_run_spec(
                sizes, per_size, seed, edge_prob, ties, blocking_length, max_nodes, time_limit)));
        },
        py::arg("sizes") = py::none(), py::arg("per_size") = 50, py::arg("seed") = 1,
        py::arg("edge_prob") = 0.3, py::arg("ties") = false, py::arg("blocking_length") = 5,
        py::arg("max_nodes") = 10'000'000, py::arg("time_limit") = 300.0,
        "CSV: mean short weakly-blocking cycle counts and improvable-agent counts "
        "per size and concept.");
}
