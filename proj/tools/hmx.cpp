// hmx — command-line front end: instance generation, top trading cycles,
// strong-core construction, integer-program export, exact solves, blocking
// audits, and the batch experiment harness.
//
// All ids on the command line and in emitted files are 1-based.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hm/blocking.hpp"
#include "hm/experiments.hpp"
#include "hm/instances.hpp"
#include "hm/ip_model.hpp"
#include "hm/json_io.hpp"
#include "hm/market.hpp"
#include "hm/solver.hpp"
#include "hm/strong_core.hpp"
#include "hm/ttc.hpp"

namespace {

using nlohmann::json;

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        if (text.empty() || text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

void emit_json(const json& j, const std::string& path) { emit(j.dump(2), path); }

hm::Market load(const std::string& path) {
    hm::Market m = hm::load_market(path);
    const auto violations = hm::validate(m);
    if (!violations.empty()) {
        std::string msg = path + ": invalid market";
        for (const auto& v : violations) msg += "\n  " + v.code + ": " + v.detail;
        throw std::runtime_error(msg);
    }
    return m;
}

std::optional<int> parse_k(const std::string& s) {
    if (s == "inf" || s == "none" || s.empty()) return std::nullopt;
    size_t used = 0;
    const int k = std::stoi(s, &used);
    if (used != s.size() || k < 1) throw CLI::ValidationError("--k", "expected a bound >= 1 or 'inf'");
    return k;
}

hm::Concept parse_concept(const std::string& s) {
    if (s == "none") return hm::Concept::None;
    if (s == "core") return hm::Concept::Core;
    if (s == "competitive") return hm::Concept::Competitive;
    if (s == "strong-core") return hm::Concept::StrongCore;
    throw CLI::ValidationError("--concept", "expected none|core|competitive|strong-core");
}

hm::Objective parse_objective(const std::string& s) {
    if (s == "size") return hm::Objective::max_size();
    if (s == "weight") return hm::Objective::max_weight();
    if (s == "feasibility") return hm::Objective::feasibility();
    throw CLI::ValidationError("--objective", "expected size|weight|feasibility");
}

hm::BlockMode parse_mode(const std::string& s) {
    if (s == "strict") return hm::BlockMode::Strict;
    if (s == "weak") return hm::BlockMode::Weak;
    if (s == "antisym-weak") return hm::BlockMode::AntisymWeak;
    throw CLI::ValidationError("--mode", "expected strict|weak|antisym-weak");
}

json cycles_json(const std::vector<hm::ExchangeCycle>& cycles) {
    json out = json::array();
    for (const auto& c : cycles) {
        json jc = json::array();
        for (hm::AgentId a : c) jc.push_back(a + 1);
        out.push_back(jc);
    }
    return out;
}

const char* status_name(hm::SolveStatus s) {
    switch (s) {
        case hm::SolveStatus::Optimal: return "optimal";
        case hm::SolveStatus::Feasible: return "feasible";
        case hm::SolveStatus::Infeasible: return "infeasible";
        case hm::SolveStatus::LimitHit: return "limit-hit";
    }
    return "unknown";
}

// --- gen ---------------------------------------------------------------------

struct GenArgs {
    hm::GenConfig cfg;
    std::string out;
};

void run_gen(const GenArgs& a) {
    const hm::Market m = hm::random_market(a.cfg);
    emit_json(hm::market_to_json(m), a.out);
}

// --- ttc ---------------------------------------------------------------------

struct TtcArgs {
    std::string instance;
    std::string tiebreak = "identity";  // "identity" or a JSON file {"order": [[...], ...]}
    std::string emit_tradegraph;
    std::string out;
};

hm::TieBreak load_tie_break(const hm::Market& m, const std::string& spec) {
    if (spec == "identity") return hm::identity_tie_break(m);
    std::ifstream in(spec);
    if (!in) throw std::runtime_error("cannot read tie-break file " + spec);
    json j = json::parse(in);
    std::vector<std::vector<hm::AgentId>> order;
    for (const auto& row : j.at("order")) {
        std::vector<hm::AgentId> r;
        for (const auto& v : row) r.push_back(v.get<int>() - 1);
        order.push_back(std::move(r));
    }
    return hm::tie_break_from_orders(m, std::move(order));
}

json tradegraph_json(const hm::TradeGraph& g) {
    json edges = json::array(), pointing = json::array();
    for (auto [u, v] : g.cycle_edges) edges.push_back({u + 1, v + 1});
    for (auto [u, v] : g.pointing_edges) pointing.push_back({u + 1, v + 1});
    return json{{"n", g.n},
                {"allocation", hm::allocation_to_json(g.allocation)},
                {"round", g.round},
                {"cycle_edges", edges},
                {"pointing_edges", pointing}};
}

void run_ttc(const TtcArgs& a) {
    const hm::Market m = load(a.instance);
    const hm::TradeGraph g = hm::ttc(m, load_tie_break(m, a.tiebreak));
    if (!a.emit_tradegraph.empty()) emit_json(tradegraph_json(g), a.emit_tradegraph);
    emit_json(hm::allocation_to_json(g.allocation), a.out);
}

// --- strong-core ---------------------------------------------------------------

struct StrongCoreArgs {
    std::string instance;
    bool all = false;
    long cap = 100'000;
    std::string out;
};

void run_strong_core(const StrongCoreArgs& a) {
    const hm::Market m = load(a.instance);
    json allocations = json::array();
    if (a.all) {
        for (const auto& x : hm::enumerate_strong_core(m, a.cap))
            allocations.push_back(hm::allocation_to_json(x));
    } else if (auto found = hm::strong_core(m)) {
        allocations.push_back(hm::allocation_to_json(found->first));
    }
    emit_json(json{{"empty", allocations.empty()}, {"allocations", allocations}}, a.out);
}

// --- model / solve -------------------------------------------------------------

struct ModelArgs {
    std::string instance;
    std::string concept_name = "core";
    std::string k = "inf";
    std::string objective = "size";
    int best_for = 0;  // 1-based; 0 = off
    std::string export_path;
};

hm::IlpModel build_from_args(const hm::Market& m, const ModelArgs& a) {
    const hm::Formulation f{parse_concept(a.concept_name), parse_k(a.k),
                            parse_objective(a.objective)};
    hm::IlpModel model = hm::build_model(m, f);
    if (a.best_for > 0)
        model = hm::set_objective(std::move(model), m, hm::Objective::best_for(a.best_for - 1));
    return model;
}

void run_model(const ModelArgs& a) {
    const hm::Market m = load(a.instance);
    emit(hm::export_lp(build_from_args(m, a)), a.export_path);
}

struct SolveArgs {
    ModelArgs model;  // .instance doubles as the input path (instance or .lp)
    long max_nodes = 10'000'000;
    double time_limit = 300.0;
    std::string out;
};

bool has_suffix(const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

void run_solve(const SolveArgs& a) {
    hm::SolveLimits limits;
    limits.max_nodes = a.max_nodes;
    limits.time_limit_s = a.time_limit;

    json report;
    hm::IlpModel model;
    std::optional<hm::Market> market;
    if (has_suffix(a.model.instance, ".lp")) {
        std::ifstream in(a.model.instance);
        if (!in) throw std::runtime_error("cannot read " + a.model.instance);
        std::stringstream buf;
        buf << in.rdbuf();
        model = hm::import_lp(buf.str());
    } else {
        market = load(a.model.instance);
        model = build_from_args(*market, a.model);
    }

    const hm::SolveResult r = hm::solve(model, limits);
    report["status"] = status_name(r.status);
    report["nodes"] = r.nodes;
    report["wall_s"] = r.wall_s;
    report["incumbents"] = r.incumbents;
    if (r.found()) {
        report["objective"] = r.objective;
        if (market) {
            report["allocation"] = hm::allocation_to_json(hm::decode_allocation(model, r.assignment));
        } else {
            json nonzero = json::object();
            for (size_t v = 0; v < model.vars.size(); ++v)
                if (r.assignment[v] != 0) nonzero[model.vars[v].name] = r.assignment[v];
            report["vars"] = nonzero;
        }
    }
    emit_json(report, a.out);
}

// --- audit ----------------------------------------------------------------------

struct AuditArgs {
    std::string instance;
    std::string allocation;
    std::string mode = "weak";
    int l = 3;
    long limit = 10'000'000;
    std::string out;
};

void run_audit(const AuditArgs& a) {
    const hm::Market m = load(a.instance);
    const hm::Allocation x = hm::load_allocation(a.allocation, m.n());
    const hm::BlockReport r = hm::find_blocking_cycles(m, x, a.l, parse_mode(a.mode), a.limit);
    json improvable = json::array();
    for (hm::AgentId i : r.improvable) improvable.push_back(i + 1);
    emit_json(json{{"cycles", cycles_json(r.cycles)},
                   {"blocked", !r.cycles.empty()},
                   {"improvable", improvable}},
              a.out);
}

// --- experiment -------------------------------------------------------------------

struct ExperimentArgs {
    std::vector<int> sizes;
    int per_size = 0;  // 0 = experiment default
    std::uint64_t seed = 1;
    double p = 0.3;
    bool ties = false;
    std::string k = "inf";
    int l = 5;
    std::string objective;  // "", "size", "weight", "both"
    std::string concept_name = "strong-core";  // ri only
    std::string rule = "model";                // ri only
    long max_nodes = 10'000'000;
    double time_limit = 300.0;
    std::string out;
};

std::vector<hm::ModelCell> explicit_cells(const ExperimentArgs& a, bool default_weight) {
    const std::string obj = a.objective.empty() ? (default_weight ? "both" : "size") : a.objective;
    const std::optional<int> k = parse_k(a.k);
    if (!k && ((default_weight && obj == "both") || (!default_weight && obj == "size")))
        return {};  // the experiment's documented default grid
    std::vector<hm::Objective::Kind> kinds;
    if (obj == "size" || obj == "both") kinds.push_back(hm::Objective::MaxSize);
    if (obj == "weight" || obj == "both") kinds.push_back(hm::Objective::MaxWeight);
    if (kinds.empty()) throw CLI::ValidationError("--objective", "expected size|weight|both");
    std::vector<hm::ModelCell> cells;
    for (auto c : {hm::Concept::None, hm::Concept::Core, hm::Concept::Competitive,
                   hm::Concept::StrongCore})
        for (auto kind : kinds) cells.push_back({c, k, kind});
    return cells;
}

hm::RunSpec make_spec(const ExperimentArgs& a, bool default_weight) {
    hm::RunSpec spec;
    if (!a.sizes.empty()) spec.sizes = a.sizes;
    if (a.per_size > 0) spec.per_size = a.per_size;
    spec.seed = a.seed;
    spec.edge_prob = a.p;
    spec.ties = a.ties;
    spec.blocking_length = a.l;
    spec.cells = explicit_cells(a, default_weight);
    spec.limits.max_nodes = a.max_nodes;
    spec.limits.time_limit_s = a.time_limit;
    return spec;
}

void emit_table(const hm::CsvTable& t, const std::string& out) {
    if (out.empty())
        std::cout << hm::to_csv(t);
    else
        hm::write_csv(t, out);
}

void run_pof(const ExperimentArgs& a) { emit_table(hm::price_of_fairness(make_spec(a, true)), a.out); }

void run_blocking(const ExperimentArgs& a) {
    emit_table(hm::blocking_stats(make_spec(a, false)), a.out);
}

void run_ri(const ExperimentArgs& a) {
    hm::SolveLimits limits;
    limits.max_nodes = a.max_nodes;
    limits.time_limit_s = a.time_limit;

    hm::BestRankFn best_rank;
    if (a.rule == "model") {
        const hm::Objective obj =
            a.objective.empty() ? hm::Objective::feasibility() : parse_objective(a.objective);
        best_rank = hm::model_best_rank({parse_concept(a.concept_name), parse_k(a.k), obj}, limits);
    } else if (a.rule == "ttc") {
        best_rank = hm::ttc_best_rank();
    } else if (a.rule == "competitive-best") {
        best_rank = hm::competitive_best_rank(false);
    } else if (a.rule == "competitive-worst") {
        best_rank = hm::competitive_best_rank(true);
    } else if (a.rule == "strong-core-enum") {
        best_rank = hm::strong_core_best_rank();
    } else {
        throw CLI::ValidationError(
            "--rule", "expected model|ttc|competitive-best|competitive-worst|strong-core-enum");
    }

    hm::RunSpec spec = make_spec(a, false);
    if (a.sizes.empty()) spec.sizes = {20, 30};
    if (a.per_size <= 0) spec.per_size = 5;

    std::vector<hm::RIAuditRecord> records;
    for (int size : spec.sizes)
        for (int idx = 0; idx < spec.per_size; ++idx) {
            hm::GenConfig cfg;
            cfg.n = size;
            cfg.edge_prob = spec.edge_prob;
            cfg.ties = spec.ties;
            cfg.seed = spec.seed + 1000003ULL * static_cast<std::uint64_t>(size) +
                       static_cast<std::uint64_t>(idx);
            const hm::Market m = hm::random_market(cfg);
            const std::string name = "n" + std::to_string(size) + "-" + std::to_string(idx);
            auto part = hm::ri_audit(m, name, best_rank);
            records.insert(records.end(), part.begin(), part.end());
        }
    emit_table(hm::ri_table(records), a.out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact solvers and experiments for housing markets with weak preferences"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from a key = value file (sections per subcommand)");

    GenArgs gen;
    auto* cmd_gen = app.add_subcommand("gen", "generate a random instance as JSON");
    cmd_gen->add_option("--n", gen.cfg.n, "number of agents")->capture_default_str();
    cmd_gen->add_option("--p", gen.cfg.edge_prob, "acceptability probability per ordered pair")
        ->capture_default_str();
    cmd_gen->add_flag("--ties", gen.cfg.ties, "weak orders (utility bucketing) instead of strict");
    cmd_gen->add_option("--seed", gen.cfg.seed, "generator seed")->capture_default_str();
    cmd_gen->add_option("-o,--out", gen.out, "output path (default stdout)");
    cmd_gen->callback([&] { run_gen(gen); });

    TtcArgs ttc_args;
    auto* cmd_ttc = app.add_subcommand("ttc", "top trading cycles under a tie-break");
    cmd_ttc->add_option("instance", ttc_args.instance, "instance JSON")->required();
    cmd_ttc->add_option("--tiebreak", ttc_args.tiebreak,
                        "'identity' or a JSON file {\"order\": [[...], ...]} (1-based, best first)")
        ->capture_default_str();
    cmd_ttc->add_option("--emit-tradegraph", ttc_args.emit_tradegraph,
                        "also write the trade certificate graph to this path");
    cmd_ttc->add_option("-o,--out", ttc_args.out, "output path (default stdout)");
    cmd_ttc->callback([&] { run_ttc(ttc_args); });

    StrongCoreArgs sc;
    auto* cmd_sc = app.add_subcommand("strong-core", "strong-core allocation(s) of an instance");
    cmd_sc->add_option("instance", sc.instance, "instance JSON")->required();
    cmd_sc->add_flag("--all", sc.all, "enumerate the whole strong core");
    cmd_sc->add_option("--cap", sc.cap, "enumeration cap with --all")->capture_default_str();
    cmd_sc->add_option("-o,--out", sc.out, "output path (default stdout)");
    cmd_sc->callback([&] { run_strong_core(sc); });

    ModelArgs model;
    auto* cmd_model = app.add_subcommand("model", "export an integer program as an LP file");
    cmd_model->add_option("instance", model.instance, "instance JSON")->required();
    cmd_model->add_option("--concept", model.concept_name, "none|core|competitive|strong-core")
        ->capture_default_str();
    cmd_model->add_option("--k", model.k, "cycle-length bound (2, 3, ... or 'inf')")
        ->capture_default_str();
    cmd_model->add_option("--objective", model.objective, "size|weight|feasibility")
        ->capture_default_str();
    cmd_model->add_option("--best-for", model.best_for,
                          "append a final stage minimizing this agent's rank (1-based)");
    cmd_model->add_option("--export", model.export_path, "LP output path (default stdout)");
    cmd_model->callback([&] { run_model(model); });

    SolveArgs solve_args;
    auto* cmd_solve = app.add_subcommand("solve", "solve an instance formulation or an LP file");
    cmd_solve->add_option("input", solve_args.model.instance, "instance JSON or LP file (*.lp)")
        ->required();
    cmd_solve->add_option("--concept", solve_args.model.concept_name,
                          "none|core|competitive|strong-core (instance input)")
        ->capture_default_str();
    cmd_solve->add_option("--k", solve_args.model.k, "cycle-length bound (2, 3, ... or 'inf')")
        ->capture_default_str();
    cmd_solve->add_option("--objective", solve_args.model.objective, "size|weight|feasibility")
        ->capture_default_str();
    cmd_solve->add_option("--best-for", solve_args.model.best_for,
                          "append a final stage minimizing this agent's rank (1-based)");
    cmd_solve->add_option("--max-nodes", solve_args.max_nodes, "search node budget")
        ->capture_default_str();
    cmd_solve->add_option("--time-limit", solve_args.time_limit, "wall-clock budget in seconds")
        ->capture_default_str();
    cmd_solve->add_option("-o,--out", solve_args.out, "output path (default stdout)");
    cmd_solve->callback([&] { run_solve(solve_args); });

    AuditArgs audit;
    auto* cmd_audit = app.add_subcommand("audit", "blocking cycles against a given allocation");
    cmd_audit->add_option("instance", audit.instance, "instance JSON")->required();
    cmd_audit->add_option("allocation", audit.allocation, "allocation JSON")->required();
    cmd_audit->add_option("--mode", audit.mode, "strict|weak|antisym-weak")->capture_default_str();
    cmd_audit->add_option("--l", audit.l, "maximum cycle length")->capture_default_str();
    cmd_audit->add_option("--limit", audit.limit, "search budget (partial paths)")
        ->capture_default_str();
    cmd_audit->add_option("-o,--out", audit.out, "output path (default stdout)");
    cmd_audit->callback([&] { run_audit(audit); });

    auto* cmd_exp = app.add_subcommand("experiment", "batch experiments over random families");
    cmd_exp->require_subcommand(1);
    ExperimentArgs pof, blocking, ri;

    auto add_family_flags = [](CLI::App* cmd, ExperimentArgs& a) {
        cmd->add_option("--sizes", a.sizes, "instance sizes (agents)");
        cmd->add_option("--per-size", a.per_size, "instances per size");
        cmd->add_option("--seed", a.seed, "base seed")->capture_default_str();
        cmd->add_option("--p", a.p, "acceptability probability")->capture_default_str();
        cmd->add_flag("--ties", a.ties, "weak orders instead of strict");
        cmd->add_option("--k", a.k, "cycle-length bound for every cell")->capture_default_str();
        cmd->add_option("--max-nodes", a.max_nodes, "per-solve node budget")->capture_default_str();
        cmd->add_option("--time-limit", a.time_limit, "per-solve time budget (s)")
            ->capture_default_str();
        cmd->add_option("--out", a.out, "CSV output path (default stdout)");
    };

    auto* cmd_pof = cmd_exp->add_subcommand(
        "pof", "trade-count shortfall of each concept vs the unconstrained optimum");
    add_family_flags(cmd_pof, pof);
    cmd_pof->add_option("--objective", pof.objective, "size|weight|both")->capture_default_str();
    cmd_pof->callback([&] { run_pof(pof); });

    auto* cmd_blocking =
        cmd_exp->add_subcommand("blocking", "weakly-blocking-cycle statistics per concept");
    add_family_flags(cmd_blocking, blocking);
    cmd_blocking->add_option("--l", blocking.l, "blocking cycle length cap")->capture_default_str();
    cmd_blocking->add_option("--objective", blocking.objective, "size|weight|both")
        ->capture_default_str();
    cmd_blocking->callback([&] { run_blocking(blocking); });

    auto* cmd_ri = cmd_exp->add_subcommand(
        "ri", "respecting-improvement audit: promote i in j's list, re-solve, compare ranks");
    add_family_flags(cmd_ri, ri);
    cmd_ri->add_option("--rule", ri.rule,
                       "model|ttc|competitive-best|competitive-worst|strong-core-enum")
        ->capture_default_str();
    cmd_ri->add_option("--concept", ri.concept_name, "concept for --rule model")
        ->capture_default_str();
    cmd_ri->add_option("--objective", ri.objective,
                       "optional stage-1 objective for --rule model (size|weight)");
    cmd_ri->callback([&] { run_ri(ri); });

    try {
        CLI11_PARSE(app, argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "hmx: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
