#include "hm/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "hm/blocking.hpp"
#include "hm/errors.hpp"
#include "hm/instances.hpp"
#include "hm/json_io.hpp"
#include "hm/strong_core.hpp"
#include "hm/ttc.hpp"

namespace hm {

// --- CSV plumbing -----------------------------------------------------------

namespace {

std::string csv_field(const std::string& v) {
    if (v.find_first_of(",\"\n") == std::string::npos) return v;
    std::string out = "\"";
    for (char c : v) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

}  // namespace

std::string to_csv(const CsvTable& t) {
    std::ostringstream out;
    for (size_t c = 0; c < t.header.size(); ++c)
        out << (c ? "," : "") << csv_field(t.header[c]);
    out << '\n';
    for (const auto& row : t.rows) {
        for (size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_field(row[c]);
        out << '\n';
    }
    return out.str();
}

void write_csv(const CsvTable& t, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << to_csv(t);
    if (!f) throw std::runtime_error("short write to " + path);
}

// --- exact assignment (max cells, and the trade-count ceiling) ---------------

namespace {

constexpr double kForbidden = 1e9;

// Minimum-cost perfect matching on a dense square matrix (shortest augmenting
// paths with potentials); result[i] = column of row i.
std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& a) {
    const int n = static_cast<int>(a.size());
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, kForbidden * n);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = -1;
            double delta = kForbidden * n;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> res(n);
    for (int j = 1; j <= n; ++j)
        if (p[j]) res[p[j] - 1] = j - 1;
    return res;
}

// Best individually rational allocation ignoring stability: maximize trade
// count (or total edge weight).  Exact; identity edges cost 0, so forbidden
// pairs are never selected.
Allocation assignment_best(const Market& m, bool by_weight) {
    const int n = m.n();
    std::vector<std::vector<double>> cost(n, std::vector<double>(n, kForbidden));
    for (AgentId i = 0; i < n; ++i) {
        cost[i][i] = 0.0;
        for (AgentId j = 0; j < n; ++j)
            if (j != i && m.prefs.rank[i][j])
                cost[i][j] = by_weight ? -m.edge_weight(i, j) : -1.0;
    }
    Allocation x;
    x.allot = min_cost_assignment(cost);
    return x;
}

// --- branch-and-bound for the unbounded core ----------------------------------

// Max-size (or max-weight) allocation of the unbounded core.  Each node
// restricts the set of objects an agent may receive; the assignment optimum
// over the restricted edges bounds the node from above, and when that optimum
// admits no strictly blocking cycle it is itself a core allocation, so the
// node is solved exactly.  A blocked optimum branches over the cycle's
// members: child s commits members before s to stay strictly below the
// cycle's offer and hands member s an object at least as good as it, which
// partitions every allocation the cycle does not block.  The top trading
// cycle allocation is a core member and seeds the incumbent.
Allocation core_best(const Market& m, bool by_weight, const SolveLimits& limits) {
    const int n = m.n();
    using Allowed = std::vector<std::vector<char>>;

    Allowed root(n, std::vector<char>(n, 0));
    for (AgentId i = 0; i < n; ++i)
        for (AgentId j = 0; j < n; ++j)
            if (m.prefs.rank[i][j]) root[i][j] = 1;

    Allocation incumbent = ttc(m, identity_tie_break(m)).allocation;
    double best = by_weight ? allocation_weight(m, incumbent)
                            : static_cast<double>(allocation_size(incumbent));
    const double margin = by_weight ? 1e-9 : 0.5;

    // assignment optimum under the restriction, or nullopt when no perfect
    // matching on the allowed edges exists.  In size mode a sub-half-unit
    // perturbation keyed to the node counter varies which maximum matching
    // comes back, so different subtrees probe different optima; the reported
    // value is the exact trade count either way.
    long nodes = 0;
    auto relax = [&](const Allowed& allowed) -> std::optional<std::pair<double, Allocation>> {
        std::vector<std::vector<double>> cost(n, std::vector<double>(n, kForbidden));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (allowed[i][j]) {
                    if (i == j)
                        cost[i][j] = 0.0;
                    else if (by_weight)
                        cost[i][j] = -m.edge_weight(i, j);
                    else
                        cost[i][j] =
                            -1.0 - static_cast<double>((i * 131 + j * 137 + nodes * 139) % 97) /
                                       (256.0 * n * 97);
                }
        Allocation x;
        x.allot = min_cost_assignment(cost);
        double value = 0.0;
        for (int i = 0; i < n; ++i) {
            if (cost[i][x.allot[i]] >= kForbidden) return std::nullopt;
            if (by_weight)
                value -= cost[i][x.allot[i]];
            else if (x.allot[i] != i)
                value += 1.0;
        }
        return std::pair{value, std::move(x)};
    };

    // cycles that blocked some explored optimum; re-checking them against a
    // new candidate is much cheaper than a fresh search
    std::vector<ExchangeCycle> pool;
    auto blocks = [&](const ExchangeCycle& c, const Allocation& x) {
        for (size_t t = 0; t < c.size(); ++t) {
            const AgentId i = c[t], offer = c[(t + 1) % c.size()];
            if (!m.prefs.strictly_prefers(i, offer, x[i])) return false;
        }
        return true;
    };

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Allowed> stack{std::move(root)};
    while (!stack.empty()) {
        if (++nodes > limits.max_nodes ||
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() >
                limits.time_limit_s)
            throw std::runtime_error("core cell: solver limit hit");
        const Allowed allowed = std::move(stack.back());
        stack.pop_back();

        const auto solved = relax(allowed);
        if (!solved || solved->first <= best + margin) continue;
        const Allocation& x = solved->second;

        // members' remaining ways to escape a cycle measure how tight a
        // branching on it would be; fail-first on the tightest one
        auto escape_count = [&](AgentId agent, AgentId offer) {
            int ways = 0;
            for (AgentId k = 0; k < n; ++k)
                if (allowed[agent][k] && m.prefs.weakly_prefers(agent, k, offer)) ++ways;
            return ways;
        };
        std::optional<ExchangeCycle> cycle;
        double best_score = 0.0;
        auto consider = [&](const ExchangeCycle& cand) {
            double score = 1.0;
            for (size_t t = 0; t < cand.size(); ++t)
                score *= 1.0 + escape_count(cand[t], cand[(t + 1) % cand.size()]);
            if (!cycle || score < best_score) {
                cycle = cand;
                best_score = score;
            }
        };
        for (const auto& cand : pool)
            if (blocks(cand, x)) consider(cand);
        if (!cycle) {
            for (AgentId i = 0; i < n; ++i)
                for (AgentId j = i + 1; j < n; ++j)
                    if (m.prefs.rank[i][j] && m.prefs.rank[j][i] &&
                        m.prefs.strictly_prefers(i, j, x[i]) &&
                        m.prefs.strictly_prefers(j, i, x[j]))
                        consider({i, j});
            if (cycle) pool.push_back(*cycle);
        }
        if (!cycle) {
            for (const auto& cand :
                 find_blocking_cycles(m, x, std::min(n, 3), BlockMode::Strict).cycles)
                consider(cand);
            if (!cycle) {
                if (auto longer = first_blocking_cycle(m, x, n, BlockMode::Strict))
                    consider(*longer);
            }
            if (cycle) pool.push_back(*cycle);
        }
        if (!cycle) {
            incumbent = x;
            best = solved->first;
            continue;
        }

        // start the member order at the agent with the fewest escapes
        ExchangeCycle c = *cycle;
        {
            size_t tightest = 0;
            int fewest = -1;
            for (size_t t = 0; t < c.size(); ++t) {
                const int ways = escape_count(c[t], c[(t + 1) % c.size()]);
                if (fewest < 0 || ways < fewest) {
                    fewest = ways;
                    tightest = t;
                }
            }
            std::rotate(c.begin(), c.begin() + tightest, c.end());
        }

        // child per escaping member, pushed so the least restricted pops first
        for (int s = static_cast<int>(c.size()) - 1; s >= 0; --s) {
            Allowed child = allowed;
            bool viable = true;
            for (int r = 0; r <= s && viable; ++r) {
                const AgentId agent = c[r];
                const AgentId offer = c[(r + 1) % c.size()];
                bool any = false;
                for (AgentId k = 0; k < n; ++k) {
                    if (!child[agent][k]) continue;
                    const bool escapes = m.prefs.weakly_prefers(agent, k, offer);
                    if (r < s ? escapes : !escapes)
                        child[agent][k] = 0;
                    else
                        any = true;
                }
                viable = any;
            }
            if (viable) stack.push_back(std::move(child));
        }
    }
    return incumbent;
}

Objective cell_objective(Objective::Kind kind) {
    switch (kind) {
        case Objective::MaxSize:
            return Objective::max_size();
        case Objective::MaxWeight:
            return Objective::max_weight();
        default:
            throw std::invalid_argument("cell objective must be MaxSize or MaxWeight");
    }
}

std::string model_label(const ModelCell& cell) {
    std::string s;
    switch (cell.stability) {
        case Concept::None:
            s = "max";
            break;
        case Concept::Core:
            s = "core";
            break;
        case Concept::Competitive:
            s = "competitive";
            break;
        case Concept::StrongCore:
            s = "strong-core";
            break;
    }
    if (cell.k) s += "-k" + std::to_string(*cell.k);
    return s;
}

std::string objective_label(const ModelCell& cell) {
    return cell.objective == Objective::MaxWeight ? "weight" : "size";
}

}  // namespace

std::optional<Allocation> solve_cell(const Market& m, const ModelCell& cell,
                                     const SolveLimits& limits) {
    if (cell.objective != Objective::MaxSize && cell.objective != Objective::MaxWeight)
        throw std::invalid_argument("cell objective must be MaxSize or MaxWeight");

    if (!cell.k) {
        if (cell.stability == Concept::None)
            return assignment_best(m, cell.objective == Objective::MaxWeight);
        if (cell.stability == Concept::Core)
            return core_best(m, cell.objective == Objective::MaxWeight, limits);
        if (m.prefs.is_strict())
            // the competitive set and the strong core are the same singleton
            return ttc(m, identity_tie_break(m)).allocation;
    }

    IlpModel model = build_model(m, {cell.stability, cell.k, cell_objective(cell.objective)});
    SolveLimits lim = limits;
    lim.warm_starts = {ttc(m, identity_tie_break(m)).allocation};
    SolveResult res = solve(model, lim);
    if (res.status == SolveStatus::Infeasible) return std::nullopt;
    if (res.status == SolveStatus::LimitHit)
        throw std::runtime_error("cell " + model_label(cell) + ": solver limit hit");
    return decode_allocation(model, res.assignment);
}

// --- batch experiments ------------------------------------------------------

namespace {

Market instance_market(const RunSpec& spec, int size, int idx) {
    GenConfig cfg;
    cfg.n = size;
    cfg.edge_prob = spec.edge_prob;
    cfg.ties = spec.ties;
    cfg.seed = spec.seed + 1000003ULL * static_cast<std::uint64_t>(size) +
               static_cast<std::uint64_t>(idx);
    return random_market(cfg);
}

std::vector<ModelCell> default_cells(bool with_weight) {
    std::vector<ModelCell> cells;
    for (Concept c : {Concept::None, Concept::Core, Concept::Competitive, Concept::StrongCore}) {
        cells.push_back({c, std::nullopt, Objective::MaxSize});
        if (with_weight) cells.push_back({c, std::nullopt, Objective::MaxWeight});
    }
    return cells;
}

}  // namespace

CsvTable price_of_fairness(const RunSpec& spec) {
    const std::vector<ModelCell> cells = spec.cells.empty() ? default_cells(true) : spec.cells;
    CsvTable t;
    t.header = {"size", "model", "objective", "mean_pct", "feasible_count"};
    for (int size : spec.sizes) {
        std::vector<double> pct_sum(cells.size(), 0.0);
        std::vector<int> feasible(cells.size(), 0);
        for (int idx = 0; idx < spec.per_size; ++idx) {
            const Market m = instance_market(spec, size, idx);
            const Allocation best = assignment_best(m, false);
            const int ceiling = allocation_size(best);
            for (size_t c = 0; c < cells.size(); ++c) {
                const auto x = solve_cell(m, cells[c], spec.limits);
                if (!x) continue;
                ++feasible[c];
                if (ceiling > 0)
                    pct_sum[c] += 100.0 * (ceiling - allocation_size(*x)) / ceiling;
            }
        }
        for (size_t c = 0; c < cells.size(); ++c)
            t.rows.push_back({std::to_string(size), model_label(cells[c]),
                              objective_label(cells[c]),
                              fmt(feasible[c] ? pct_sum[c] / feasible[c] : 0.0),
                              std::to_string(feasible[c])});
    }
    return t;
}

CsvTable blocking_stats(const RunSpec& spec) {
    const std::vector<ModelCell> cells = spec.cells.empty() ? default_cells(false) : spec.cells;
    CsvTable t;
    t.header = {"size", "model", "mean_blocking_cycles", "mean_improvable"};
    for (int size : spec.sizes) {
        std::vector<double> cycles_sum(cells.size(), 0.0), improvable_sum(cells.size(), 0.0);
        std::vector<int> feasible(cells.size(), 0);
        for (int idx = 0; idx < spec.per_size; ++idx) {
            const Market m = instance_market(spec, size, idx);
            for (size_t c = 0; c < cells.size(); ++c) {
                const auto x = solve_cell(m, cells[c], spec.limits);
                if (!x) continue;
                ++feasible[c];
                const BlockReport rep =
                    find_blocking_cycles(m, *x, spec.blocking_length, BlockMode::Weak);
                cycles_sum[c] += static_cast<double>(rep.cycles.size());
                improvable_sum[c] += static_cast<double>(rep.improvable.size());
            }
        }
        for (size_t c = 0; c < cells.size(); ++c)
            t.rows.push_back({std::to_string(size), model_label(cells[c]),
                              fmt(feasible[c] ? cycles_sum[c] / feasible[c] : 0.0),
                              fmt(feasible[c] ? improvable_sum[c] / feasible[c] : 0.0)});
    }
    return t;
}

// --- respecting-improvement audit -------------------------------------------

bool promote(Market& m, AgentId i, AgentId j) {
    if (i == j) throw std::invalid_argument("promote: i == j");
    const int n = m.n();
    auto& row = m.prefs.rank[j];
    const auto snapshot = row;

    if (!row[i]) {
        // entry: one tier of its own, just above j's own object
        row[i] = *row[j];
        *row[j] += 1;
        m.weight[{j, i}] = derived_weight(*row[i], n);
    } else {
        const int ri = *row[i];
        int target = -1;  // nearest strictly preferred rank
        for (AgentId k = 0; k < n; ++k)
            if (row[k] && *row[k] < ri) target = std::max(target, *row[k]);
        if (target == -1) return false;  // already in the top tier

        bool tied = false;
        for (AgentId a = 0; a < n && !tied; ++a)
            for (AgentId b = a + 1; b < n && !tied; ++b)
                if (row[a] && row[b] && *row[a] == *row[b]) tied = true;
        if (!tied) {
            // strict list: swap with the unique immediately preferred object
            for (AgentId k = 0; k < n; ++k)
                if (row[k] && *row[k] == target && k != i) row[k] = ri;
        }
        row[i] = target;  // with ties: merge into that tier
    }

    // a promotion must leave every comparison not involving i untouched
    auto rel = [](const std::optional<int>& a, const std::optional<int>& b) {
        if (!a || !b) return a.has_value() ? 1 : b.has_value() ? -1 : 0;
        return *a < *b ? 3 : *a > *b ? 4 : 5;
    };
    for (AgentId a = 0; a < n; ++a)
        for (AgentId b = a + 1; b < n; ++b)
            if (a != i && b != i && rel(snapshot[a], snapshot[b]) != rel(row[a], row[b]))
                throw std::logic_error("promotion disturbed an unrelated comparison");
    return true;
}

BestRankFn model_best_rank(const Formulation& f, SolveLimits limits) {
    return [f, limits](const Market& m, AgentId i) -> std::optional<int> {
        IlpModel model = build_model(m, f);
        model = set_objective(std::move(model), m, Objective::best_for(i));
        SolveLimits lim = limits;
        lim.warm_starts = {ttc(m, identity_tie_break(m)).allocation};
        SolveResult res = solve(model, lim);
        if (res.status == SolveStatus::Infeasible) return std::nullopt;
        if (res.status == SolveStatus::LimitHit)
            throw std::runtime_error("best-rank solve hit its limit");
        return static_cast<int>(std::llround(res.objective));
    };
}

BestRankFn ttc_best_rank() {
    return [](const Market& m, AgentId i) -> std::optional<int> {
        if (!m.prefs.is_strict())
            throw std::invalid_argument("ttc_best_rank needs strict preferences");
        const TradeGraph g = ttc(m, identity_tie_break(m));
        return *m.prefs.rank[i][g.allocation[i]];
    };
}

BestRankFn competitive_best_rank(bool worst, long cap) {
    return [worst, cap](const Market& m, AgentId i) -> std::optional<int> {
        std::set<Allocation> competitive;
        try {
            competitive = competitive_set_by_tiebreak(m, cap);
        } catch (const TieBreakExplosion&) {
            return std::nullopt;
        }
        std::optional<int> pick;
        for (const Allocation& x : competitive) {
            const int r = *m.prefs.rank[i][x[i]];
            if (!pick || (worst ? r > *pick : r < *pick)) pick = r;
        }
        return pick;
    };
}

BestRankFn strong_core_best_rank(long cap) {
    return [cap](const Market& m, AgentId i) -> std::optional<int> {
        std::set<Allocation> sc;
        try {
            sc = enumerate_strong_core(m, cap);
        } catch (const CoverExplosion&) {
            return std::nullopt;
        }
        std::optional<int> pick;
        for (const Allocation& x : sc) {
            const int r = *m.prefs.rank[i][x[i]];
            if (!pick || r < *pick) pick = r;
        }
        return pick;
    };
}

std::vector<RIAuditRecord> ri_audit_chain(Market m, const std::string& instance, AgentId i,
                                          AgentId j, const BestRankFn& best_rank) {
    std::vector<RIAuditRecord> out;
    auto aborted = [&](int step, std::optional<int> before) {
        RIAuditRecord r;
        r.instance = instance;
        r.i = i;
        r.j = j;
        r.step = step;
        r.rank_before = before ? *before : -1;
        r.status = "aborted";
        out.push_back(r);
    };

    std::optional<int> before;
    try {
        before = best_rank(m, i);
    } catch (...) {
        aborted(0, std::nullopt);
        return out;
    }

    int step = 0;
    while (true) {
        try {
            if (!promote(m, i, j)) break;
        } catch (...) {
            aborted(step + 1, before);
            return out;
        }
        ++step;
        std::optional<int> after;
        try {
            after = best_rank(m, i);
        } catch (...) {
            aborted(step, before);
            return out;
        }
        RIAuditRecord r;
        r.instance = instance;
        r.i = i;
        r.j = j;
        r.step = step;
        r.rank_before = before ? *before : -1;
        r.rank_after = after ? *after : -1;
        if (before && after) {
            r.status = "ok";
            r.violated = *before < *after;
        } else {
            r.status = "skipped";
        }
        out.push_back(r);
        before = after;
    }
    return out;
}

std::vector<RIAuditRecord> ri_audit(const Market& m, const std::string& instance,
                                    const BestRankFn& best_rank) {
    std::vector<RIAuditRecord> out;
    for (AgentId i = 0; i < m.n(); ++i)
        for (AgentId j = 0; j < m.n(); ++j) {
            if (i == j) continue;
            auto chain = ri_audit_chain(m, instance, i, j, best_rank);
            out.insert(out.end(), chain.begin(), chain.end());
        }
    return out;
}

CsvTable ri_table(const std::vector<RIAuditRecord>& records) {
    CsvTable t;
    t.header = {"instance", "i", "j", "step", "rank_before", "rank_after", "violated", "status"};
    for (const auto& r : records)
        t.rows.push_back({r.instance, std::to_string(r.i + 1), std::to_string(r.j + 1),
                          std::to_string(r.step), std::to_string(r.rank_before),
                          std::to_string(r.rank_after), r.violated ? "1" : "0", r.status});
    return t;
}

}  // namespace hm
