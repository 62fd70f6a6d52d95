#include "hm/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "hm/errors.hpp"

namespace hm {

namespace {

constexpr double kEps = 1e-9;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Bounds {
    int lb, ub;
    bool fixed() const { return lb == ub; }
};

class Search {
  public:
    Search(const IlpModel& model, const SolveLimits& limits)
        : model_(model), limits_(limits), t0_(Clock::now()) {
        const int nv = static_cast<int>(model.vars.size());
        bounds_.resize(nv);
        for (int v = 0; v < nv; ++v) bounds_[v] = {model.vars[v].lb, model.vars[v].ub};
        rows_of_.resize(nv);
        for (int r = 0; r < static_cast<int>(model.rows.size()); ++r)
            for (const auto& t : model.rows[r].terms) rows_of_[t.var].push_back(r);
        in_queue_.assign(model.rows.size(), 0);
        derive_groups();
    }

    // Runs one optimization stage.  `objective` may be empty (feasibility:
    // stop at the first point).
    SolveResult run(const ObjectiveStage* objective) {
        obj_ = objective;
        obj_coef_.assign(model_.vars.size(), 0.0);
        if (obj_)
            for (const auto& t : obj_->terms) obj_coef_[t.var] += t.coef;

        SolveResult res;
        best_.reset();

        // root propagation
        for (int r = 0; r < static_cast<int>(model_.rows.size()); ++r) enqueue(r);
        if (!propagate()) {
            res.status = SolveStatus::Infeasible;
            res.nodes = nodes_;
            res.wall_s = seconds_since(t0_);
            return res;
        }

        for (const auto& x : limits_.warm_starts) try_warm_start(x, res);

        limit_hit_ = false;
        dfs(res);

        res.nodes = nodes_;
        res.wall_s = seconds_since(t0_);
        if (limit_hit_) {
            res.status = SolveStatus::LimitHit;
        } else if (best_) {
            res.status = obj_ ? SolveStatus::Optimal : SolveStatus::Feasible;
        } else {
            res.status = SolveStatus::Infeasible;
        }
        if (best_) {
            res.assignment = best_->first;
            res.objective = best_->second;
        }
        return res;
    }

    long nodes() const { return nodes_; }

  private:
    const IlpModel& model_;
    const SolveLimits& limits_;
    Clock::time_point t0_;
    std::vector<Bounds> bounds_;
    std::vector<std::vector<int>> rows_of_;
    std::vector<char> in_queue_;
    std::deque<int> queue_;
    std::vector<std::tuple<int, int, int>> trail_;  // var, old lb, old ub

    // exactly-one groups of binaries (disjoint), for the incumbent bound
    std::vector<std::vector<int>> groups_;
    std::vector<char> grouped_;

    const ObjectiveStage* obj_ = nullptr;
    std::vector<double> obj_coef_;
    std::optional<std::pair<std::vector<int>, double>> best_;
    long nodes_ = 0;
    bool limit_hit_ = false;

    void derive_groups() {
        grouped_.assign(model_.vars.size(), 0);
        for (const auto& row : model_.rows) {
            if (row.sense != RowSense::EQ || row.rhs != 1.0) continue;
            bool ok = !row.terms.empty();
            for (const auto& t : row.terms)
                if (t.coef != 1.0 || model_.vars[t.var].kind != VarKind::Binary || grouped_[t.var])
                    ok = false;
            if (!ok) continue;
            std::vector<int> g;
            for (const auto& t : row.terms) {
                grouped_[t.var] = 1;
                g.push_back(t.var);
            }
            groups_.push_back(std::move(g));
        }
    }

    void enqueue(int row) {
        if (!in_queue_[row]) {
            in_queue_[row] = 1;
            queue_.push_back(row);
        }
    }

    void set_bounds(int v, int lb, int ub) {
        trail_.emplace_back(v, bounds_[v].lb, bounds_[v].ub);
        bounds_[v] = {lb, ub};
        for (int r : rows_of_[v]) enqueue(r);
    }

    bool tighten_lb(int v, int lb) {
        if (lb <= bounds_[v].lb) return true;
        if (lb > bounds_[v].ub) return false;
        set_bounds(v, lb, bounds_[v].ub);
        return true;
    }

    bool tighten_ub(int v, int ub) {
        if (ub >= bounds_[v].ub) return true;
        if (ub < bounds_[v].lb) return false;
        set_bounds(v, bounds_[v].lb, ub);
        return true;
    }

    // bounds-consistency fixpoint; false on conflict
    bool propagate() {
        while (!queue_.empty()) {
            const int r = queue_.front();
            queue_.pop_front();
            in_queue_[r] = 0;
            const auto& row = model_.rows[r];

            double min_act = 0.0, max_act = 0.0;
            for (const auto& t : row.terms) {
                if (t.coef > 0) {
                    min_act += t.coef * bounds_[t.var].lb;
                    max_act += t.coef * bounds_[t.var].ub;
                } else {
                    min_act += t.coef * bounds_[t.var].ub;
                    max_act += t.coef * bounds_[t.var].lb;
                }
            }
            const bool need_le = row.sense != RowSense::GE;  // sum <= rhs
            const bool need_ge = row.sense != RowSense::LE;  // sum >= rhs
            if (need_le && min_act > row.rhs + kEps) return false;
            if (need_ge && max_act < row.rhs - kEps) return false;

            if (need_le) {
                const double slack = row.rhs - min_act;
                for (const auto& t : row.terms) {
                    if (t.coef > 0) {
                        const int nb = static_cast<int>(
                            std::floor(bounds_[t.var].lb + slack / t.coef + kEps));
                        if (!tighten_ub(t.var, nb)) return false;
                    } else {
                        const int nb = static_cast<int>(
                            std::ceil(bounds_[t.var].ub + slack / t.coef - kEps));
                        if (!tighten_lb(t.var, nb)) return false;
                    }
                }
            }
            if (need_ge) {
                const double gap = row.rhs - max_act;  // <= 0 when satisfiable
                for (const auto& t : row.terms) {
                    if (t.coef > 0) {
                        const int nb = static_cast<int>(
                            std::ceil(bounds_[t.var].ub + gap / t.coef - kEps));
                        if (!tighten_lb(t.var, nb)) return false;
                    } else {
                        const int nb = static_cast<int>(
                            std::floor(bounds_[t.var].lb + gap / t.coef + kEps));
                        if (!tighten_ub(t.var, nb)) return false;
                    }
                }
            }
        }
        return true;
    }

    void clear_queue() {
        for (int r : queue_) in_queue_[r] = 0;
        queue_.clear();
    }

    void rollback(size_t mark) {
        while (trail_.size() > mark) {
            auto [v, lb, ub] = trail_.back();
            trail_.pop_back();
            bounds_[v] = {lb, ub};
        }
        clear_queue();
    }

    // Largest (maximize) / smallest (minimize) objective still reachable
    // from the current box, group-aware.
    double objective_bound() const {
        if (!obj_) return 0.0;
        const double sign = obj_->maximize ? 1.0 : -1.0;
        double bound = 0.0;
        for (const auto& g : groups_) {
            // exactly one member will be 1; take the best candidate still open
            double best = -1e100;
            bool fixed_one = false;
            for (int v : g) {
                if (bounds_[v].lb == 1) {
                    bound += sign * obj_coef_[v];
                    fixed_one = true;
                    break;
                }
                if (bounds_[v].ub == 1) best = std::max(best, sign * obj_coef_[v]);
            }
            if (!fixed_one) bound += best;  // -inf here means the node is dead anyway
        }
        for (int v = 0; v < static_cast<int>(model_.vars.size()); ++v) {
            if (grouped_[v]) continue;
            const double c = sign * obj_coef_[v];
            if (c == 0.0) continue;
            // take the best end of the box
            bound += c > 0 ? c * bounds_[v].ub : c * bounds_[v].lb;
        }
        return bound;
    }

    double evaluate(const std::vector<int>& a) const {
        if (!obj_) return 0.0;
        double v = 0.0;
        for (const auto& t : obj_->terms) v += t.coef * a[t.var];
        return v;
    }

    bool satisfies_all(const std::vector<int>& a) const {
        for (const auto& row : model_.rows) {
            double s = 0.0;
            for (const auto& t : row.terms) s += t.coef * a[t.var];
            if (row.sense != RowSense::GE && s > row.rhs + kEps) return false;
            if (row.sense != RowSense::LE && s < row.rhs - kEps) return false;
        }
        return true;
    }

    bool better_than_best(double val) const {
        if (!best_) return true;
        const double sign = obj_ && !obj_->maximize ? -1.0 : 1.0;
        return sign * val > sign * best_->second + kEps;
    }

    void record_incumbent(const std::vector<int>& a, double val, SolveResult& res) {
        best_ = {a, val};
        res.incumbents.push_back(val);
    }

    void try_warm_start(const Allocation& x, SolveResult& res) {
        auto enc = encode_allocation(model_, x);
        if (!enc) return;
        const size_t mark = trail_.size();
        bool ok = true;
        for (int v = 0; v < static_cast<int>(enc->size()) && ok; ++v) {
            if ((*enc)[v] < 0) continue;
            ok = tighten_lb(v, (*enc)[v]) && tighten_ub(v, (*enc)[v]);
        }
        ok = ok && propagate();
        if (ok) {
            std::vector<int> a;
            ok = finish_integers(a);
            if (ok && satisfies_all(a)) {
                const double val = evaluate(a);
                if (better_than_best(val)) record_incumbent(a, val, res);
            }
        }
        rollback(mark);
    }

    // Branch variable: free binary with the largest |objective coefficient|,
    // ties to the smallest index.
    int pick_branch_var() const {
        int pick = -1;
        double score = -1.0;
        for (const auto& g : groups_) {
            for (int v : g) {
                if (bounds_[v].fixed()) continue;
                const double s = std::abs(obj_coef_[v]);
                if (s > score + kEps) {
                    score = s;
                    pick = v;
                }
            }
        }
        for (int v = 0; v < static_cast<int>(model_.vars.size()); ++v) {
            if (grouped_[v] || bounds_[v].fixed() || model_.vars[v].kind != VarKind::Binary)
                continue;
            const double s = std::abs(obj_coef_[v]);
            if (s > score + kEps) {
                score = s;
                pick = v;
            }
        }
        return pick;
    }

    // After all binaries are fixed: settle the remaining integers.  The rows
    // that still matter form a difference system (plus single-variable
    // bounds); anything stranger falls back to enumeration over the box.
    bool finish_integers(std::vector<int>& out) {
        const int nv = static_cast<int>(model_.vars.size());
        std::vector<int> free_ints;
        for (int v = 0; v < nv; ++v)
            if (!bounds_[v].fixed()) {
                if (model_.vars[v].kind == VarKind::Binary) return false;  // not a leaf
                free_ints.push_back(v);
            }
        out.assign(nv, 0);
        for (int v = 0; v < nv; ++v) out[v] = bounds_[v].lb;
        if (free_ints.empty()) return satisfies_all(out);

        std::vector<int> idx(nv, -1);
        for (int i = 0; i < static_cast<int>(free_ints.size()); ++i) idx[free_ints[i]] = i;

        struct Edge {
            int from, to;
            double w;
        };
        std::vector<Edge> edges;
        bool difference_system = true;
        bool conflict = false;
        for (const auto& row : model_.rows) {
            double fixed_part = 0.0;
            std::vector<LinTerm> open;
            for (const auto& t : row.terms) {
                if (bounds_[t.var].fixed())
                    fixed_part += t.coef * bounds_[t.var].lb;
                else
                    open.push_back(t);
            }
            if (open.empty()) continue;  // checked by propagation already
            // returns false when the row shape needs the generic fallback
            auto add_le = [&](const std::vector<LinTerm>& terms, double rhs) -> bool {
                if (terms.size() == 1) {
                    const auto& t = terms[0];
                    const bool ok =
                        t.coef > 0
                            ? tighten_ub(t.var, static_cast<int>(std::floor(rhs / t.coef + kEps)))
                            : tighten_lb(t.var, static_cast<int>(std::ceil(rhs / t.coef - kEps)));
                    if (!ok) conflict = true;
                    return true;
                }
                if (terms.size() == 2) {
                    const LinTerm *pos = nullptr, *neg = nullptr;
                    for (const auto& t : terms) {
                        if (t.coef == 1.0) pos = &t;
                        if (t.coef == -1.0) neg = &t;
                    }
                    if (pos && neg) {  // pos - neg <= rhs: edge neg -> pos
                        edges.push_back({idx[neg->var], idx[pos->var], rhs});
                        return true;
                    }
                }
                return false;
            };
            const double rhs = row.rhs - fixed_part;
            if (row.sense != RowSense::GE && !add_le(open, rhs)) difference_system = false;
            if (row.sense != RowSense::LE) {
                auto neg = open;
                for (auto& t : neg) t.coef = -t.coef;
                if (!add_le(neg, -rhs)) difference_system = false;
            }
            if (conflict) return false;
            if (!difference_system) break;
        }
        if (!difference_system) return enumerate_box(out);

        // greatest solution under the upper bounds via label-correcting sweep
        const int m = static_cast<int>(free_ints.size());
        std::vector<double> dist(m);
        for (int i = 0; i < m; ++i) dist[i] = bounds_[free_ints[i]].ub;
        for (int pass = 0; pass <= m; ++pass) {
            bool changed = false;
            for (const auto& e : edges)
                if (dist[e.from] + e.w < dist[e.to]) {
                    dist[e.to] = dist[e.from] + e.w;
                    changed = true;
                }
            if (!changed) break;
            if (pass == m) return false;  // negative cycle
        }
        for (int i = 0; i < m; ++i) {
            if (dist[i] < bounds_[free_ints[i]].lb - kEps) return false;
            out[free_ints[i]] = static_cast<int>(std::llround(dist[i]));
        }
        return satisfies_all(out);
    }

    // fallback for non-difference residuals: direct enumeration (tiny boxes
    // only; imported foreign models)
    bool enumerate_box(std::vector<int>& out) {
        std::vector<int> free_ints;
        double volume = 1.0;
        for (int v = 0; v < static_cast<int>(model_.vars.size()); ++v)
            if (!bounds_[v].fixed()) {
                free_ints.push_back(v);
                volume *= bounds_[v].ub - bounds_[v].lb + 1.0;
                if (volume > 1e6)
                    throw std::runtime_error("residual integer system too large to enumerate");
            }
        std::vector<int> val(free_ints.size());
        for (size_t i = 0; i < free_ints.size(); ++i) val[i] = bounds_[free_ints[i]].lb;
        while (true) {
            for (size_t i = 0; i < free_ints.size(); ++i) out[free_ints[i]] = val[i];
            if (satisfies_all(out)) return true;
            size_t i = 0;
            for (; i < free_ints.size(); ++i) {
                if (++val[i] <= bounds_[free_ints[i]].ub) break;
                val[i] = bounds_[free_ints[i]].lb;
            }
            if (i == free_ints.size()) return false;
        }
    }

    bool out_of_budget() {
        if (nodes_ > limits_.max_nodes) return limit_hit_ = true;
        if ((nodes_ & 1023) == 0 && seconds_since(t0_) > limits_.time_limit_s)
            return limit_hit_ = true;
        return false;
    }

    void dfs(SolveResult& res) {
        ++nodes_;
        if (out_of_budget()) return;
        if (!obj_ && best_) return;  // feasibility run: one point is enough
        if (best_ && obj_) {
            const double sign = obj_->maximize ? 1.0 : -1.0;
            if (sign * objective_bound() <= sign * best_->second + kEps) return;  // pruned
        }

        const int v = pick_branch_var();
        if (v == -1) {  // leaf: binaries all fixed
            const size_t mark = trail_.size();
            std::vector<int> a;
            const bool ok = finish_integers(a);
            rollback(mark);
            if (ok) {
                const double val = evaluate(a);
                if (better_than_best(val)) record_incumbent(a, val, res);
            }
            return;
        }

        const double c = obj_coef_[v];
        const bool one_first = !obj_ || (obj_->maximize ? c >= 0 : c <= 0);
        const int first = one_first ? 1 : 0;
        for (int attempt = 0; attempt < 2; ++attempt) {
            const int val = attempt == 0 ? first : 1 - first;
            const size_t mark = trail_.size();
            if (tighten_lb(v, val) && tighten_ub(v, val) && propagate()) {
                dfs(res);
            }
            rollback(mark);
            if (limit_hit_) return;
            if (!obj_ && best_) return;  // feasibility: first point wins
        }
    }
};

SolveResult solve_single_stage(IlpModel model, const SolveLimits& limits,
                               std::vector<double>& incumbents_out, long& nodes_total) {
    // stages are handled by the caller; model.stages holds at most one here
    Search s(model, limits);
    SolveResult res = s.run(model.stages.empty() ? nullptr : &model.stages.front());
    nodes_total += res.nodes;
    for (double v : res.incumbents) incumbents_out.push_back(v);
    return res;
}

}  // namespace

SolveResult solve(const IlpModel& model, const SolveLimits& limits) {
    const auto t0 = Clock::now();
    std::vector<double> incumbents;
    long nodes = 0;

    IlpModel work = model;
    if (work.stages.size() <= 1) {
        SolveResult res = solve_single_stage(work, limits, incumbents, nodes);
        res.incumbents = incumbents;
        res.nodes = nodes;
        res.wall_s = seconds_since(t0);
        return res;
    }

    // lexicographic: pin each stage's optimum before solving the next
    std::vector<ObjectiveStage> stages = work.stages;
    SolveResult last;
    for (size_t s = 0; s < stages.size(); ++s) {
        work.stages = {stages[s]};
        last = solve_single_stage(work, limits, incumbents, nodes);
        if (last.status == SolveStatus::Infeasible || last.status == SolveStatus::LimitHit) break;
        if (s + 1 < stages.size()) {
            LinRow pin{"stage_" + std::to_string(s), stages[s].terms,
                       stages[s].maximize ? RowSense::GE : RowSense::LE,
                       stages[s].maximize ? last.objective - kEps : last.objective + kEps};
            work.rows.push_back(std::move(pin));
        }
    }
    last.incumbents = incumbents;
    last.nodes = nodes;
    last.wall_s = seconds_since(t0);
    return last;
}

std::set<Allocation> enumerate_feasible(const IlpModel& model, long cap,
                                        const SolveLimits& limits) {
    IlpModel work = model;
    work.stages.clear();

    // y-vars for the exclusion rows
    std::vector<std::pair<std::pair<AgentId, AgentId>, int>> nonself;
    for (int v = 0; v < static_cast<int>(work.vars.size()); ++v) {
        int i = 0, j = 0;
        if (std::sscanf(work.vars[v].name.c_str(), "y_%d_%d", &i, &j) == 2 && i != j)
            nonself.push_back({{i - 1, j - 1}, v});
    }

    std::set<Allocation> found;
    while (true) {
        SolveResult res = solve(work, limits);
        if (res.status == SolveStatus::LimitHit)
            throw std::runtime_error("enumerate_feasible: solve hit its limit");
        if (res.status == SolveStatus::Infeasible) break;
        const Allocation x = decode_allocation(work, res.assignment);
        if (!found.insert(x).second)
            throw std::logic_error("enumerate_feasible: no-good row failed to exclude");
        if (static_cast<long>(found.size()) > cap) throw EnumerationCapExceeded(cap);

        LinRow ng{"ng_" + std::to_string(found.size()), {}, RowSense::LE, 0.0};
        int support = 0;
        for (const auto& [edge, v] : nonself) {
            if (x.allot[edge.first] == edge.second) {
                ng.terms.push_back({v, 1.0});
                ++support;
            } else {
                ng.terms.push_back({v, -1.0});
            }
        }
        ng.rhs = support - 1;
        work.rows.push_back(std::move(ng));
    }
    return found;
}

std::vector<Allocation> all_ir_allocations(const Market& m, std::optional<int> k) {
    const int n = m.n();
    const int maxlen = k ? std::min(*k, n) : n;
    std::vector<Allocation> out;
    Allocation x;
    x.allot.assign(n, -1);
    std::vector<char> assigned(n, 0);

    auto next_anchor = [&]() {
        for (AgentId a = 0; a < n; ++a)
            if (!assigned[a]) return a;
        return n;
    };

    std::vector<AgentId> path;
    auto pack = [&](auto&& self) -> void {
        const AgentId a = next_anchor();
        if (a == n) {
            out.push_back(x);
            return;
        }
        // a keeps its own object
        assigned[a] = 1;
        x.allot[a] = a;
        self(self);
        assigned[a] = 0;

        // or trades along a cycle anchored at a
        path = {a};
        assigned[a] = 1;
        auto grow = [&](auto&& gself) -> void {
            const AgentId u = path.back();
            if (path.size() >= 2 && m.prefs.rank[u][a]) {
                for (size_t t = 0; t < path.size(); ++t)
                    x.allot[path[t]] = t + 1 < path.size() ? path[t + 1] : a;
                std::vector<AgentId> saved = path;
                self(self);
                path = saved;
            }
            if (static_cast<int>(path.size()) == maxlen) return;
            for (AgentId v = a + 1; v < n; ++v) {
                if (assigned[v] || !m.prefs.rank[u][v]) continue;
                path.push_back(v);
                assigned[v] = 1;
                gself(gself);
                path.pop_back();
                assigned[v] = 0;
            }
        };
        grow(grow);
        assigned[a] = 0;
    };
    pack(pack);
    return out;
}

namespace {

bool subset_blocks(const Market& m, const Allocation& x, BlockMode mode,
                   const std::vector<AgentId>& members) {
    std::vector<AgentId> target = members;  // target[t] = object for members[t]
    std::sort(target.begin(), target.end());
    do {
        bool all_weak = true, some_strict = false, antisym_ok = true;
        for (size_t t = 0; t < members.size() && all_weak; ++t) {
            const AgentId u = members[t], z = target[t];
            const auto& r = m.prefs.rank[u];
            if (!r[z]) {
                all_weak = false;
                break;
            }
            if (*r[z] > *r[x.allot[u]]) all_weak = false;
            if (*r[z] < *r[x.allot[u]]) some_strict = true;
            if (*r[z] == *r[x.allot[u]] && z != x.allot[u]) antisym_ok = false;
        }
        if (!all_weak) continue;
        switch (mode) {
            case BlockMode::Strict: {
                bool all_strict = true;
                for (size_t t = 0; t < members.size(); ++t)
                    if (*m.prefs.rank[members[t]][target[t]] >=
                        *m.prefs.rank[members[t]][x.allot[members[t]]])
                        all_strict = false;
                if (all_strict) return true;
                break;
            }
            case BlockMode::Weak:
                if (some_strict) return true;
                break;
            case BlockMode::AntisymWeak:
                if (some_strict && antisym_ok) return true;
                break;
        }
    } while (std::next_permutation(target.begin(), target.end()));
    return false;
}

}  // namespace

bool coalition_blocked(const Market& m, const Allocation& x, BlockMode mode,
                       std::optional<int> max_size) {
    const int n = m.n();
    if (n > 20) throw OracleTooLarge(n);
    const int cap = max_size ? std::min(*max_size, n) : n;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<AgentId> members;
        for (AgentId v = 0; v < n; ++v)
            if (mask & (1u << v)) members.push_back(v);
        if (static_cast<int>(members.size()) < 2 || static_cast<int>(members.size()) > cap)
            continue;
        if (subset_blocks(m, x, mode, members)) return true;
    }
    return false;
}

std::set<Allocation> oracle(const Market& m, Concept stability, std::optional<int> k) {
    if (m.n() > 10) throw OracleTooLarge(m.n());
    const int l = k ? std::min(*k, m.n()) : m.n();
    std::set<Allocation> out;
    for (const auto& x : all_ir_allocations(m, k)) {
        bool member = true;
        std::optional<BlockMode> mode;
        switch (stability) {
            case Concept::None:
                break;
            case Concept::Core:
                mode = BlockMode::Strict;
                break;
            case Concept::Competitive:
                mode = BlockMode::AntisymWeak;
                break;
            case Concept::StrongCore:
                mode = BlockMode::Weak;
                break;
        }
        if (mode && l >= 2) {
            member = !first_blocking_cycle(m, x, l, *mode).has_value();
            if (m.n() <= 6 && member != !coalition_blocked(m, x, *mode, k))
                throw std::logic_error("cycle search disagrees with the coalition definition");
        }
        if (member) out.insert(x);
    }
    return out;
}

}  // namespace hm
