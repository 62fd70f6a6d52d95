#include "hm/ip_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "hm/errors.hpp"

namespace hm {

namespace {

std::string y_name(AgentId i, AgentId j) {
    return "y_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
}

std::string p_name(AgentId i) { return "p_" + std::to_string(i + 1); }

std::string cycle_suffix(const ExchangeCycle& c) {
    std::string s;
    for (AgentId v : c) s += "_" + std::to_string(v + 1);
    return s;
}

// Acceptable objects of i from most to least preferred (id-tiebroken), so
// that lower y indices mean better edges; branching benefits from the order.
std::vector<AgentId> ordered_targets(const Market& m, AgentId i) {
    return m.prefs.acceptable_objects(i);
}

std::map<std::pair<AgentId, AgentId>, int> y_table(const IlpModel& model) {
    std::map<std::pair<AgentId, AgentId>, int> t;
    for (int v = 0; v < static_cast<int>(model.vars.size()); ++v) {
        const auto& name = model.vars[v].name;
        if (name.size() < 2 || name[0] != 'y' || name[1] != '_') continue;
        int i = 0, j = 0;
        if (std::sscanf(name.c_str(), "y_%d_%d", &i, &j) == 2) t[{i - 1, j - 1}] = v;
    }
    return t;
}

// All simple cycles of length 2..k over non-self acceptability edges,
// anchor-minimal (each cycle listed once, starting at its smallest member).
std::vector<ExchangeCycle> enumerate_cycles(const Market& m, int k, long limit) {
    const int n = m.n();
    k = std::min(k, n);
    std::vector<ExchangeCycle> cycles;
    std::vector<AgentId> path;
    std::vector<char> on_path(n, 0);
    long visited = 0;
    auto grow = [&](auto&& self, AgentId anchor) -> void {
        if (++visited > 50L * limit)
            throw CycleEnumerationLimit(limit);
        const AgentId u = path.back();
        if (path.size() >= 2 && m.prefs.rank[u][anchor]) {
            cycles.push_back(path);
            if (static_cast<long>(cycles.size()) > limit) throw CycleEnumerationLimit(limit);
        }
        if (static_cast<int>(path.size()) == k) return;
        for (AgentId v = anchor + 1; v < n; ++v) {
            if (on_path[v] || v == u || !m.prefs.rank[u][v]) continue;
            path.push_back(v);
            on_path[v] = 1;
            self(self, anchor);
            path.pop_back();
            on_path[v] = 0;
        }
    };
    for (AgentId a = 0; a < n; ++a) {
        path = {a};
        std::fill(on_path.begin(), on_path.end(), 0);
        on_path[a] = 1;
        grow(grow, a);
    }
    return cycles;
}

bool is_integral(double x) { return x == std::floor(x); }

std::string coef_str(double c) {
    if (is_integral(c) && std::abs(c) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(c));
        return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", c);
    return buf;
}

}  // namespace

int IlpModel::var_index(const std::string& name) const {
    for (int v = 0; v < static_cast<int>(vars.size()); ++v)
        if (vars[v].name == name) return v;
    return -1;
}

int IlpModel::add_var(IlpVar v) {
    vars.push_back(std::move(v));
    return static_cast<int>(vars.size()) - 1;
}

IlpModel base_model(const Market& m) {
    const int n = m.n();
    IlpModel model;
    model.n_agents = n;
    std::map<std::pair<AgentId, AgentId>, int> y;
    for (AgentId i = 0; i < n; ++i)
        for (AgentId j : ordered_targets(m, i))
            y[{i, j}] = model.add_var({y_name(i, j), VarKind::Binary, 0, 1});
    for (AgentId i = 0; i < n; ++i) {
        LinRow out{"out_" + std::to_string(i + 1), {}, RowSense::EQ, 1.0};
        for (AgentId j : ordered_targets(m, i)) out.terms.push_back({y.at({i, j}), 1.0});
        model.rows.push_back(std::move(out));
    }
    for (AgentId j = 0; j < n; ++j) {
        LinRow in{"in_" + std::to_string(j + 1), {}, RowSense::EQ, 1.0};
        for (AgentId i = 0; i < n; ++i)
            if (m.prefs.rank[i][j]) in.terms.push_back({y.at({i, j}), 1.0});
        model.rows.push_back(std::move(in));
    }
    return model;
}

namespace {

void ensure_prices(IlpModel& model, const Market& m) {
    if (model.var_index(p_name(0)) != -1) return;
    for (AgentId i = 0; i < m.n(); ++i)
        model.add_var({p_name(i), VarKind::Integer, 1, m.n()});
}

}  // namespace

IlpModel add_core(IlpModel model, const Market& m) {
    const int n = m.n();
    ensure_prices(model, m);
    auto y = y_table(model);
    for (AgentId i = 0; i < n; ++i) {
        const int pi = model.var_index(p_name(i));
        for (AgentId j : ordered_targets(m, i)) {
            const int pj = model.var_index(p_name(j));
            // p_i + 1 <= p_j + n * sum_{k: k R_i j} y_ik
            LinRow row{"core_" + std::to_string(i + 1) + "_" + std::to_string(j + 1),
                       {},
                       RowSense::LE,
                       -1.0};
            if (pi != pj) {
                row.terms.push_back({pi, 1.0});
                row.terms.push_back({pj, -1.0});
            }
            for (AgentId k : ordered_targets(m, i))
                if (m.prefs.weakly_prefers(i, k, j))
                    row.terms.push_back({y.at({i, k}), -static_cast<double>(n)});
            model.rows.push_back(std::move(row));
        }
    }
    return model;
}

IlpModel add_competitive(IlpModel model, const Market& m) {
    const int n = m.n();
    ensure_prices(model, m);
    auto y = y_table(model);
    for (AgentId i = 0; i < n; ++i) {
        const int pi = model.var_index(p_name(i));
        for (AgentId j : ordered_targets(m, i)) {
            const int pj = model.var_index(p_name(j));
            // p_i <= p_j + n * (1 - y_ij)
            LinRow row{"comp_" + std::to_string(i + 1) + "_" + std::to_string(j + 1),
                       {},
                       RowSense::LE,
                       static_cast<double>(n)};
            if (pi != pj) {
                row.terms.push_back({pi, 1.0});
                row.terms.push_back({pj, -1.0});
            }
            row.terms.push_back({y.at({i, j}), static_cast<double>(n)});
            model.rows.push_back(std::move(row));
        }
    }
    return model;
}

IlpModel add_strong_core(IlpModel model, const Market& m) {
    const int n = m.n();
    ensure_prices(model, m);
    auto y = y_table(model);
    for (AgentId i = 0; i < n; ++i) {
        const int pi = model.var_index(p_name(i));
        for (AgentId j : ordered_targets(m, i)) {
            const int pj = model.var_index(p_name(j));
            // p_i <= p_j + n * sum_{k: k P_i j} y_ik
            LinRow row{"sc_" + std::to_string(i + 1) + "_" + std::to_string(j + 1),
                       {},
                       RowSense::LE,
                       0.0};
            if (pi != pj) {
                row.terms.push_back({pi, 1.0});
                row.terms.push_back({pj, -1.0});
            }
            for (AgentId k : ordered_targets(m, i))
                if (m.prefs.strictly_prefers(i, k, j))
                    row.terms.push_back({y.at({i, k}), -static_cast<double>(n)});
            model.rows.push_back(std::move(row));
        }
    }
    return model;
}

IlpModel add_cycle_formulation(IlpModel model, const Market& m, int k, Concept stability,
                               long cycle_limit) {
    if (k < 2) throw std::invalid_argument("cycle-length bound must be at least 2");
    for (const auto& v : model.vars)
        if (v.kind == VarKind::Integer)
            throw std::invalid_argument("cycle formulations start from a price-free base model");

    const int n = m.n();
    auto cycles = enumerate_cycles(m, k, cycle_limit);

    std::set<std::pair<AgentId, AgentId>> used;  // non-self edges on some short cycle
    for (const auto& c : cycles)
        for (size_t t = 0; t < c.size(); ++t) used.insert({c[t], c[(t + 1) % c.size()]});

    // fresh restricted base
    IlpModel out;
    out.n_agents = n;
    std::map<std::pair<AgentId, AgentId>, int> y;
    for (AgentId i = 0; i < n; ++i)
        for (AgentId j : ordered_targets(m, i))
            if (j == i || used.count({i, j}))
                y[{i, j}] = out.add_var({y_name(i, j), VarKind::Binary, 0, 1});
    for (AgentId i = 0; i < n; ++i) {
        LinRow row{"out_" + std::to_string(i + 1), {}, RowSense::EQ, 1.0};
        for (AgentId j : ordered_targets(m, i))
            if (auto it = y.find({i, j}); it != y.end()) row.terms.push_back({it->second, 1.0});
        out.rows.push_back(std::move(row));
    }
    for (AgentId j = 0; j < n; ++j) {
        LinRow row{"in_" + std::to_string(j + 1), {}, RowSense::EQ, 1.0};
        for (AgentId i = 0; i < n; ++i)
            if (auto it = y.find({i, j}); it != y.end()) row.terms.push_back({it->second, 1.0});
        out.rows.push_back(std::move(row));
    }

    std::vector<int> z(cycles.size());
    for (size_t c = 0; c < cycles.size(); ++c)
        z[c] = out.add_var({"z" + cycle_suffix(cycles[c]), VarKind::Binary, 0, 1});

    // y_ij = sum of the cycles through (i,j)
    std::map<std::pair<AgentId, AgentId>, std::vector<int>> through;
    for (size_t c = 0; c < cycles.size(); ++c)
        for (size_t t = 0; t < cycles[c].size(); ++t)
            through[{cycles[c][t], cycles[c][(t + 1) % cycles[c].size()]}].push_back(
                static_cast<int>(c));
    for (const auto& [edge, cs] : through) {
        LinRow row{"link_" + std::to_string(edge.first + 1) + "_" + std::to_string(edge.second + 1),
                   {},
                   RowSense::EQ,
                   0.0};
        row.terms.push_back({y.at(edge), 1.0});
        for (int c : cs) row.terms.push_back({z[c], -1.0});
        out.rows.push_back(std::move(row));
    }

    for (size_t c = 0; c < cycles.size(); ++c) {
        const auto& cyc = cycles[c];
        const double len = static_cast<double>(cyc.size());
        std::map<int, double> coef;
        switch (stability) {
            case Concept::None:
                continue;
            case Concept::Core:
                // some member at least as happy staying put: sum_{(i,j) in c}
                // sum_{k: k R_i j} y_ik >= 1
                for (size_t t = 0; t < cyc.size(); ++t) {
                    const AgentId i = cyc[t], j = cyc[(t + 1) % cyc.size()];
                    for (AgentId kk : ordered_targets(m, i))
                        if (m.prefs.weakly_prefers(i, kk, j))
                            if (auto it = y.find({i, kk}); it != y.end()) coef[it->second] += 1.0;
                }
                out.rows.push_back({"core" + cycle_suffix(cyc), {}, RowSense::GE, 1.0});
                break;
            case Concept::StrongCore:
                // indifferent members must already trade along c, unless some
                // member is strictly happier elsewhere:
                // sum y_ik (k I_i j) + |c| * sum y_ik (k P_i j) >= |c|
                for (size_t t = 0; t < cyc.size(); ++t) {
                    const AgentId i = cyc[t], j = cyc[(t + 1) % cyc.size()];
                    for (AgentId kk : ordered_targets(m, i)) {
                        if (auto it = y.find({i, kk}); it != y.end()) {
                            if (m.prefs.indifferent(i, kk, j)) coef[it->second] += 1.0;
                            if (m.prefs.strictly_prefers(i, kk, j)) coef[it->second] += len;
                        }
                    }
                }
                out.rows.push_back({"sc" + cycle_suffix(cyc), {}, RowSense::GE, len});
                break;
            case Concept::Competitive:
                // Wako k-core: sum_{(i,j) in c} y_ij + |c| * sum y_ik
                // (k R_i j, k != j) >= |c|
                for (size_t t = 0; t < cyc.size(); ++t) {
                    const AgentId i = cyc[t], j = cyc[(t + 1) % cyc.size()];
                    coef[y.at({i, j})] += 1.0;
                    for (AgentId kk : ordered_targets(m, i))
                        if (kk != j && m.prefs.weakly_prefers(i, kk, j))
                            if (auto it = y.find({i, kk}); it != y.end()) coef[it->second] += len;
                }
                out.rows.push_back({"wako" + cycle_suffix(cyc), {}, RowSense::GE, len});
                break;
        }
        auto& row = out.rows.back();
        for (const auto& [v, cf] : coef) row.terms.push_back({v, cf});
    }
    return out;
}

IlpModel set_objective(IlpModel model, const Market& m, const Objective& o) {
    auto y = y_table(model);
    auto stage_terms = [&](const Objective& obj) -> ObjectiveStage {
        ObjectiveStage s;
        switch (obj.kind) {
            case Objective::MaxSize:
                s.maximize = true;
                for (const auto& [edge, v] : y)
                    if (edge.first != edge.second) s.terms.push_back({v, 1.0});
                break;
            case Objective::MaxWeight:
                s.maximize = true;
                for (const auto& [edge, v] : y)
                    if (edge.first != edge.second)
                        s.terms.push_back({v, m.edge_weight(edge.first, edge.second)});
                break;
            case Objective::BestFor:
                s.maximize = false;
                for (const auto& [edge, v] : y)
                    if (edge.first == obj.agent)
                        s.terms.push_back({v, static_cast<double>(*m.prefs.rank[edge.first][edge.second])});
                break;
            default:
                throw std::invalid_argument("not a primitive objective stage");
        }
        return s;
    };
    switch (o.kind) {
        case Objective::Feasibility:
            model.stages.clear();
            break;
        case Objective::MaxSize:
        case Objective::MaxWeight:
            model.stages = {stage_terms(o)};
            break;
        case Objective::BestFor:
            // keep whatever the model already optimizes, then favour agent i
            model.stages.push_back(stage_terms(o));
            break;
        case Objective::Lexi: {
            model.stages.clear();
            for (const auto& sub : o.stages) model.stages.push_back(stage_terms(sub));
            break;
        }
    }
    return model;
}

IlpModel build_model(const Market& m, const Formulation& f) {
    IlpModel model = base_model(m);
    if (f.k) {
        model = add_cycle_formulation(std::move(model), m, *f.k, f.stability);
    } else {
        if (f.stability != Concept::None) model = add_core(std::move(model), m);
        if (f.stability == Concept::Competitive || f.stability == Concept::StrongCore)
            model = add_competitive(std::move(model), m);
        if (f.stability == Concept::StrongCore) model = add_strong_core(std::move(model), m);
    }
    return set_objective(std::move(model), m, f.objective);
}

Allocation decode_allocation(const IlpModel& model, const std::vector<int>& assignment) {
    Allocation x;
    x.allot.assign(model.n_agents, -1);
    for (AgentId i = 0; i < model.n_agents; ++i) x.allot[i] = i;
    const auto y = y_table(model);
    for (const auto& [edge, v] : y)
        if (assignment[v] == 1) x.allot[edge.first] = edge.second;
    return x;
}

std::optional<std::vector<int>> encode_allocation(const IlpModel& model, const Allocation& x) {
    const auto y = y_table(model);
    std::vector<int> a(model.vars.size(), -1);
    for (const auto& [edge, v] : y) a[v] = 0;
    for (AgentId i = 0; i < x.n(); ++i) {
        const auto it = y.find({i, x.allot[i]});
        if (it == y.end()) return std::nullopt;
        a[it->second] = 1;
    }
    return a;
}

std::string export_lp(const IlpModel& model) {
    std::ostringstream out;
    const ObjectiveStage* primary = model.stages.empty() ? nullptr : &model.stages.front();
    out << (primary && !primary->maximize ? "Minimize" : "Maximize") << "\n obj:";
    if (primary) {
        bool first = true;
        for (const auto& t : primary->terms) {
            const double c = t.coef;
            out << (c < 0 ? " - " : (first ? " " : " + ")) << coef_str(std::abs(c)) << ' '
                << model.vars[t.var].name;
            first = false;
        }
    }
    out << "\nSubject To\n";
    for (const auto& row : model.rows) {
        out << ' ' << row.name << ':';
        bool first = true;
        for (const auto& t : row.terms) {
            out << (t.coef < 0 ? " - " : (first ? " " : " + ")) << coef_str(std::abs(t.coef))
                << ' ' << model.vars[t.var].name;
            first = false;
        }
        if (first) out << " 0 " << model.vars.front().name;
        out << (row.sense == RowSense::LE ? " <= " : row.sense == RowSense::GE ? " >= " : " = ")
            << coef_str(row.rhs) << '\n';
    }
    out << "Bounds\n";
    for (const auto& v : model.vars)
        if (v.kind == VarKind::Integer)
            out << ' ' << v.lb << " <= " << v.name << " <= " << v.ub << '\n';
    bool any_int = false, any_bin = false;
    for (const auto& v : model.vars) (v.kind == VarKind::Integer ? any_int : any_bin) = true;
    if (any_int) {
        out << "Generals\n";
        for (const auto& v : model.vars)
            if (v.kind == VarKind::Integer) out << ' ' << v.name << '\n';
    }
    if (any_bin) {
        out << "Binaries\n";
        for (const auto& v : model.vars)
            if (v.kind == VarKind::Binary) out << ' ' << v.name << '\n';
    }
    out << "End\n";
    return out.str();
}

namespace {

struct LpTokens {
    std::vector<std::string> toks;
    size_t pos = 0;

    bool done() const { return pos >= toks.size(); }
    const std::string& peek() const { return toks[pos]; }
    std::string next() { return toks[pos++]; }
};

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

LpTokens tokenize_lp(const std::string& text) {
    LpTokens t;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '\\') continue;
        std::string tok;
        auto flush = [&] {
            if (!tok.empty()) t.toks.push_back(tok), tok.clear();
        };
        for (char c : line) {
            // a sign right after a mantissa's exponent marker stays inside the
            // number token ("5.5e-06")
            const bool exponent_sign =
                (c == '+' || c == '-') && tok.size() >= 2 &&
                (tok.back() == 'e' || tok.back() == 'E') &&
                std::isdigit(static_cast<unsigned char>(tok.front()));
            if (std::isspace(static_cast<unsigned char>(c))) {
                flush();
            } else if (!exponent_sign &&
                       (c == ':' || c == '+' || c == '-' || c == '<' || c == '>' || c == '=')) {
                flush();
                t.toks.push_back(std::string(1, c));
            } else {
                tok += c;
            }
        }
        flush();
    }
    // glue "<" "=" / ">" "=" back together
    std::vector<std::string> merged;
    for (size_t i = 0; i < t.toks.size(); ++i) {
        if ((t.toks[i] == "<" || t.toks[i] == ">") && i + 1 < t.toks.size() &&
            t.toks[i + 1] == "=") {
            merged.push_back(t.toks[i] + "=");
            ++i;
        } else {
            merged.push_back(t.toks[i]);
        }
    }
    t.toks = std::move(merged);
    return t;
}

bool is_number(const std::string& s) {
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    return end && *end == '\0' && end != s.c_str();
}

bool is_section(const std::string& low) {
    return low == "maximize" || low == "max" || low == "minimize" || low == "min" ||
           low == "subject" || low == "st" || low == "s.t." || low == "bounds" ||
           low == "general" || low == "generals" || low == "gen" || low == "binary" ||
           low == "binaries" || low == "bin" || low == "end";
}

}  // namespace

IlpModel import_lp(const std::string& text) {
    auto t = tokenize_lp(text);
    IlpModel model;
    std::map<std::string, int> index;
    auto var_of = [&](const std::string& name) {
        auto it = index.find(name);
        if (it != index.end()) return it->second;
        const int v = model.add_var({name, VarKind::Binary, 0, 1});
        index[name] = v;
        return v;
    };

    // linear expression until a sense token or section keyword
    auto parse_terms = [&](std::vector<LinTerm>& terms) {
        double sign = 1.0;
        double coef = 1.0;
        while (!t.done()) {
            const std::string& tok = t.peek();
            const std::string low = lower(tok);
            if (tok == "<=" || tok == ">=" || tok == "=" || tok == "<" || tok == ">" ||
                is_section(low))
                break;
            t.next();
            if (tok == "+") continue;
            if (tok == "-") {
                sign = -sign;
                continue;
            }
            if (is_number(tok)) {
                coef *= std::strtod(tok.c_str(), nullptr);
                continue;
            }
            terms.push_back({var_of(tok), sign * coef});
            sign = 1.0;
            coef = 1.0;
        }
    };

    enum Section { None, Objective, Rows, Bounds, Generals, Binaries } section = None;
    bool maximize = true;
    while (!t.done()) {
        std::string tok = t.next();
        std::string low = lower(tok);
        if (low == "maximize" || low == "max") {
            section = Objective;
            maximize = true;
            continue;
        }
        if (low == "minimize" || low == "min") {
            section = Objective;
            maximize = false;
            continue;
        }
        if (low == "subject" || low == "st" || low == "s.t.") {
            if (low == "subject" && !t.done() && lower(t.peek()) == "to") t.next();
            section = Rows;
            continue;
        }
        if (low == "bounds") {
            section = Bounds;
            continue;
        }
        if (low == "general" || low == "generals" || low == "gen") {
            section = Generals;
            continue;
        }
        if (low == "binary" || low == "binaries" || low == "bin") {
            section = Binaries;
            continue;
        }
        if (low == "end") break;

        switch (section) {
            case Objective: {
                // tok is the objective label (expect "name :")
                if (!t.done() && t.peek() == ":") t.next();
                ObjectiveStage s;
                s.maximize = maximize;
                parse_terms(s.terms);
                if (!s.terms.empty()) model.stages.push_back(std::move(s));
                break;
            }
            case Rows: {
                LinRow row;
                row.name = tok;
                if (!t.done() && t.peek() == ":") t.next();
                parse_terms(row.terms);
                const std::string sense = t.next();
                row.sense = (sense == "<=" || sense == "<")   ? RowSense::LE
                            : (sense == ">=" || sense == ">") ? RowSense::GE
                                                              : RowSense::EQ;
                double sign = 1.0;
                std::string rhs = t.next();
                if (rhs == "-") {
                    sign = -1.0;
                    rhs = t.next();
                } else if (rhs == "+") {
                    rhs = t.next();
                }
                row.rhs = sign * std::strtod(rhs.c_str(), nullptr);
                // drop explicit zero-coefficient placeholders
                std::erase_if(row.terms, [](const LinTerm& lt) { return lt.coef == 0.0; });
                model.rows.push_back(std::move(row));
                break;
            }
            case Bounds: {
                // forms: "lo <= x <= hi", "x <= hi", "x >= lo", "x = v"
                auto apply = [&](const std::string& name, std::optional<double> lo,
                                 std::optional<double> hi) {
                    const int v = var_of(name);
                    if (lo) model.vars[v].lb = static_cast<int>(std::ceil(*lo));
                    if (hi) model.vars[v].ub = static_cast<int>(std::floor(*hi));
                };
                auto signed_number = [&]() {
                    double sign = 1.0;
                    std::string s = t.next();
                    while (s == "-" || s == "+") {
                        if (s == "-") sign = -sign;
                        s = t.next();
                    }
                    return sign * std::strtod(s.c_str(), nullptr);
                };
                if (is_number(tok) || tok == "-" || tok == "+") {
                    double sign = tok == "-" ? -1.0 : 1.0;
                    std::string num = (tok == "-" || tok == "+") ? t.next() : tok;
                    const double lo = sign * std::strtod(num.c_str(), nullptr);
                    if (t.next() != "<=") throw std::runtime_error("lp: bad bounds line");
                    const std::string name = t.next();
                    if (t.next() != "<=") throw std::runtime_error("lp: bad bounds line");
                    apply(name, lo, signed_number());
                } else {
                    const std::string sense = t.next();
                    const double v = signed_number();
                    if (sense == "<=" || sense == "<")
                        apply(tok, std::nullopt, v);
                    else if (sense == ">=" || sense == ">")
                        apply(tok, v, std::nullopt);
                    else if (sense == "=")
                        apply(tok, v, v);
                    else
                        throw std::runtime_error("lp: bad bounds line near " + tok);
                }
                break;
            }
            case Generals:
                model.vars[var_of(tok)].kind = VarKind::Integer;
                break;
            case Binaries: {
                auto& v = model.vars[var_of(tok)];
                v.kind = VarKind::Binary;
                v.lb = 0;
                v.ub = 1;
                break;
            }
            case None:
                throw std::runtime_error("lp: token outside any section: " + tok);
        }
    }

    for (const auto& v : model.vars) {
        int i = 0, j = 0;
        if (std::sscanf(v.name.c_str(), "y_%d_%d", &i, &j) == 2)
            model.n_agents = std::max(model.n_agents, std::max(i, j));
        if (std::sscanf(v.name.c_str(), "p_%d", &i) == 1)
            model.n_agents = std::max(model.n_agents, i);
    }
    return model;
}

}  // namespace hm
