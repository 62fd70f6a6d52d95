#include "hm/ttc.hpp"

#include <algorithm>
#include <stdexcept>

#include "hm/errors.hpp"

namespace hm {

namespace {

// All cycles of the functional graph `next` restricted to alive nodes.
std::vector<std::vector<AgentId>> functional_cycles(const std::vector<AgentId>& next,
                                                    const std::vector<char>& alive) {
    const int n = static_cast<int>(next.size());
    std::vector<int> state(n, 0);  // 0 fresh, 1 on current walk, 2 settled
    std::vector<std::vector<AgentId>> cycles;
    for (AgentId s = 0; s < n; ++s) {
        if (!alive[s] || state[s]) continue;
        std::vector<AgentId> walk;
        AgentId v = s;
        while (state[v] == 0) {
            state[v] = 1;
            walk.push_back(v);
            v = next[v];
        }
        if (state[v] == 1) {  // closed a new cycle at v
            auto it = std::find(walk.begin(), walk.end(), v);
            cycles.emplace_back(it, walk.end());
        }
        for (AgentId u : walk) state[u] = 2;
    }
    return cycles;
}

std::vector<std::vector<AgentId>> per_agent_linearizations(const Market& m, AgentId i) {
    std::vector<std::vector<AgentId>> acc = {{}};
    for (auto tier : m.prefs.tiers(i)) {
        std::sort(tier.begin(), tier.end());
        std::vector<std::vector<AgentId>> grown;
        do {
            for (const auto& head : acc) {
                auto order = head;
                order.insert(order.end(), tier.begin(), tier.end());
                grown.push_back(std::move(order));
            }
        } while (std::next_permutation(tier.begin(), tier.end()));
        acc = std::move(grown);
    }
    std::sort(acc.begin(), acc.end());
    return acc;
}

}  // namespace

TieBreak identity_tie_break(const Market& m) {
    TieBreak tb;
    tb.order.resize(m.n());
    for (AgentId i = 0; i < m.n(); ++i) tb.order[i] = m.prefs.acceptable_objects(i);
    return tb;
}

TieBreak tie_break_from_orders(const Market& m, std::vector<std::vector<AgentId>> order) {
    if (static_cast<int>(order.size()) != m.n())
        throw std::invalid_argument("tie-break must list every agent");
    for (AgentId i = 0; i < m.n(); ++i) {
        const auto& o = order[i];
        auto acceptable = m.prefs.acceptable_objects(i);
        auto sorted = o;
        std::sort(sorted.begin(), sorted.end());
        std::sort(acceptable.begin(), acceptable.end());
        if (sorted != acceptable)
            throw std::invalid_argument("tie-break for agent " + std::to_string(i + 1) +
                                        " is not a permutation of the acceptable objects");
        for (size_t t = 1; t < o.size(); ++t)
            if (m.prefs.strictly_prefers(i, o[t], o[t - 1]))
                throw std::invalid_argument("tie-break for agent " + std::to_string(i + 1) +
                                            " does not refine the preferences");
    }
    return TieBreak{std::move(order)};
}

TradeGraph ttc(const Market& m, const TieBreak& tb) {
    const int n = m.n();
    TradeGraph g;
    g.n = n;
    g.allocation.allot.resize(n);
    g.round.assign(n, 0);

    std::vector<char> alive(n, 1);
    std::vector<size_t> cursor(n, 0);
    std::vector<AgentId> top(n);
    auto retarget = [&](AgentId i) {
        while (!alive[tb.order[i][cursor[i]]]) ++cursor[i];
        top[i] = tb.order[i][cursor[i]];  // own object keeps every list non-empty
    };
    for (AgentId i = 0; i < n; ++i) retarget(i);

    int remaining = n;
    for (int round = 1; remaining > 0; ++round) {
        auto cycles = functional_cycles(top, alive);
        // the cycle holding the smallest agent id goes first
        const auto* pick = &cycles.front();
        for (const auto& c : cycles)
            if (*std::min_element(c.begin(), c.end()) <
                *std::min_element(pick->begin(), pick->end()))
                pick = &c;
        std::vector<char> in_cycle(n, 0);
        for (AgentId v : *pick) in_cycle[v] = 1;
        for (AgentId u = 0; u < n; ++u)
            if (alive[u] && !in_cycle[u] && in_cycle[top[u]])
                g.pointing_edges.emplace_back(u, top[u]);
        for (AgentId v : *pick) {
            g.cycle_edges.emplace_back(v, top[v]);
            g.allocation.allot[v] = top[v];
            g.round[v] = round;
            alive[v] = 0;
        }
        remaining -= static_cast<int>(pick->size());
        for (AgentId u = 0; u < n; ++u)
            if (alive[u]) retarget(u);
    }
    return g;
}

std::set<Allocation> competitive_set_by_tiebreak(const Market& m, long cap) {
    double count = 1.0;
    for (AgentId i = 0; i < m.n(); ++i)
        for (const auto& tier : m.prefs.tiers(i))
            for (size_t f = 2; f <= tier.size(); ++f) {
                count *= static_cast<double>(f);
                if (count > static_cast<double>(cap)) throw TieBreakExplosion(count, cap);
            }

    std::vector<std::vector<std::vector<AgentId>>> lin(m.n());
    for (AgentId i = 0; i < m.n(); ++i) lin[i] = per_agent_linearizations(m, i);

    std::set<Allocation> out;
    std::vector<size_t> odo(m.n(), 0);
    TieBreak tb;
    tb.order.resize(m.n());
    while (true) {
        for (AgentId i = 0; i < m.n(); ++i) tb.order[i] = lin[i][odo[i]];
        out.insert(ttc(m, tb).allocation);
        AgentId i = 0;
        for (; i < m.n(); ++i) {
            if (++odo[i] < lin[i].size()) break;
            odo[i] = 0;
        }
        if (i == m.n()) break;
    }
    return out;
}

Relation classify(const TradeGraph& g, AgentId i, AgentId j) {
    if (i == j) throw std::invalid_argument("classify: agents must differ");

    std::vector<std::vector<AgentId>> succ(g.n);
    for (auto [u, v] : g.cycle_edges) succ[u].push_back(v);
    // same removed cycle <=> mutually reachable over cycle edges alone
    auto cycle_reach = [&](AgentId from, AgentId to) {
        std::vector<char> seen(g.n, 0);
        std::vector<AgentId> stack = {from};
        seen[from] = 1;
        while (!stack.empty()) {
            AgentId u = stack.back();
            stack.pop_back();
            if (u == to) return true;
            for (AgentId v : succ[u])
                if (!seen[v]) seen[v] = 1, stack.push_back(v);
        }
        return false;
    };
    if (g.round[i] == g.round[j] && cycle_reach(i, j)) return Relation::CycleMembers;

    std::vector<std::vector<AgentId>> all(g.n);
    for (auto [u, v] : g.cycle_edges) all[u].push_back(v);
    for (auto [u, v] : g.pointing_edges) all[u].push_back(v);
    auto reach = [&](AgentId from, AgentId to) {
        std::vector<char> seen(g.n, 0);
        std::vector<AgentId> stack = {from};
        seen[from] = 1;
        while (!stack.empty()) {
            AgentId u = stack.back();
            stack.pop_back();
            if (u == to) return true;
            for (AgentId v : all[u])
                if (!seen[v]) seen[v] = 1, stack.push_back(v);
        }
        return false;
    };
    if (reach(i, j)) return Relation::PredecessorOf;
    if (reach(j, i)) return Relation::SuccessorOf;
    return Relation::Independent;
}

}  // namespace hm
