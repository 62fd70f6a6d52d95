#include "hm/strong_core.hpp"

#include <algorithm>
#include <map>

#include "hm/errors.hpp"

namespace hm {

namespace {

// Iterative Tarjan over the subgraph of nodes with non-empty out rows.
std::vector<std::vector<AgentId>> strong_components(
    const std::vector<std::vector<AgentId>>& out) {
    const int n = static_cast<int>(out.size());
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<AgentId> stack;
    std::vector<std::vector<AgentId>> comps;
    int next_index = 0;

    struct Frame {
        AgentId v;
        size_t edge;
    };
    for (AgentId s = 0; s < n; ++s) {
        if (index[s] != -1 || out[s].empty()) continue;
        std::vector<Frame> call = {{s, 0}};
        index[s] = low[s] = next_index++;
        stack.push_back(s);
        on_stack[s] = 1;
        while (!call.empty()) {
            auto& [v, edge] = call.back();
            if (edge < out[v].size()) {
                AgentId w = out[v][edge++];
                if (index[w] == -1) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
            } else {
                if (low[v] == index[v]) {
                    std::vector<AgentId> comp;
                    AgentId w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        comp.push_back(w);
                    } while (w != v);
                    std::sort(comp.begin(), comp.end());
                    comps.push_back(std::move(comp));
                }
                call.pop_back();
                if (!call.empty()) {
                    AgentId u = call.back().v;
                    low[u] = std::min(low[u], low[v]);
                }
            }
        }
    }
    return comps;
}

// Kuhn's augmenting paths: match every agent of `s` to a distinct object
// along most-preferred edges.
std::optional<std::vector<AgentId>> perfect_matching(const AbsorbingSet& s) {
    const int m = static_cast<int>(s.nodes.size());
    std::map<AgentId, int> pos;
    for (int a = 0; a < m; ++a) pos[s.nodes[a]] = a;
    std::vector<std::vector<int>> adj(m);
    for (auto [u, v] : s.edges) adj[pos.at(u)].push_back(pos.at(v));

    std::vector<int> match_obj(m, -1), match_agent(m, -1);
    std::vector<char> seen(m);
    auto augment = [&](auto&& self, int a) -> bool {
        for (int o : adj[a]) {
            if (seen[o]) continue;
            seen[o] = 1;
            if (match_obj[o] == -1 || self(self, match_obj[o])) {
                match_obj[o] = a;
                match_agent[a] = o;
                return true;
            }
        }
        return false;
    };
    for (int a = 0; a < m; ++a) {
        std::fill(seen.begin(), seen.end(), 0);
        if (!augment(augment, a)) return std::nullopt;
    }
    std::vector<AgentId> allot(m);
    for (int a = 0; a < m; ++a) allot[a] = s.nodes[match_agent[a]];
    return allot;
}

CycleCover cover_from_local_allot(const AbsorbingSet& s, const std::vector<AgentId>& allot) {
    // permutation on s.nodes -> cycles in global agent ids
    const int m = static_cast<int>(s.nodes.size());
    std::map<AgentId, int> pos;
    for (int a = 0; a < m; ++a) pos[s.nodes[a]] = a;
    std::vector<char> done(m, 0);
    CycleCover cover;
    for (int a = 0; a < m; ++a) {
        if (done[a]) continue;
        ExchangeCycle c;
        for (int v = a; !done[v]; v = pos.at(allot[v])) {
            done[v] = 1;
            c.push_back(s.nodes[v]);
        }
        cover.cycles.push_back(std::move(c));
    }
    return cover;
}

// Every way to match the set's agents to distinct most-preferred objects.
std::vector<std::vector<AgentId>> all_perfect_matchings(const AbsorbingSet& s, long cap) {
    const int m = static_cast<int>(s.nodes.size());
    std::map<AgentId, int> pos;
    for (int a = 0; a < m; ++a) pos[s.nodes[a]] = a;
    std::vector<std::vector<int>> adj(m);
    for (auto [u, v] : s.edges) adj[pos.at(u)].push_back(pos.at(v));
    for (auto& a : adj) std::sort(a.begin(), a.end());

    std::vector<std::vector<AgentId>> out;
    std::vector<int> current(m, -1);
    std::vector<char> used(m, 0);
    long visited = 0;
    auto rec = [&](auto&& self, int a) -> void {
        if (++visited > 20'000'000) throw CoverExplosion(static_cast<double>(visited), cap);
        if (a == m) {
            std::vector<AgentId> allot(m);
            for (int i = 0; i < m; ++i) allot[i] = s.nodes[current[i]];
            out.push_back(std::move(allot));
            if (static_cast<long>(out.size()) > cap)
                throw CoverExplosion(static_cast<double>(out.size()), cap);
            return;
        }
        for (int o : adj[a]) {
            if (used[o]) continue;
            used[o] = 1;
            current[a] = o;
            self(self, a + 1);
            used[o] = 0;
        }
    };
    rec(rec, 0);
    return out;
}

struct Peeling {
    std::vector<AbsorbingSet> sets;
    TradeGraph graph;
};

// Runs the round structure shared by strong_core and enumerate_strong_core:
// peel absorbing sets round by round, recording E^S (cycle_edges) and E^P
// (pointing_edges).  Cover selection is left to the caller.
Peeling peel(const Market& m) {
    const int n = m.n();
    Peeling p;
    p.graph.n = n;
    p.graph.allocation.allot.resize(n);
    for (AgentId i = 0; i < n; ++i) p.graph.allocation.allot[i] = i;
    p.graph.round.assign(n, 0);

    std::vector<char> alive(n, 1);
    int remaining = n;
    const auto full = acceptability_graph(m);
    for (int round = 1; remaining > 0; ++round) {
        std::vector<std::vector<AgentId>> sub(n);
        for (AgentId i = 0; i < n; ++i)
            if (alive[i])
                for (AgentId j : full.out[i])
                    if (alive[j]) sub[i].push_back(j);
        auto top = most_preferred_edges(sub, m.prefs);
        auto sets = absorbing_sets(top, round);
        std::vector<char> removed(n, 0);
        for (auto& s : sets)
            for (AgentId v : s.nodes) removed[v] = 1;
        for (AgentId u = 0; u < n; ++u)
            if (alive[u] && !removed[u])
                for (AgentId v : top[u])
                    if (removed[v]) p.graph.pointing_edges.emplace_back(u, v);
        for (auto& s : sets) {
            for (auto e : s.edges) p.graph.cycle_edges.push_back(e);
            for (AgentId v : s.nodes) {
                p.graph.round[v] = round;
                alive[v] = 0;
            }
            remaining -= static_cast<int>(s.nodes.size());
            p.sets.push_back(std::move(s));
        }
    }
    return p;
}

}  // namespace

std::vector<std::vector<AgentId>> most_preferred_edges(
    const std::vector<std::vector<AgentId>>& sub, const PreferenceProfile& prefs) {
    std::vector<std::vector<AgentId>> top(sub.size());
    for (AgentId i = 0; i < static_cast<int>(sub.size()); ++i) {
        if (sub[i].empty()) continue;
        int best = *prefs.rank[i][sub[i].front()];
        for (AgentId j : sub[i]) best = std::min(best, *prefs.rank[i][j]);
        for (AgentId j : sub[i])
            if (*prefs.rank[i][j] == best) top[i].push_back(j);
    }
    return top;
}

std::vector<AbsorbingSet> absorbing_sets(const std::vector<std::vector<AgentId>>& top,
                                         int round) {
    const int n = static_cast<int>(top.size());
    auto comps = strong_components(top);
    std::vector<int> comp_of(n, -1);
    for (int c = 0; c < static_cast<int>(comps.size()); ++c)
        for (AgentId v : comps[c]) comp_of[v] = c;

    std::vector<AbsorbingSet> sinks;
    for (int c = 0; c < static_cast<int>(comps.size()); ++c) {
        bool sink = true;
        for (AgentId u : comps[c])
            for (AgentId v : top[u])
                if (comp_of[v] != c) sink = false;
        if (!sink) continue;
        AbsorbingSet s;
        s.nodes = comps[c];
        s.round = round;
        for (AgentId u : comps[c])
            for (AgentId v : top[u]) s.edges.emplace_back(u, v);
        sinks.push_back(std::move(s));
    }
    // deterministic order: by smallest member
    std::sort(sinks.begin(), sinks.end(),
              [](const AbsorbingSet& a, const AbsorbingSet& b) { return a.nodes < b.nodes; });
    return sinks;
}

std::optional<CycleCover> cycle_cover(const AbsorbingSet& s) {
    auto allot = perfect_matching(s);
    if (!allot) return std::nullopt;
    return cover_from_local_allot(s, *allot);
}

std::optional<std::pair<Allocation, TradeGraph>> strong_core(const Market& m) {
    auto p = peel(m);
    for (const auto& s : p.sets) {
        auto cover = cycle_cover(s);
        if (!cover) return std::nullopt;
        for (const auto& c : cover->cycles)
            for (size_t t = 0; t < c.size(); ++t)
                p.graph.allocation.allot[c[t]] = c[(t + 1) % c.size()];
    }
    return std::make_pair(p.graph.allocation, p.graph);
}

std::set<Allocation> enumerate_strong_core(const Market& m, long cap) {
    auto p = peel(m);
    std::vector<std::vector<std::vector<AgentId>>> options;  // per set, local allotments
    double combos = 1.0;
    for (const auto& s : p.sets) {
        auto matchings = all_perfect_matchings(s, 100'000);
        if (matchings.empty()) return {};
        combos *= static_cast<double>(matchings.size());
        if (combos > static_cast<double>(cap)) throw CoverExplosion(combos, cap);
        options.push_back(std::move(matchings));
    }

    std::set<Allocation> out;
    std::vector<size_t> odo(options.size(), 0);
    while (true) {
        Allocation x = p.graph.allocation;  // starts as identity
        for (size_t s = 0; s < options.size(); ++s) {
            const auto& nodes = p.sets[s].nodes;
            const auto& allot = options[s][odo[s]];
            for (size_t a = 0; a < nodes.size(); ++a) x.allot[nodes[a]] = allot[a];
        }
        out.insert(std::move(x));
        size_t s = 0;
        for (; s < options.size(); ++s) {
            if (++odo[s] < options[s].size()) break;
            odo[s] = 0;
        }
        if (s == options.size()) break;
    }
    return out;
}

}  // namespace hm
