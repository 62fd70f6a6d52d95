#include "hm/market.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hm {

namespace {

std::string pair_str(AgentId i, AgentId j) {
    return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

}  // namespace

bool PreferenceProfile::is_strict() const {
    for (AgentId i = 0; i < n(); ++i) {
        std::vector<int> seen;
        for (AgentId j = 0; j < n(); ++j)
            if (rank[i][j]) seen.push_back(*rank[i][j]);
        std::sort(seen.begin(), seen.end());
        if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return false;
    }
    return true;
}

std::vector<AgentId> PreferenceProfile::acceptable_objects(AgentId i) const {
    std::vector<AgentId> objs;
    for (AgentId j = 0; j < n(); ++j)
        if (rank[i][j]) objs.push_back(j);
    std::stable_sort(objs.begin(), objs.end(),
                     [&](AgentId a, AgentId b) { return *rank[i][a] < *rank[i][b]; });
    return objs;
}

std::vector<std::vector<AgentId>> PreferenceProfile::tiers(AgentId i) const {
    std::vector<std::vector<AgentId>> out;
    for (AgentId j : acceptable_objects(i)) {
        if (out.empty() || *rank[i][out.back().front()] != *rank[i][j]) out.emplace_back();
        out.back().push_back(j);
    }
    return out;
}

std::vector<Violation> validate(const Market& m) {
    std::vector<Violation> v;
    const int n = m.n();
    for (AgentId i = 0; i < n; ++i) {
        if (static_cast<int>(m.prefs.rank[i].size()) != n) {
            v.push_back({"ragged-rank-matrix", "row " + std::to_string(i + 1)});
            return v;  // nothing else is well-defined
        }
        if (!m.prefs.rank[i][i]) {
            v.push_back({"missing-self-rank", "agent " + std::to_string(i + 1)});
            continue;
        }
        for (AgentId j = 0; j < n; ++j)
            if (j != i && m.prefs.rank[i][j] && *m.prefs.rank[i][j] >= *m.prefs.rank[i][i])
                v.push_back({"self-not-worst", "agent " + std::to_string(i + 1) +
                                                   " ranks own object at or above " +
                                                   std::to_string(j + 1)});
    }
    for (AgentId i = 0; i < n; ++i)
        for (AgentId j = 0; j < n; ++j) {
            if (j == i) continue;
            const bool acc = m.prefs.rank[i][j].has_value();
            const auto it = m.weight.find({i, j});
            if (acc && it == m.weight.end())
                v.push_back({"missing-weight", "edge " + pair_str(i, j)});
            if (acc && it != m.weight.end() && (it->second <= 0.0 || it->second >= 1.0))
                v.push_back({"weight-out-of-range", "edge " + pair_str(i, j)});
        }
    for (const auto& [e, w] : m.weight) {
        const auto [i, j] = e;
        if (i < 0 || i >= n || j < 0 || j >= n || i == j || !m.prefs.rank[i][j])
            v.push_back({"stray-weight", "edge " + pair_str(i, j)});
    }
    return v;
}

AcceptabilityGraph acceptability_graph(const Market& m) {
    AcceptabilityGraph g;
    g.n = m.n();
    g.out.resize(g.n);
    for (AgentId i = 0; i < g.n; ++i)
        for (AgentId j = 0; j < g.n; ++j)
            if (m.prefs.rank[i][j]) g.out[i].push_back(j);
    return g;
}

bool AcceptabilityGraph::has_edge(AgentId i, AgentId j) const {
    return std::binary_search(out[i].begin(), out[i].end(), j);
}

std::vector<std::pair<AgentId, AgentId>> AcceptabilityGraph::edges() const {
    std::vector<std::pair<AgentId, AgentId>> es;
    for (AgentId i = 0; i < n; ++i)
        for (AgentId j : out[i]) es.emplace_back(i, j);
    return es;
}

int AcceptabilityGraph::edge_count() const {
    int c = 0;
    for (const auto& o : out) c += static_cast<int>(o.size());
    return c;
}

std::vector<ExchangeCycle> decompose(const Allocation& x) {
    const int n = x.n();
    std::vector<char> hit(n, 0);
    for (AgentId j : x.allot) {
        if (j < 0 || j >= n || hit[j]) throw std::invalid_argument("allocation is not a permutation");
        hit[j] = 1;
    }
    std::vector<ExchangeCycle> cycles;
    std::vector<char> done(n, 0);
    for (AgentId s = 0; s < n; ++s) {
        if (done[s]) continue;
        ExchangeCycle c;
        for (AgentId v = s; !done[v]; v = x.allot[v]) {
            done[v] = 1;
            c.push_back(v);
        }
        cycles.push_back(std::move(c));
    }
    return cycles;  // already canonical: outer scan visits smallest member first
}

Allocation recompose(int n, const std::vector<ExchangeCycle>& cycles) {
    Allocation x;
    x.allot.resize(n);
    for (AgentId i = 0; i < n; ++i) x.allot[i] = i;
    for (const auto& c : cycles)
        for (size_t t = 0; t < c.size(); ++t) x.allot[c[t]] = c[(t + 1) % c.size()];
    return x;
}

bool is_individually_rational(const Market& m, const Allocation& x) {
    for (AgentId i = 0; i < m.n(); ++i)
        if (!m.prefs.rank[i][x.allot[i]]) return false;
    return true;
}

bool is_k_allocation(const Allocation& x, int k) {
    for (const auto& c : decompose(x))
        if (static_cast<int>(c.size()) > k) return false;
    return true;
}

int allocation_size(const Allocation& x) {
    int s = 0;
    for (AgentId i = 0; i < x.n(); ++i)
        if (x.allot[i] != i) ++s;
    return s;
}

double allocation_weight(const Market& m, const Allocation& x) {
    double w = 0.0;
    for (AgentId i = 0; i < x.n(); ++i)
        if (x.allot[i] != i) w += m.edge_weight(i, x.allot[i]);
    return w;
}

bool welfare_equivalent(const Market& m, const Allocation& a, const Allocation& b) {
    for (AgentId i = 0; i < m.n(); ++i) {
        const auto& ra = m.prefs.rank[i][a.allot[i]];
        const auto& rb = m.prefs.rank[i][b.allot[i]];
        if (!ra || !rb || *ra != *rb) return false;
    }
    return true;
}

}  // namespace hm
