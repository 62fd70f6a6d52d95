#include "hm/instances.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "hm/json_io.hpp"

namespace hm {

namespace {

struct Uniform {
    std::mt19937_64 rng;
    explicit Uniform(std::uint64_t seed) : rng(seed) {}
    double operator()() {
        double u;
        do {
            u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        } while (u == 0.0);
        return u;
    }
};

}  // namespace

Market random_market(const GenConfig& cfg) {
    if (cfg.n < 2) throw std::invalid_argument("random_market: need at least two agents");
    if (!(cfg.edge_prob > 0.0 && cfg.edge_prob <= 1.0))
        throw std::invalid_argument("random_market: edge_prob outside (0, 1]");
    const int n = cfg.n;
    Uniform u(cfg.seed);

    Market m;
    m.prefs.rank.assign(n, std::vector<std::optional<int>>(n));
    for (AgentId i = 0; i < n; ++i) {
        std::vector<std::pair<double, AgentId>> drawn;  // (weight, object)
        for (AgentId j = 0; j < n; ++j) {
            if (j == i) continue;
            if (u() >= cfg.edge_prob) continue;
            double w = u();
            if (!cfg.ties) {
                auto collides = [&] {
                    return std::any_of(drawn.begin(), drawn.end(),
                                       [&](const auto& d) { return d.first == w; });
                };
                while (collides()) w = u();
            }
            drawn.push_back({w, j});
            m.weight[{i, j}] = w;
        }
        if (cfg.ties) {
            // higher bucket = better tier
            std::vector<std::pair<int, AgentId>> bucketed;
            for (const auto& [w, j] : drawn)
                bucketed.push_back({static_cast<int>(std::floor(w * n)), j});
            std::sort(bucketed.begin(), bucketed.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });
            int r = 0, prev = -1;
            for (const auto& [b, j] : bucketed) {
                if (b != prev) {
                    ++r;
                    prev = b;
                }
                m.prefs.rank[i][j] = r;
            }
            m.prefs.rank[i][i] = r + 1;
        } else {
            std::sort(drawn.begin(), drawn.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });
            int r = 0;
            for (const auto& [w, j] : drawn) m.prefs.rank[i][j] = ++r;
            m.prefs.rank[i][i] = r + 1;
        }
    }
    return m;
}

Market market_from_tiers(int n, const std::vector<std::vector<std::vector<int>>>& tiers) {
    if (static_cast<int>(tiers.size()) != n)
        throw std::invalid_argument("market_from_tiers: need one tier list per agent");
    Market m;
    m.prefs.rank.assign(n, std::vector<std::optional<int>>(n));
    for (AgentId i = 0; i < n; ++i) {
        for (size_t t = 0; t < tiers[i].size(); ++t)
            for (int id : tiers[i][t]) {
                if (id < 1 || id > n || id == i + 1 || m.prefs.rank[i][id - 1])
                    throw std::invalid_argument("market_from_tiers: bad object id " +
                                                std::to_string(id));
                m.prefs.rank[i][id - 1] = static_cast<int>(t) + 1;
            }
        m.prefs.rank[i][i] = static_cast<int>(tiers[i].size()) + 1;
        for (AgentId j = 0; j < n; ++j)
            if (j != i && m.prefs.rank[i][j])
                m.weight[{i, j}] = derived_weight(*m.prefs.rank[i][j], n);
    }
    return m;
}

Allocation from_cycles(int n, const std::vector<std::vector<int>>& cycles) {
    std::vector<ExchangeCycle> zero_based;
    for (const auto& c : cycles) {
        ExchangeCycle z;
        for (int id : c) {
            if (id < 1 || id > n)
                throw std::invalid_argument("from_cycles: bad agent id " + std::to_string(id));
            z.push_back(id - 1);
        }
        zero_based.push_back(std::move(z));
    }
    return recompose(n, zero_based);
}

namespace {

using Tiers = std::vector<std::vector<std::vector<int>>>;
using Cycles = std::vector<std::vector<int>>;

// Ten agents in a ring, everyone preferring the clockwise neighbour's object
// to the counter-clockwise one.
Tiers ring10() {
    Tiers t(10);
    for (int i = 1; i <= 10; ++i) {
        const int next = i % 10 + 1, prev = (i + 8) % 10 + 1;
        t[i - 1] = {{next}, {prev}};
    }
    return t;
}

Tiers ring10_rb() {
    Tiers t = ring10();
    t[0] = {{4}, {2}, {10}};
    t[3] = {{5}, {8}, {3}};
    t[7] = {{1}, {9}, {7}};
    return t;
}

std::set<Allocation> allocs(int n, const std::vector<Cycles>& members) {
    std::set<Allocation> s;
    for (const auto& c : members) s.insert(from_cycles(n, c));
    return s;
}

}  // namespace

Fixture fixture(const std::string& name) {
    Fixture f;
    if (name == "example1") {
        f.market = market_from_tiers(
            6, {{{2, 3}, {5}}, {{1}, {3}}, {{2}, {4}}, {{3}, {2}}, {{2}, {6}}, {{1}}});
        const Cycles xa = {{1, 3, 2}};
        const Cycles xb = {{1, 2}, {3, 4}};
        const Cycles xc = {{1, 5, 2}, {3, 4}};
        const Cycles xd = {{1, 3, 4, 2}};
        const Cycles xe = {{1, 5, 6}, {2, 3, 4}};
        f.expected["core"] = allocs(6, {xa, xb, xc, xd});
        f.expected["competitive"] = allocs(6, {xa, xb});
        f.expected["strong-core"] = allocs(6, {xa});
        f.expected["max-size"] = allocs(6, {xe});
        return f;
    }
    if (name == "example2-R") {
        f.market =
            market_from_tiers(5, {{{4}, {2}}, {{1}, {3, 5}}, {{4}, {2}}, {{1}}, {{2}}});
        f.expected["competitive"] = allocs(5, {{{1, 4}, {2, 5}}, {{1, 4}, {2, 3}}});
        return f;
    }
    if (name == "example2-Rtilde") {
        f.market =
            market_from_tiers(5, {{{4}, {2}}, {{3}, {1}, {5}}, {{4}, {2}}, {{1, 3}}, {{2}}});
        f.expected["competitive"] = allocs(5, {{{1, 4}, {2, 3}}, {{1, 2}, {3, 4}}});
        return f;
    }
    if (name == "sotomayor-wako") {
        f.market = market_from_tiers(3, {{{2}, {3}}, {{1, 3}}, {{2}, {1}}});
        f.expected["strong-core"] = {};
        return f;
    }
    if (name == "triangle-or-pairs") {
        f.market = market_from_tiers(4, {{{2}}, {{1}, {3}}, {{1}, {4}}, {}});
        f.expected["max-size"] = allocs(4, {{{1, 2, 3}}});
        return f;
    }
    if (name == "triangle-or-pairs-Rtilde") {
        f.market = market_from_tiers(4, {{{2}}, {{1}, {3}}, {{1}, {4}}, {{3}}});
        f.expected["max-size"] = allocs(4, {{{1, 2}, {3, 4}}});
        return f;
    }
    if (name == "pairwise1-R") {
        f.market = market_from_tiers(4, {{{2}, {3}}, {{1}, {4}}, {}, {{2}}});
        return f;
    }
    if (name == "pairwise1-Rtilde") {
        f.market = market_from_tiers(4, {{{2}, {3}}, {{1}, {4}}, {{1}}, {{2}}});
        return f;
    }
    if (name == "pairwise2-R") {
        f.market = market_from_tiers(4, {{{2}, {3}}, {{4}, {1}}, {{4}}, {{3}, {2}}});
        f.expected["2-strong-core"] = allocs(4, {{{1, 2}, {3, 4}}});
        return f;
    }
    if (name == "pairwise2-Rtilde") {
        f.market = market_from_tiers(4, {{{2}, {3}}, {{4}, {1}}, {{1}, {4}}, {{3}, {2}}});
        f.expected["2-strong-core"] = allocs(4, {{{1, 2}, {3, 4}}, {{1, 3}, {2, 4}}});
        return f;
    }
    if (name == "pairwise-ties-R") {
        f.market = market_from_tiers(4, {{{3}}, {{4}}, {{1, 4}}, {{1}, {3}, {2}}});
        f.expected["2-core"] = allocs(4, {{{3, 4}}, {{1, 3}, {2, 4}}});
        f.expected["2-strong-core"] = {};
        return f;
    }
    if (name == "pairwise-ties-Rtilde") {
        f.market = market_from_tiers(4, {{{3}, {4}}, {{4}}, {{1, 4}}, {{1}, {3}, {2}}});
        f.expected["2-core"] = allocs(4, {{{1, 3}, {2, 4}}});
        return f;
    }
    if (name == "example6-R") {
        f.market = market_from_tiers(10, ring10());
        f.expected["3-core"] = allocs(
            10, {{{1, 2}, {3, 4}, {5, 6}, {7, 8}, {9, 10}}, {{10, 1}, {2, 3}, {4, 5}, {6, 7}, {8, 9}}});
        return f;
    }
    if (name == "example6-Rb") {
        f.market = market_from_tiers(10, ring10_rb());
        f.expected["3-core"] = allocs(10, {{{10, 1}, {2, 3}, {4, 5}, {6, 7}, {8, 9}}});
        return f;
    }
    if (name == "example6-Rb-minus81") {
        Tiers t = ring10_rb();
        t[7] = {{9}, {7}};
        f.market = market_from_tiers(10, t);
        return f;
    }
    throw std::invalid_argument("unknown fixture: " + name);
}

std::vector<std::string> fixture_names() {
    return {"example1",         "example2-R",        "example2-Rtilde",
            "sotomayor-wako",   "triangle-or-pairs", "triangle-or-pairs-Rtilde",
            "pairwise1-R",      "pairwise1-Rtilde",  "pairwise2-R",
            "pairwise2-Rtilde", "pairwise-ties-R",   "pairwise-ties-Rtilde",
            "example6-R",       "example6-Rb",       "example6-Rb-minus81"};
}

}  // namespace hm
