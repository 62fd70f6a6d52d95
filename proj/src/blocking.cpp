#include "hm/blocking.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "hm/errors.hpp"

namespace hm {

namespace {

struct Search {
    const Market& m;
    const Allocation& x;
    int l;
    BlockMode mode;
    long limit;
    long visited = 0;
    std::function<bool(const ExchangeCycle&)> sink{};  // returns true to stop

    bool edge_ok(AgentId u, AgentId v) const {
        const auto& r = m.prefs.rank[u];
        if (!r[v]) return false;
        switch (mode) {
            case BlockMode::Strict:
                return *r[v] < *r[x.allot[u]];
            case BlockMode::Weak:
                return *r[v] <= *r[x.allot[u]];
            case BlockMode::AntisymWeak:
                return *r[v] < *r[x.allot[u]] || v == x.allot[u];
        }
        return false;
    }

    bool strictly_better(AgentId u, AgentId v) const {
        return *m.prefs.rank[u][v] < *m.prefs.rank[u][x.allot[u]];
    }

    // DFS restricted to nodes > anchor; emits cycles closing back at anchor.
    bool grow(AgentId anchor, std::vector<AgentId>& path, std::vector<char>& on_path,
              bool any_strict) {
        if (++visited > limit) throw SearchLimitExceeded(limit);
        const AgentId u = path.back();
        if (path.size() >= 2 && edge_ok(u, anchor)) {
            const bool strict = any_strict || strictly_better(u, anchor);
            if (mode == BlockMode::Strict || strict)
                if (sink(path)) return true;
        }
        if (static_cast<int>(path.size()) == l) return false;
        for (AgentId v = anchor + 1; v < m.n(); ++v) {
            if (on_path[v] || !edge_ok(u, v)) continue;
            path.push_back(v);
            on_path[v] = 1;
            const bool stop = grow(anchor, path, on_path, any_strict || strictly_better(u, v));
            path.pop_back();
            on_path[v] = 0;
            if (stop) return true;
        }
        return false;
    }

    void run() {
        std::vector<AgentId> path;
        std::vector<char> on_path(m.n(), 0);
        for (AgentId a = 0; a < m.n(); ++a) {
            path = {a};
            std::fill(on_path.begin(), on_path.end(), 0);
            on_path[a] = 1;
            if (grow(a, path, on_path, false)) return;
        }
    }
};

void require_ir(const Market& m, const Allocation& x) {
    if (x.n() != m.n()) throw std::invalid_argument("allocation size differs from market");
    if (!is_individually_rational(m, x))
        throw std::invalid_argument("allocation is not individually rational");
}

}  // namespace

BlockReport find_blocking_cycles(const Market& m, const Allocation& x, int l, BlockMode mode,
                                 long limit) {
    require_ir(m, x);
    l = std::min(l, m.n());
    if (l < 2) throw std::invalid_argument("cycle length bound must be at least 2");
    BlockReport report;
    Search s{m, x, l, mode, limit};
    s.sink = [&](const ExchangeCycle& c) {
        report.cycles.push_back(c);
        return false;
    };
    s.run();
    for (const auto& c : report.cycles)
        for (size_t t = 0; t < c.size(); ++t) {
            const AgentId u = c[t], got = c[(t + 1) % c.size()];
            if (*m.prefs.rank[u][got] < *m.prefs.rank[u][x.allot[u]]) report.improvable.insert(u);
        }
    return report;
}

std::optional<ExchangeCycle> first_blocking_cycle(const Market& m, const Allocation& x, int l,
                                                  BlockMode mode, long limit) {
    require_ir(m, x);
    l = std::min(l, m.n());
    if (l < 2) throw std::invalid_argument("cycle length bound must be at least 2");
    std::optional<ExchangeCycle> found;
    Search s{m, x, l, mode, limit};
    s.sink = [&](const ExchangeCycle& c) {
        found = c;
        return true;
    };
    s.run();
    return found;
}

namespace {

bool member(const Market& m, const Allocation& x, std::optional<int> k, BlockMode mode) {
    require_ir(m, x);
    if (k && !is_k_allocation(x, *k)) throw NotKAllocation(*k);
    const int l = k ? std::min(*k, m.n()) : m.n();
    if (l < 2) return true;  // no coalition of size >= 2 allowed, and size-1 never blocks IR
    return !first_blocking_cycle(m, x, l, mode).has_value();
}

}  // namespace

bool in_core(const Market& m, const Allocation& x, std::optional<int> k) {
    return member(m, x, k, BlockMode::Strict);
}

bool in_wako_core(const Market& m, const Allocation& x, std::optional<int> k) {
    return member(m, x, k, BlockMode::AntisymWeak);
}

bool in_strong_core(const Market& m, const Allocation& x, std::optional<int> k) {
    return member(m, x, k, BlockMode::Weak);
}

}  // namespace hm
