#include "hm/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace hm {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) {
    throw std::runtime_error("instance: " + what);
}

}  // namespace

double derived_weight(int rank, int n) {
    return 1.0 - static_cast<double>(rank) / (n + 2);
}

nlohmann::json market_to_json(const Market& m) {
    json j;
    const int n = m.n();
    j["n"] = n;
    json prefs = json::array();
    for (AgentId i = 0; i < n; ++i) {
        json tiers = json::array();
        for (const auto& tier : m.prefs.tiers(i)) {
            json t = json::array();
            for (AgentId o : tier)
                if (o != i) t.push_back(o + 1);
            if (!t.empty()) tiers.push_back(t);
        }
        prefs.push_back(tiers);
    }
    j["prefs"] = prefs;
    json weights = json::array();
    for (const auto& [e, w] : m.weight) weights.push_back({e.first + 1, e.second + 1, w});
    j["weights"] = weights;
    return j;
}

Market market_from_json(const nlohmann::json& j) {
    if (!j.contains("n") || !j["n"].is_number_integer()) bad("missing integer field \"n\"");
    const int n = j["n"].get<int>();
    if (n <= 0) bad("\"n\" must be positive");
    if (!j.contains("prefs") || !j["prefs"].is_array() ||
        static_cast<int>(j["prefs"].size()) != n)
        bad("\"prefs\" must list tiers for all " + std::to_string(n) + " agents");

    Market m;
    m.prefs.rank.assign(n, std::vector<std::optional<int>>(n));
    for (AgentId i = 0; i < n; ++i) {
        int r = 0;
        for (const auto& tier : j["prefs"][i]) {
            ++r;
            if (!tier.is_array() || tier.empty()) bad("agent " + std::to_string(i + 1) + ": empty tier");
            for (const auto& o : tier) {
                const int obj = o.get<int>() - 1;
                if (obj < 0 || obj >= n) bad("agent " + std::to_string(i + 1) + ": object id out of range");
                if (obj == i) bad("agent " + std::to_string(i + 1) + ": own object may not be listed");
                if (m.prefs.rank[i][obj]) bad("agent " + std::to_string(i + 1) + ": duplicate object");
                m.prefs.rank[i][obj] = r;
            }
        }
        m.prefs.rank[i][i] = r + 1;  // own object: implicit, strictly last
    }

    if (j.contains("weights") && !j["weights"].empty()) {
        for (const auto& t : j["weights"]) {
            if (!t.is_array() || t.size() != 3) bad("weight entries must be [i, j, w]");
            const int i = t[0].get<int>() - 1, o = t[1].get<int>() - 1;
            const double w = t[2].get<double>();
            if (i < 0 || i >= n || o < 0 || o >= n) bad("weight entry out of range");
            if (!m.weight.emplace(std::make_pair(i, o), w).second) bad("duplicate weight entry");
        }
    } else {
        for (AgentId i = 0; i < n; ++i)
            for (AgentId o = 0; o < n; ++o)
                if (o != i && m.prefs.rank[i][o])
                    m.weight[{i, o}] = derived_weight(*m.prefs.rank[i][o], n);
    }
    return m;
}

Market load_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return market_from_json(j);
}

void save_market(const Market& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << market_to_json(m).dump(2) << '\n';
}

nlohmann::json allocation_to_json(const Allocation& x) {
    json cycles = json::array();
    for (const auto& c : decompose(x)) {
        json jc = json::array();
        for (AgentId v : c) jc.push_back(v + 1);
        cycles.push_back(jc);
    }
    return json{{"cycles", cycles}};
}

Allocation allocation_from_json(const nlohmann::json& j, int n) {
    if (j.contains("allot")) {
        Allocation x;
        for (const auto& v : j["allot"]) x.allot.push_back(v.get<int>() - 1);
        if (x.n() != n) bad("\"allot\" length differs from n");
        decompose(x);  // permutation check
        return x;
    }
    if (!j.contains("cycles")) bad("allocation needs \"cycles\" or \"allot\"");
    std::vector<ExchangeCycle> cycles;
    for (const auto& jc : j["cycles"]) {
        ExchangeCycle c;
        for (const auto& v : jc) {
            const int a = v.get<int>() - 1;
            if (a < 0 || a >= n) bad("cycle member out of range");
            c.push_back(a);
        }
        cycles.push_back(c);
    }
    Allocation x = recompose(n, cycles);
    decompose(x);  // rejects overlapping cycles
    return x;
}

Allocation load_allocation(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return allocation_from_json(j, n);
}

}  // namespace hm
