#pragma once

#include <string>

#include "hm/market.hpp"
#include "json.hpp"

// Instance files are JSON with 1-based agent ids:
//   {
//     "n": 6,
//     "prefs":   [ [[2,3],[5]], [[1],[3]], ... ],   // tiers, best first; own object
//                                                   // is implicit and ranked last
//     "weights": [ [1,2,0.61], [1,3,0.55], ... ]    // optional; one entry per
//   }                                               // non-self acceptable edge
//
// When "weights" is absent, weights are derived from ranks as
// 1 - rank/(n+2), so preferred edges carry more weight and everything stays
// inside (0,1).  Allocations are {"cycles": [[1,3,2],[4]]} (or {"allot":
// [...]}), again 1-based.

namespace hm {

nlohmann::json market_to_json(const Market& m);
Market market_from_json(const nlohmann::json& j);

Market load_market(const std::string& path);
void save_market(const Market& m, const std::string& path);

nlohmann::json allocation_to_json(const Allocation& x);
Allocation allocation_from_json(const nlohmann::json& j, int n);
Allocation load_allocation(const std::string& path, int n);

// Rank-derived default used when an instance file carries no weights.
double derived_weight(int rank, int n);

}  // namespace hm
