#pragma once

#include <stdexcept>
#include <string>

namespace hm {

// Number of tie-break linearizations exceeds the enumeration cap.
struct TieBreakExplosion : std::runtime_error {
    double count;
    long cap;
    TieBreakExplosion(double count_, long cap_)
        : std::runtime_error("tie-break linearizations exceed cap (" +
                             std::to_string(count_) + " > " + std::to_string(cap_) + ")"),
          count(count_),
          cap(cap_) {}
};

// Cycle-cover selections exceed the enumeration cap.
struct CoverExplosion : std::runtime_error {
    double count;
    long cap;
    CoverExplosion(double count_, long cap_)
        : std::runtime_error("cycle-cover selections exceed cap (" + std::to_string(count_) +
                             " > " + std::to_string(cap_) + ")"),
          count(count_),
          cap(cap_) {}
};

// Blocking-cycle search visited more partial paths than allowed.
struct SearchLimitExceeded : std::runtime_error {
    long limit;
    explicit SearchLimitExceeded(long limit_)
        : std::runtime_error("blocking-cycle search exceeded " + std::to_string(limit_) +
                             " partial paths"),
          limit(limit_) {}
};

// Bounded-formulation cycle pre-enumeration found too many cycles.
struct CycleEnumerationLimit : std::runtime_error {
    long limit;
    explicit CycleEnumerationLimit(long limit_)
        : std::runtime_error("cycle enumeration exceeded " + std::to_string(limit_) + " cycles"),
          limit(limit_) {}
};

// enumerate_feasible hit its allocation cap.
struct EnumerationCapExceeded : std::runtime_error {
    long cap;
    explicit EnumerationCapExceeded(long cap_)
        : std::runtime_error("feasible-set enumeration exceeded cap " + std::to_string(cap_)),
          cap(cap_) {}
};

// Brute-force oracle refused an instance (guard: n <= 10).
struct OracleTooLarge : std::runtime_error {
    int n;
    explicit OracleTooLarge(int n_)
        : std::runtime_error("oracle guard: n = " + std::to_string(n_) + " exceeds 10"),
          n(n_) {}
};

// Allocation violates the requested cycle-length bound.
struct NotKAllocation : std::runtime_error {
    int k;
    explicit NotKAllocation(int k_)
        : std::runtime_error("allocation has a cycle longer than k = " + std::to_string(k_)),
          k(k_) {}
};

}  // namespace hm
