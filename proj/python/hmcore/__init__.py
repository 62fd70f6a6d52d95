"""Exact solvers and experiment tables for housing markets with weak preferences.

Agent/object ids are 1-based and allocations are lists of trading cycles,
matching the JSON instance format and the ``hmx`` command-line tool.
"""

from ._hmcore import (
    Market,
    blocking_cycles,
    blocking_stats,
    build_lp,
    competitive_set,
    enumerate_lp,
    fixture,
    fixture_names,
    in_core,
    in_strong_core,
    in_wako_core,
    market_from_tiers,
    oracle,
    price_of_fairness,
    promote,
    random_market,
    ri_audit,
    solve,
    solve_lp,
    strong_core,
    strong_core_set,
    ttc,
)

__all__ = [
    "Market",
    "blocking_cycles",
    "blocking_stats",
    "build_lp",
    "competitive_set",
    "enumerate_lp",
    "fixture",
    "fixture_names",
    "in_core",
    "in_strong_core",
    "in_wako_core",
    "market_from_tiers",
    "oracle",
    "price_of_fairness",
    "promote",
    "random_market",
    "ri_audit",
    "solve",
    "solve_lp",
    "strong_core",
    "strong_core_set",
    "ttc",
]
