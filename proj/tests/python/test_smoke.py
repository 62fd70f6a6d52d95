"""End-to-end smoke tests for the hmcore python module.

Everything here runs in seconds: tiny documented markets with known solution
sets, one LP round trip, one audit, and the two experiment tables on a toy
grid.
"""

import json

import pytest

import hmcore


def sets_equal(a, b):
    return sorted(a) == sorted(b)


def test_fixture_and_market_roundtrip():
    names = hmcore.fixture_names()
    assert "example1" in names and "sotomayor-wako" in names

    f = hmcore.fixture("example1")
    m = f["market"]
    assert m.n == 6
    assert m.validate() == []
    assert m.tiers(1) == [[2, 3], [5], [1]]
    assert m.acceptable(1, 5) and not m.acceptable(6, 2)

    text = m.to_json()
    again = hmcore.Market.from_json(text)
    assert again.to_json() == text
    assert json.loads(text)["n"] == 6

    with pytest.raises(ValueError):
        hmcore.fixture("no-such-market")


def test_ttc_and_competitive_set():
    ring = hmcore.fixture("example6-R")["market"]
    out = hmcore.ttc(ring)
    assert out["allocation"] == [list(range(1, 11))]
    assert out["round"] == [1] * 10

    f = hmcore.fixture("example2-R")
    got = hmcore.competitive_set(f["market"])
    assert sets_equal(got, f["expected"]["competitive"])


def test_solution_sets_against_documented_answers():
    f = hmcore.fixture("example1")
    m, expected = f["market"], f["expected"]

    assert sets_equal(hmcore.oracle(m, "core"), expected["core"])
    assert sets_equal(hmcore.oracle(m, "competitive"), expected["competitive"])
    assert sets_equal(hmcore.strong_core_set(m), expected["strong-core"])

    xa = expected["strong-core"][0]
    xe = expected["max-size"][0]
    assert hmcore.in_strong_core(m, xa) and hmcore.in_core(m, xa)
    assert not hmcore.in_core(m, xe)
    assert hmcore.blocking_cycles(m, xe, mode="strict")["cycles"]

    assert hmcore.solve(m, objective="size") == [[1, 5, 6], [2, 3, 4]]
    assert hmcore.solve(m, "core", objective="size") == [[1, 5, 2], [3, 4], [6]]

    sw = hmcore.fixture("sotomayor-wako")["market"]
    assert hmcore.strong_core(sw) is None
    assert hmcore.solve(sw, "strong-core") is None


def test_bounded_concepts():
    f = hmcore.fixture("pairwise2-R")
    m = f["market"]
    assert sets_equal(hmcore.oracle(m, "strong-core", k=2), f["expected"]["2-strong-core"])
    x = f["expected"]["2-strong-core"][0]
    assert hmcore.in_strong_core(m, x, k=2)


def test_lp_roundtrip_matches_oracle():
    f = hmcore.fixture("example1")
    m = f["market"]

    text = hmcore.build_lp(m, "core", objective="size")
    assert "y_1_2" in text
    r = hmcore.solve_lp(text)
    assert r["status"] == "optimal"
    assert r["objective"] == pytest.approx(5.0)

    enum = hmcore.enumerate_lp(hmcore.build_lp(m, "core"))
    assert sets_equal(enum, f["expected"]["core"])


def test_promote_and_ri_audit():
    m = hmcore.fixture("pairwise1-R")["market"]
    assert m.tiers(3) == [[3]]
    assert hmcore.promote(m, object=1, agent=3)
    assert m.tiers(3) == [[1], [3]]

    fresh = hmcore.fixture("pairwise1-R")["market"]
    records = hmcore.ri_audit(fresh, rule="model", concept="none", k=2, objective="size")
    assert records and all(r["status"] in ("ok", "skipped") for r in records)
    hit = [r for r in records if r["violated"]]
    assert hit, "a bounded max-size rule must show a respecting-improvement violation here"
    assert {"instance", "i", "j", "step", "rank_before", "rank_after"} <= set(hit[0])


def test_random_market_reproducible():
    a = hmcore.random_market(n=8, edge_prob=0.5, ties=True, seed=42)
    b = hmcore.random_market(n=8, edge_prob=0.5, ties=True, seed=42)
    assert a.n == 8 and a.to_json() == b.to_json()
    assert hmcore.random_market(n=8, edge_prob=0.5, ties=True, seed=43).to_json() != a.to_json()


def test_experiment_tables_on_toy_grid():
    pof = hmcore.price_of_fairness(sizes=[5], per_size=2, seed=1).splitlines()
    assert pof[0] == "size,model,objective,mean_pct,feasible_count"
    assert len(pof) == 1 + 8  # 4 models x {size, weight}
    assert all(row.startswith("5,") for row in pof[1:])

    blk = hmcore.blocking_stats(sizes=[5], per_size=2, seed=1).splitlines()
    assert blk[0] == "size,model,mean_blocking_cycles,mean_improvable"
    models = [row.split(",")[1] for row in blk[1:]]
    assert models == ["max", "core", "competitive", "strong-core"]
    sc = blk[1 + models.index("strong-core")].split(",")
    assert float(sc[2]) == 0.0 and float(sc[3]) == 0.0
