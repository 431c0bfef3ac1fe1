from itertools import combinations
from math import comb

import pytest

from oracles import has_valid_witnesses, max_family, vc_dim
from vclab.extremal import mz_family, stability_example
from vclab.search import (
    has_switness,
    hunt_counterexample,
    is_intersecting,
    max_intersecting,
    max_switness_family,
    max_vc_family,
)
from vclab.vc import vc_dimension


def brute_vc(n, d):
    return max_family(n, d + 1, lambda fam: vc_dim(fam, n) <= d)


def brute_switness(n, d, s):
    return max_family(n, d + 1, lambda fam: has_valid_witnesses(fam, (s,)))


def brute_intersecting(n, k, nontrivial=False):
    sets = [frozenset(c) for c in combinations(range(1, n + 1), k)]
    best = 0
    for r in range(len(sets), 0, -1):
        for fam in combinations(sets, r):
            if all(a & b for a, b in combinations(fam, 2)) and not (nontrivial and frozenset.intersection(*fam)):
                return r
    return best


@pytest.mark.parametrize("n,d", [(3, 2), (4, 2), (5, 2), (4, 1), (5, 1), (6, 1), (5, 3)])
def test_vc_search_matches_brute_force(n, d):
    res = max_vc_family(n, d, use_bound=False)
    assert res.complete
    assert res.size == brute_vc(n, d)
    assert vc_dimension(res.family) <= d or res.size == 0


@pytest.mark.parametrize("n,d,s", [(5, 2, 0), (5, 2, 1), (5, 2, 2), (6, 1, 0), (6, 1, 1), (6, 2, 1)])
def test_switness_search_matches_brute_force(n, d, s):
    res = max_switness_family(n, d, s, use_bound=False)
    assert res.size == brute_switness(n, d, s)
    assert has_switness(list(res.family.masks), s)


def test_single_set_case():
    for d in range(1, 4):
        assert max_vc_family(d + 1, d).size == 1


def test_vc_search_beats_construction():
    assert max_vc_family(6, 2).size >= len(mz_family(6, 2).family)


@pytest.mark.parametrize("n", [6, 7, 8])
def test_s0_equals_intersecting(n):
    assert max_switness_family(n, 2, 0).size == max_intersecting(n, 3).size == comb(n - 1, 2)


@pytest.mark.parametrize("n,k,nontrivial", [(5, 3, False), (5, 2, False), (6, 2, True), (5, 3, True)])
def test_intersecting_matches_brute_force(n, k, nontrivial):
    res = max_intersecting(n, k, nontrivial)
    assert res.size == brute_intersecting(n, k, nontrivial)
    assert is_intersecting(list(res.family.masks))


def test_hilton_milner_value():
    res = max_intersecting(7, 3, True)
    assert res.size == comb(6, 2) - comb(3, 2) + 1
    masks = res.family.masks
    common = masks[0]
    for b in masks:
        common &= b
    assert common == 0


def test_at_most_flag_never_smaller():
    exact = max_switness_family(6, 2, 1).size
    relaxed = max_switness_family(6, 2, 1, at_most=True).size
    assert relaxed >= exact


def test_budget_marks_incomplete():
    res = max_vc_family(7, 2, node_budget=50)
    assert not res.complete and res.size > 0
    assert vc_dimension(res.family) <= 2


def test_env_budget(monkeypatch):
    monkeypatch.setenv("VCLAB_BUDGET_NODES", "30")
    assert not max_vc_family(7, 2).complete


def test_hunt_finds_nothing_and_is_seeded():
    a = hunt_counterexample(7, 2, 1, budget=2000, seed=5)
    b = hunt_counterexample(7, 2, 1, budget=2000, seed=5)
    assert a.counterexample is None and a.to_json() == b.to_json()
    c = hunt_counterexample(8, 2, 2, budget=500, seed=1, exhaustive_nodes=10 ** 6)
    assert c.counterexample is None and c.searched_exhaustively


def test_switness_checker_on_stability_example():
    f = stability_example(8, 2)
    assert has_switness(list(f.masks), 2) and len(f) <= comb(7, 2)


def test_vc_6_2_optimum_from_independent_oracle():
    # plain DFS over all 20 candidate sets, no clique model; frozen value 13
    assert brute_vc(6, 2) == 13
    res = max_vc_family(6, 2)
    assert res.complete and res.size == 13
    assert vc_dim([frozenset(s) for s in res.family.sets()], 6) == 2
