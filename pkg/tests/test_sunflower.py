from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from oracles import has_sunflower, is_sunflower
from vclab.core import Family
from vclab.extremal import mz_family, star, star_witnessed
from vclab.sunflower import (
    NotIntersectingError,
    audit_witness_sunflowers,
    find_centered_disjoint,
    find_sunflower,
    largest_sunflower,
)
from vclab.vc import WitnessedFamily, select_witnesses

random_families = st.integers(4, 8).flatmap(lambda n: st.tuples(st.just(n), st.lists(
    st.frozensets(st.integers(1, n), min_size=1, max_size=4), min_size=2, max_size=9, unique=True)))


@settings(max_examples=120)
@given(random_families, st.integers(2, 4))
def test_find_sunflower_agrees_with_brute_force(case, r):
    n, sets = case
    f = Family.from_sets(n, [sorted(s) for s in sets])
    hit = find_sunflower(f, r)
    assert (hit is not None) == has_sunflower(sets, r)
    if hit is not None:
        assert len(hit.petal_indices) == r
        chosen = [sets[i] for i in hit.petal_indices]
        assert is_sunflower(chosen)
        assert chosen[0] & chosen[1] == frozenset(hit.core.elements())


def test_pairwise_disjoint_is_a_sunflower():
    f = Family.from_sets(9, [[1, 2], [3, 4], [5, 6]], 2)
    hit = find_sunflower(f, 3)
    assert hit.core.bits == 0 and hit.petal_indices == (0, 1, 2)


def test_largest_sunflower_in_star():
    assert largest_sunflower(star(7, 2, 7).masks) == 6


def test_audit_passes_on_constructions():
    for w in (mz_family(8, 2), mz_family(10, 3), star_witnessed(9, 2, 9)):
        assert audit_witness_sunflowers(w).holds


def test_audit_negative_control():
    # intersecting, so the empty set witnesses every member; the class holds a 5-sunflower
    f = star(11, 3, 11)
    w = WitnessedFamily.from_masks(f, 2, [0] * len(f))
    rep = audit_witness_sunflowers(w)
    assert not rep.holds and rep.forbidden_size == 5
    assert rep.violations[0][1] == 1 << 10


def test_centered_disjoint():
    f = star(7, 2, 7)
    ell, idx = find_centered_disjoint(f, 2)
    assert ell == 7 and idx == (0, 1, 2)
    with pytest.raises(NotIntersectingError):
        find_centered_disjoint(Family.from_sets(4, [[1, 2], [3, 4]], 2), 2)
    tri = Family.from_sets(3, [[1, 2], [1, 3], [2, 3]], 2)
    assert find_centered_disjoint(tri, 2) is None
