import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from oracles import has_valid_witnesses, shattered, vc_dim
from vclab.core import Family, SubsetMask
from vclab.extremal import star
from vclab.vc import (
    InvalidWitnessError,
    ShatteredMemberError,
    WitnessedFamily,
    count_size_d_witnesses,
    parse_witnessed_family,
    select_witnesses,
    serialize_witnessed_family,
    shatters,
    vc_dimension,
    witness_groups,
)

families = st.integers(3, 8).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(st.frozensets(st.integers(1, n), min_size=1, max_size=n), min_size=1, max_size=12, unique=True),
    )
)


@settings(max_examples=150)
@given(families)
def test_vc_dimension_matches_brute_force(case):
    n, sets = case
    f = Family.from_sets(n, [sorted(s) for s in sets])
    assert vc_dimension(f) == vc_dim(sets, n)


@settings(max_examples=100)
@given(families)
def test_shatters_matches_brute_force(case):
    n, sets = case
    f = Family.from_sets(n, [sorted(s) for s in sets])
    for t in combinations(range(1, n + 1), 2):
        assert shatters(f, SubsetMask.from_elements(n, t)) == shattered(sets, t)


def test_vc_small_cases():
    assert vc_dimension(Family.from_sets(3, [[1, 2, 3]])) == 0
    assert vc_dimension(star(5, 3, 5)) == 2
    with pytest.raises(ValueError):
        vc_dimension(Family(3))


def test_select_witnesses_prefers_large_then_small_mask():
    w = select_witnesses(star(5, 3, 5), 2)
    assert [b.elements() for b in w.witnesses][:3] == [(1, 2), (1, 3), (2, 3)]
    assert count_size_d_witnesses(w) == 6


def test_select_witnesses_rejects_shattered_member():
    # every subset of {1,2,3} arises as a trace
    sets = [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4], [1, 4, 5], [2, 4, 5], [3, 4, 5], [4, 5, 6]]
    with pytest.raises(ShatteredMemberError) as err:
        select_witnesses(Family.from_sets(6, sets, 3), 2)
    assert err.value.index == 0


@settings(max_examples=100)
@given(st.integers(4, 7).flatmap(lambda n: st.tuples(st.just(n), st.lists(
    st.frozensets(st.integers(1, n), min_size=3, max_size=3), min_size=1, max_size=10, unique=True))))
def test_witnesses_exist_iff_no_member_shattered(case):
    n, sets = case
    f = Family.from_sets(n, [sorted(s) for s in sets], 3)
    expect = has_valid_witnesses(sets, range(3))
    try:
        w = select_witnesses(f, 2)
    except ShatteredMemberError:
        assert not expect
    else:
        assert expect
        for fi, b in w.pairs():
            assert all(g & fi != b for g in f.masks)


def test_invalid_witness_rejected():
    f = Family.from_sets(4, [[1, 2, 3], [1, 2, 4]], 3)
    with pytest.raises(InvalidWitnessError):
        WitnessedFamily.from_masks(f, 2, [0b11, 0])


def test_witness_groups_ordered_colex():
    w = select_witnesses(star(5, 3, 5), 2)
    keys = list(witness_groups(w))
    assert keys == sorted(keys)


def test_witnessed_text_roundtrip():
    w = select_witnesses(star(6, 3, 6), 2)
    assert parse_witnessed_family(serialize_witnessed_family(w)) == w


def test_random_families_are_deterministic():
    rng = random.Random(3)
    sets = [sorted(rng.sample(range(1, 9), 3)) for _ in range(6)]
    f = Family.from_sets(8, sorted({tuple(s) for s in sets}))
    assert vc_dimension(f) == vc_dim([frozenset(s) for s in f.sets()], 8)
