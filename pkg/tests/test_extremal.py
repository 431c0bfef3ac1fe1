import random
from math import comb

import pytest

from oracles import has_valid_witnesses, vc_dim
from vclab.core import mask_of
from vclab.extremal import (
    hamming_ball,
    is_maximum_star,
    is_star,
    mz_family,
    mz_expected_size,
    mz_maximality_report,
    mz_member_type,
    random_assignment,
    stability_example,
    star,
    star_witnessed,
    swap_member,
)
from vclab.vc import count_size_d_witnesses, select_witnesses, vc_dimension


@pytest.mark.parametrize("n,k,c", [(5, 3, 5), (7, 3, 1), (8, 4, 4)])
def test_star(n, k, c):
    f = star(n, k, c)
    assert len(f) == comb(n - 1, k - 1)
    assert all(c in s for s in f.sets())
    assert is_maximum_star(f)


def test_star_witnesses_drop_the_center():
    w = star_witnessed(6, 2, 6)
    assert all(6 not in b and len(b) == 2 for b in w.witnesses)


@pytest.mark.parametrize("n,d,size", [(8, 2, 22), (10, 2, 37), (10, 3, 90), (12, 4, 358)])
def test_mz_size_and_vc(n, d, size):
    w = mz_family(n, d)
    assert len(w.family) == size == mz_expected_size(n, d)
    assert vc_dimension(w.family) == d
    assert w.family.masks == tuple(sorted(w.family.masks))


def test_mz_small_brute_force():
    w = mz_family(6, 2)
    sets = [frozenset(s) for s in w.family.sets()]
    assert vc_dim(sets, 6) == 2
    assert has_valid_witnesses(sets, range(3))


@pytest.mark.parametrize("seed", range(5))
def test_mz_random_assignment(seed):
    w = mz_family(9, 2, random_assignment(9, 2, random.Random(seed)))
    assert len(w.family) == comb(8, 2) + comb(5, 0)
    assert vc_dimension(w.family) == 2
    assert {mz_member_type(b) for b in w.family.masks} <= {1, 2, 3, 4}


def test_mz_witnesses_are_maximal():
    for n, d in [(8, 2), (10, 3)]:
        assert mz_maximality_report(mz_family(n, d))["non_maximal_indices"] == []


def test_mz_preconditions():
    with pytest.raises(ValueError):
        mz_family(5, 2)
    with pytest.raises(ValueError):
        mz_family(8, 1)
    with pytest.raises(ValueError, match="not total"):
        mz_family(8, 2, {mask_of([5, 6]): 1})
    with pytest.raises(ValueError, match="1 or 2"):
        mz_family(8, 2, {b: 3 for b in random_assignment(8, 2, random.Random(0))})


def test_stability_example():
    f = stability_example(8, 2)
    assert len(f) == 19
    assert (2, 3, 4) in f.sets()
    w = select_witnesses(f, 2)
    assert count_size_d_witnesses(w) == 19 <= comb(7, 2)


def test_hamming_ball():
    f = hamming_ball(5, 2)
    assert len(f) == 1 + 5 + 10
    assert f.sets()[:2] == [(), (1,)]
    assert vc_dimension(f) == 2


def test_swap_member():
    f = star(6, 3, 6)
    g = swap_member(f, 0, mask_of([1, 2, 3]))
    assert not is_star(g)
    with pytest.raises(ValueError):
        swap_member(f, 0, mask_of([1, 2]))
