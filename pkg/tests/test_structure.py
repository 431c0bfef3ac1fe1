import random

import pytest
from hypothesis import given, settings, strategies as st

from vclab.core import Family, SubsetMask, mask_of
from vclab.extremal import mz_family, star, star_witnessed
from vclab.structure import (
    analyze_s1,
    build_GJ,
    classify_member,
    link_audit,
    link_sizes,
    links,
    partition_TJ,
    select_transversal,
)
from vclab.vc import WitnessedFamily, witnessed_from_sets

from helpers import random_witnessed


@settings(max_examples=60)
@given(st.integers(0, 10 ** 6), st.integers(4, 9), st.integers(1, 3))
def test_link_identities_random(seed, n, d):
    if n < d + 1:
        return
    w = random_witnessed(random.Random(seed), n, d)
    claims = link_audit(w)
    assert claims["link_sum_identity"].holds
    assert claims["x_sum_equals_witness_sum"].holds
    assert claims["x_link_vc_dimension"].holds
    assert claims["x_y_disjoint"].holds


def test_links_of_star():
    w = star_witnessed(6, 2, 6)
    lp = links(w, 6)
    assert len(lp.X) == 0 and len(lp.Y) == 10
    assert link_sizes(w)[1] == (4, 0)


def test_transversal():
    w = star_witnessed(6, 2, 6)
    assert select_transversal(w, 2).elements() == (6,)
    assert select_transversal(w, 1).elements() == ()
    with pytest.raises(ValueError):
        select_transversal(w, 0)


def test_build_gj():
    f = Family.from_sets(5, [[1, 2, 3], [1, 4, 5], [2, 4, 5], [3, 4, 5]], 3)
    g = build_GJ(f, SubsetMask.from_elements(5, [1, 2]))
    assert g.sets() == [(4, 5)]


def test_classify_member_first_match():
    j = mask_of([1, 2])
    assert classify_member(mask_of([3, 4, 5]), mask_of([3]), j, 2) == 0
    assert classify_member(mask_of([1, 2, 5]), mask_of([5]), j, 2) == 4


def test_partition_mz_10_2():
    audit = partition_TJ(mz_family(10, 2), SubsetMask.from_elements(10, [1, 2]))
    sizes = audit.sizes()
    assert sizes["T1"] == sizes["T4"] == sizes["T6"] == 0
    assert sizes["T2"] + sizes["T3"] == 29
    assert sizes["T5"] == 8
    assert audit.deficiency == 0
    assert sum(sizes.values()) == 37
    assert all(c.holds for c in audit.claims.values())


def test_partition_json_schema():
    data = partition_TJ(mz_family(8, 2), SubsetMask.from_elements(8, [1, 2])).to_json()
    assert set(data) == {"J", "part_sizes", "parts", "gj_edge_count", "deficiency", "sparse_sets",
                         "sparse_threshold", "aux_graphs", "claims"}
    assert set(data["part_sizes"]) == {"T1", "T2", "T3", "T4", "T5", "T6"}


def test_s1_cycle_case():
    pairs = [([1, 2, x], [1] if x <= 8 else [2]) for x in range(3, 15)]
    rep = analyze_s1(witnessed_from_sets(14, 2, pairs))
    assert rep.good == [1, 2]
    assert rep.f_map == {1: 2, 2: 1}
    assert rep.case == "cycle"


def test_s1_star_case():
    f = star(10, 3, 10)
    w = WitnessedFamily.from_masks(f, 2, [b & -b for b in f.masks])
    rep = analyze_s1(w)
    assert rep.good == [1, 2, 3]
    assert rep.B == [10] and rep.case == "star_case"
    assert all(c.holds for c in rep.claims.values())


def test_s1_requires_singletons():
    with pytest.raises(ValueError):
        analyze_s1(star_witnessed(6, 2, 6))
