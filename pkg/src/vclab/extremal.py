"""Named constructions: stars, the Mubayi-Zhao family, the s=d stability example, Hamming balls."""
from __future__ import annotations

import random
from typing import Mapping, Optional

from .core import Family, SubsetMask, binom, iter_k_masks, mask_of, popcount
from .vc import WitnessedFamily, larger_witness_available


def star(n: int, k: int, center: int) -> Family:
    """All k-subsets of [n] containing ``center``."""
    if not 1 <= center <= n or not 1 <= k <= n:
        raise ValueError(f"star needs 1 <= center <= n and 1 <= k <= n, got n={n} k={k} center={center}")
    c = 1 << (center - 1)
    return Family.from_masks(n, (b for b in iter_k_masks(n, k) if b & c), k)


def star_witnessed(n: int, d: int, center: int) -> WitnessedFamily:
    """Star of (d+1)-sets with the canonical witnesses F minus the center."""
    f = star(n, d + 1, center)
    c = 1 << (center - 1)
    return WitnessedFamily.from_masks(f, d, [b & ~c for b in f.masks])


def _free_d_sets(n: int, d: int) -> list[int]:
    """d-subsets of [n] avoiding {1,2,3,4}, in colex order."""
    low4 = 0b1111
    return [b for b in iter_k_masks(n, d) if not b & low4]


def default_assignment(n: int, d: int) -> dict[int, int]:
    return {b: 1 for b in _free_d_sets(n, d)}


def random_assignment(n: int, d: int, rng: random.Random) -> dict[int, int]:
    return {b: rng.choice((1, 2)) for b in _free_d_sets(n, d)}


def _normalize_assignment(n: int, d: int, assignment) -> dict[int, int]:
    keys = _free_d_sets(n, d)
    if assignment is None:
        return {b: 1 for b in keys}
    norm = {}
    for k, v in dict(assignment).items():
        if isinstance(k, SubsetMask):
            k = k.bits
        elif not isinstance(k, int):
            k = mask_of(k)
        norm[k] = v
    missing = [b for b in keys if b not in norm]
    if missing:
        raise ValueError(f"assignment is not total: {len(missing)} d-subsets of [n]-{{1,2,3,4}} unassigned")
    extra = set(norm) - set(keys)
    if extra:
        raise ValueError("assignment has keys that are not d-subsets of [n]-{1,2,3,4}")
    bad = {v for v in norm.values() if v not in (1, 2)}
    if bad:
        raise ValueError(f"assignment values must be 1 or 2, got {sorted(bad)}")
    return norm


def mz_link_families(n: int, d: int, assignment: Optional[Mapping] = None) -> tuple[list[int], list[int]]:
    """The pair (G1, G2) of d-uniform families on [n]-{1,2} driving the construction."""
    if d < 2 or n < 2 * (d + 1):
        raise ValueError(f"construction needs d >= 2 and n >= 2(d+1), got n={n} d={d}")
    assign = _normalize_assignment(n, d, assignment)
    three, four = 1 << 2, 1 << 3
    g1, g2 = [], []
    for b in iter_k_masks(n, d):
        if b & 0b11:
            continue
        if b & three or (not b & four and assign[b] == 1):
            g1.append(b)
        if b & four or (not b & three and assign[b] == 2):
            g2.append(b)
    return g1, g2


def mz_family(n: int, d: int, assignment: Optional[Mapping] = None) -> WitnessedFamily:
    """The Mubayi-Zhao family of size binom(n-1,d)+binom(n-4,d-2) with its intended witnesses.

    ``assignment`` maps every d-subset of [n]-{1,2,3,4} to 1 or 2, deciding whether
    it joins G1 or G2; default is all 1. Members come out in colex order.
    """
    g1, g2 = mz_link_families(n, d, assignment)
    one, two = 0b01, 0b10
    s1, s2 = set(g1), set(g2)
    pairs: dict[int, int] = {}
    for b in iter_k_masks(n, d + 1):
        if b & 0b11 == 0b11:
            pairs[b] = b & ~0b11
    for g in g1:
        if g not in s2:
            pairs[g | one] = g
    for g in g2:
        if g not in s1:
            pairs[g | two] = g
    for g in s1 & s2:
        pairs[g | one] = g & ~(1 << 3)
        pairs[g | two] = g & ~(1 << 2)
    order = sorted(pairs)
    fam = Family.from_masks(n, order, d + 1)
    return WitnessedFamily.from_masks(fam, d, [pairs[b] for b in order])


def mz_member_type(member: int) -> int:
    """Which of the four member types a construction member belongs to."""
    if member & 0b11 == 0b11:
        return 1
    if member & 0b1100 == 0b1100:
        return 4
    return 2 if member & 0b01 else 3


def mz_expected_size(n: int, d: int) -> int:
    return binom(n - 1, d) + binom(n - 4, d - 2)


def mz_maximality_report(w: WitnessedFamily) -> dict:
    """Which emitted witnesses are strictly smaller than a valid alternative, grouped by type."""
    larger = larger_witness_available(w)
    by_type: dict[int, int] = {}
    for i in larger:
        t = mz_member_type(w.family.masks[i])
        by_type[t] = by_type.get(t, 0) + 1
    return {"non_maximal_indices": larger, "non_maximal_by_type": by_type}


def stability_example(n: int, d: int) -> Family:
    """{A} plus every G+{1} with G a d-subset of [n]-{1} not inside A, where A = {2..d+2}."""
    if d < 1 or n < d + 3:
        raise ValueError(f"stability example needs d >= 1 and n >= d+3, got n={n} d={d}")
    a = mask_of(range(2, d + 3))
    one = 1
    members = [a]
    for g in iter_k_masks(n, d):
        if g & one or g & ~a == 0:
            continue
        members.append(g | one)
    return Family.from_masks(n, sorted(members), d + 1)


def hamming_ball(n: int, d: int) -> Family:
    """All subsets of [n] with at most d elements, ordered by size then colex."""
    if not 0 <= d <= n:
        raise ValueError(f"need 0 <= d <= n, got n={n} d={d}")
    return Family.from_masks(n, (b for k in range(d + 1) for b in iter_k_masks(n, k)))


def is_star(f: Family) -> bool:
    """Whether every member shares a common element."""
    if not len(f):
        return False
    common = ~0
    for b in f.masks:
        common &= b
    return common != 0


def is_maximum_star(f: Family) -> bool:
    k = f.rank()
    return k is not None and is_star(f) and len(f) == binom(f.n - 1, k - 1)


def swap_member(f: Family, out_index: int, new_member: int) -> Family:
    masks = list(f.masks)
    masks[out_index] = new_member
    if len(set(masks)) != len(masks) or popcount(new_member) != f.rank():
        raise ValueError("swap would break uniformity or duplicate a member")
    return Family.from_masks(f.n, masks, f.uniform_rank)
