"""Shattering, VC-dimension and witness sets for (d+1)-uniform families."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import (
    Family,
    SubsetMask,
    binom,
    elements_of,
    iter_submasks_of_size,
    mask_of,
    parse_witnessed_lines,
    popcount,
    serialize_witnessed_lines,
)


class ShatteredMemberError(ValueError):
    """Raised when some member has no witness, so the family shatters it."""

    def __init__(self, index: int, member: SubsetMask):
        self.index = index
        self.member = member
        super().__init__(f"shattered member: F[{index}] = {member} has no witness")


class InvalidWitnessError(ValueError):
    pass


def traces(masks: Sequence[int], s: int) -> set[int]:
    return {b & s for b in masks}


def shatters(f: Family, s: SubsetMask) -> bool:
    if s.n != f.n:
        raise ValueError("test set lives on a different ground set")
    return len(traces(f.masks, s.bits)) == 1 << s.cardinality()


def vc_dimension(f: Family) -> int:
    """Largest size of a shattered set, by ascending search over candidate sizes.

    Candidates of size t are built from shattered sets of size t-1, since every
    subset of a shattered set is shattered.
    """
    if len(f) == 0:
        raise ValueError("VC-dimension of the empty family is undefined")
    masks = f.masks
    support = 0
    for b in masks:
        support |= b
    # union of members differs from intersection of members exactly on shattered singletons
    common = support
    for b in masks:
        common &= b
    level = {1 << (e - 1) for e in elements_of(support & ~common)}
    best, t = 0, 1
    while level:
        best = t
        if 1 << (t + 1) > len(masks):
            break
        t += 1
        level = _next_level(level, support, masks, t)
    return best


def _next_level(prev: set[int], support: int, masks: Sequence[int], t: int) -> set[int]:
    out = set()
    for s in prev:
        top = s.bit_length()
        rest = support >> top << top
        while rest:
            low = rest & -rest
            rest ^= low
            cand = s | low
            if all((cand & ~(1 << (e - 1))) in prev for e in elements_of(s)):
                if len(traces(masks, cand)) == 1 << t:
                    out.add(cand)
    return out


@dataclass(frozen=True)
class WitnessedFamily:
    """A (d+1)-uniform family with one witness set per member."""

    family: Family
    d: int
    witnesses: tuple[SubsetMask, ...]

    def __post_init__(self):
        object.__setattr__(self, "witnesses", tuple(self.witnesses))
        if len(self.witnesses) != len(self.family):
            raise InvalidWitnessError("need exactly one witness per member")
        if len(self.family):
            self.family.require_uniform(self.d + 1)
        problems = witness_violations(self.family.masks, [w.bits for w in self.witnesses])
        if problems:
            i, why = problems[0]
            raise InvalidWitnessError(f"witness of F[{i}] = {self.family[i]}: {why}")
        seen = {}
        for i, w in enumerate(self.witnesses):
            if w.cardinality() == self.d:
                # implied by the witness property; kept as an explicit guard
                assert w.bits not in seen, f"size-d witness shared by F[{seen[w.bits]}] and F[{i}]"
                seen[w.bits] = i

    @classmethod
    def from_masks(cls, family: Family, d: int, witness_bits: Sequence[int]) -> "WitnessedFamily":
        return cls(family, d, tuple(SubsetMask(b, family.n) for b in witness_bits))

    @property
    def n(self) -> int:
        return self.family.n

    @property
    def m(self) -> int:
        return len(self.family)

    @property
    def witness_masks(self) -> tuple[int, ...]:
        return tuple(w.bits for w in self.witnesses)

    def pairs(self):
        return zip(self.family.masks, self.witness_masks)


def witness_violations(masks: Sequence[int], witness_bits: Sequence[int]) -> list[tuple[int, str]]:
    """Every (index, reason) where a witness is not a proper subset or is hit by a trace."""
    out = []
    for i, (f, b) in enumerate(zip(masks, witness_bits)):
        if b & ~f or b == f:
            out.append((i, "not a proper subset"))
            continue
        for j, g in enumerate(masks):
            if g & f == b:
                out.append((i, f"F[{j}] meets it exactly in the witness"))
                break
    return out


def select_witnesses(f: Family, d: int) -> WitnessedFamily:
    """Largest-cardinality witness per member; ties go to the smallest mask."""
    masks = f.masks
    if masks:
        f.require_uniform(d + 1)
    chosen = []
    for i, fi in enumerate(masks):
        seen = {g & fi for g in masks}
        b = _first_missing_subset(fi, seen)
        if b is None:
            raise ShatteredMemberError(i, f[i])
        chosen.append(b)
    return WitnessedFamily.from_masks(f, d, chosen)


def _first_missing_subset(fi: int, seen: set[int]) -> int | None:
    for size in range(popcount(fi) - 1, -1, -1):
        for b in iter_submasks_of_size(fi, size):
            if b not in seen:
                return b
    return None


def is_canonical(w: WitnessedFamily) -> list[int]:
    """Indices whose witness differs from what :func:`select_witnesses` would pick."""
    masks = w.family.masks
    out = []
    for i, (fi, b) in enumerate(w.pairs()):
        if _first_missing_subset(fi, {g & fi for g in masks}) != b:
            out.append(i)
    return out


def larger_witness_available(w: WitnessedFamily) -> list[int]:
    """Indices where some valid witness is strictly larger than the given one."""
    masks = w.family.masks
    out = []
    for i, (fi, b) in enumerate(w.pairs()):
        best = _first_missing_subset(fi, {g & fi for g in masks})
        if best is not None and popcount(best) > popcount(b):
            out.append(i)
    return out


def witness_groups(w: WitnessedFamily) -> dict[SubsetMask, list[int]]:
    groups: dict[int, list[int]] = {}
    for i, b in enumerate(w.witness_masks):
        groups.setdefault(b, []).append(i)
    return {SubsetMask(b, w.n): groups[b] for b in sorted(groups)}


def count_size_d_witnesses(w: WitnessedFamily) -> int:
    return sum(1 for b in w.witness_masks if popcount(b) == w.d)


def size_d_witness_bound(n: int, d: int) -> int:
    return binom(n - 1, d)


def injectivity_claim_holds(w: WitnessedFamily, phi: dict[int, int]) -> bool:
    """Check the split-injectivity property for a map phi (index -> mask, phi(F) subset of F).

    Indices mapped onto their own size-d witness form the first part; if phi is
    injective on the rest, it must be injective overall. Returns False only when
    the premise holds but the conclusion fails.
    """
    masks = w.family.masks
    wit = w.witness_masks
    for i, img in phi.items():
        if img & ~masks[i]:
            raise ValueError(f"phi(F[{i}]) is not a subset of F[{i}]")
    first = {i for i, img in phi.items() if img == wit[i] and popcount(wit[i]) == w.d}
    rest = [phi[i] for i in phi if i not in first]
    if len(set(rest)) != len(rest):
        return True
    return len(set(phi.values())) == len(phi)


def parse_witnessed_family(text: str, d: int | None = None) -> WitnessedFamily:
    f, wits = parse_witnessed_lines(text)
    if d is None:
        r = f.rank()
        if r is None:
            raise ValueError("cannot infer d from an empty or non-uniform family")
        d = r - 1
    return WitnessedFamily.from_masks(f, d, wits)


def serialize_witnessed_family(w: WitnessedFamily) -> str:
    return serialize_witnessed_lines(w.family, w.witness_masks)


def witnessed_from_sets(n: int, d: int, pairs) -> WitnessedFamily:
    """Build from ``[(set, witness), ...]`` given as element iterables."""
    pairs = list(pairs)
    fam = Family.from_sets(n, [p[0] for p in pairs], d + 1)
    return WitnessedFamily.from_masks(fam, d, [mask_of(p[1]) for p in pairs])
