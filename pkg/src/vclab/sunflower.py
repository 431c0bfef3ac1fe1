"""Sunflower search and the sunflower audits on witness classes."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .core import Family, SubsetMask, elements_of
from .vc import WitnessedFamily, witness_groups


@dataclass(frozen=True)
class Sunflower:
    core: SubsetMask
    petal_indices: tuple[int, ...]


def _first_disjoint_selection(petals: Sequence[tuple[int, int]], r: int) -> Optional[tuple[int, ...]]:
    """Lexicographically first r indices (from ``petals``, sorted by index) with disjoint petals."""
    chosen: list[int] = []

    def dfs(start: int, used: int) -> bool:
        if len(chosen) == r:
            return True
        for pos in range(start, len(petals) - (r - len(chosen)) + 1):
            idx, p = petals[pos]
            if p & used:
                continue
            chosen.append(idx)
            if dfs(pos + 1, used | p):
                return True
            chosen.pop()
        return False

    return tuple(chosen) if dfs(0, 0) else None


def sunflower_masks(masks: Sequence[int], r: int) -> Optional[tuple[int, tuple[int, ...]]]:
    if r < 2:
        raise ValueError("a sunflower needs r >= 2")
    m = len(masks)
    if m < r:
        return None
    cores = sorted({masks[i] & masks[j] for i in range(m) for j in range(i + 1, m)})
    for core in cores:
        petals = [(i, b & ~core) for i, b in enumerate(masks) if b & core == core]
        if len(petals) < r:
            continue
        pick = _first_disjoint_selection(petals, r)
        if pick is not None:
            return core, pick
    return None


def find_sunflower(f: Family, r: int) -> Optional[Sunflower]:
    """First r members (by core mask, then sorted indices) whose pairwise intersections all equal one core."""
    hit = sunflower_masks(f.masks, r)
    if hit is None:
        return None
    return Sunflower(SubsetMask(hit[0], f.n), hit[1])


def largest_sunflower(masks: Sequence[int]) -> int:
    """Size of the largest sunflower among the masks (1 for a single set, 0 for none)."""
    if not masks:
        return 0
    best = 1
    r = 2
    while r <= len(masks) and sunflower_masks(masks, r) is not None:
        best = r
        r += 1
    return best


@dataclass
class SunflowerAudit:
    holds: bool
    forbidden_size: int
    largest_per_class: dict
    violations: list

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "forbidden_size": self.forbidden_size,
            "largest_per_class": {",".join(map(str, elements_of(k))) or "{}": v
                                  for k, v in self.largest_per_class.items()},
            "violations": [
                {"witness": list(elements_of(b)), "core": list(elements_of(c)), "members": list(ix)}
                for b, c, ix in self.violations
            ],
        }


def audit_witness_sunflowers(w: WitnessedFamily) -> SunflowerAudit:
    """Every class of members sharing a witness must avoid a (d+3)-sunflower."""
    r = w.d + 3
    masks = w.family.masks
    largest = {}
    violations = []
    for key, idx in witness_groups(w).items():
        cls_masks = [masks[i] for i in idx]
        largest[key.bits] = largest_sunflower(cls_masks)
        hit = sunflower_masks(cls_masks, r) if len(cls_masks) >= r else None
        if hit is not None:
            violations.append((key.bits, hit[0], tuple(idx[j] for j in hit[1])))
    return SunflowerAudit(not violations, r, largest, violations)


class NotIntersectingError(ValueError):
    pass


def find_centered_disjoint(f: Family, d: int) -> Optional[tuple[int, tuple[int, ...]]]:
    """An element in every member plus d+1 members that are pairwise disjoint once it is removed."""
    masks = f.masks
    if masks:
        f.require_uniform(d)
    for i in range(len(masks)):
        for j in range(i + 1, len(masks)):
            if not masks[i] & masks[j]:
                raise NotIntersectingError(f"F[{i}] and F[{j}] are disjoint")
    if not masks:
        return None
    common = masks[0]
    for b in masks:
        common &= b
    for ell in elements_of(common):
        bit = 1 << (ell - 1)
        pick = _first_disjoint_selection([(i, b & ~bit) for i, b in enumerate(masks)], d + 1)
        if pick is not None:
            return ell, pick
    return None
