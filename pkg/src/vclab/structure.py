"""Links, the near-transversal J, the edge family G_J, the six-part partition and good/bad elements."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .core import (
    ClaimCheck,
    Family,
    SubsetMask,
    binom,
    claims_to_json,
    elements_of,
    iter_k_masks,
    iter_submasks_of_size,
    mask_of,
    popcount,
)
from .sunflower import NotIntersectingError, find_centered_disjoint
from .vc import WitnessedFamily, vc_dimension, witness_groups


@dataclass(frozen=True)
class LinkPair:
    v: int
    X: Family
    Y: Family


def links(w: WitnessedFamily, v: int) -> LinkPair:
    """X_v: members with v inside the witness, Y_v: members with v outside it, v removed from both."""
    if not 1 <= v <= w.n:
        raise ValueError(f"element {v} outside [1, {w.n}]")
    bit = 1 << (v - 1)
    xs, ys = [], []
    for f, b in w.pairs():
        if not f & bit:
            continue
        (xs if b & bit else ys).append(f & ~bit)
    return LinkPair(v, Family.from_masks(w.n, xs, w.d), Family.from_masks(w.n, ys, w.d))


def link_sizes(w: WitnessedFamily) -> dict[int, tuple[int, int]]:
    """{v: (|X_v|, |Y_v|)} without materializing the families."""
    out = {v: [0, 0] for v in range(1, w.n + 1)}
    for f, b in w.pairs():
        for v in elements_of(f):
            out[v][0 if b >> (v - 1) & 1 else 1] += 1
    return {v: (x, y) for v, (x, y) in out.items()}


def link_audit(w: WitnessedFamily) -> dict[str, ClaimCheck]:
    sizes = link_sizes(w)
    total = sum(x + y for x, y in sizes.values())
    sum_x = sum(x for x, _ in sizes.values())
    sum_b = sum(popcount(b) for b in w.witness_masks)
    claims = {
        "link_sum_identity": ClaimCheck(total == (w.d + 1) * w.m, total, (w.d + 1) * w.m),
        "x_sum_equals_witness_sum": ClaimCheck(sum_x == sum_b, sum_x, sum_b),
    }
    worst, bad = -1, []
    disjoint_bad = []
    for v in range(1, w.n + 1):
        lp = links(w, v)
        if lp.X.mask_set & lp.Y.mask_set:
            disjoint_bad.append(v)
        if len(lp.X):
            dim = vc_dimension(lp.X)
            worst = max(worst, dim)
            if dim > w.d - 1:
                bad.append(v)
    claims["x_link_vc_dimension"] = ClaimCheck(not bad, worst, w.d - 1, bad)
    claims["x_y_disjoint"] = ClaimCheck(not disjoint_bad, len(disjoint_bad), 0, disjoint_bad)
    claims["x_link_size_bound"] = ClaimCheck(
        all(x <= binom(w.n - 1, w.d - 1) for x, _ in sizes.values()),
        max((x for x, _ in sizes.values()), default=0), binom(w.n - 1, w.d - 1))
    return claims


def select_transversal(w: WitnessedFamily, s: int) -> SubsetMask:
    """J = {v : binom(n-1, d-1) - |X_v| >= n^(d-1) / s}, compared exactly."""
    if s < 1:
        raise ValueError("s must be at least 1")
    threshold = Fraction(w.n ** (w.d - 1), s)
    full = binom(w.n - 1, w.d - 1)
    chosen = [v for v, (x, _) in link_sizes(w).items() if full - x >= threshold]
    return SubsetMask.from_elements(w.n, chosen)


def build_GJ(f: Family, J: SubsetMask) -> Family:
    """Edges F - J over members meeting J in exactly one element, deduplicated, colex order."""
    k = f.require_uniform() if len(f) else None
    j = J.bits
    edges = {b & ~j for b in f.masks if popcount(b & j) == 1}
    return Family.from_masks(f.n, sorted(edges), None if k is None else k - 1)


PART_NAMES = ("T1", "T2", "T3", "T4", "T5", "T6")


def classify_member(f: int, b: int, j: int, d: int) -> int:
    """Index 0..5 of the first part whose definition the pair (F, B) meets."""
    fj = popcount(f & j)
    bj = popcount(b & j)
    nb = popcount(b)
    if fj == 0 and bj == 0 and nb == d - 1:
        return 0
    if bj == 0 and nb == d:
        return 1
    if fj == 1 and bj == 0 and nb == d - 1:
        return 2
    if fj == 1 and bj == 1 and nb == d:
        return 3
    if fj == 2 and f & ~j & ~b == 0:
        return 4
    return 5


@dataclass
class PartitionAudit:
    J: SubsetMask
    parts: tuple[Family, ...]
    gj_edges: Family
    deficiency: int
    sparse_sets: int
    sparse_threshold: int
    claims: dict[str, ClaimCheck] = field(default_factory=dict)
    aux_graphs: dict[str, int] = field(default_factory=dict)

    def sizes(self) -> dict[str, int]:
        return {name: len(p) for name, p in zip(PART_NAMES, self.parts)}

    def to_json(self) -> dict:
        return {
            "J": list(self.J.elements()),
            "part_sizes": self.sizes(),
            "parts": {name: [list(s) for s in p.sets()] for name, p in zip(PART_NAMES, self.parts)},
            "gj_edge_count": len(self.gj_edges),
            "deficiency": self.deficiency,
            "sparse_sets": self.sparse_sets,
            "sparse_threshold": self.sparse_threshold,
            "aux_graphs": dict(self.aux_graphs),
            "claims": claims_to_json(self.claims),
        }


def _classify_graph(edges: list[int]) -> str:
    if not edges:
        return "empty"
    common = edges[0]
    for e in edges:
        common &= e
    if common:
        return "star"
    if len(edges) == 3:
        verts = 0
        for e in edges:
            verts |= e
        if popcount(verts) == 3:
            return "triangle"
    return "other"


def partition_TJ(w: WitnessedFamily, J: SubsetMask) -> PartitionAudit:
    """Split the family into T1..T6 relative to J and audit the exact facts attached to the split."""
    n, d, j = w.n, w.d, J.bits
    buckets: list[list[int]] = [[] for _ in range(6)]
    wit_of: dict[int, int] = {}
    for f, b in w.pairs():
        buckets[classify_member(f, b, j, d)].append(f)
        wit_of[f] = b
    parts = tuple(Family.from_masks(n, ms, d + 1) for ms in buckets)
    gj = build_GJ(w.family, J)
    outside = n - popcount(j)
    deficiency = binom(outside, d) - len(gj)

    # (d-1)-subsets of [n]-J lying in few G_J edges
    threshold = 100 * d + popcount(j)
    deg: dict[int, int] = defaultdict(int)
    for e in gj.masks:
        for c in iter_submasks_of_size(e, d - 1):
            deg[c] += 1
    rest = ((1 << n) - 1) & ~j
    sparse = sum(1 for c in iter_k_masks(n, d - 1) if not c & j and deg.get(c, 0) <= threshold)

    claims: dict[str, ClaimCheck] = {}
    total = sum(len(p) for p in parts)
    claims["partition_complete"] = ClaimCheck(total == w.m, total, w.m)
    claims["deficiency_nonnegative"] = ClaimCheck(
        deficiency >= 0 and all(e & rest == e for e in gj.masks), deficiency, 0)
    if deficiency == 0:
        claims["t1_empty_at_zero_deficiency"] = ClaimCheck(
            not len(parts[0]), len(parts[0]), 0, [list(s) for s in parts[0].sets()])

    # near-injection on T2 u T3: T2 -> B, T3 -> F - J
    fibers: dict[int, int] = defaultdict(int)
    for f in parts[1].masks:
        fibers[wit_of[f]] += 1
    for f in parts[2].masks:
        fibers[f & ~j] += 1
    max_class = max((len(ix) for ix in witness_groups(w).values()), default=0)
    worst = max(fibers.values(), default=0)
    claims["t2_t3_fiber_bound"] = ClaimCheck(worst <= d * max_class, worst, d * max_class)
    claims["t2_t3_vs_outside_binomial"] = ClaimCheck(
        True, len(parts[1]) + len(parts[2]), binom(outside, d))

    # every T6 witness keeps at most d-2 elements outside J
    t6_bad = [list(elements_of(f)) for f in parts[5].masks if popcount(wit_of[f] & ~j) > d - 2]
    claims["t6_witness_outside_j"] = ClaimCheck(not t6_bad, len(t6_bad), 0, t6_bad)

    # auxiliary graphs on J from T5 members whose witness is exactly C = F - J
    graphs: dict[int, list[int]] = defaultdict(list)
    for f in parts[4].masks:
        c = f & ~j
        if wit_of[f] == c:
            graphs[c].append(f & j)
    kinds: dict[str, int] = defaultdict(int)
    other = []
    for c, edges in graphs.items():
        kind = _classify_graph(edges)
        kinds[kind] += 1
        if kind == "other":
            other.append(list(elements_of(c)))
    claims["t5_aux_graph_shape"] = ClaimCheck(not other, len(other), 0, other)

    # exact sides of the near-transversal sum bound
    sizes = link_sizes(w)
    in_j = sum(y for v, (_, y) in sizes.items() if j >> (v - 1) & 1)
    off_j = sum(y for v, (_, y) in sizes.items() if not j >> (v - 1) & 1)
    claims["transversal_y_sum"] = ClaimCheck(in_j >= w.m - off_j, in_j, w.m - off_j)

    return PartitionAudit(J, parts, gj, deficiency, sparse, threshold, claims, dict(kinds))


# --- witnesses of size one ----------------------------------------------------

S1_CASES = ("cycle", "B_large", "B_single_with_outside_F", "star_case", "no_good_elements")


class LinkStructureError(RuntimeError):
    """A good element whose link lacks the centered disjoint structure."""


@dataclass
class S1Report:
    good: list[int]
    f_map: dict[int, int]
    b_map: dict[int, int]
    B: list[int]
    F_good: Family
    case: str
    cycle: Optional[list[int]]
    claims: dict[str, ClaimCheck]

    def to_json(self) -> dict:
        return {
            "good": self.good,
            "f_map": {str(k): v for k, v in self.f_map.items()},
            "b_map": {str(k): v for k, v in self.b_map.items()},
            "B": self.B,
            "F_good": [list(s) for s in self.F_good.sets()],
            "case": self.case,
            "cycle": self.cycle,
            "claims": claims_to_json(self.claims),
        }


def good_threshold(n: int, d: int) -> int:
    return 6 * n ** (d - 2)


def analyze_s1(w: WitnessedFamily) -> S1Report:
    """Good/bad element analysis for a family whose witnesses are all singletons."""
    n, d = w.n, w.d
    if any(popcount(b) != 1 for b in w.witness_masks):
        raise ValueError("every witness must have exactly one element")
    classes: dict[int, list[int]] = defaultdict(list)
    for f, b in w.pairs():
        classes[b.bit_length()].append(f)
    thr = good_threshold(n, d)
    good = sorted(a for a, fs in classes.items() if len(fs) >= thr)
    f_map: dict[int, int] = {}
    for a in good:
        bit = 1 << (a - 1)
        link = Family.from_masks(n, [f & ~bit for f in classes[a]], d)
        try:
            hit = find_centered_disjoint(link, d)
        except NotIntersectingError as exc:
            raise LinkStructureError(f"link of good element {a} is not intersecting: {exc}") from exc
        if hit is None:
            raise LinkStructureError(f"link of good element {a} has no centered disjoint structure")
        f_map[a] = hit[0]

    goodset = set(good)
    b_map: dict[int, int] = {}
    cycle = None
    for a in good:
        path = [a]
        cur = f_map[a]
        while cur in goodset:
            if cur in path:
                cycle = path[path.index(cur):]
                break
            path.append(cur)
            cur = f_map[cur]
        if cycle is not None:
            break
        b_map[a] = cur

    gmask = mask_of(good)
    f_good = Family.from_masks(n, [f for f in w.family.masks if f & gmask], d + 1)
    claims: dict[str, ClaimCheck] = {}
    miss = [[a, list(elements_of(f))] for a in good for f in w.family.masks
            if f >> (a - 1) & 1 and not f >> (f_map[a] - 1) & 1]
    claims["contains_image"] = ClaimCheck(not miss, len(miss), 0, miss)

    if cycle is not None:
        return S1Report(good, f_map, b_map, [], f_good, "cycle", cycle, claims)

    bset = sorted(set(b_map.values()))
    g, full = len(good), binom(n - 1, d)
    bound1 = full - binom(n - 1 - g, d)
    claims["f_good_bound"] = ClaimCheck(len(f_good) <= bound1, len(f_good), bound1)
    if not good:
        case = "no_good_elements"
    elif len(bset) > 1:
        case = "B_large"
        bound2 = bound1 - binom(g - 1, d - 1)
        claims["f_good_bound_B_large"] = ClaimCheck(len(f_good) <= bound2, len(f_good), bound2)
    else:
        avoid = gmask | mask_of(bset)
        outside = [f for f in w.family.masks if not f & avoid]
        if outside:
            case = "B_single_with_outside_F"
            bound3 = bound1 - binom(g, d - 1)
            claims["f_good_bound_outside"] = ClaimCheck(len(f_good) <= bound3, len(f_good), bound3)
        else:
            case = "star_case"
            bbit = 1 << (bset[0] - 1)
            lacking = [list(elements_of(f)) for f in w.family.masks if not f & bbit]
            claims["every_member_contains_B"] = ClaimCheck(not lacking, len(lacking), 0, lacking)
            claims["star_size_bound"] = ClaimCheck(w.m <= full, w.m, full)
    return S1Report(good, f_map, b_map, bset, f_good, case, None, claims)
