"""Executable polynomial-method certificates.

A witnessed family together with a selection of (Y, Z) pairs gives a square
evaluation matrix: polynomials ``y_Y``, ``f_F`` and ``h_H`` (columns) evaluated
at the indicator vectors of the Y-sets, the members and the sets of size < d
(rows). If the matrix has full rank over the rationals, |F| <= binom(n, d) - s.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence

from .core import (
    ClaimCheck,
    Family,
    SubsetMask,
    binom,
    elements_of,
    iter_k_masks,
    iter_submasks_of_size,
    mask_of,
    popcount,
    serialize_family,
)
from .vc import WitnessedFamily, count_size_d_witnesses, witness_violations

MAX_SIDE = 50000


class RankDeficiencyError(RuntimeError):
    """The evaluation matrix is singular; ``kernel`` is a nonzero coefficient vector it annihilates."""

    def __init__(self, rank: int, side: int, kernel: list[Fraction]):
        self.rank = rank
        self.side = side
        self.kernel = kernel
        super().__init__(f"evaluation matrix has rank {rank} < {side}")


class FalsificationError(RuntimeError):
    pass


# --- exact matrices -----------------------------------------------------------


@dataclass
class ExactMatrix:
    rows: int
    cols: int
    entries: list[list]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entry table does not match the declared dimensions")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        return cls(len(rows), len(rows[0]) if rows else 0, rows)

    @classmethod
    def identity(cls, k: int) -> "ExactMatrix":
        return cls(k, k, [[int(i == j) for j in range(k)] for i in range(k)])

    def integer_rows(self) -> list[list[int]]:
        """Rows scaled by the lcm of their denominators (rank-preserving)."""
        out = []
        for row in self.entries:
            fr = [Fraction(x) for x in row]
            den = lcm(*(x.denominator for x in fr)) if fr else 1
            out.append([int(x * den) for x in fr])
        return out

    def block(self, r0: int, r1: int, c0: int, c1: int) -> list[list]:
        return [row[c0:c1] for row in self.entries[r0:r1]]


def exact_rank(mx: ExactMatrix) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination, first-nonzero pivoting."""
    a = mx.integer_rows()
    rows, cols = mx.rows, mx.cols
    rank, prev = 0, 1
    for col in range(cols):
        piv = next((r for r in range(rank, rows) if a[r][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        prow = a[rank]
        for r in range(rank + 1, rows):
            row = a[r]
            x = row[col]
            for c in range(col + 1, cols):
                q, rem = divmod(row[c] * p - x * prow[c], prev)
                if rem:
                    raise ArithmeticError("non-exact Bareiss division")
                row[c] = q
            row[col] = 0
        prev = p
        rank += 1
        if rank == rows:
            break
    return rank


def kernel_vector(mx: ExactMatrix) -> Optional[list[Fraction]]:
    """A nonzero x with mx @ x = 0, or None if the columns are independent."""
    a = [[Fraction(x) for x in row] for row in mx.entries]
    rows, cols = mx.rows, mx.cols
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in set(pivots)]
    if not free:
        return None
    x = [Fraction(0)] * cols
    x[free[0]] = Fraction(1)
    for i, pc in enumerate(pivots):
        x[pc] = -a[i][free[0]]
    return x


def mat_vec(mx: ExactMatrix, x: Sequence) -> list:
    return [sum(Fraction(e) * v for e, v in zip(row, x)) for row in mx.entries]


# --- polynomials --------------------------------------------------------------


def _value(kind: str, support, point: int, d: int) -> int:
    if kind == "f":
        fm, bm = support
        hit = (-1) ** popcount(fm & ~bm) if fm & point == bm else 0
        return hit - (1 if fm & point == fm else 0)
    if kind == "y":
        return -1 if support & point == support else 0
    if kind == "h":
        return popcount(point) - d - 1 if support & point == support else 0
    raise ValueError(f"unknown polynomial kind {kind!r}")


def eval_poly(kind: str, support, point: SubsetMask, n: int, d: int) -> Fraction:
    """Evaluate f_(F,B), y_Z or h_H at the 0/1 indicator vector of ``point``.

    ``support`` is a pair (F, B) for kind 'f', a set Z for 'y' and a set H for 'h'.
    """
    parts = support if kind == "f" else (support,)
    for s in (*parts, point):
        if s.n != n:
            raise ValueError("support and point must live on [n]")
    raw = tuple(s.bits for s in parts) if kind == "f" else parts[0].bits
    return Fraction(_value(kind, raw, point.bits, d))


def h_sets(n: int, d: int) -> list[int]:
    """All subsets of size < d, sorted by size then colex."""
    return [b for k in range(d) for b in iter_k_masks(n, k)]


@dataclass
class YZSelection:
    pairs: tuple[tuple[SubsetMask, SubsetMask], ...]
    trace: list[dict] = field(default_factory=list)

    @property
    def s(self) -> int:
        return len(self.pairs)

    def raw(self) -> list[tuple[int, int]]:
        return [(y.bits, z.bits) for y, z in self.pairs]


def matrix_side(w: WitnessedFamily, s: int) -> int:
    return s + w.m + sum(binom(w.n, i) for i in range(w.d))


def assemble_matrix(w: WitnessedFamily, yz: YZSelection) -> ExactMatrix:
    n, d = w.n, w.d
    side = matrix_side(w, yz.s)
    if side > MAX_SIDE:
        raise ValueError(f"matrix side {side} exceeds the guard of {MAX_SIDE}")
    hs = h_sets(n, d)
    cols = ([("y", z) for _, z in yz.raw()]
            + [("f", (f, b)) for f, b in w.pairs()]
            + [("h", h) for h in hs])
    points = [y for y, _ in yz.raw()] + list(w.family.masks) + hs
    entries = [[_value(kind, sup, p, d) for kind, sup in cols] for p in points]
    return ExactMatrix(side, side, entries)


# --- (Y, Z) conditions and greedy selection ----------------------------------


def verify_yz_conditions(w: WitnessedFamily, yz: YZSelection) -> dict[str, ClaimCheck]:
    d = w.d
    fam = w.family.mask_set
    pairs = yz.raw()
    wits = set(w.witness_masks)
    shape = [i for i, (y, z) in enumerate(pairs)
             if popcount(y) != d + 1 or popcount(z) != d or z & ~y or y in fam]
    c1 = [i for i, (_, z) in enumerate(pairs) if z in wits]
    c2 = [(i, j) for i in range(len(pairs)) for j in range(i + 1, len(pairs))
          if popcount(pairs[i][0] & pairs[j][0]) > d - 1]
    c3 = []
    for i, (yi, zi) in enumerate(pairs):
        hits = [(f, b) for f, b in w.pairs() if f & yi == zi]
        for j in range(i + 1, len(pairs)):
            yj = pairs[j][0]
            k = next((w.family.masks.index(f) for f, b in hits if f & yj == b), None)
            if k is not None:
                c3.append((i, j, k))
                break
        if c3:
            break
    return {
        "pair_shape": ClaimCheck(not shape, len(shape), 0, shape[:1]),
        "z_not_a_witness": ClaimCheck(not c1, len(c1), 0, c1[:1]),
        "y_pairwise_small": ClaimCheck(not c2, len(c2), 0, [list(p) for p in c2[:1]]),
        "no_crossing_member": ClaimCheck(not c3, len(c3), 0, [list(t) for t in c3[:1]]),
    }


def yz_conditions_hold(report: dict[str, ClaimCheck]) -> bool:
    return all(c.holds for c in report.values())


def neighbourhood(pool: set[int], s: int, d: int) -> set[int]:
    """Members T of the pool with |T & S| >= d."""
    return {t for t in pool if popcount(t & s) >= d}


def greedy_select_yz(w: WitnessedFamily, gamma: int) -> YZSelection:
    """Greedy (Y, Z) selection; candidates are taken colex-first by Z, then by Y."""
    if gamma < 1:
        raise ValueError("gamma must be at least 1")
    n, d = w.n, w.d
    fam = w.family.mask_set
    pairs = list(w.pairs())
    pool = {b for b in iter_k_masks(n, d + 1) if b not in fam}
    trace = [{"step": "init", "pool": len(pool)}]

    removed = 0
    for f, b in pairs:
        if popcount(b) <= d - 3:
            gone = neighbourhood(pool, f, d)
            removed += len(gone)
            pool -= gone
    trace.append({"step": "sparse_witness_removal", "removed": removed, "pool": len(pool)})

    dset = {b for _, b in pairs if popcount(b) == d}
    counts: dict[int, int] = {}
    for f, b in pairs:
        if popcount(b) == d - 2:
            for sub in iter_submasks_of_size(f, d):
                counts[sub] = counts.get(sub, 0) + 1
    dprime = {sub for sub, c in counts.items() if c >= gamma}
    blocked = dset | dprime

    chosen: list[tuple[int, int]] = []
    while True:
        shadow = set()
        for y in pool:
            shadow.update(iter_submasks_of_size(y, d))
        cands = shadow - blocked
        if not cands:
            break
        z = min(cands)
        y = min(t for t in pool if t & z == z)
        chosen.append((y, z))
        near = neighbourhood(pool, y, d)
        pool -= near
        crossing = set()
        for f, b in pairs:
            if f & y == z:
                crossing |= {t for t in pool if t & f == b}
        pool -= crossing
        trace.append({"step": "select", "Y": list(elements_of(y)), "Z": list(elements_of(z)),
                      "removed_near": len(near), "removed_crossing": len(crossing), "pool": len(pool)})
    trace.append({"step": "terminate", "pool": len(pool), "D": len(dset), "D_prime": len(dprime)})
    return YZSelection(tuple((SubsetMask(y, n), SubsetMask(z, n)) for y, z in chosen), trace)


def tr_product_check(mx: ExactMatrix, s: int, m: int) -> ClaimCheck:
    """The product of the T-transpose and R blocks must be strictly upper triangular."""
    tt = mx.block(0, s, s, s + m)
    r = mx.block(s, s + m, 0, s)
    bad = []
    for i in range(s):
        for j in range(i + 1):
            if sum(tt[i][k] * r[k][j] for k in range(m)):
                bad.append([i, j])
    return ClaimCheck(not bad, len(bad), 0, bad[:5])


# --- certificates ---------------------------------------------------------------


def family_digest(f: Family) -> str:
    return hashlib.sha256(serialize_family(f).encode("utf-8")).hexdigest()


@dataclass
class Certificate:
    n: int
    d: int
    gamma: int
    family_sha256: str
    family: list[list[int]]
    witnesses: list[list[int]]
    yz_pairs: list[list[list[int]]]
    matrix_side: int
    rank: int
    bound: int
    valid: bool
    size_d_witnesses: int
    size_d_witness_bound: int

    def to_json(self) -> dict:
        return {
            "n": self.n, "d": self.d, "gamma": self.gamma,
            "family_sha256": self.family_sha256,
            "family": self.family,
            "witnesses": self.witnesses,
            "yz_pairs": self.yz_pairs,
            "matrix_side": self.matrix_side,
            "rank": self.rank,
            "bound": self.bound,
            "valid": self.valid,
            "size_d_witnesses": self.size_d_witnesses,
            "size_d_witness_bound": self.size_d_witness_bound,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)


def _build_certificate(w: WitnessedFamily, yz: YZSelection, gamma: int) -> tuple[Certificate, ExactMatrix]:
    mx = assemble_matrix(w, yz)
    rank = exact_rank(mx)
    bound = binom(w.n, w.d) - yz.s
    cert = Certificate(
        n=w.n, d=w.d, gamma=gamma,
        family_sha256=family_digest(w.family),
        family=[list(s) for s in w.family.sets()],
        witnesses=[list(x.elements()) for x in w.witnesses],
        yz_pairs=[[list(y.elements()), list(z.elements())] for y, z in yz.pairs],
        matrix_side=mx.rows, rank=rank, bound=bound, valid=rank == mx.rows,
        size_d_witnesses=count_size_d_witnesses(w),
        size_d_witness_bound=binom(w.n - 1, w.d),
    )
    return cert, mx


def certify(w: WitnessedFamily, gamma: Optional[int] = None) -> Certificate:
    """Select (Y, Z) pairs, check the conditions, and certify |F| <= binom(n, d) - s by exact rank."""
    if gamma is None:
        gamma = 4 * (w.d + 1)
    yz = greedy_select_yz(w, gamma)
    report = verify_yz_conditions(w, yz)
    if not yz_conditions_hold(report):
        bad = [k for k, c in report.items() if not c.holds]
        raise RuntimeError(f"greedy selection violates {bad}")
    cert, mx = _build_certificate(w, yz, gamma)
    if not cert.valid:
        raise RankDeficiencyError(cert.rank, cert.matrix_side, kernel_vector(mx))
    if w.m > cert.bound:
        raise FalsificationError(
            f"full-rank certificate yet |F| = {w.m} exceeds binom({w.n},{w.d}) - {yz.s} = {cert.bound}")
    return cert


def certificate_inputs(data: dict) -> tuple[WitnessedFamily, YZSelection]:
    n, d = data["n"], data["d"]
    fam = Family.from_sets(n, data["family"], d + 1)
    w = WitnessedFamily.from_masks(fam, d, [mask_of(x) for x in data["witnesses"]])
    yz = YZSelection(tuple((SubsetMask.from_elements(n, y), SubsetMask.from_elements(n, z))
                           for y, z in data["yz_pairs"]))
    return w, yz


def verify_certificate(data: dict) -> dict[str, ClaimCheck]:
    """Re-derive every field of a certificate from its embedded family, witnesses and pairs."""
    checks: dict[str, ClaimCheck] = {}
    n, d = data["n"], data["d"]
    fam = Family.from_sets(n, data["family"], d + 1)
    digest = family_digest(fam)
    checks["family_digest"] = ClaimCheck(digest == data["family_sha256"], digest, data["family_sha256"])
    wits = [mask_of(x) for x in data["witnesses"]]
    bad = witness_violations(fam.masks, wits)
    checks["witness_property"] = ClaimCheck(not bad, len(bad), 0, [i for i, _ in bad[:5]])
    if bad:
        return checks
    w, yz = certificate_inputs(data)
    for name, c in verify_yz_conditions(w, yz).items():
        checks[f"yz_{name}"] = c
    cert, mx = _build_certificate(w, yz, data["gamma"])
    checks["matrix_side"] = ClaimCheck(cert.matrix_side == data["matrix_side"], cert.matrix_side, data["matrix_side"])
    checks["rank"] = ClaimCheck(cert.rank == data["rank"], cert.rank, data["rank"])
    checks["full_rank"] = ClaimCheck(cert.valid, cert.rank, cert.matrix_side)
    checks["bound"] = ClaimCheck(cert.bound == data["bound"], cert.bound, data["bound"])
    checks["size_within_bound"] = ClaimCheck(w.m <= cert.bound, w.m, cert.bound)
    checks["tr_block_triangular"] = tr_product_check(mx, yz.s, w.m)
    checks["reproduced_bit_exact"] = ClaimCheck(
        json.dumps(cert.to_json(), sort_keys=True) == json.dumps(data, sort_keys=True), None, None)
    return checks
