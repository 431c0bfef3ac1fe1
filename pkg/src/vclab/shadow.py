"""Shadows, generalized binomials and Kruskal-Katona style checks."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .core import ClaimCheck, Family, binom, iter_k_masks, iter_submasks_of_size, popcount
from .vc import WitnessedFamily

REL_TOL = 1e-9


def shadow_masks(masks, s: int) -> set[int]:
    out: set[int] = set()
    for b in masks:
        out.update(iter_submasks_of_size(b, s))
    return out


def shadow_s(f: Family, s: int) -> Family:
    """All s-subsets contained in some member, colex order."""
    k = f.require_uniform() if len(f) else f.uniform_rank
    if k is not None and s > k:
        raise ValueError(f"shadow level {s} exceeds member size {k}")
    if s < 0:
        raise ValueError("shadow level must be non-negative")
    return Family.from_masks(f.n, sorted(shadow_masks(f.masks, s)), s)


def gen_binom(alpha: float, k: int) -> float:
    """alpha (alpha-1) ... (alpha-k+1) / k!; exact for integral alpha >= 0."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if float(alpha).is_integer() and alpha >= 0:
        return float(math.comb(int(alpha), k))
    num = 1.0
    for i in range(k):
        num *= alpha - i
    return num / math.factorial(k)


def solve_alpha(value: float, k: int, tol: float = 1e-12) -> float:
    """The alpha >= k-1 with gen_binom(alpha, k) = value, by bisection on [k-1, k+value]."""
    if value < 0:
        raise ValueError("value must be non-negative")
    if k < 1:
        raise ValueError("k must be at least 1")
    lo, hi = float(k - 1), float(k + value)
    if value == 0:
        return lo
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if gen_binom(mid, k) < value:
            lo = mid
        else:
            hi = mid
    mid = (lo + hi) / 2
    r = round(mid)
    if abs(r - mid) <= 2 * tol and r >= k - 1 and gen_binom(r, k) == value:
        return float(r)
    return mid


@dataclass
class KKReport:
    shadow_size: int
    lovasz_bound: float
    holds: bool
    alpha: float


def check_kk(f: Family) -> KKReport:
    """|shadow_d f| >= binom(alpha, d) where |f| = binom(alpha, d+1)."""
    if not len(f):
        return KKReport(0, 0.0, True, float("nan"))
    k = f.require_uniform()
    alpha = solve_alpha(len(f), k)
    bound = gen_binom(alpha, k - 1)
    size = len(shadow_masks(f.masks, k - 1))
    return KKReport(size, bound, size >= bound * (1 - REL_TOL), alpha)


def cascade(m: int, k: int) -> list[tuple[int, int]]:
    """The k-binomial representation m = sum binom(a_i, i), a_k > a_{k-1} > ... >= i >= 1."""
    if m < 0 or k < 1:
        raise ValueError("need m >= 0 and k >= 1")
    terms = []
    i = k
    while m > 0 and i >= 1:
        a = i
        while binom(a + 1, i) <= m:
            a += 1
        terms.append((a, i))
        m -= binom(a, i)
        i -= 1
    return terms


def exact_kk_min(m: int, k: int, s: int) -> int:
    """Minimum size of the s-shadow of a k-uniform family with m members."""
    if s > k or s < 0:
        raise ValueError("need 0 <= s <= k")
    if m == 0:
        return 0
    return sum(binom(a, i - (k - s)) for a, i in cascade(m, k))


def colex_initial_segment(n: int, k: int, m: int) -> Family:
    masks = []
    for b in iter_k_masks(n, k):
        if len(masks) == m:
            break
        masks.append(b)
    if len(masks) < m:
        raise ValueError(f"binom({n},{k}) < {m}")
    return Family.from_masks(n, masks, k)


@dataclass
class PartialShadowReport:
    x: float
    bound: float
    holds: bool
    g_size: int


class CoveringError(ValueError):
    def __init__(self, index: int, found: int, needed: int):
        self.index = index
        super().__init__(f"member F[{index}] contains only {found} members of g, needs {needed}")


def check_partial_shadow(f: Family, g: Family, k: int) -> PartialShadowReport:
    """If every member of f contains k members of g and |f| = binom(x, k), then |g| >= binom(x, k-1)."""
    gset = g.mask_set
    if len(f):
        r = f.require_uniform()
        if len(g) and g.require_uniform() != r - 1:
            raise ValueError("g must be one level below f")
        for i, b in enumerate(f.masks):
            found = sum(1 for c in iter_submasks_of_size(b, r - 1) if c in gset)
            if found < k:
                raise CoveringError(i, found, k)
    if not len(f):
        return PartialShadowReport(float("nan"), 0.0, True, len(g))
    x = solve_alpha(len(f), k)
    bound = gen_binom(x, k - 1)
    return PartialShadowReport(x, bound, len(g) >= bound * (1 - REL_TOL), len(g))


def lovasz_shadow_bound(m: int, k: int) -> float:
    """Continuous lower bound on the (k-1)-shadow of m k-sets."""
    if m == 0:
        return 0.0
    return gen_binom(solve_alpha(m, k), k - 1)


def shadow_sizes(f: Family) -> dict[int, int]:
    k = f.require_uniform()
    return {s: len(shadow_masks(f.masks, s)) for s in range(k + 1)}


def non_witness_shadow(w: WitnessedFamily) -> Family:
    """d-subsets of members that are nobody's witness."""
    wits = set(w.witness_masks)
    rest = shadow_masks(w.family.masks, w.d) - wits
    return Family.from_masks(w.n, sorted(rest), w.d)


def size_d_witness_routes(w: WitnessedFamily) -> dict[str, ClaimCheck]:
    """Two independent checks of |F| <= binom(n-1, d) when every witness has size d.

    The count route compares |F| with the bound directly. The shadow route
    feeds g = non-witness d-shadows into the partial shadow inequality with
    k = d; since witnesses and g are disjoint, |F| + |g| <= binom(n, d), which
    forces x <= n-1.
    """
    n, d = w.n, w.d
    if any(popcount(b) != d for b in w.witness_masks):
        raise ValueError("every witness must have size d")
    bound = binom(n - 1, d)
    out = {"count_route": ClaimCheck(w.m <= bound, w.m, bound)}
    if not w.m:
        out["shadow_route"] = ClaimCheck(True, None, n - 1)
        return out
    g = non_witness_shadow(w)
    rep = check_partial_shadow(w.family, g, d)
    total = w.m + len(g)
    out["disjoint_budget"] = ClaimCheck(total <= binom(n, d), total, binom(n, d))
    out["partial_shadow"] = ClaimCheck(rep.holds, len(g), rep.bound)
    out["shadow_route"] = ClaimCheck(rep.x <= (n - 1) * (1 + REL_TOL), rep.x, n - 1)
    return out
