"""Exact maximum-family searches.

Every search here is a maximum-clique problem. A vertex is a pair (F, B): a
candidate member F together with the witness B it would use. Two vertices are
adjacent when the sets differ and neither one's intersection with the other
equals the other's witness. A clique is then exactly a family together with a
valid witness assignment, so "VC-dimension <= d", "has an s-witness" and
"intersecting" (B = empty set) all become pairwise constraints.

The clique search is colour-bounded branch and bound over bitsets. The root is
fixed to the member {1, ..., d+1} with witness {1, ..., t} for each allowed t,
which loses nothing because the symmetric group acts transitively on such
pairs.
"""
from __future__ import annotations

import os
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .core import Family, binom, elements_of, iter_k_masks, iter_submasks_of_size, popcount

DEFAULT_NODE_BUDGET = 20_000_000
DEFAULT_TIME_BUDGET = 1800.0


def default_node_budget() -> int:
    raw = os.environ.get("VCLAB_BUDGET_NODES")
    return int(raw) if raw else DEFAULT_NODE_BUDGET


class _BudgetExceeded(Exception):
    pass


@dataclass
class SearchResult:
    """Outcome of a maximum search; ``complete`` is False when a budget cut it short."""

    size: int
    family: Family
    witnesses: Optional[list[int]]
    complete: bool
    nodes: int
    elapsed: float
    closed_by: str = "exhaustive"
    conjectured_bound: Optional[int] = None
    exceeds_conjecture: bool = False

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "complete": self.complete,
            "nodes": self.nodes,
            "elapsed_seconds": round(self.elapsed, 3),
            "closed_by": self.closed_by,
            "conjectured_bound": self.conjectured_bound,
            "exceeds_conjecture": self.exceeds_conjecture,
            "family": [list(s) for s in self.family.sets()],
            "witnesses": None if self.witnesses is None else [list(elements_of(b)) for b in self.witnesses],
        }


@dataclass
class _Graph:
    sets: list[int]
    wits: list[int]
    adj: list[int]

    @property
    def size(self) -> int:
        return len(self.sets)


def _compatible(f: int, b: int, g: int, c: int) -> bool:
    x = f & g
    return f != g and x != b and x != c


def build_pair_graph(n: int, k: int, witness_sizes: Iterable[int]) -> _Graph:
    """Vertices (F, B) with F a k-subset and B a subset of F of an allowed size."""
    sizes = sorted(set(witness_sizes))
    sets, wits = [], []
    for f in iter_k_masks(n, k):
        for t in sizes:
            for b in iter_submasks_of_size(f, t):
                sets.append(f)
                wits.append(b)
    v = len(sets)
    adj = [0] * v
    for i in range(v):
        fi, bi = sets[i], wits[i]
        row = 0
        for j in range(v):
            if _compatible(fi, bi, sets[j], wits[j]):
                row |= 1 << j
        adj[i] = row
    return _Graph(sets, wits, adj)


class _CliqueSearch:
    def __init__(self, graph: _Graph, lower: int, upper: Optional[int], node_budget: int,
                 time_budget: float, leaf_ok: Optional[Callable] = None, prune: Optional[Callable] = None):
        self.g = graph
        self.best: list[int] = []
        self.best_size = lower
        self.upper = upper
        self.nodes = 0
        self.node_budget = node_budget
        self.deadline = time.monotonic() + time_budget
        self.leaf_ok = leaf_ok
        self.prune = prune
        self.hit_upper = False

    def _colour(self, p: int) -> list[tuple[int, int]]:
        adj = self.g.adj
        out = []
        colour = 0
        u = p
        while u:
            colour += 1
            q = u
            while q:
                low = q & -q
                v = low.bit_length() - 1
                q &= ~adj[v] & ~low
                u &= ~low
                out.append((v, colour))
        return out

    def _record(self, clique: list[int]) -> None:
        if self.leaf_ok is not None and not self.leaf_ok(clique):
            return
        if len(clique) > self.best_size or not self.best:
            if len(clique) >= self.best_size:
                self.best = list(clique)
                self.best_size = len(clique)
                if self.upper is not None and self.best_size >= self.upper:
                    self.hit_upper = True

    def expand(self, clique: list[int], p: int) -> None:
        self.nodes += 1
        if self.nodes > self.node_budget or (self.nodes & 0x3FF == 0 and time.monotonic() > self.deadline):
            raise _BudgetExceeded
        if self.hit_upper:
            return
        if self.prune is not None and self.prune(clique, p):
            return
        order = self._colour(p)
        adj = self.g.adj
        for v, colour in reversed(order):
            if len(clique) + colour <= self.best_size or self.hit_upper:
                return
            clique.append(v)
            np_ = p & adj[v]
            if np_:
                self.expand(clique, np_)
            else:
                self._record(clique)
            clique.pop()
            p &= ~(1 << v)
        if not order:
            self._record(clique)


def _root_vertices(g: _Graph, n: int, k: int) -> list[int]:
    """One (F0, B) vertex per witness size, F0 = {1..k}, B = {1..t}."""
    f0 = (1 << k) - 1
    roots = {}
    for i, (f, b) in enumerate(zip(g.sets, g.wits)):
        t = popcount(b)
        if f == f0 and b == (1 << t) - 1 and t not in roots:
            roots[t] = i
    return [roots[t] for t in sorted(roots)]


def _run(g: _Graph, n: int, k: int, *, upper: Optional[int], node_budget: Optional[int],
         time_budget: Optional[float], leaf_ok=None, prune=None, symmetric_root: bool = True):
    start = time.monotonic()
    search = _CliqueSearch(g, 0, upper, node_budget or default_node_budget(),
                           DEFAULT_TIME_BUDGET if time_budget is None else time_budget, leaf_ok, prune)
    complete = True
    try:
        if symmetric_root:
            for r in _root_vertices(g, n, k):
                search.expand([r], g.adj[r])
                if search.hit_upper:
                    break
        else:
            search.expand([], (1 << g.size) - 1)
    except _BudgetExceeded:
        complete = False
    clique = search.best
    sets = [g.sets[v] for v in clique]
    order = sorted(range(len(sets)), key=lambda i: sets[i])
    fam = Family.from_masks(n, [sets[i] for i in order], k)
    wits = [g.wits[clique[i]] for i in order]
    closed = "exhaustive"
    if search.hit_upper and complete:
        closed = "upper_bound"
    return SearchResult(len(sets), fam, wits, complete, search.nodes, time.monotonic() - start, closed)


def max_vc_family(n: int, d: int, *, use_bound: bool = True, node_budget: Optional[int] = None,
                  time_budget: Optional[float] = None) -> SearchResult:
    """Largest (d+1)-uniform family on [n] with VC-dimension at most d.

    With ``use_bound`` the search stops as soon as an incumbent reaches the
    Frankl-Pach bound binom(n, d).
    """
    if n < d + 1 or d < 0:
        raise ValueError("need n >= d+1 >= 1")
    g = build_pair_graph(n, d + 1, range(d + 1))
    return _run(g, n, d + 1, upper=binom(n, d) if use_bound else None,
                node_budget=node_budget, time_budget=time_budget)


def max_switness_family(n: int, d: int, s: int, *, at_most: bool = False, use_bound: bool = True,
                        node_budget: Optional[int] = None, time_budget: Optional[float] = None) -> SearchResult:
    """Largest (d+1)-uniform family where each member has a witness of size s (or <= s with ``at_most``).

    For s = d, ``use_bound`` stops at binom(n-1, d), the size-d witness count
    bound; for s = 0 it stops at the intersecting maximum for n >= 2(d+1).
    Other cases are searched to exhaustion. An optimum above binom(n-1, d) is
    flagged in ``exceeds_conjecture``.
    """
    if not 0 <= s <= d or n < d + 1:
        raise ValueError("need 0 <= s <= d and n >= d+1")
    sizes = range(s + 1) if at_most else (s,)
    g = build_pair_graph(n, d + 1, sizes)
    conj = binom(n - 1, d)
    upper = None
    if use_bound and (s == d and not at_most):
        upper = conj
    elif use_bound and s == 0 and n >= 2 * (d + 1):
        upper = conj
    res = _run(g, n, d + 1, upper=upper, node_budget=node_budget, time_budget=time_budget)
    res.conjectured_bound = conj
    res.exceeds_conjecture = res.size > conj
    return res


def max_intersecting(n: int, k: int, nontrivial: bool = False, *, node_budget: Optional[int] = None,
                     time_budget: Optional[float] = None) -> SearchResult:
    """Largest intersecting k-uniform family; with ``nontrivial`` the members share no common element."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    g = build_pair_graph(n, k, (0,))
    sets = g.sets
    full = (1 << n) - 1

    def common(clique):
        c = full
        for v in clique:
            c &= sets[v]
        return c

    leaf_ok = prune = None
    upper = None
    if nontrivial:
        leaf_ok = lambda clique: common(clique) == 0

        def prune(clique, p):
            c = common(clique)
            while c:
                low = c & -c
                c ^= low
                q = p
                escape = False
                while q:
                    lb = q & -q
                    if not sets[lb.bit_length() - 1] & low:
                        escape = True
                        break
                    q ^= lb
                if not escape:
                    return True
            return False
    elif n >= 2 * k:
        upper = binom(n - 1, k - 1)
    return _run(g, n, k, upper=upper, node_budget=node_budget, time_budget=time_budget,
                leaf_ok=leaf_ok, prune=prune)


# --- validity checkers used to re-verify search outputs ------------------------


def has_switness(masks, s: int, at_most: bool = False) -> bool:
    """Whether every member has a witness of size s (or <= s) against the whole family."""
    for f in masks:
        seen = {g & f for g in masks}
        sizes = range(s + 1) if at_most else (s,)
        if not any(b not in seen for t in sizes for b in iter_submasks_of_size(f, t)):
            return False
    return True


def is_intersecting(masks) -> bool:
    return all(a & b for i, a in enumerate(masks) for b in masks[i + 1:])


def switness_assignment(masks, s: int) -> Optional[list[int]]:
    """Smallest-mask valid s-witness per member, or None."""
    out = []
    for f in masks:
        seen = {g & f for g in masks}
        b = next((b for b in iter_submasks_of_size(f, s) if b not in seen), None)
        if b is None:
            return None
        out.append(b)
    return out


# --- counterexample hunting -----------------------------------------------------


@dataclass
class HuntResult:
    counterexample: Optional[Family]
    best_size: int
    iterations: int
    bound: int
    searched_exhaustively: bool = False
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "found": self.counterexample is not None,
            "best_size": self.best_size,
            "bound": self.bound,
            "iterations": self.iterations,
            "searched_exhaustively": self.searched_exhaustively,
            "counterexample": None if self.counterexample is None else [list(s) for s in self.counterexample.sets()],
            "notes": self.notes,
        }


def hunt_counterexample(n: int, d: int, s: int, budget: int = 20000, seed: int = 0,
                        at_most: bool = False, exhaustive_nodes: int = 0) -> HuntResult:
    """Randomized add/drop local search for an s-witness family larger than binom(n-1, d).

    With ``exhaustive_nodes > 0`` a budgeted clique search follows the local
    search. Anything returned has been re-checked from scratch.
    """
    rng = random.Random(seed)
    universe = list(iter_k_masks(n, d + 1))
    bound = binom(n - 1, d)
    current: list[int] = []
    best: list[int] = []
    found = None
    it = 0
    for it in range(1, budget + 1):
        cand = rng.choice(universe)
        if cand in current:
            if rng.random() < 0.1:
                current.remove(cand)
            continue
        trial = current + [cand]
        if has_switness(trial, s, at_most):
            current = trial
        elif current and rng.random() < 0.3:
            # drop a random member to escape the local optimum
            current.pop(rng.randrange(len(current)))
            trial = current + [cand]
            if has_switness(trial, s, at_most):
                current = trial
        if len(current) > len(best):
            best = list(current)
            if len(best) > bound:
                found = best
                break
    result = HuntResult(None, len(best), it, bound)
    if found is None and exhaustive_nodes:
        res = max_switness_family(n, d, s, at_most=at_most, use_bound=False, node_budget=exhaustive_nodes)
        result.searched_exhaustively = res.complete
        result.notes.append(f"clique search: size {res.size}, complete={res.complete}")
        if res.size > len(best):
            result.best_size = res.size
        if res.size > bound:
            found = list(res.family.masks)
    if found is not None and has_switness(found, s, at_most) and len(found) > bound:
        result.counterexample = Family.from_masks(n, sorted(found), d + 1)
    return result
