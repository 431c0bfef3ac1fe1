"""Subsets of [n] as bitmasks, set families, colex enumeration and the family file format.

Element ``e`` of the ground set lives at bit ``e - 1``. For sets of a fixed size,
colex order coincides with ascending integer value of the mask, which is the
canonical order used throughout the package.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

MAX_N = 128


class FamilyFormatError(ValueError):
    """Malformed family or witnessed-family text."""


def check_ground_size(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"ground-set size must be a positive integer, got {n!r}")
    if n > MAX_N:
        raise ValueError(f"ground-set size {n} exceeds the supported maximum of {MAX_N}")


def mask_of(elements: Iterable[int]) -> int:
    bits = 0
    for e in elements:
        bits |= 1 << (e - 1)
    return bits


def elements_of(bits: int) -> tuple[int, ...]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length())
        bits ^= low
    return tuple(out)


def popcount(bits: int) -> int:
    return bin(bits).count("1")


@dataclass(frozen=True, slots=True)
class SubsetMask:
    """A subset of [n] stored as an integer bit vector."""

    bits: int
    n: int

    def __post_init__(self):
        check_ground_size(self.n)
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"mask {self.bits:#x} has bits outside [1, {self.n}]")

    @classmethod
    def from_elements(cls, n: int, elements: Iterable[int]) -> "SubsetMask":
        elements = list(elements)
        for e in elements:
            if not 1 <= e <= n:
                raise ValueError(f"element {e} outside [1, {n}]")
        if len(set(elements)) != len(elements):
            raise ValueError(f"duplicate element in {elements}")
        return cls(mask_of(elements), n)

    @classmethod
    def empty(cls, n: int) -> "SubsetMask":
        return cls(0, n)

    def cardinality(self) -> int:
        return popcount(self.bits)

    def elements(self) -> tuple[int, ...]:
        return elements_of(self.bits)

    def __len__(self) -> int:
        return self.cardinality()

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements())

    def __contains__(self, e: int) -> bool:
        return 1 <= e <= self.n and bool(self.bits >> (e - 1) & 1)

    def _same_ground(self, other: "SubsetMask") -> None:
        if self.n != other.n:
            raise ValueError(f"ground-set mismatch: {self.n} vs {other.n}")

    def __and__(self, other: "SubsetMask") -> "SubsetMask":
        self._same_ground(other)
        return SubsetMask(self.bits & other.bits, self.n)

    def __or__(self, other: "SubsetMask") -> "SubsetMask":
        self._same_ground(other)
        return SubsetMask(self.bits | other.bits, self.n)

    def __sub__(self, other: "SubsetMask") -> "SubsetMask":
        self._same_ground(other)
        return SubsetMask(self.bits & ~other.bits, self.n)

    def issubset(self, other: "SubsetMask") -> bool:
        return self.bits & ~other.bits == 0

    def __lt__(self, other: "SubsetMask") -> bool:
        return self.bits < other.bits

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.elements())) + "}"


@dataclass(frozen=True)
class Family:
    """An ordered, duplicate-free list of subsets of [n], optionally k-uniform."""

    n: int
    members: tuple[SubsetMask, ...] = ()
    uniform_rank: Optional[int] = None

    def __post_init__(self):
        check_ground_size(self.n)
        object.__setattr__(self, "members", tuple(self.members))
        seen = set()
        for m in self.members:
            if m.n != self.n:
                raise ValueError(f"member {m} lives on [{m.n}], family on [{self.n}]")
            if self.uniform_rank is not None and m.cardinality() != self.uniform_rank:
                raise ValueError(f"member {m} has size {m.cardinality()}, expected {self.uniform_rank}")
            if m.bits in seen:
                raise ValueError(f"duplicate member {m}")
            seen.add(m.bits)

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int], k: Optional[int] = None) -> "Family":
        return cls(n, tuple(SubsetMask(b, n) for b in masks), k)

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]], k: Optional[int] = None) -> "Family":
        return cls(n, tuple(SubsetMask.from_elements(n, s) for s in sets), k)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(m.bits for m in self.members)

    @cached_property
    def mask_set(self) -> frozenset[int]:
        return frozenset(self.masks)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[SubsetMask]:
        return iter(self.members)

    def __getitem__(self, i: int) -> SubsetMask:
        return self.members[i]

    def __contains__(self, s: SubsetMask) -> bool:
        return s.bits in self.mask_set

    def same_members(self, other: "Family") -> bool:
        return self.n == other.n and self.mask_set == other.mask_set

    def rank(self) -> Optional[int]:
        """The uniform rank, declared or inferred from the members."""
        if self.uniform_rank is not None:
            return self.uniform_rank
        sizes = {m.cardinality() for m in self.members}
        return sizes.pop() if len(sizes) == 1 else None

    def require_uniform(self, k: Optional[int] = None) -> int:
        r = self.rank()
        if r is None:
            raise ValueError("family is not uniform")
        if k is not None and r != k:
            raise ValueError(f"family is {r}-uniform, expected {k}-uniform")
        return r

    def sorted(self) -> "Family":
        return Family(self.n, tuple(sorted(self.members, key=lambda m: m.bits)), self.uniform_rank)

    def sets(self) -> list[tuple[int, ...]]:
        return [m.elements() for m in self.members]


def enumerate_k_subsets(n: int, k: int) -> Iterator[SubsetMask]:
    """All k-subsets of [n] in colex order (Gosper's hack)."""
    check_ground_size(n)
    for bits in iter_k_masks(n, k):
        yield SubsetMask(bits, n)


def iter_k_masks(n: int, k: int) -> Iterator[int]:
    if k < 0 or k > n:
        return
    if k == 0:
        yield 0
        return
    bits = (1 << k) - 1
    limit = 1 << n
    while bits < limit:
        yield bits
        low = bits & -bits
        ripple = bits + low
        bits = ripple | (((bits ^ ripple) >> 2) // low)


def iter_submasks_of_size(bits: int, k: int) -> Iterator[int]:
    """k-element submasks of ``bits`` in ascending numeric order."""
    elems = elements_of(bits)
    for local in iter_k_masks(len(elems), k):
        sub = 0
        for i, e in enumerate(elems):
            if local >> i & 1:
                sub |= 1 << (e - 1)
        yield sub


def all_k_masks(n: int, k: int) -> list[int]:
    return list(iter_k_masks(n, k))


def complete_family(n: int, k: int) -> Family:
    return Family.from_masks(n, iter_k_masks(n, k), k)


def complement_family(f: Family, k: int) -> Family:
    """binom([n], k) minus the members of f, in colex order."""
    if len(f) and f.require_uniform() != k:
        raise ValueError(f"family is not {k}-uniform")
    if f.uniform_rank is not None and f.uniform_rank != k:
        raise ValueError(f"family declared {f.uniform_rank}-uniform, expected {k}")
    present = f.mask_set
    return Family.from_masks(f.n, (b for b in iter_k_masks(f.n, k) if b not in present), k)


def binom(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


# --- family file format ---------------------------------------------------


def _parse_header(line: str) -> tuple[int, Optional[int]]:
    parts = line.split()
    if len(parts) not in (1, 2) or not all(p.isdigit() for p in parts):
        raise FamilyFormatError(f"malformed header {line!r}; expected 'n' or 'n k'")
    n = int(parts[0])
    if n < 1 or n > MAX_N:
        raise FamilyFormatError(f"ground-set size {n} out of range [1, {MAX_N}]")
    k = int(parts[1]) if len(parts) == 2 else None
    if k is not None and k > n:
        raise FamilyFormatError(f"rank {k} exceeds ground-set size {n}")
    return n, k


def _parse_set(text: str, n: int, lineno: int) -> int:
    bits = 0
    for tok in text.split():
        try:
            e = int(tok)
        except ValueError:
            raise FamilyFormatError(f"line {lineno}: non-integer token {tok!r}") from None
        if not 1 <= e <= n:
            raise FamilyFormatError(f"line {lineno}: element {e} outside [1, {n}]")
        if bits >> (e - 1) & 1:
            raise FamilyFormatError(f"line {lineno}: duplicate element {e}")
        bits |= 1 << (e - 1)
    return bits


def _content_lines(text: str) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def _parse_lines(text: str, with_witnesses: bool):
    lines = _content_lines(text)
    try:
        _, header = next(lines)
    except StopIteration:
        raise FamilyFormatError("missing header line") from None
    n, k = _parse_header(header)
    members: list[int] = []
    witnesses: list[int] = []
    seen: dict[int, int] = {}
    for lineno, line in lines:
        if with_witnesses:
            if line.count("|") != 1:
                raise FamilyFormatError(f"line {lineno}: expected exactly one '|' separator")
            set_part, wit_part = line.split("|")
        else:
            if "|" in line:
                raise FamilyFormatError(f"line {lineno}: unexpected '|' in a plain family file")
            set_part, wit_part = line, None
        bits = _parse_set(set_part, n, lineno)
        if k is not None and popcount(bits) != k:
            raise FamilyFormatError(f"line {lineno}: set has {popcount(bits)} elements, rank is {k}")
        if bits in seen:
            raise FamilyFormatError(f"line {lineno}: duplicate of line {seen[bits]}")
        seen[bits] = lineno
        members.append(bits)
        if wit_part is not None:
            wb = _parse_set(wit_part, n, lineno)
            if wb & ~bits:
                raise FamilyFormatError(f"line {lineno}: witness is not a subset of the set")
            witnesses.append(wb)
    return n, k, members, witnesses


def parse_family(text: str) -> Family:
    n, k, members, _ = _parse_lines(text, with_witnesses=False)
    return Family.from_masks(n, members, k)


def _format_set(bits: int) -> str:
    return " ".join(map(str, elements_of(bits)))


def serialize_family(f: Family) -> str:
    header = f"{f.n} {f.uniform_rank}" if f.uniform_rank is not None else f"{f.n}"
    return header + "\n" + "".join(_format_set(b) + "\n" for b in f.masks)


def parse_witnessed_lines(text: str) -> tuple[Family, list[int]]:
    """Parse the witnessed-family format into a family and raw witness masks."""
    n, k, members, witnesses = _parse_lines(text, with_witnesses=True)
    return Family.from_masks(n, members, k), witnesses


def serialize_witnessed_lines(f: Family, witnesses: Sequence[int]) -> str:
    header = f"{f.n} {f.uniform_rank}" if f.uniform_rank is not None else f"{f.n}"
    body = "".join(
        f"{_format_set(b)} | {_format_set(w)}".rstrip() + "\n" for b, w in zip(f.masks, witnesses)
    )
    return header + "\n" + body


def read_family_file(path) -> Family:
    with open(path, encoding="utf-8") as fh:
        return parse_family(fh.read())


def write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# --- audit reports ----------------------------------------------------------


@dataclass
class ClaimCheck:
    """Outcome of one exact check: whether it holds, both sides, and offending items."""

    holds: bool
    lhs: object = None
    rhs: object = None
    witnesses: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"holds": self.holds, "lhs": _jsonable(self.lhs), "rhs": _jsonable(self.rhs),
                "witnesses": _jsonable(self.witnesses)}


def _jsonable(x):
    from fractions import Fraction

    if isinstance(x, SubsetMask):
        return list(x.elements())
    if isinstance(x, Family):
        return [list(s) for s in x.sets()]
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in x]
    return x


def claims_to_json(claims: dict[str, ClaimCheck]) -> dict:
    return {name: c.to_json() for name, c in claims.items()}
