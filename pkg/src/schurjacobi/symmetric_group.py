"""Permutations, partitions, Young diagrams and Young symmetrizers.

Conventions
-----------
* Permutations act on ``{1..n}`` and are stored in one-line notation.
* Composition is ``(a * b)(i) = a(b(i))``.
* Boxes of a Young diagram are labelled ``1..n`` row by row.

With these conventions ``young_symmetrizer((2, 1)) == 1 + (12) - (13) - (132)``.
"""

from __future__ import annotations

import itertools
import json
import math
import re
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .linalg import to_rational

__all__ = [
    "DEFAULT_BOUND",
    "Permutation",
    "Partition",
    "YoungDiagram",
    "GroupAlgebraElement",
    "compose",
    "sign",
    "dual_partition",
    "partitions",
    "row_group",
    "column_group",
    "young_symmetrizer",
    "algebra_multiply",
    "quasi_idempotence_constant",
]

DEFAULT_BOUND = 8


class Permutation:
    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"{images} is not a permutation of 1..{len(images)}")
        self.images = images

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(1, n + 1))

    @classmethod
    def from_cycles(cls, n: int, cycles: str | Sequence[Sequence[int]] = ()) -> "Permutation":
        """Build from cycle notation, e.g. ``from_cycles(3, "(132)")``.

        Single-digit labels may be written without separators.
        """
        if isinstance(cycles, str):
            parsed = []
            for body in re.findall(r"\(([^)]*)\)", cycles):
                parts = body.replace(",", " ").split()
                if len(parts) == 1 and n < 10:
                    parts = list(parts[0])
                parsed.append([int(p) for p in parts])
            cycles = parsed
        img = list(range(1, n + 1))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a - 1] = b
        return cls(img)

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.images, 1):
            inv[j - 1] = i
        return Permutation(inv)

    def sign(self) -> int:
        return sign(self)

    def zero_based(self) -> tuple[int, ...]:
        return tuple(i - 1 for i in self.images)

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for start in range(1, self.n + 1):
            if start in seen or self(start) == start:
                seen.add(start)
                continue
            cyc, i = [], start
            while i not in seen:
                seen.add(i)
                cyc.append(i)
                i = self(i)
            out.append(tuple(cyc))
        return out

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other):
        return self.images < other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


def compose(a: Permutation, b: Permutation) -> Permutation:
    """``(a o b)(i) = a(b(i))``."""
    if a.n != b.n:
        raise ValueError(f"cannot compose permutations of {a.n} and {b.n} letters")
    return Permutation(a.images[j - 1] for j in b.images)


def sign(p: Permutation) -> int:
    inv = sum(1 for i in range(p.n) for j in range(i + 1, p.n) if p.images[i] > p.images[j])
    return -1 if inv % 2 else 1


class Partition(tuple):
    """Non-increasing tuple of positive integers."""

    def __new__(cls, parts: Iterable[int]):
        parts = tuple(int(p) for p in parts)
        if not parts:
            raise ValueError("a partition must be nonempty")
        if any(p <= 0 for p in parts):
            raise ValueError(f"parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts must be non-increasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def n(self) -> int:
        return sum(self)

    def __repr__(self):
        return f"Partition{tuple(self)}"


def dual_partition(l: Sequence[int]) -> Partition:
    l = Partition(l)
    return Partition(sum(1 for p in l if p > i) for i in range(l[0]))


def partitions(n: int) -> Iterator[Partition]:
    """All partitions of ``n``, largest first part first."""

    def rec(rest, cap):
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in rec(rest - first, first):
                yield (first,) + tail

    for p in rec(n, n):
        yield Partition(p)


class YoungDiagram:
    """Young diagram with boxes labelled ``1..n`` row-major."""

    def __init__(self, partition: Sequence[int]):
        self.partition = Partition(partition)
        rows, k = [], 1
        for length in self.partition:
            rows.append(tuple(range(k, k + length)))
            k += length
        self.rows = tuple(rows)
        self.columns = tuple(
            tuple(r[j] for r in rows if len(r) > j) for j in range(self.partition[0])
        )

    @property
    def n(self) -> int:
        return self.partition.n

    def __repr__(self):
        return "\n".join(" ".join(map(str, r)) for r in self.rows)


def _check_bound(n: int, bound: int):
    if n > bound:
        raise ValueError(f"n = {n} exceeds the configured bound {bound}")


def _blocks_group(n: int, blocks: Sequence[Sequence[int]]) -> list[Permutation]:
    """All permutations of 1..n preserving each block setwise."""
    factors = []
    for blk in blocks:
        factors.append([(blk, perm) for perm in itertools.permutations(blk)])
    out = []
    for choice in itertools.product(*factors):
        img = list(range(1, n + 1))
        for blk, perm in choice:
            for src, dst in zip(blk, perm):
                img[src - 1] = dst
        out.append(Permutation(img))
    return sorted(out)


def row_group(d: YoungDiagram | Sequence[int], bound: int = DEFAULT_BOUND) -> list[Permutation]:
    d = d if isinstance(d, YoungDiagram) else YoungDiagram(d)
    _check_bound(d.n, bound)
    return _blocks_group(d.n, d.rows)


def column_group(d: YoungDiagram | Sequence[int], bound: int = DEFAULT_BOUND) -> list[Permutation]:
    d = d if isinstance(d, YoungDiagram) else YoungDiagram(d)
    _check_bound(d.n, bound)
    return _blocks_group(d.n, d.columns)


class GroupAlgebraElement:
    """Finite rational combination of permutations of a fixed ``n``."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict | None = None):
        self.n = n
        clean = {}
        for p, c in (terms or {}).items():
            if p.n != n:
                raise ValueError("permutation size does not match the algebra")
            c = to_rational(c)
            if c:
                clean[p] = clean.get(p, 0) + c
        self.terms = {p: c for p, c in sorted(clean.items()) if c}

    @classmethod
    def one(cls, n: int) -> "GroupAlgebraElement":
        return cls(n, {Permutation.identity(n): 1})

    @classmethod
    def of(cls, p: Permutation, c=1) -> "GroupAlgebraElement":
        return cls(p.n, {p: c})

    def __add__(self, other):
        self._check(other)
        t = dict(self.terms)
        for p, c in other.terms.items():
            t[p] = t.get(p, 0) + c
        return GroupAlgebraElement(self.n, t)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "GroupAlgebraElement":
        c = to_rational(c)
        return GroupAlgebraElement(self.n, {p: c * v for p, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, GroupAlgebraElement):
            return algebra_multiply(self, other)
        return self.scale(other)

    __rmul__ = scale

    def __eq__(self, other):
        return isinstance(other, GroupAlgebraElement) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, tuple(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other):
        if self.n != other.n:
            raise ValueError(f"group algebra size mismatch: {self.n} vs {other.n}")

    def to_json(self) -> dict:
        return {json.dumps(list(p.images), separators=(",", ":")): str(c) for p, c in self.terms.items()}

    @classmethod
    def from_json(cls, data: dict) -> "GroupAlgebraElement":
        terms = {Permutation(json.loads(k)): to_rational(v) for k, v in data.items()}
        if not terms:
            raise ValueError("cannot infer n for an empty element")
        n = next(iter(terms)).n
        return cls(n, terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for p, c in self.terms.items():
            coef = "" if c == 1 else "-" if c == -1 else f"{c}*"
            parts.append(f"{coef}{p!r}")
        return " + ".join(parts).replace("+ -", "- ")


def algebra_multiply(a: GroupAlgebraElement, b: GroupAlgebraElement) -> GroupAlgebraElement:
    a._check(b)
    out: dict = {}
    for p, c in a.terms.items():
        for q, d in b.terms.items():
            r = compose(p, q)
            out[r] = out.get(r, 0) + c * d
    return GroupAlgebraElement(a.n, out)


def young_symmetrizer(l: Sequence[int], bound: int = DEFAULT_BOUND) -> GroupAlgebraElement:
    """(sum of row-preserving perms) * (signed sum of column-preserving perms)."""
    d = YoungDiagram(l)
    rows = GroupAlgebraElement(d.n, {p: 1 for p in row_group(d, bound)})
    cols = GroupAlgebraElement(d.n, {p: sign(p) for p in column_group(d, bound)})
    return algebra_multiply(rows, cols)


def quasi_idempotence_constant(l: Sequence[int], bound: int = DEFAULT_BOUND) -> Fraction:
    """The scalar ``c`` with ``Sigma(l)^2 = c * Sigma(l)``, found by expansion."""
    s = young_symmetrizer(l, bound)
    sq = algebra_multiply(s, s)
    p, coeff = next(iter(s.terms.items()))
    c = sq.terms.get(p, Fraction(0)) / coeff
    if c == 0 or sq != s.scale(c):
        raise ArithmeticError(f"Young symmetrizer of {tuple(l)} is not quasi-idempotent")
    return c


def symmetric_group(n: int) -> list[Permutation]:
    return sorted(Permutation(p) for p in itertools.permutations(range(1, n + 1)))


def factorial(n: int) -> int:
    return math.factorial(n)
