"""Integer partitions and Young-diagram combinatorics.

Cells are 1-indexed ``(row, column)`` pairs.  Enumerations are returned in
graded-lexicographic descending order: by weight, then reverse-lexicographic
within a weight, e.g. ``(4), (3,1), (2,2), (2,1,1), (1,1,1,1)``.
"""

from __future__ import annotations

import re
from functools import lru_cache
from itertools import product
from typing import Iterator

from .errors import OutOfDiagramError

HORIZONTAL = "horizontal"
VERTICAL = "vertical"


class Partition(tuple):
    """A weakly decreasing tuple of positive integers (trailing zeros stripped).

    >>> Partition([3, 1, 0])
    Partition([3, 1])
    >>> Partition([3, 1]).conjugate()
    Partition([2, 1, 1])
    """

    def __new__(cls, parts=()):
        parts = [int(p) for p in parts]
        while parts and parts[-1] == 0:
            parts.pop()
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    def __repr__(self):
        return f"Partition({list(self)})"

    def __str__(self):
        return "[" + ",".join(map(str, self)) + "]"

    @property
    def weight(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def part(self, i: int) -> int:
        """lambda_i with 1-based i; zero past the end."""
        return self[i - 1] if 1 <= i <= len(self) else 0

    def conjugate(self) -> "Partition":
        return conjugate(self)

    def cells(self) -> Iterator[tuple[int, int]]:
        for i, row in enumerate(self, start=1):
            for j in range(1, row + 1):
                yield i, j

    def multiplicity(self, i: int) -> int:
        return sum(1 for p in self if p == i)

    def contains(self, other: "Partition") -> bool:
        """True iff ``other`` is a subdiagram of ``self``."""
        return len(other) <= len(self) and all(a >= b for a, b in zip(self, other))


def parse_partition(text: str) -> Partition:
    """Parse the bracket syntax ``[5,4,2,2,1]``; ``[]`` is the empty partition."""
    m = re.fullmatch(r"\s*\[\s*((?:\d+\s*(?:,\s*\d+\s*)*)?)\]\s*", text)
    if not m:
        raise ValueError(f"bad partition syntax: {text!r}")
    body = m.group(1).strip()
    return Partition(int(x) for x in body.split(",")) if body else Partition()


@lru_cache(maxsize=None)
def conjugate(lam: Partition) -> Partition:
    if not lam:
        return Partition()
    return Partition(sum(1 for p in lam if p >= j) for j in range(1, lam[0] + 1))


def arm_leg_hook(lam: Partition, cell: tuple[int, int]) -> tuple[int, int, int]:
    i, j = cell
    if not (1 <= i <= len(lam) and 1 <= j <= lam[i - 1]):
        raise OutOfDiagramError(f"cell {cell} is not in the diagram of {lam}")
    a = lam[i - 1] - j
    leg = conjugate(lam)[j - 1] - i
    return a, leg, a + leg + 1


def odd_columns(lam: Partition) -> int:
    """c(lambda): number of columns of odd length."""
    return sum(1 for c in conjugate(lam) if c % 2)


def odd_rows(lam: Partition) -> int:
    """r(lambda): number of rows of odd length."""
    return sum(1 for p in lam if p % 2)


def strip_test(lam: Partition, mu: Partition, kind: str) -> int | None:
    """Size of the strip ``lam - mu`` if it is one of the requested kind, else None.

    Vertical strips have at most one box per row; horizontal strips at most
    one box per column (equivalently, the rows interlace).
    """
    if not lam.contains(mu):
        return None
    if kind == VERTICAL:
        if any(lam.part(i) - mu.part(i) > 1 for i in range(1, len(lam) + 1)):
            return None
    elif kind == HORIZONTAL:
        # interlacing: lam_{i+1} <= mu_i
        if any(lam.part(i + 1) > mu.part(i) for i in range(1, len(lam))):
            return None
    else:
        raise ValueError(f"unknown strip kind {kind!r}")
    return sum(lam) - sum(mu)


@lru_cache(maxsize=None)
def _partitions(d: int, max_part: int, max_len: int) -> tuple[Partition, ...]:
    if d == 0:
        return (Partition(),)
    if max_len == 0:
        return ()
    out = []
    for first in range(min(d, max_part), 0, -1):
        for rest in _partitions(d - first, first, max_len - 1):
            out.append(Partition((first,) + rest))
    return tuple(out)


def partitions_of(d: int, max_len: int | None = None, max_part: int | None = None) -> list[Partition]:
    """All partitions of ``d`` (optionally bounded), reverse-lexicographic order."""
    if d < 0:
        return []
    return list(_partitions(d, d if max_part is None else max_part,
                            d if max_len is None else max_len))


def partitions_up_to(D: int, max_len: int | None = None) -> list[Partition]:
    """Every partition of weight <= D, graded-lex order (weight ascending)."""
    return [p for d in range(D + 1) for p in partitions_of(d, max_len)]


def dominance_leq(lam: Partition, mu: Partition) -> bool:
    """lam <= mu in dominance order; partitions of different weight are incomparable."""
    if sum(lam) != sum(mu):
        return False
    a = b = 0
    for i in range(max(len(lam), len(mu))):
        a += lam.part(i + 1)
        b += mu.part(i + 1)
        if a > b:
            return False
    return True


def add_strips(mu: Partition, r: int, kind: str, max_len: int | None = None) -> list[Partition]:
    """All lam with ``lam - mu`` a strip of size r of the given kind."""
    n = len(mu) + r if kind == VERTICAL else len(mu) + 1
    if r == 0:
        return [mu]
    if kind == VERTICAL:
        rows = range(n)
        out = []
        for bits in product((0, 1), repeat=n):
            if sum(bits) != r:
                continue
            parts = [mu.part(i + 1) + bits[i] for i in rows]
            if all(a >= b for a, b in zip(parts, parts[1:])):
                out.append(Partition(parts))
    elif kind == HORIZONTAL:
        out = []
        # row i may grow up to mu_{i-1} (row 1 without bound)
        def grow(i, left, acc):
            if i == n:
                if left == 0:
                    out.append(Partition(acc))
                return
            cap = left if i == 0 else min(left, mu.part(i) - mu.part(i + 1))
            for k in range(cap, -1, -1):
                grow(i + 1, left - k, acc + [mu.part(i + 1) + k])
        grow(0, r, [])
    else:
        raise ValueError(f"unknown strip kind {kind!r}")
    if max_len is not None:
        out = [p for p in out if len(p) <= max_len]
    return sorted(set(out), reverse=True)


def sub_strips(lam: Partition, r: int, kind: str) -> list[Partition]:
    """All mu with ``lam - mu`` a strip of size r of the given kind."""
    if r > sum(lam):
        return []
    cands = partitions_of(sum(lam) - r, max_len=len(lam),
                          max_part=lam[0] if lam else 0)
    return [mu for mu in cands if strip_test(lam, mu, kind) == r]
