"""Fixed-weight bit strings and exact binomials.

A bit string of length N labels a subset of the N output sites.  The
leftmost character is site 1 and is the most significant bit when strings
are ordered, so ``enumerate_weight(3, 1)`` gives ``001, 010, 100``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache, cached_property
from itertools import combinations
from math import comb
from typing import Union

__all__ = [
    "BitString",
    "as_bits",
    "binom",
    "complement",
    "dot",
    "enumerate_weight",
    "index_of",
    "intersection",
    "set_ops",
    "union",
    "weight",
]


@dataclass(frozen=True)
class BitString:
    """Immutable string of 0/1 flags; ``bits[0]`` is site 1."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) < 1:
            raise ValueError("bit string must have length >= 1")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"flags must be 0 or 1, got {self.bits}")

    @classmethod
    def parse(cls, s: str) -> "BitString":
        s = s.strip()
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"not a bit string: {s!r}")
        return cls(tuple(int(c) for c in s))

    @classmethod
    def from_sites(cls, N: int, sites) -> "BitString":
        """String of length N with ones at the given 0-based sites."""
        flags = [0] * N
        for s in sites:
            flags[s] = 1
        return cls(tuple(flags))

    @property
    def length(self) -> int:
        return len(self.bits)

    @cached_property
    def weight(self) -> int:
        return sum(self.bits)

    @cached_property
    def mask(self) -> int:
        """Integer value with site 1 as the most significant bit."""
        return int(str(self), 2)

    @property
    def sites(self) -> tuple[int, ...]:
        """0-based positions of the ones."""
        return tuple(i for i, b in enumerate(self.bits) if b)

    def __str__(self) -> str:
        return "".join(map(str, self.bits))

    def __len__(self) -> int:
        return len(self.bits)

    def __lt__(self, other: "BitString") -> bool:
        return (self.length, self.mask) < (other.length, other.mask)


BitLike = Union[BitString, str]


def as_bits(x: BitLike) -> BitString:
    return x if isinstance(x, BitString) else BitString.parse(x)


def _pair(x: BitLike, y: BitLike) -> tuple[BitString, BitString]:
    x, y = as_bits(x), as_bits(y)
    if x.length != y.length:
        raise ValueError(f"length mismatch: {x} vs {y}")
    return x, y


def weight(x: BitLike) -> int:
    """Hamming weight."""
    return as_bits(x).weight


def dot(x: BitLike, y: BitLike) -> int:
    """Size of the overlap of two supports."""
    x, y = _pair(x, y)
    return sum(a & b for a, b in zip(x.bits, y.bits))


def union(x: BitLike, y: BitLike) -> BitString:
    x, y = _pair(x, y)
    return BitString(tuple(a | b for a, b in zip(x.bits, y.bits)))


def intersection(x: BitLike, y: BitLike) -> BitString:
    x, y = _pair(x, y)
    return BitString(tuple(a & b for a, b in zip(x.bits, y.bits)))


def complement(x: BitLike) -> BitString:
    x = as_bits(x)
    return BitString(tuple(1 - a for a in x.bits))


def set_ops(x: BitLike, y: BitLike) -> tuple[BitString, BitString, BitString]:
    """Return ``(x | y, x & y, ~x)``."""
    x, y = _pair(x, y)
    return union(x, y), intersection(x, y), complement(x)


def binom(n: int, k: int) -> int:
    """Exact binomial coefficient, zero outside ``0 <= k <= n``."""
    if n < 0 or k < 0 or k > n:
        return 0
    return comb(n, k)


@cache
def _enumerate(N: int, w: int) -> tuple[BitString, ...]:
    out = [BitString.from_sites(N, c) for c in combinations(range(N), w)]
    return tuple(sorted(out, key=lambda b: b.mask))


def enumerate_weight(N: int, w: int) -> list[BitString]:
    """All weight-w strings of length N in canonical (ascending) order."""
    if N < 1:
        raise ValueError("N must be positive")
    if w < 0 or w > N:
        raise ValueError(f"weight {w} outside [0, {N}]")
    return list(_enumerate(N, w))


@cache
def _index(N: int, w: int) -> dict[BitString, int]:
    return {b: i for i, b in enumerate(_enumerate(N, w))}


def index_of(x: BitLike) -> int:
    """Canonical row index of x among strings of its length and weight."""
    x = as_bits(x)
    return _index(x.length, x.weight)[x]
