"""Exact Gram matrices G_y^{(M)} and G_y^{(M,L)} and their spectra.

Rows and columns are indexed by weight-M strings in canonical order.  The
entry for ``(x, z)`` is ``1 / binom(M + d - 1 - x.z + |~x & ~z & y|, d - 1)``,
so every quantity here is an exact :class:`fractions.Fraction`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache
from typing import Callable, Optional, Sequence

import numpy as np

from .bitstrings import BitLike, BitString, as_bits, binom, enumerate_weight

__all__ = [
    "GramMatrix",
    "SpectrumReport",
    "RecursionError_",
    "build_G_y",
    "build_G_ML",
    "g0_spectrum",
    "numeric_spectrum",
    "eig_lift",
    "f_standard",
    "g0_inverse",
    "row_sum_symmetric",
    "exact_matmul",
    "is_identity",
]

Entries = tuple[tuple[Fraction, ...], ...]


class RecursionError_(ValueError):
    """Raised when the eigenvalue-lift hypothesis fails."""


@dataclass(frozen=True)
class GramMatrix:
    M: int
    N: int
    d: int
    label: str
    entries: Entries
    L: Optional[int] = None

    @property
    def size(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.entries])

    def __array__(self, dtype=None, copy=None):
        a = self.to_numpy()
        return a if dtype is None else a.astype(dtype)

    def quad(self, beta) -> float:
        b = np.asarray(beta, dtype=float)
        return float(b @ self.to_numpy() @ b)

    def quad_exact(self, beta: Sequence[Fraction]) -> Fraction:
        n = self.size
        return sum(
            (beta[i] * self.entries[i][j] * beta[j] for i in range(n) for j in range(n)),
            Fraction(0),
        )

    def __add__(self, other: "GramMatrix") -> "GramMatrix":
        if self.size != other.size:
            raise ValueError("size mismatch")
        rows = tuple(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)
        )
        return GramMatrix(self.M, self.N, self.d, f"{self.label}+{other.label}", rows, self.L)

    def to_json(self) -> str:
        payload = {
            "M": self.M,
            "N": self.N,
            "d": self.d,
            "y": self.label,
            "rows": [[_fmt(v) for v in row] for row in self.entries],
        }
        if self.L is not None:
            payload["L"] = self.L
        return json.dumps(payload)


def _fmt(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: list
    degeneracies: list[int] = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(self.degeneracies)

    def trace(self):
        return sum(v * g for v, g in zip(self.eigenvalues, self.degeneracies))


def _check_dims(M: int, N: int, d: int):
    if N < 1 or d < 2 or M < 0 or M > N:
        raise ValueError(f"invalid dimensions M={M}, N={N}, d={d}")


@cache
def _entry(M: int, d: int, xz: int, w: int) -> Fraction:
    return Fraction(1, binom(M + d - 1 - xz + w, d - 1))


@cache
def _build(M: int, N: int, d: int, ymask: int) -> Entries:
    full = (1 << N) - 1
    masks = [b.mask for b in enumerate_weight(N, M)]
    rows = []
    for x in masks:
        row = []
        for z in masks:
            xz = (x & z).bit_count()
            w = (~x & ~z & ymask & full).bit_count()
            row.append(_entry(M, d, xz, w))
        rows.append(tuple(row))
    return tuple(rows)


def build_G_y(M: int, N: int, d: int, y: BitLike) -> GramMatrix:
    """G_y^{(M)} with exact rational entries."""
    _check_dims(M, N, d)
    y = as_bits(y)
    if y.length != N:
        raise ValueError(f"label {y} does not have length {N}")
    return GramMatrix(M, N, d, str(y), _build(M, N, d, y.mask))


def build_G_ML(M: int, N: int, d: int, L: int, y: BitLike) -> GramMatrix:
    """Sum of G_x^{(M)} over weight-L x with x.y = min(L, w_y)."""
    _check_dims(M, N, d)
    y = as_bits(y)
    if y.length != N:
        raise ValueError(f"label {y} does not have length {N}")
    if not 0 <= L <= N:
        raise ValueError(f"L={L} outside [0, {N}]")
    target = min(L, y.weight)
    n = binom(N, M)
    acc = [[Fraction(0)] * n for _ in range(n)]
    for x in enumerate_weight(N, L):
        if (x.mask & y.mask).bit_count() != target:
            continue
        g = _build(M, N, d, x.mask)
        for i in range(n):
            ai, gi = acc[i], g[i]
            for j in range(n):
                ai[j] += gi[j]
    return GramMatrix(M, N, d, str(y), tuple(tuple(r) for r in acc), L)


def exact_matmul(A: Entries, B: Entries) -> list[list[Fraction]]:
    n, m, p = len(A), len(B), len(B[0])
    return [[sum((A[i][k] * B[k][j] for k in range(m)), Fraction(0)) for j in range(p)] for i in range(n)]


def is_identity(A) -> bool:
    return all(v == (1 if i == j else 0) for i, row in enumerate(A) for j, v in enumerate(row))


def _levels(M: int, N: int) -> range:
    return range(0, min(M, N - M) + 1)


def g0_spectrum(M: int, N: int, d: int) -> SpectrumReport:
    """Closed-form eigenvalues of G_0^{(M)} with their multiplicities.

    Levels run over k = 0..min(M, N-M); above that the multiplicity formula
    turns non-positive and those levels are absent.
    """
    if M == 0:
        return SpectrumReport([Fraction(1)], [1])
    _check_dims(M, N, d)
    top = Fraction(binom(N + d - 1, M), binom(M + d - 1, M))
    vals, degs = [], []
    for k in _levels(M, N):
        vals.append(top * binom(d - 2 + k, k) / binom(N + d - 1, k))
        degs.append(binom(N, k) - binom(N, k - 1))
    return SpectrumReport(vals, degs)


def numeric_spectrum(A, rtol: float = 1e-8) -> SpectrumReport:
    """Dense symmetric eigendecomposition grouped into degenerate levels."""
    w = np.linalg.eigvalsh(np.asarray(A, dtype=float))[::-1]
    vals, degs = [], []
    for v in w:
        if vals and abs(v - vals[-1]) <= rtol * max(1.0, abs(vals[-1])):
            degs[-1] += 1
        else:
            vals.append(float(v))
            degs.append(1)
    return SpectrumReport(vals, degs)


def f_standard(d: int) -> Callable[[int, int], Fraction]:
    """Overlap profile f_k^{(M)} of G_0^{(M)} as a function of (M, k)."""

    def f(M: int, k: int) -> Fraction:
        return Fraction(1, binom(M + d - 1 - k, d - 1))

    return f


def eig_lift(
    spectrum: SpectrumReport,
    f: Callable[[int, int], Fraction],
    M: int,
    N: int,
) -> SpectrumReport:
    """Lift the spectrum of G^{(M)} to G^{(M+1)}.

    ``f(M, k)`` is the entry of the M-copy matrix for overlap k.  The ratio
    lambda-tilde is evaluated at every admissible k and must agree exactly.
    """
    if M + 1 > N:
        raise ValueError("cannot lift beyond M = N")
    ks = range(max(0, 2 * M + 1 - N), M + 1)
    ratios = set()
    for k in ks:
        num = (M + 1 - k) * f(M + 1, k + 1) + (N - 2 * M - 1 + k) * f(M + 1, k)
        den = (M + 1 - k) * f(M, k) + (k * f(M, k - 1) if k > 0 else 0)
        ratios.add(Fraction(num) / Fraction(den))
    if len(ratios) != 1:
        raise RecursionError_("recursion hypothesis violated: ratio depends on k")
    lam = ratios.pop()
    new_levels = min(M + 1, N - M - 1) + 1
    vals = [v * lam for v in spectrum.eigenvalues][:new_levels]
    degs = list(spectrum.degeneracies)[:new_levels]
    if N > 2 * M:
        extra_deg = binom(N, M + 1) - binom(N, M)
        if extra_deg > 0:
            num = binom(N, M + 1) * f(M + 1, M + 1) - lam * binom(N, M) * f(M, M)
            vals.append(Fraction(num) / extra_deg)
            degs.append(extra_deg)
    return SpectrumReport(vals, degs)


def g0_inverse(M: int, N: int, d: int) -> GramMatrix:
    """Closed-form inverse of G_0^{(M)}."""
    if d == 1:
        raise ValueError("d = 1 makes the inverse formula degenerate")
    _check_dims(M, N, d)
    pre = Fraction((d + M - 1) * (N + d - M - 1), (d - 1) * (d + N - 1))
    masks = [b.mask for b in enumerate_weight(N, M)]
    rows = []
    for x in masks:
        row = []
        for z in masks:
            k = (x & z).bit_count()
            row.append(pre * (-1) ** (M + k) / binom(d + N - 2, M - k))
        rows.append(tuple(row))
    return GramMatrix(M, N, d, "inv", tuple(rows))


def row_sum_symmetric(M: int, L: int, N: int, d: int) -> Fraction:
    """Row sum of G_0^{(M,L)} by counting overlaps."""
    total = Fraction(0)
    for i in range(M + 1):
        outer = binom(M, i) * binom(N - M, M - i)
        if not outer:
            continue
        inner = Fraction(0)
        for q in range(L + 1):
            c = binom(N + i - 2 * M, q) * binom(2 * M - i, L - q)
            if c:
                inner += Fraction(c, binom(M + d - 1 - i + q, d - 1))
        total += outer * inner
    return total
