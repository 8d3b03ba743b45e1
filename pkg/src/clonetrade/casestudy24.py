"""2 -> 4 qubit cloning with two-site fidelities under the symmetry F_y = F_ybar.

Only three numbers matter, ``(F_1100, F_1010, F_0110)``.  After the basis
change H = (1/sqrt 2)[[I, J], [J, -I]] on the weight-2 strings, two families
of beta vectors respect the symmetry:

* class 2: beta = (a, b, c, 0, 0, 0)
* class 1: beta = (kappa (a + b), a, b, 0, 0, c) and its two site-permuted
  images

Two Gram kernels are supported.  ``"definition"`` uses
``1 / binom(M + d - 1 - x.z + w, d - 1)``, the matrices that agree with the
dense oracle.  ``"printed"`` shifts the offset to ``N + d - 1``; it reproduces
the block matrix with rows (16, 15, 15) / 30, the class-2 constants 44, 18, 9
and the symmetric value 61/69.  See README for why both exist.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from itertools import product
from math import sqrt
from typing import Optional

import numpy as np
from scipy.optimize import brentq, minimize

from .bitstrings import BitString, binom, enumerate_weight, index_of

__all__ = [
    "CASE_ORDER",
    "DomainError",
    "KERNELS",
    "PairFidelities",
    "basis_change",
    "basis_change_integer",
    "beta_search",
    "case_gram",
    "class1_fidelities",
    "class1_kappa",
    "class1_relation",
    "class1_witness",
    "class2_constants",
    "class2_fidelities",
    "class2_relation",
    "class2_solve_F1100",
    "class2_witness",
    "conjugate",
    "gram_order_beta",
    "oracle_pair_fidelities",
    "region_grid",
    "region_membership",
    "region_report",
    "symmetric_optimum",
]

M, N, D = 2, 4, 2
CASE_ORDER = ("0011", "0101", "1001", "0110", "1010", "1100")
LABELS = ("1100", "1010", "0110")
KERNELS = ("definition", "printed")
DEFAULT_KERNEL = "definition"


class DomainError(ValueError):
    """A square-root argument is negative: the point is outside the class."""


@dataclass(frozen=True)
class PairFidelities:
    F_1100: float
    F_1010: float
    F_0110: float

    def __post_init__(self):
        for v in self.as_tuple():
            if not 0 <= v <= 1:
                raise ValueError(f"fidelity {v} outside [0, 1]")

    def as_tuple(self) -> tuple:
        return (self.F_1100, self.F_1010, self.F_0110)

    @property
    def total(self):
        return self.F_1100 + self.F_1010 + self.F_0110

    def six(self) -> dict[str, float]:
        """All six pair fidelities using F_y = F_ybar."""
        out = {}
        for lab, v in zip(LABELS, self.as_tuple()):
            out[lab] = v
            out["".join("1" if c == "0" else "0" for c in lab)] = v
        return out

    @classmethod
    def of(cls, *vals) -> "PairFidelities":
        if len(vals) == 1:
            vals = tuple(vals[0])
        return cls(*vals)


def _kernel(kernel: str) -> int:
    if kernel not in KERNELS:
        raise ValueError(f"kernel must be one of {KERNELS}")
    return M + D - 1 if kernel == "definition" else N + D - 1


def _bits(s: str) -> tuple[int, ...]:
    return tuple(int(c) for c in s)


@cache
def case_gram(y: str, kernel: str = DEFAULT_KERNEL) -> tuple[tuple[Fraction, ...], ...]:
    """G_y in CASE_ORDER with exact entries."""
    off = _kernel(kernel)
    yb = _bits(y)
    rows = []
    for xs in CASE_ORDER:
        x = _bits(xs)
        row = []
        for zs in CASE_ORDER:
            z = _bits(zs)
            xz = sum(a & b for a, b in zip(x, z))
            w = sum((1 - a) & (1 - b) & c for a, b, c in zip(x, z, yb))
            row.append(Fraction(1, binom(off - xz + w, D - 1)))
        rows.append(tuple(row))
    return tuple(rows)


def basis_change_integer() -> np.ndarray:
    """K with H = K / sqrt(2); K^2 = 2 I."""
    I3, J3 = np.eye(3, dtype=int), np.fliplr(np.eye(3, dtype=int))
    return np.block([[I3, J3], [J3, -I3]])


def basis_change() -> np.ndarray:
    """The involutive orthogonal 6 x 6 basis change."""
    return basis_change_integer() / sqrt(2)


def conjugate(G) -> list[list[Fraction]]:
    """H G H computed exactly as K G K / 2."""
    K = basis_change_integer().tolist()
    n = 6
    KG = [[sum(Fraction(K[i][k]) * G[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    return [[sum(KG[i][k] * K[k][j] for k in range(n)) / 2 for j in range(n)] for i in range(n)]


def _pair_matrix(label: str, kernel: str) -> list[list[Fraction]]:
    """Quadratic form of F_label (equal to that of its complement on the class)."""
    return conjugate(case_gram(label, kernel))


def _plus_block(A) -> list[list[Fraction]]:
    return [[A[i][j] for j in range(3)] for i in range(3)]


# ---------------------------------------------------------------- class 2


@cache
def class2_constants(kernel: str = DEFAULT_KERNEL) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """(p, s, u, v): norm = p S^2 + s sum a^2, F_x = u S^2 + v a_x^2 with S = a + b + c."""
    n0 = _plus_block(conjugate(case_gram("0000", kernel)))
    s = n0[0][0] - n0[0][1]
    p = n0[0][1]
    uv = []
    for k, lab in enumerate(LABELS):
        A = _plus_block(_pair_matrix(lab, kernel))
        off = {A[i][j] for i in range(3) for j in range(3) if i != j}
        diag_other = {A[i][i] for i in range(3) if i != k}
        if len(off) != 1 or diag_other != off:
            raise ValueError("class-2 forms lack the expected structure")
        u = off.pop()
        uv.append((u, A[k][k] - u))
    if len(set(uv)) != 1 or any(n0[i][j] != p for i in range(3) for j in range(3) if i != j):
        raise ValueError("class-2 forms lack the expected structure")
    u, v = uv[0]
    return p, s, u, v


def _class2_squares(F: PairFidelities, kernel: str):
    p, s, u, v = (float(c) for c in class2_constants(kernel))
    T = float(F.total)
    denom = 3 * u - v * p / s
    S2 = (T - v / s) / denom
    a2 = [(float(f) - u * S2) / v for f in F.as_tuple()]
    return S2, a2, denom


def class2_relation(F: PairFidelities, kernel: str = DEFAULT_KERNEL) -> float:
    """Left minus right side of the class-2 optimality relation.

    Written as sqrt(2T - 2v/s) - sum_x sqrt(2 k (F_x - u S^2) / v) with
    k = 3u - v p / s; for the definition kernel this is
    sqrt(2T - 1) - sum_x sqrt(24 F_x - 10 T + 5).
    """
    F = F if isinstance(F, PairFidelities) else PairFidelities.of(F)
    S2, a2, k = _class2_squares(F, kernel)
    lhs_arg = 2 * k * S2
    rhs_args = [2 * k * x for x in a2]
    if lhs_arg < -1e-12 or any(r < -1e-12 for r in rhs_args):
        raise DomainError("point lies outside the class-2 domain")
    return sqrt(max(lhs_arg, 0.0)) - sum(sqrt(max(r, 0.0)) for r in rhs_args)


def class2_printed_residual(F: PairFidelities) -> float:
    """The relation with its printed constants, for reference."""
    F = F if isinstance(F, PairFidelities) else PairFidelities.of(F)
    T = float(F.total)
    lhs = 2 * T - 1
    rhs = [44 * float(f) - 18 * T + 9 for f in F.as_tuple()]
    if lhs < -1e-12 or any(r < -1e-12 for r in rhs):
        raise DomainError("point lies outside the class-2 domain")
    return sqrt(max(lhs, 0.0)) - sqrt(3) * sum(sqrt(max(r, 0.0)) for r in rhs)


def class2_fidelities(a: float, b: float, c: float, kernel: str = DEFAULT_KERNEL) -> PairFidelities:
    """Normalized fidelities of beta = (a, b, c, 0, 0, 0)."""
    p, s, u, v = (float(x) for x in class2_constants(kernel))
    vec = np.array([a, b, c], dtype=float)
    S2 = vec.sum() ** 2
    nrm = p * S2 + s * float(vec @ vec)
    return PairFidelities(*[min(1.0, max(0.0, (u * S2 + v * x * x) / nrm)) for x in vec])


def class2_witness(F: PairFidelities, kernel: str = DEFAULT_KERNEL) -> np.ndarray:
    """beta (in the rotated basis) reproducing F on the class-2 surface."""
    F = F if isinstance(F, PairFidelities) else PairFidelities.of(F)
    _, a2, _ = _class2_squares(F, kernel)
    if any(x < -1e-12 for x in a2):
        raise DomainError("point lies outside the class-2 domain")
    a = [sqrt(max(x, 0.0)) for x in a2]
    return np.array(a + [0.0, 0.0, 0.0])


def class2_solve_F1100(F1010: float, F0110: float, kernel: str = DEFAULT_KERNEL, samples: int = 400) -> Optional[float]:
    """Largest F_1100 putting (F_1100, F1010, F0110) on the class-2 surface."""
    roots = []

    def h(x):
        try:
            return class2_relation(PairFidelities(x, F1010, F0110), kernel)
        except DomainError:
            return np.nan

    xs = np.linspace(0, 1, samples + 1)
    vals = np.array([h(x) for x in xs])
    for i in range(samples):
        f0, f1 = vals[i], vals[i + 1]
        if np.isnan(f0) or np.isnan(f1):
            continue
        if f0 == 0:
            roots.append(xs[i])
        elif f0 * f1 < 0:
            roots.append(brentq(h, xs[i], xs[i + 1], xtol=1e-14))
    if not np.isnan(vals[-1]) and vals[-1] == 0:
        roots.append(1.0)
    return max(roots) if roots else None


# ---------------------------------------------------------------- class 1


@cache
def class1_kappa(kernel: str = DEFAULT_KERNEL) -> Fraction:
    """Coefficient tying beta_1 to a + b so the (0011, 1100) condition holds."""
    diff = conjugate(tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(case_gram("0011", kernel), case_gram("1100", kernel))))
    w0, w1, w2 = diff[0][5], diff[1][5], diff[2][5]
    if w1 != w2 or w0 == 0:
        raise ValueError("class-1 condition has no solution of the printed shape")
    return -w1 / w0


def _class1_T(kernel: str, rep: int = 0) -> np.ndarray:
    """6 x 3 map (a, b, c) -> rotated beta for representative ``rep``."""
    k = float(class1_kappa(kernel))
    T = np.zeros((6, 3))
    others = [i for i in range(3) if i != rep]
    T[rep, 0] = T[rep, 1] = k
    T[others[0], 0] = 1.0
    T[others[1], 1] = 1.0
    T[5 - rep, 2] = 1.0
    return T


def _float_matrix(A) -> np.ndarray:
    return np.array([[float(v) for v in row] for row in A])


@cache
def _rotated_forms(kernel: str) -> dict[str, np.ndarray]:
    out = {"norm": _float_matrix(conjugate(case_gram("0000", kernel)))}
    for lab in LABELS:
        out[lab] = _float_matrix(_pair_matrix(lab, kernel))
    return out


def _fidelities_rotated(bt: np.ndarray, kernel: str) -> PairFidelities:
    forms = _rotated_forms(kernel)
    nrm = float(bt @ forms["norm"] @ bt)
    return PairFidelities(*[min(1.0, max(0.0, float(bt @ forms[l] @ bt) / nrm)) for l in LABELS])


def class1_fidelities(a: float, b: float, c: float, kernel: str = DEFAULT_KERNEL, representative: int = 0) -> PairFidelities:
    """Normalized fidelities of a class-1 beta."""
    return _fidelities_rotated(_class1_T(kernel, representative) @ np.array([a, b, c], float), kernel)


def class1_relation(F: PairFidelities, kernel: str = DEFAULT_KERNEL) -> tuple[float, tuple[bool, bool, bool]]:
    """Residual of the class-1 relation and its three positivity flags."""
    F = F if isinstance(F, PairFidelities) else PairFidelities.of(F)
    f1, f2, f3 = (float(v) for v in F.as_tuple())
    s = 2 * f2 + 2 * f3
    if kernel == "printed":
        res = (s + 2 - 7 * f1) * (s - 1 - f1) - 4.5 * (f2 - f3) ** 2
        flags = (s - 1 - f1 >= -1e-12, s + 2 - 7 * f1 >= -1e-12, s - 1 - 5 * f1 / 3 <= 1e-12)
    elif kernel == "definition":
        res = (s - 1) * (1 - 2 * f1) - 3 * (f2 - f3) ** 2
        flags = (s - 1 >= -1e-12, 1 - 2 * f1 >= -1e-12, s - 1 - 2 * f1 <= 1e-12)
    else:
        raise ValueError(f"kernel must be one of {KERNELS}")
    return float(res), tuple(bool(x) for x in flags)


@cache
def _class1_linear(kernel: str):
    """Coefficients of norm, F_1100, F_1010 + F_0110 in (P, Q, C) and of F_1010 - F_0110 in D.

    P = (a + b)^2, Q = (a - b)^2, C = c^2, D = a^2 - b^2.
    """
    T = _class1_T(kernel, 0)
    forms = _rotated_forms(kernel)

    def coeffs(A):
        B = T.T @ A @ T
        al, be, ga, cc = B[0, 0], B[1, 1], 2 * B[0, 1], B[2, 2]
        if abs(B[0, 2]) > 1e-12 or abs(B[1, 2]) > 1e-12:
            raise ValueError("unexpected coupling to c")
        return np.array([(al + be + ga) / 4, (al + be - ga) / 4, cc]), (al - be) / 2

    rows, dcoef = [], []
    for A in (forms["norm"], forms["1100"], forms["1010"] + forms["0110"], forms["1010"] - forms["0110"]):
        r, dd = coeffs(A)
        rows.append(r)
        dcoef.append(dd)
    return np.array(rows[:3]), rows[3], dcoef[3]


def class1_witness(F: PairFidelities, kernel: str = DEFAULT_KERNEL, representative: int = 0) -> np.ndarray:
    """Rotated beta of the class-1 family reproducing F (for representative 0 the singled-out pair is 1100)."""
    F = F if isinstance(F, PairFidelities) else PairFidelities.of(F)
    vals = list(F.as_tuple())
    perm = _rep_perm(representative)
    f = [float(vals[perm[i]]) for i in range(3)]
    A, diff_pqc, dco = _class1_linear(kernel)
    P, Q, C = np.linalg.solve(A, np.array([1.0, f[0], f[1] + f[2]]))
    if min(P, Q, C) < -1e-10:
        raise DomainError("point lies outside the class-1 domain")
    P, Q, C = max(P, 0.0), max(Q, 0.0), max(C, 0.0)
    Dv = (f[1] - f[2] - diff_pqc @ np.array([P, Q, C])) / dco
    s, c = sqrt(P), sqrt(C)
    dm = Dv / s if s > 1e-14 else sqrt(Q)
    a, b = (s + dm) / 2, (s - dm) / 2
    return _class1_T(kernel, representative) @ np.array([a, b, c])


def _rep_perm(rep: int) -> tuple[int, int, int]:
    """Position of (singled-out, first, second) labels for representative ``rep``."""
    others = [i for i in range(3) if i != rep]
    return (rep, others[0], others[1])


# ---------------------------------------------------------------- witnesses and the oracle


def gram_order_beta(beta_rotated: np.ndarray) -> dict[BitString, float]:
    """Undo the basis change and key the coefficients by weight-2 strings."""
    beta_case = basis_change() @ np.asarray(beta_rotated, float)
    return {BitString.parse(s): float(v) for s, v in zip(CASE_ORDER, beta_case)}


def oracle_pair_fidelities(beta_rotated: np.ndarray) -> dict[str, float]:
    """All six pair fidelities of the normalized state, computed densely."""
    from . import hilbert

    beta = gram_order_beta(beta_rotated)
    chi = hilbert.build_chi(M, N, D, beta)
    nrm = chi.norm**2
    return {s: hilbert.fidelity_direct(chi, M, N, D, s) / nrm for s in (str(y) for y in enumerate_weight(N, 2))}


def symmetric_optimum(kernel: str = DEFAULT_KERNEL) -> Fraction:
    """Common fidelity at the symmetric point of the class-2 surface."""
    p, s, u, v = class2_constants(kernel)
    # beta = (1, 1, 1): S^2 = 9, sum a^2 = 3
    return (9 * u + v) / (9 * p + 3 * s)


# ---------------------------------------------------------------- region


def _on_surface_witness(F: PairFidelities, kernel: str):
    """Witness if F lies on either surface, else None."""
    try:
        if abs(class2_relation(F, kernel)) < 1e-9:
            bt = class2_witness(F, kernel)
            return 2, bt
    except DomainError:
        pass
    for rep in range(3):
        vals = F.as_tuple()
        perm = _rep_perm(rep)
        G = PairFidelities(*[vals[perm[i]] for i in range(3)])
        res, flags = class1_relation(G, kernel)
        if abs(res) < 1e-9 and all(flags):
            try:
                return 1, class1_witness(F, kernel, rep)
            except DomainError:
                continue
    return None


def _dominates(bt: np.ndarray, F: PairFidelities, kernel: str, tol: float) -> bool:
    got = _fidelities_rotated(bt, kernel).as_tuple()
    return all(g >= f - tol for g, f in zip(got, F.as_tuple()))


def _ray_hits(F: PairFidelities, direction: np.ndarray, kernel: str, grid_tol: float, samples: int = 200):
    base = np.array(F.as_tuple(), float)
    pos = direction > 0
    if not pos.any():
        return None
    smax = float(np.min((1 - base[pos]) / direction[pos]))
    if smax <= 0:
        return None

    def point(s):
        return PairFidelities(*np.clip(base + s * direction, 0, 1))

    def g2(s):
        try:
            return class2_relation(point(s), kernel)
        except DomainError:
            return np.nan

    def g1(s, rep):
        vals = point(s).as_tuple()
        perm = _rep_perm(rep)
        res, flags = class1_relation(PairFidelities(*[vals[perm[i]] for i in range(3)]), kernel)
        return res if all(flags) else np.nan

    funcs = [(2, g2, None)] + [(1, (lambda s, r=r: g1(s, r)), r) for r in range(3)]
    ss = np.linspace(0, smax, samples + 1)
    for cls, fn, rep in funcs:
        vals = np.array([fn(s) for s in ss])
        for i in range(samples):
            f0, f1 = vals[i], vals[i + 1]
            if np.isnan(f0) or np.isnan(f1) or f0 * f1 > 0:
                continue
            root = ss[i] if f0 == 0 else brentq(fn, ss[i], ss[i + 1], xtol=grid_tol)
            P = point(root)
            try:
                bt = class2_witness(P, kernel) if cls == 2 else class1_witness(P, kernel, rep)
            except DomainError:
                continue
            if _dominates(bt, F, kernel, grid_tol):
                return cls, bt
    return None


def _param_search(F: PairFidelities, kernel: str, tol: float):
    """Best worst-case margin over both parametrized families."""
    target = np.array(F.as_tuple(), float)
    best = (-np.inf, None, None)

    def margin(bt):
        return min(np.array(_fidelities_rotated(bt, kernel).as_tuple()) - target)

    maps = [(2, None)] + [(1, r) for r in range(3)]
    angles = np.linspace(0, np.pi, 25)
    for cls, rep in maps:
        T = np.vstack([np.eye(3), np.zeros((3, 3))]) if cls == 2 else _class1_T(kernel, rep)
        for th, ph in product(angles, np.linspace(0, 2 * np.pi, 49)):
            v = np.array([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)])
            m = margin(T @ v)
            if m > best[0]:
                best = (m, cls, T @ v)
        if best[0] >= -tol:
            break
    return best


def region_report(F: PairFidelities, grid_tol: float = 1e-6, kernel: str = DEFAULT_KERNEL) -> dict:
    """Membership with the class and rotated-basis witness that certifies it."""
    F = F if isinstance(F, PairFidelities) else PairFidelities.of(F)
    hit = _on_surface_witness(F, kernel)
    if hit is None:
        base = np.array(F.as_tuple(), float)
        dirs = [1 - base] + [e for e in np.eye(3)] + [np.array(x, float) for x in ((0, 1, 1), (1, 0, 1), (1, 1, 0))]
        for u in dirs:
            hit = _ray_hits(F, u, kernel, grid_tol)
            if hit is not None:
                break
    if hit is None:
        m, cls, bt = _param_search(F, kernel, grid_tol)
        if cls is not None and m >= -grid_tol:
            hit = (cls, bt)
    if hit is None:
        return {"member": False, "class": None, "witness": None}
    cls, bt = hit
    return {"member": True, "class": cls, "witness": bt, "achieved": _fidelities_rotated(bt, kernel).as_tuple()}


def region_membership(F: PairFidelities, grid_tol: float = 1e-6, kernel: str = DEFAULT_KERNEL) -> bool:
    """Whether F is met or exceeded by a point on one of the optimal surfaces."""
    return bool(region_report(F, grid_tol, kernel)["member"])


def _surface_samples(kernel: str, resolution: int) -> tuple[np.ndarray, np.ndarray]:
    """Rotated beta samples of both families with their class labels."""
    t, p = np.meshgrid(np.linspace(0, np.pi / 2, resolution), np.linspace(0, np.pi / 2, resolution))
    v = np.stack([np.sin(t) * np.cos(p), np.sin(t) * np.sin(p), np.cos(t)], axis=-1).reshape(-1, 3)
    betas = [np.hstack([v, np.zeros_like(v)])]
    labels = [np.full(len(v), 2)]
    t, p = np.meshgrid(np.linspace(0, np.pi / 2, resolution), np.linspace(0, 2 * np.pi, 2 * resolution))
    v = np.stack([np.sin(t) * np.cos(p), np.sin(t) * np.sin(p), np.cos(t)], axis=-1).reshape(-1, 3)
    for rep in range(3):
        betas.append(v @ _class1_T(kernel, rep).T)
        labels.append(np.full(len(v), 1))
    return np.vstack(betas), np.concatenate(labels)


def region_grid(grid: int, kernel: str = DEFAULT_KERNEL, resolution: int = 240):
    """Membership and class on a grid^3 lattice of [0, 1]^3.

    Surface samples are binned on the (F_1010, F_0110) lattice and a
    two-dimensional suffix maximum gives, for every lattice pair, the largest
    F_1100 reachable while dominating both coordinates.
    Yields ``(F_1100, F_1010, F_0110, member, class)`` rows in lattice order.
    """
    if grid < 2:
        raise ValueError("grid must be at least 2")
    forms = _rotated_forms(kernel)
    betas, labels = _surface_samples(kernel, resolution)
    nrm = np.einsum("ki,ij,kj->k", betas, forms["norm"], betas)
    f = [np.einsum("ki,ij,kj->k", betas, forms[l], betas) / nrm for l in LABELS]
    i = np.floor(np.clip(f[1], 0, 1) * (grid - 1) + 1e-9).astype(int)
    j = np.floor(np.clip(f[2], 0, 1) * (grid - 1) + 1e-9).astype(int)
    env = {}
    for cls in (1, 2):
        E = np.full((grid, grid), -np.inf)
        sel = labels == cls
        np.maximum.at(E, (i[sel], j[sel]), f[0][sel])
        E = np.maximum.accumulate(E[::-1, :], axis=0)[::-1, :]
        E = np.maximum.accumulate(E[:, ::-1], axis=1)[:, ::-1]
        env[cls] = E
    xs = np.linspace(0, 1, grid)
    for a, x1 in enumerate(xs):
        for b, x2 in enumerate(xs):
            for c, x3 in enumerate(xs):
                cls = 2 if x1 <= env[2][b, c] + 1e-12 else (1 if x1 <= env[1][b, c] + 1e-12 else None)
                yield (float(x1), float(x2), float(x3), cls is not None, cls)


def beta_search(F: PairFidelities, kernel: str = DEFAULT_KERNEL, starts: int = 16, seed: int = 0) -> dict:
    """Unrestricted multi-start search over real beta for the worst symmetric-pair margin.

    Reports evidence only; a positive margin exhibits a witness, a negative one
    proves nothing.
    """
    F = F if isinstance(F, PairFidelities) else PairFidelities.of(F)
    G0 = _float_matrix(case_gram("0000", kernel))
    Gs = {s: _float_matrix(case_gram(s, kernel)) for s in CASE_ORDER}
    targets = F.six()
    rng = np.random.default_rng(seed)
    best = {"margin": -np.inf, "beta": None}
    for _ in range(starts):
        z0 = np.append(rng.normal(size=6), 0.0)
        cons = [{"type": "eq", "fun": lambda z: z[:6] @ G0 @ z[:6] - 1}] + [
            {"type": "ineq", "fun": (lambda z, s=s: z[:6] @ Gs[s] @ z[:6] - targets[s] - z[6])} for s in CASE_ORDER
        ]
        res = minimize(lambda z: -z[6], z0, constraints=cons, method="SLSQP", options={"maxiter": 400})
        b = res.x[:6]
        nrm = float(b @ G0 @ b)
        if nrm <= 0:
            continue
        b = b / sqrt(nrm)
        m = min(float(b @ Gs[s] @ b) - targets[s] for s in CASE_ORDER)
        if m > best["margin"]:
            best = {"margin": m, "beta": b}
    return best
