"""Achievable fidelity sets for universal M -> N cloning.

Closed forms for the symmetric cloner, the convex program for N-1 -> N, the
exact 1 -> N trade-off surface, the rank-1 reduction for (1, L, N) problems,
kernel consistency conditions and a three-valued feasibility pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import permutations
from math import isqrt, sqrt
from typing import Mapping, Optional, Sequence, Union

import mpmath
import numpy as np
import sympy
from scipy.optimize import brentq, minimize

from .bitstrings import BitLike, BitString, as_bits, binom, enumerate_weight, index_of
from .convex import (
    ConvergenceError,
    InfeasibleError,
    LinearConstraints,
    SolverResult,
    convex_minimize,
)
from .gram import GramMatrix, build_G_ML, build_G_y, row_sum_symmetric

__all__ = [
    "CloneProblem",
    "ConsistencyMatrix",
    "Rank1Class",
    "Rank1Reduction",
    "TradeoffResult",
    "Verdict",
    "beta_from_fidelities",
    "concave_root_sum",
    "convex_minimize",
    "feasibility_1LN",
    "kernel_X",
    "kernel_annihilates",
    "necessary_sum_test",
    "nminus1_objective",
    "nminus1_objective_exact",
    "nminus1_symmetric_boundary",
    "normalization_functional",
    "printed_a_coefficients",
    "rank1_classification",
    "rank1_reduction",
    "residual_quadratics",
    "cons2_rhs",
    "solve_Nminus1",
    "success_probability",
    "sum_test_report",
    "symmetric_fidelity",
    "symmetric_fidelity_sum",
    "tradeoff_1_to_N",
    "tradeoff_relation_residual",
    "wang_formula",
]

Number = Union[Fraction, float, int]


class Verdict(str, Enum):
    FEASIBLE = "Feasible"
    INFEASIBLE = "Infeasible"
    UNDETERMINED = "Undetermined"

    def __str__(self) -> str:
        return self.value


class Rank1Class(str, Enum):
    EXISTS = "Exists"
    EXCLUDED = "Excluded"
    UNKNOWN = "Unknown"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class CloneProblem:
    M: int
    N: int
    d: int
    L: Optional[int] = None
    Lambda: Optional[tuple[BitString, ...]] = None

    def __post_init__(self):
        if not 1 <= self.M < self.N:
            raise ValueError(f"need 1 <= M < N, got M={self.M}, N={self.N}")
        if self.d < 2:
            raise ValueError("d must be at least 2")
        if self.Lambda is not None:
            lam = tuple(as_bits(y) for y in self.Lambda)
            if any(y.length != self.N for y in lam):
                raise ValueError("every member of Lambda must have length N")
            object.__setattr__(self, "Lambda", lam)
        if self.L is not None and not 1 <= self.L <= self.N:
            raise ValueError(f"L={self.L} outside [1, N]")

    @property
    def strings(self) -> tuple[BitString, ...]:
        if self.Lambda is not None:
            return self.Lambda
        if self.L is None:
            raise ValueError("problem has neither L nor Lambda")
        return tuple(enumerate_weight(self.N, self.L))


@dataclass
class TradeoffResult:
    verdict: Verdict
    witness_beta: Optional[dict] = None
    achieved: Optional[dict] = None
    residuals: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        def key(k):
            return str(k)

        return {
            "verdict": str(self.verdict),
            "witness": None if self.witness_beta is None else {key(k): float(v) for k, v in self.witness_beta.items()},
            "achieved": None if self.achieved is None else {key(k): float(v) for k, v in self.achieved.items()},
            "residuals": {k: _plain(v) for k, v in self.residuals.items()},
        }


def _plain(v):
    if isinstance(v, bool):
        return v
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, Fraction, np.floating)):
        return float(v)
    return v


def _targets(targets: Mapping[BitLike, Number]) -> dict[BitString, Number]:
    out = {}
    for k, v in targets.items():
        if isinstance(v, str):
            v = Fraction(v)
        if not 0 <= v <= 1:
            raise ValueError(f"target {k}={v} outside [0, 1]")
        out[as_bits(k)] = v
    return out


# ---------------------------------------------------------------- symmetric


def symmetric_fidelity(M: int, L: int, N: int, d: int) -> Fraction:
    """Fidelity of the optimal symmetric cloner on L-site subsets."""
    if not (1 <= M < N and 1 <= L <= N):
        raise ValueError("need 1 <= M < N and 1 <= L <= N")
    pre = Fraction(binom(M + d - 1, M), binom(N + d - 1, M) * binom(N, L))
    return pre * row_sum_symmetric(M, L, N, d)


def symmetric_fidelity_sum(M: int, L: int, N: int, d: int) -> Fraction:
    """Single double-sum form of the symmetric fidelity."""
    total = 0
    for i in range(M + 1):
        for q in range(N + 1):
            total += binom(M, i) * binom(q - M, i) * binom(N - M + d - 1, N - q) * binom(M + i, q - L)
    return Fraction(total, binom(N, L) * binom(N + d - 1, N - M))


def wang_formula(M: int, L: int, N: int, d: int) -> Fraction:
    """Alternative closed form from the literature, kept for comparison."""
    total = sum(binom(q, M) * binom(q, L) * binom(N - q + d - 2, d - 2) for q in range(N + 1))
    return Fraction(total, binom(N, L) * binom(N + d - 1, N - M))


def sum_test_report(problem: CloneProblem, targets: Mapping[BitLike, Number]) -> dict:
    """Total target fidelity against the symmetric bound, with both candidate constants."""
    t = _targets(targets)
    L = problem.L if problem.L is not None else _common_weight(t)
    fs = symmetric_fidelity(problem.M, L, problem.N, problem.d)
    return {
        "total": sum(t.values()),
        "F_sym": fs,
        "bound_count_L": binom(problem.N, L) * fs,
        "bound_count_M": binom(problem.N, problem.M) * fs,
        "count": len(t),
    }


def _common_weight(t: Mapping[BitString, Number]) -> int:
    ws = {y.weight for y in t}
    if len(ws) != 1:
        raise ValueError("targets must all have the same weight")
    return ws.pop()


def necessary_sum_test(problem: CloneProblem, targets: Mapping[BitLike, Number]) -> bool:
    """False when the summed targets beat binom(N, L) times the symmetric value."""
    rep = sum_test_report(problem, targets)
    total, bound = rep["total"], rep["bound_count_L"]
    if isinstance(total, Fraction):
        return total <= bound
    return float(total) <= float(bound) + 1e-12


# ---------------------------------------------------------------- N-1 -> N


def _exact_sqrt(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    a, b = isqrt(q.numerator), isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def nminus1_objective(F, d: int) -> float:
    F = np.asarray(F, dtype=float)
    s = np.sqrt(np.clip(1 - F, 0, None)).sum()
    return float(F.sum() - s * s / (d - 1))


def nminus1_objective_exact(F: Sequence[Fraction], d: int) -> Optional[Fraction]:
    """Exact objective, available when every product (1-F_n)(1-F_m) is a rational square."""
    F = [Fraction(v) for v in F]
    cross = Fraction(0)
    for a in F:
        for b in F:
            r = _exact_sqrt((1 - a) * (1 - b))
            if r is None:
                return None
            cross += r
    return sum(F) - cross / (d - 1)


def nminus1_symmetric_boundary(N: int, d: int) -> Fraction:
    """Equal single-copy fidelity on the N-1 -> N optimal surface."""
    # N f - N^2 (1 - f) / (d - 1) = N - 1, solved for f.
    return Fraction(N * N + (N - 1) * (d - 1), N * (N + d - 1))


def _nminus1_grad(F: np.ndarray, d: int, cap: float = 1e-14) -> np.ndarray:
    r = np.sqrt(np.clip(1 - F, cap, None))
    return 1 + r.sum() / ((d - 1) * r)


def solve_Nminus1(
    N: int,
    d: int,
    Lambda: Sequence[BitLike],
    targets: Mapping[BitLike, Number],
    tol: float = 1e-9,
) -> TradeoffResult:
    """Decide (N-1) -> N cloning for arbitrary fidelity subsets."""
    lam = [as_bits(y) for y in Lambda]
    if not lam:
        raise ValueError("empty Lambda")
    t = _targets(targets)
    if any(y.length != N for y in lam):
        raise ValueError("strings must have length N")
    rows, rhs = [], []
    for y in lam:
        rows.append([-float(b) for b in y.bits])
        rhs.append(-(float(t.get(y, 0)) + y.weight - 1))
    cons = LinearConstraints(N, A_ub=np.array(rows), b_ub=np.array(rhs), lo=np.zeros(N), hi=np.ones(N))
    # Constraints that involve one site are bounds; fold them in so boxes stay boxes.
    singles = [i for i, y in enumerate(lam) if y.weight == 1]
    if len(singles) == len(lam):
        lo = np.zeros(N)
        for i in singles:
            lo[lam[i].sites[0]] = max(lo[lam[i].sites[0]], -rhs[i])
        cons = LinearConstraints(N, lo=lo, hi=np.ones(N))
    try:
        res = convex_minimize(lambda F: nminus1_objective(F, d), lambda F: _nminus1_grad(F, d), cons, x0=cons.lo.copy() if cons.box_only else None)
    except InfeasibleError:
        return TradeoffResult(Verdict.INFEASIBLE, residuals={"reason": "linear constraints empty"})
    opt = res.value
    residuals = {"optimum": opt, "threshold": N - 1, "iterations": res.iterations}
    if opt > N - 1 + tol:
        return TradeoffResult(Verdict.INFEASIBLE, residuals=residuals)
    F = _ray_to_level(lambda v: nminus1_objective(v, d), res.x, N - 1)
    betas = np.sqrt(np.clip(d * (1 - F) / (d - 1), 0, None))
    witness = {}
    for x in enumerate_weight(N, N - 1):
        missing = x.bits.index(0)
        witness[x] = float(betas[missing])
    achieved = {y: float(sum(F[n] for n in y.sites) - y.weight + 1) for y in lam}
    residuals["single_copy"] = [float(v) for v in F]
    residuals["normalization"] = float(N - nminus1_objective(F, d))
    return TradeoffResult(Verdict.FEASIBLE, witness, achieved, residuals)


def _ray_to_level(fun, x: np.ndarray, level: float) -> np.ndarray:
    """Move x toward the all-ones corner until an increasing function hits ``level``."""
    ones = np.ones_like(x)
    h = lambda s: fun(x + s * (ones - x)) - level
    if h(0.0) >= 0:
        return x
    if h(1.0) <= 0:
        return ones
    s = brentq(h, 0.0, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return x + s * (ones - x)


# ---------------------------------------------------------------- 1 -> N


def tradeoff_relation_residual(F: Sequence[Number], d: int) -> float:
    """Defect of the 1 -> N optimal-surface relation at single-copy fidelities F."""
    F = np.asarray([float(v) for v in F])
    N = len(F)
    P = N + d - 1
    s = np.sqrt(np.clip(F * (d + 1) - 1, 0, None)).sum()
    return float((d + 1) * F.sum() / P - 1 - (s / P) ** 2)


def tradeoff_1_to_N(N: int, d: int, known: Sequence[Number]) -> float:
    """Largest last-clone fidelity compatible with the other N-1 on the optimal surface."""
    if len(known) != N - 1:
        raise ValueError(f"need {N - 1} known fidelities")
    with mpmath.workdps(60):
        kv = [_mp(v) for v in known]
        lo = mpmath.mpf(1) / (d + 1)
        if any(v < lo - mpmath.mpf("1e-12") or v > 1 + mpmath.mpf("1e-12") for v in kv):
            raise ValueError("known fidelities must lie in [1/(d+1), 1]")
        a = sum(mpmath.sqrt(max(v * (d + 1) - 1, 0)) for v in kv)
        P = N + d - 1
        K = (d + 1) * sum(kv)
        A, B, C = P - 1, -2 * a, P * (K + 1) - P * P - a * a
        disc = B * B - 4 * A * C
        if disc < -mpmath.mpf("1e-24"):
            raise ValueError("targets outside achievable region")
        root = (-B + mpmath.sqrt(max(disc, 0))) / (2 * A)
        if root < -mpmath.mpf("1e-12") or root > mpmath.sqrt(d) + mpmath.mpf("1e-9"):
            raise ValueError("targets outside achievable region")
        root = min(max(root, 0), mpmath.sqrt(d))
        return float((root * root + 1) / (d + 1))


def _mp(v):
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    return mpmath.mpf(v)


# ---------------------------------------------------------------- rank-1 reduction


def _site_order(N: int) -> list[int]:
    """Gram index of each single-site string, by site."""
    return [index_of(BitString.from_sites(N, [n])) for n in range(N)]


def _site_matrix(G: GramMatrix) -> list[list[Fraction]]:
    perm = _site_order(G.N)
    return [[G.entries[perm[i]][perm[j]] for j in range(G.N)] for i in range(G.N)]


def _site_vector_to_gram(beta_sites: Sequence[float], N: int) -> np.ndarray:
    out = np.zeros(N)
    for n, i in enumerate(_site_order(N)):
        out[i] = beta_sites[n]
    return out


def printed_a_coefficients(N: int, d: int, L: int) -> tuple[Fraction, ...]:
    """a0..a5 from their closed forms."""
    B = binom
    h0, h1, h2 = B(d + L - 2, d - 1), B(d + L - 1, d - 1), B(d + L, d - 1)
    a2 = Fraction(B(N - 1, L - 1), N - 1) * (Fraction(L - 1, h0) + Fraction(N - L, h1))
    a3 = Fraction(B(N - 1, L - 1), B(N - 1, 2)) * (
        Fraction(B(L - 1, 2), h0) + Fraction((L - 1) * (N - L), h1) + Fraction(B(N - L, 2), h2)
    )
    a0 = a2 - a3
    a1 = Fraction(B(N - 1, L - 1), h0) - a0
    a4 = Fraction(B(N, L), B(N, 2)) * (Fraction(B(L, 2), h0) + Fraction(L * (N - L), h1) + Fraction(B(N - L, 2), h2))
    a5 = Fraction(B(N, L), N) * (Fraction(L, h0) + Fraction(N - L, h1)) - a4
    return a0, a1, a2, a3, a4, a5


@dataclass(frozen=True)
class Rank1Reduction:
    N: int
    d: int
    L: int
    g0: float
    g1: float
    g2: float
    gamma1: float
    gamma2: float
    a: tuple[Fraction, ...]
    Gamma: np.ndarray
    singular_ratio: float

    @property
    def D(self) -> float:
        return (self.N - 1) * self.gamma2 + self.gamma1

    @property
    def delta(self) -> float:
        return self.gamma1 - self.gamma2

    @property
    def kappa(self) -> float:
        """Coefficient of (sum_n r_n)^2 in the normalization functional."""
        d, N = self.d, self.N
        c = self.gamma2 / self.D
        return 1 / (d * self.D**2) + (d - 1) * (N * c * c - 2 * c) / (d * self.delta**2)

    @property
    def linear_weight(self) -> float:
        return (self.d - 1) / (self.d * self.delta**2)


def rank1_reduction(N: int, d: int, L: int) -> Rank1Reduction:
    """Combination g0 G_0 + g1 G_site1^{(1,L)} + g2 G_0^{(1,L)} that is a rank-1 projector."""
    if L == N:
        raise ValueError("global fidelity has no rank-1 reduction here (solved case)")
    if not 1 <= L < N or N < 2:
        raise ValueError("need 1 <= L <= N-1")
    e1 = BitString.from_sites(N, [0])
    zero = BitString((0,) * N)
    G0 = _site_matrix(build_G_y(1, N, d, zero))
    G1 = _site_matrix(build_G_ML(1, N, d, L, e1))
    G2 = _site_matrix(build_G_ML(1, N, d, L, zero))
    if N >= 3:
        a3 = G1[1][2]
        a0 = G1[1][1] - a3
    else:
        a3, a0 = G1[1][1], Fraction(0)
    a2 = G1[0][1]
    a1 = G1[0][0] - a0
    a4 = G2[0][1]
    a5 = G2[0][0] - a4
    a = (a0, a1, a2, a3, a4, a5)

    # Combination coefficients on the {e1, u} block (u = sum of the other sites) and on I.
    def block(g):
        t = g[0] / d + g[2] * a4
        return (t + g[1] * a1, t + g[1] * a2, t + g[1] * a3)

    ident_row = [Fraction(d - 1, d), a0, a5]
    k = a1 + a3 - 2 * a2
    det_row = [k / d, a1 * a3 - a2 * a2, a4 * k]
    ns = sympy.Matrix([ident_row, det_row]).nullspace()
    g = None
    for v in ns:
        cand = [Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in v]
        if any(block(cand)):
            g = cand
            break
    if g is None:
        # The three matrices are linearly dependent; work on the identity-free plane.
        for v in sympy.Matrix([ident_row]).nullspace():
            cand = [Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in v]
            A, Bc, C = block(cand)
            if any((A, Bc, C)) and A * C == Bc * Bc:
                g = cand
                break
    if g is None:
        raise ValueError("no rank-1 combination found")
    A, Bc, C = block(g)
    scale = A + (N - 1) * C
    if scale == 0:
        raise ValueError("degenerate reduction")
    g = [v / scale for v in g]
    A, Bc, C = A / scale, Bc / scale, C / scale
    if A >= C:
        gamma1 = sqrt(float(A))
        gamma2 = float(Bc) / gamma1
    else:
        gamma2 = sqrt(float(C))
        gamma1 = float(Bc) / gamma2
    if gamma1 + (N - 1) * gamma2 < 0:
        gamma1, gamma2 = -gamma1, -gamma2
    if abs(gamma1 - gamma2) < 1e-14:
        raise ValueError("gamma1 == gamma2: reduction does not separate sites")
    Gamma = np.array([gamma1] + [gamma2] * (N - 1))
    comb_ = np.array([[float(g[0] * G0[i][j] + g[1] * G1[i][j] + g[2] * G2[i][j]) for j in range(N)] for i in range(N)])
    sv = np.linalg.svd(comb_, compute_uv=False)
    ratio = float(sv[1] / sv[0]) if len(sv) > 1 else 0.0
    if ratio > 1e-9:
        raise ValueError(f"combination is not rank 1 (ratio {ratio:.3g})")
    return Rank1Reduction(N, d, L, float(g[0]), float(g[1]), float(g[2]), gamma1, gamma2, a, Gamma, ratio)


def _site_sums(N: int, L: int, targets: Mapping[BitString, Number]) -> tuple[np.ndarray, float]:
    Fn = np.zeros(N)
    for y, v in targets.items():
        for n in y.sites:
            Fn[n] += float(v)
    return Fn, float(sum(float(v) for v in targets.values()))


def _radicands(red: Rank1Reduction, Fn: np.ndarray, q: float) -> np.ndarray:
    return red.g0 + red.g1 * Fn + red.g2 * q


def _beta_from_radicands(red: Rank1Reduction, rad: np.ndarray) -> np.ndarray:
    if np.any(rad < -1e-12):
        raise InfeasibleError("negative radicand")
    r = np.sqrt(np.clip(rad, 0, None))
    if abs(red.D) < 1e-14:
        raise ValueError("degenerate reduction")
    total = r.sum() / red.D
    return (r - red.gamma2 * total) / red.delta


def beta_from_fidelities(red: Rank1Reduction, targets: Mapping[BitLike, Number]) -> np.ndarray:
    """Per-site coefficients beta_n (site order) solving the linearized relations."""
    t = {as_bits(k): v for k, v in targets.items()}
    Fn, q = _site_sums(red.N, red.L, t)
    return _beta_from_radicands(red, _radicands(red, Fn, q))


def normalization_functional(red: Rank1Reduction, Fn: np.ndarray, q: float) -> float:
    """beta^T G_0 beta of the beta recovered from site sums, written in closed form."""
    rad = np.clip(_radicands(red, Fn, q), 0, None)
    s = np.sqrt(rad).sum()
    return float(red.kappa * s * s + red.linear_weight * rad.sum())


# ---------------------------------------------------------------- kernel of X


@dataclass(frozen=True)
class ConsistencyMatrix:
    M: int
    L: int
    N: int
    X: np.ndarray
    kernel: tuple[tuple[Fraction, ...], ...]
    rank: int
    admissible: bool
    reason: str = ""

    @property
    def rows(self) -> list[BitString]:
        return enumerate_weight(self.N, 2 * self.M)

    @property
    def columns(self) -> list[BitString]:
        return enumerate_weight(self.N, self.L)


def kernel_X(M: int, L: int, N: int) -> ConsistencyMatrix:
    """Exact kernel of the containment matrix between weight-2M and weight-L strings."""
    if M == 1:
        ok, why = 1 < L < N - 1, "requires 1 < L < N-1"
    else:
        ok, why = 2 * M < L < N - 2 * M, "requires 2M < L < N-2M"
    if 2 * M > N or L > N or L < 0:
        return ConsistencyMatrix(M, L, N, np.zeros((0, 0), int), (), 0, False, "sizes out of range")
    rows = enumerate_weight(N, 2 * M)
    cols = enumerate_weight(N, L)
    X = np.array([[int((x.mask & y.mask).bit_count() == 2 * M) for y in cols] for x in rows], dtype=int)
    if not ok:
        return ConsistencyMatrix(M, L, N, X, (), int(np.linalg.matrix_rank(X)), False, why)
    S = sympy.Matrix(X.tolist())
    basis = []
    for v in S.nullspace():
        basis.append(tuple(Fraction(int(sympy.fraction(e)[0]), int(sympy.fraction(e)[1])) for e in v))
    return ConsistencyMatrix(M, L, N, X, tuple(basis), int(S.rank()), True)


def kernel_annihilates(cm: ConsistencyMatrix, d: int) -> bool:
    """Whether every kernel vector kills sum_y v_y G_y^{(M)} exactly."""
    cols = cm.columns
    mats = [build_G_y(cm.M, cm.N, d, y).entries for y in cols]
    n = len(mats[0])
    for v in cm.kernel:
        for i in range(n):
            for j in range(n):
                if sum((v[k] * mats[k][i][j] for k in range(len(cols)) if v[k]), Fraction(0)) != 0:
                    return False
    return True


# ---------------------------------------------------------------- consistency quadratics


def cons2_rhs(beta: Sequence[float], d: int, L: int, sites: tuple[int, int, int, int], printed: bool = False) -> float:
    """Right side of the four-site identity.

    Each pair aggregate sums the binom(N-4, L-2) weight-L strings that
    contain both sites and avoid the other two, so the bare constant is
    scaled by that count; ``printed=True`` drops the count.
    """
    a, b, c, e = sites
    N = len(beta)
    count = 1 if printed else binom(N - 4, L - 2)
    return float(count * 2 * (d - 1) * (beta[a] - beta[e]) * (beta[b] - beta[c]) / ((d + L) * binom(d + L - 1, d)))


def residual_quadratics(
    beta: Sequence[float], d: int, L: int, sites: tuple[int, int, int, int], printed: bool = False
) -> float:
    """Defect of the four-site quadratic identity for site-ordered beta (2 <= L <= N-2)."""
    a, b, c, e = sites
    if len({a, b, c, e}) != 4:
        raise ValueError("sites must be distinct")
    beta = np.asarray(beta, dtype=float)
    N = len(beta)
    if N < 4:
        raise ValueError("need N >= 4")
    if not 2 <= L <= N - 2:
        raise ValueError("the identity needs 2 <= L <= N-2")
    bg = _site_vector_to_gram(beta, N)

    def quad(i, j):
        return build_G_ML(1, N, d, L, BitString.from_sites(N, [i, j])).quad(bg)

    lhs = quad(a, b) + quad(c, e) - quad(a, c) - quad(b, e)
    return float(lhs - cons2_rhs(beta, d, L, sites, printed))


def _pair_aggregate(F: Mapping[BitString, float], i: int, j: int) -> float:
    return sum(float(v) for y, v in F.items() if y.bits[i] and y.bits[j])


# ---------------------------------------------------------------- pipeline


def _all_fidelities(beta_sites: np.ndarray, N: int, d: int, L: int) -> dict[BitString, float]:
    bg = _site_vector_to_gram(beta_sites, N)
    return {y: build_G_y(1, N, d, y).quad(bg) for y in enumerate_weight(N, L)}


def _norm(beta_sites: np.ndarray, N: int, d: int) -> float:
    return build_G_y(1, N, d, BitString((0,) * N)).quad(_site_vector_to_gram(beta_sites, N))


def _refine(N: int, d: int, L: int, t: dict[BitString, float], starts: list[np.ndarray], seed: int = 0):
    """Local search for beta maximizing the worst target margin; returns (margin, beta)."""
    ys = list(t)
    G0 = np.asarray(build_G_y(1, N, d, BitString((0,) * N)))
    perm = _site_order(N)
    P = np.zeros((N, N))
    for n, i in enumerate(perm):
        P[i, n] = 1
    G0s = P.T @ G0 @ P
    Gs = [P.T @ np.asarray(build_G_y(1, N, d, y)) @ P for y in ys]
    tv = np.array([float(t[y]) for y in ys])
    rng = np.random.default_rng(seed)
    starts = list(starts) + [np.abs(rng.normal(size=N)) for _ in range(4)]
    best = (-np.inf, None)
    for s0 in starts:
        s0 = np.asarray(s0, float)
        nrm = float(s0 @ G0s @ s0)
        if nrm <= 0:
            continue
        s0 = s0 / sqrt(nrm)
        z0 = np.append(s0, min(float(s0 @ G @ s0) for G in Gs) - tv.max())
        cons = [
            {"type": "ineq", "fun": lambda z: 1 - z[:N] @ G0s @ z[:N], "jac": lambda z: np.append(-2 * G0s @ z[:N], 0)},
        ] + [
            {
                "type": "ineq",
                "fun": (lambda z, G=G, tv_=tv_: z[:N] @ G @ z[:N] - tv_ - z[N]),
                "jac": (lambda z, G=G: np.append(2 * G @ z[:N], -1)),
            }
            for G, tv_ in zip(Gs, tv)
        ]
        res = minimize(lambda z: -z[N], z0, jac=lambda z: np.append(np.zeros(N), -1), constraints=cons, method="SLSQP", options={"maxiter": 500, "ftol": 1e-14})
        b = res.x[:N]
        nrm = float(b @ G0s @ b)
        if nrm <= 0:
            continue
        b = b / sqrt(nrm)
        margin = min(float(b @ G @ b) - v for G, v in zip(Gs, tv))
        if margin > best[0]:
            best = (margin, b)
    return best


def feasibility_1LN(
    N: int,
    d: int,
    L: int,
    targets: Mapping[BitLike, Number],
    tol: float = 1e-9,
    refine: bool = True,
    confirm_with_oracle: bool = True,
) -> TradeoffResult:
    """Three-valued decision for 1 -> N cloning with L-site fidelity targets."""
    if not 1 <= L <= N - 1:
        raise ValueError("L must satisfy 1 <= L <= N-1; use tradeoff_1_to_N or the symmetric formula for L = N")
    t = _targets(targets)
    strings = enumerate_weight(N, L)
    if set(t) != set(strings):
        missing = set(strings) - set(t)
        if any(y.weight != L or y.length != N for y in t):
            raise ValueError("targets must be keyed by weight-L strings of length N")
        for y in missing:
            t[y] = 0
    problem = CloneProblem(1, N, d, L)
    residuals: dict = {}
    rep = sum_test_report(problem, t)
    residuals["sum_total"] = float(rep["total"])
    residuals["sum_bound_count_L"] = float(rep["bound_count_L"])
    residuals["sum_bound_count_M"] = float(rep["bound_count_M"])
    if not necessary_sum_test(problem, t):
        residuals["stage"] = 1
        residuals["reason"] = "sum test"
        return TradeoffResult(Verdict.INFEASIBLE, residuals=residuals)

    red = rank1_reduction(N, d, L)
    km = kernel_X(1, L, N)
    n = len(strings)
    inc = np.array([[y.bits[s] for y in strings] for s in range(N)], dtype=float)
    lo = np.array([float(t[y]) for y in strings])
    hi = np.ones(n)
    A_eq = np.array([[float(v) for v in vec] for vec in km.kernel]) if km.kernel else None
    b_eq = np.zeros(len(km.kernel)) if km.kernel else None
    # radicands g0 + g1 F_n + g2 q >= 0
    A_ub = -(red.g1 * inc + red.g2 * np.ones((N, n)))
    b_ub = np.full(N, red.g0)
    cons = LinearConstraints(n, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, lo=lo, hi=hi)

    def obj(Ft):
        return normalization_functional(red, inc @ Ft, Ft.sum())

    def grad(Ft, cap=1e-14):
        rad = np.clip(_radicands(red, inc @ Ft, Ft.sum()), cap, None)
        r = np.sqrt(rad)
        drad = red.g1 * inc + red.g2  # N x n
        g = 2 * red.kappa * r.sum() * ((drad / (2 * r)[:, None]).sum(axis=0))
        return g + red.linear_weight * drad.sum(axis=0)

    try:
        sol = convex_minimize(obj, grad, cons, tol=1e-10)
    except InfeasibleError:
        residuals["stage"] = 1
        residuals["reason"] = "constraint polytope empty"
        return TradeoffResult(Verdict.INFEASIBLE, residuals=residuals)
    except ConvergenceError as exc:
        residuals["stage"] = 1
        residuals["reason"] = str(exc)
        return TradeoffResult(Verdict.UNDETERMINED, residuals=residuals)
    residuals["stage1_min"] = sol.value
    residuals["kappa"] = red.kappa
    if sol.value > 1 + tol:
        residuals["stage"] = 1
        return TradeoffResult(Verdict.INFEASIBLE, residuals=residuals)

    Ft = _ray_to_level(obj, sol.x, 1.0) if np.all(cons.A_ub @ np.ones(n) <= cons.b_ub + 1e-12) else sol.x
    beta = _beta_from_radicands(red, _radicands(red, inc @ Ft, Ft.sum()))
    nrm = _norm(beta, N, d)
    if nrm > 0:
        beta = beta / sqrt(nrm)
    achieved = _all_fidelities(beta, N, d, L)
    margin = min(achieved[y] - float(t[y]) for y in strings)
    residuals["stage2_margin"] = margin
    if margin < -tol and refine:
        m2, b2 = _refine(N, d, L, t, [beta, np.abs(beta)])
        if b2 is not None and m2 > margin:
            residuals["refined_margin"] = float(m2)
            if m2 >= -tol:
                beta, margin = b2, m2
                achieved = _all_fidelities(beta, N, d, L)
    gram_beta = _site_vector_to_gram(beta, N)
    witness = {x: float(gram_beta[i]) for i, x in enumerate(enumerate_weight(N, 1))}
    if margin >= -tol:
        residuals["stage"] = 2
        residuals["normalization"] = _norm(beta, N, d)
        if confirm_with_oracle:
            residuals.update(_oracle_confirm(witness, achieved, N, d))
        return TradeoffResult(Verdict.FEASIBLE, witness, achieved, residuals)

    residuals["stage"] = 3
    if 2 <= L <= N - 2:
        worst = 0.0
        for a, b, c, e in permutations(range(N), 4):
            if not (a < e and b < c):
                continue
            lhs = (
                _pair_aggregate(dict(zip(strings, Ft)), a, b)
                + _pair_aggregate(dict(zip(strings, Ft)), c, e)
                - _pair_aggregate(dict(zip(strings, Ft)), a, c)
                - _pair_aggregate(dict(zip(strings, Ft)), b, e)
            )
            rhs = cons2_rhs(beta, d, L, (a, b, c, e))
            worst = max(worst, abs(lhs - rhs))
        residuals["cons2_max"] = worst
    return TradeoffResult(Verdict.UNDETERMINED, witness, achieved, residuals)


def _oracle_confirm(witness, achieved, N: int, d: int) -> dict:
    from . import hilbert

    try:
        chi = hilbert.build_chi(1, N, d, witness)
    except hilbert.BudgetError:
        return {"oracle": "skipped"}
    err = max(abs(hilbert.fidelity_direct(chi, 1, N, d, y) - v) for y, v in achieved.items())
    return {"oracle_max_error": err}


# ---------------------------------------------------------------- misc


def rank1_classification(M: int, L: int, N: int) -> Rank1Class:
    """Whether a rank-1 combination of Gram matrices is known to exist."""
    if M == 1 or N == M + 1:
        return Rank1Class.EXISTS
    if N > M + 1 and (N <= 2 * M or M % 2 == 0):
        return Rank1Class.EXCLUDED
    return Rank1Class.UNKNOWN


def success_probability(beta: Mapping[BitLike, float], M: int, N: int, d: int, tol: float = 1e-8) -> float:
    """Probability that the teleportation-based circuit succeeds.

    For non-negative beta, sum beta^2 <= beta^T G_0 beta = 1, so the value is at
    least N^-M; mixed signs can fall below that.
    """
    xs = enumerate_weight(N, M)
    b = np.array([float(beta.get(x, beta.get(str(x), 0.0))) for x in xs])
    nrm = build_G_y(M, N, d, BitString((0,) * N)).quad(b)
    if abs(nrm - 1) > tol:
        raise ValueError(f"beta is not normalized (beta^T G_0 beta = {nrm})")
    return 1.0 / (N**M * float(b @ b))


def concave_root_sum(x) -> float:
    """(sum_n sqrt(x_n))^2, concave on the non-negative orthant."""
    x = np.asarray(x, dtype=float)
    return float(np.sqrt(x).sum() ** 2)
