"""Brute-force dense oracle on (C^d)^{⊗n}.

Everything here is built explicitly: symmetric projectors by averaging
permutation matrices, Choi-type operators R by partial transposition, and the
Bell-type states psi_x.  It is slow by design and meant for cross-checking
the closed forms in :mod:`clonetrade.gram` and :mod:`clonetrade.tradeoff`.

Site layout for cloning operators: the M input sites come first, then the N
output sites in physical order.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from itertools import combinations_with_replacement, permutations
from math import factorial, sqrt
from typing import Mapping, Optional, Sequence, Union

import numpy as np
import scipy.sparse.csgraph as csgraph

from .bitstrings import BitLike, BitString, as_bits, binom, dot, enumerate_weight

__all__ = [
    "BudgetError",
    "DenseOperator",
    "DenseState",
    "SymBasis",
    "max_dim",
    "sym_projector",
    "sym_basis",
    "spin_operators",
    "total_spin",
    "embed",
    "partial_transpose",
    "build_R_x",
    "build_R",
    "uniform_weights",
    "max_eig",
    "bell_state",
    "ghz_state",
    "dicke_state",
    "build_psi_x",
    "build_chi",
    "fidelity_direct",
    "eta_norm_check",
    "commutator_check",
    "lieb_mattis_check",
    "phi_trace_check",
    "twirl_residual",
    "transpose_trick_residual",
    "is_symmetric_state",
    "reduced_state",
]

MAX_PERMUTATION_SITES = 8
DEFAULT_MAX_DIM = 4096


class BudgetError(ValueError):
    """The requested Hilbert space exceeds the configured budget."""


def max_dim() -> int:
    """Hilbert-dimension budget, overridable through ``CLONETRADE_MAX_DIM``."""
    raw = os.environ.get("CLONETRADE_MAX_DIM")
    return int(raw) if raw else DEFAULT_MAX_DIM


def _budget(n: int, d: int):
    if d**n > max_dim():
        raise BudgetError(f"dimension {d}^{n} = {d**n} exceeds budget {max_dim()}")


@dataclass(frozen=True)
class DenseOperator:
    dims: tuple[int, ...]
    data: np.ndarray

    def __post_init__(self):
        D = int(np.prod(self.dims)) if self.dims else 1
        if self.data.shape != (D, D):
            raise ValueError(f"operator shape {self.data.shape} does not match dims {self.dims}")

    @property
    def n(self) -> int:
        return len(self.dims)

    def __array__(self, dtype=None, copy=None):
        return self.data if dtype is None else self.data.astype(dtype)


@dataclass(frozen=True)
class DenseState:
    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        D = int(np.prod(self.dims)) if self.dims else 1
        if self.amplitudes.shape != (D,):
            raise ValueError(f"state length {self.amplitudes.shape} does not match dims {self.dims}")

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "DenseState":
        return DenseState(self.dims, self.amplitudes / self.norm)

    def inner(self, other: "DenseState") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def __array__(self, dtype=None, copy=None):
        return self.amplitudes if dtype is None else self.amplitudes.astype(dtype)


@dataclass(frozen=True)
class SymBasis:
    N: int
    d: int
    vectors: tuple[DenseState, ...]
    occupations: tuple[tuple[int, ...], ...]

    def matrix(self) -> np.ndarray:
        """Columns are the basis vectors."""
        return np.stack([v.amplitudes for v in self.vectors], axis=1)


@cache
def _perm_indices(n: int, d: int) -> tuple[np.ndarray, ...]:
    idx = np.arange(d**n).reshape((d,) * n)
    return tuple(idx.transpose(p).ravel() for p in permutations(range(n)))


@cache
def _sym_projector(n: int, d: int) -> np.ndarray:
    D = d**n
    P = np.zeros((D, D))
    cols = np.arange(D)
    for perm in _perm_indices(n, d):
        P[perm, cols] += 1.0
    P /= factorial(n)
    P.setflags(write=False)
    return P


def sym_projector(n: int, d: int) -> DenseOperator:
    """Average of all n! site-permutation operators."""
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    if n > MAX_PERMUTATION_SITES:
        raise BudgetError(f"{n} sites exceeds the permutation-averaging cap {MAX_PERMUTATION_SITES}")
    _budget(n, d)
    return DenseOperator((d,) * n, _sym_projector(n, d))


def _occupation_state(occ: Sequence[int], d: int) -> np.ndarray:
    """Normalized symmetrization of the computational string ``occ``."""
    n = len(occ)
    psi = np.zeros(d**n)
    for p in set(permutations(occ)):
        psi[int(np.ravel_multi_index(p, (d,) * n))] = 1.0
    return psi / np.linalg.norm(psi)


@cache
def _sym_basis(n: int, d: int) -> SymBasis:
    occs = tuple(combinations_with_replacement(range(d), n))
    vecs = tuple(DenseState((d,) * n, _occupation_state(o, d)) for o in occs)
    return SymBasis(n, d, vecs, occs)


def sym_basis(n: int, d: int) -> SymBasis:
    """Real orthonormal basis of the symmetric subspace made of J_Z eigenvectors.

    For qubits the order is by excitation number.
    """
    _budget(n, d)
    return _sym_basis(n, d)


def spin_operators(d: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Single-site (S^X, S^Y, S^Z) for local dimension d."""
    SX = np.zeros((d, d))
    SY = np.zeros((d, d), dtype=complex)
    for n in range(1, d):
        c = sqrt(n * (d - n))
        SX[n - 1, n] = SX[n, n - 1] = c
        SY[n, n - 1] = 1j * c
        SY[n - 1, n] = -1j * c
    SZ = np.diag([float(d - 1 - 2 * n) for n in range(d)])
    return SX, SY, SZ


def _site_sum(single: np.ndarray, n: int, d: int) -> np.ndarray:
    D = d**n
    out = np.zeros((D, D), dtype=single.dtype)
    for k in range(n):
        out = out + np.kron(np.kron(np.eye(d**k), single), np.eye(d ** (n - k - 1)))
    return out


def total_spin(n: int, d: int) -> dict[str, DenseOperator]:
    """Collective J_X, J_Y, J_Z and J^2 on n sites."""
    _budget(n, d)
    SX, SY, SZ = spin_operators(d)
    JX, JY, JZ = (_site_sum(s, n, d) for s in (SX, SY, SZ))
    J2 = JX @ JX + JY @ JY + JZ @ JZ
    dims = (d,) * n
    return {k: DenseOperator(dims, v) for k, v in dict(JX=JX, JY=JY, JZ=JZ, J2=J2).items()}


def _normalize_sites(sites, n: int) -> list[int]:
    if isinstance(sites, (BitString, str)):
        b = as_bits(sites)
        if b.length != n:
            raise ValueError(f"site mask {b} does not match {n} sites")
        return list(b.sites)
    out = sorted(set(int(s) for s in sites))
    if any(s < 0 or s >= n for s in out):
        raise ValueError(f"sites {out} out of range for {n} sites")
    return out


def embed(op: np.ndarray, sites: Sequence[int], n: int, d: int) -> np.ndarray:
    """Place an operator acting on ``sites`` (in that order) into n sites."""
    sites = list(sites)
    k = len(sites)
    rest = [s for s in range(n) if s not in sites]
    full = np.kron(op, np.eye(d ** (n - k)))
    order = sites + rest
    inv = np.argsort(order)
    T = full.reshape((d,) * (2 * n))
    return T.transpose(list(inv) + [n + i for i in inv]).reshape(d**n, d**n)


def _ptrans(data: np.ndarray, sites: Sequence[int], n: int, d: int) -> np.ndarray:
    T = data.reshape((d,) * (2 * n))
    axes = list(range(2 * n))
    for s in sites:
        axes[s], axes[n + s] = axes[n + s], axes[s]
    return T.transpose(axes).reshape(d**n, d**n)


def partial_transpose(op: DenseOperator, sites) -> DenseOperator:
    """Transpose the flagged subsystems."""
    n = op.n
    if len(set(op.dims)) != 1:
        raise ValueError("uniform local dimension required")
    return DenseOperator(op.dims, _ptrans(op.data, _normalize_sites(sites, n), n, op.dims[0]))


@cache
def _R_x(M: int, N: int, d: int, xmask: int) -> np.ndarray:
    x = BitString.from_sites(N, [i for i in range(N) if xmask >> (N - 1 - i) & 1])
    w = x.weight
    k = M + w
    scale = binom(M + d - 1, M) / binom(M + w + d - 1, M + w)
    local = _ptrans(scale * _sym_projector(k, d), range(M), k, d)
    sites = list(range(M)) + [M + i for i in x.sites]
    out = embed(local, sites, M + N, d)
    out.setflags(write=False)
    return out


def build_R_x(M: int, N: int, d: int, x: BitLike) -> DenseOperator:
    """Single-subset operator whose expectation is the fidelity of clones on x."""
    x = as_bits(x)
    if x.length != N:
        raise ValueError(f"{x} does not have length {N}")
    if M + x.weight > MAX_PERMUTATION_SITES:
        raise BudgetError("too many sites for permutation averaging")
    _budget(M + N, d)
    return DenseOperator((d,) * (M + N), _R_x(M, N, d, x.mask))


def uniform_weights(N: int, L: int) -> dict[BitString, Fraction]:
    xs = enumerate_weight(N, L)
    return {x: Fraction(1, len(xs)) for x in xs}


def build_R(M: int, N: int, d: int, alpha: Mapping[BitLike, float]) -> DenseOperator:
    """Weighted sum of single-subset operators; weights must sum to 1."""
    if not alpha:
        raise ValueError("empty weight map")
    total = sum(float(v) for v in alpha.values())
    if abs(total - 1) > 1e-12 or any(float(v) < 0 for v in alpha.values()):
        raise ValueError("weights must be non-negative and sum to 1")
    _budget(M + N, d)
    acc = np.zeros((d ** (M + N),) * 2)
    for x, a in alpha.items():
        if float(a):
            acc += float(a) * build_R_x(M, N, d, x).data
    return DenseOperator((d,) * (M + N), acc)


def _phase_fix(v: np.ndarray) -> np.ndarray:
    mags = np.abs(v)
    i = int(np.flatnonzero(mags >= mags.max() - 1e-12)[0])
    v = v * (abs(v[i]) / v[i])
    return v.real if np.allclose(v.imag, 0, atol=1e-14) else v


def max_eig(op) -> tuple[float, DenseState]:
    """Dominant eigenpair of a Hermitian operator, phase-fixed."""
    A = op.data if isinstance(op, DenseOperator) else np.asarray(op)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("square matrix required")
    if not np.allclose(A, A.conj().T, atol=1e-12 * max(1.0, np.abs(A).max())):
        raise ValueError("operator is not Hermitian")
    w, V = np.linalg.eigh(A)
    dims = op.dims if isinstance(op, DenseOperator) else (A.shape[0],)
    return float(w[-1]), DenseState(dims, _phase_fix(V[:, -1]))


def bell_state(M: int, d: int) -> np.ndarray:
    """Normalized sum of phi_i (x) phi_i over the symmetric basis of M sites."""
    basis = sym_basis(M, d)
    B = sum(np.kron(v.amplitudes, v.amplitudes) for v in basis.vectors)
    return B / sqrt(binom(M + d - 1, M))


def ghz_state(n: int, d: int) -> DenseState:
    """(1/sqrt d) sum_i |i...i>."""
    psi = np.zeros(d**n)
    step = sum(d**k for k in range(n))
    psi[[i * step for i in range(d)]] = 1 / sqrt(d)
    return DenseState((d,) * n, psi)


def dicke_state(n: int, d: int, occupation: Sequence[int]) -> DenseState:
    return DenseState((d,) * n, _occupation_state(tuple(sorted(occupation)), d))


def is_symmetric_state(phi: DenseState, tol: float = 1e-10) -> bool:
    n, d = phi.n, phi.dims[0]
    if n == 0:
        return True
    P = _sym_projector(n, d)
    return float(np.linalg.norm(P @ phi.amplitudes - phi.amplitudes)) < tol


def build_psi_x(M: int, N: int, d: int, x: BitLike, phi: Optional[DenseState] = None) -> DenseState:
    """Bell pairing between the inputs and the sites of x, Phi on the rest."""
    x = as_bits(x)
    if x.length != N or x.weight != M:
        raise ValueError(f"x must have length {N} and weight {M}")
    rest = N - M
    if phi is None:
        phi = ghz_state(rest, d) if rest else DenseState((), np.ones(1))
    if phi.n != rest:
        raise ValueError(f"Phi must live on {rest} sites")
    if rest and not is_symmetric_state(phi):
        raise ValueError("Phi is not symmetric")
    _budget(M + N, d)
    n = M + N
    full = np.kron(bell_state(M, d), phi.amplitudes)
    xbar = [i for i in range(N) if not x.bits[i]]
    order = list(range(M)) + [M + i for i in x.sites] + [M + i for i in xbar]
    T = full.reshape((d,) * n).transpose(np.argsort(order))
    return DenseState((d,) * n, T.reshape(-1))


def build_chi(
    M: int, N: int, d: int, beta: Mapping[BitLike, float], phi: Optional[DenseState] = None
) -> DenseState:
    """sum_x beta_x psi_x."""
    acc = None
    for x, b in beta.items():
        v = float(b) * build_psi_x(M, N, d, x, phi).amplitudes
        acc = v if acc is None else acc + v
    return DenseState((d,) * (M + N), acc)


def fidelity_direct(chi: DenseState, M: int, N: int, d: int, y: BitLike) -> float:
    """<chi| R_y |chi> evaluated on the full space."""
    if chi.dims != (d,) * (M + N):
        raise ValueError("state does not live on M + N sites of dimension d")
    R = build_R_x(M, N, d, y).data
    a = chi.amplitudes
    return float(np.real(np.vdot(a, R @ a)))


def eta_norm_check(
    M: int, N: int, d: int, x: BitLike, y: BitLike, phi: Optional[DenseState] = None
) -> float:
    """Norm of the rescaled projection of psi_y onto the symmetric subspace of x | y."""
    x, y = as_bits(x), as_bits(y)
    if y.weight != M:
        raise ValueError("y must have weight M")
    psi = build_psi_x(M, N, d, y, phi)
    u = BitString(tuple(a | b for a, b in zip(x.bits, y.bits)))
    k = u.weight
    if k > MAX_PERMUTATION_SITES:
        raise BudgetError("too many sites for permutation averaging")
    P = embed(_sym_projector(k, d), [M + i for i in u.sites], M + N, d)
    xy = dot(x, y)
    scale = binom(M + d - 1, M) * binom(x.weight - xy + d - 1, d - 1) / binom(x.weight + M - xy + d - 1, d - 1)
    return float(np.linalg.norm(sqrt(scale) * (P @ psi.amplitudes)))


def _flip_unitary(d: int) -> np.ndarray:
    U = np.zeros((d, d))
    for n in range(d):
        U[n, d - 1 - n] = (-1) ** n
    return U


def commutator_check(M: int, w: int, d: int) -> float:
    """Largest norm of [rho, U J_Z U^dag] and [rho, U J^2 U^dag] with U flipping the inputs."""
    n = M + w
    _budget(n, d)
    rho = _ptrans(_sym_projector(n, d) / binom(n + d - 1, n), range(M), n, d)
    U = np.eye(1)
    for k in range(n):
        U = np.kron(U, _flip_unitary(d) if k < M else np.eye(d))
    J = total_spin(n, d)
    worst = 0.0
    for key in ("JZ", "J2"):
        A = U @ J[key].data @ U.conj().T
        worst = max(worst, float(np.linalg.norm(rho @ A - A @ rho, 2)))
    return worst


def _mz_labels(M: int, N: int, d: int) -> np.ndarray:
    """Diagonal of the input-flipped J_Z on M + N sites."""
    sz = np.array([float(d - 1 - 2 * k) for k in range(d)])
    total = np.zeros(1)
    for k in range(M + N):
        local = -sz if k < M else sz
        total = np.add.outer(total, local).ravel()
    return total


def lieb_mattis_check(R: DenseOperator, M: int, tol: float = 1e-10) -> bool:
    """Non-negativity of top eigenvectors inside each M_Z block.

    Each block is split further into connected components of its off-diagonal
    support; within a component the dominant eigenvector is unique, so the
    sign test is well posed.
    """
    d = R.dims[0]
    N = R.n - M
    labels = _mz_labels(M, N, d)
    A = R.data
    for val in np.unique(np.round(labels, 8)):
        block = np.flatnonzero(np.abs(labels - val) < 1e-8)
        sub = A[np.ix_(block, block)]
        graph = (np.abs(sub) > 1e-14).astype(int)
        np.fill_diagonal(graph, 0)
        ncomp, comp = csgraph.connected_components(graph, directed=False)
        for c in range(ncomp):
            idx = np.flatnonzero(comp == c)
            w, V = np.linalg.eigh(sub[np.ix_(idx, idx)])
            v = _phase_fix(V[:, -1])
            if np.iscomplexobj(v) or v.min() < -tol:
                return False
    return True


def reduced_state(phi: DenseState, keep: int) -> np.ndarray:
    """Density matrix of the first ``keep`` sites."""
    d = phi.dims[0]
    A = phi.amplitudes.reshape(d**keep, -1)
    return A @ A.conj().T


def phi_trace_check(phi: DenseState, M: int, d: int, tol: float = 1e-10) -> bool:
    """Whether the M-site marginal of Phi is the normalized symmetric projector."""
    if phi.dims[0] != d:
        raise ValueError("local dimension mismatch")
    if not is_symmetric_state(phi):
        raise ValueError("Phi is not symmetric")
    if phi.n < M:
        raise ValueError("Phi has fewer than M sites")
    rho = reduced_state(phi.normalized(), M)
    target = _sym_projector(M, d) / binom(M + d - 1, M)
    return bool(np.abs(rho - target).max() < tol)


def twirl_residual(d: int) -> float:
    """Entrywise gap between the transposed two-site projector and its isotropic form."""
    P = _sym_projector(2, d) * (2 / (d * (d + 1)))
    lhs = _ptrans(P, [0], 2, d)
    B = bell_state(1, d)
    rhs = np.eye(d * d) / (d * (d + 1)) + np.outer(B, B) / (d + 1)
    return float(np.abs(lhs - rhs).max())


def transpose_trick_residual(A: np.ndarray) -> float:
    """|| (A^T (x) I)|B> - (I (x) A)|B> || for a d x d matrix A."""
    d = A.shape[0]
    B = bell_state(1, d)
    lhs = np.kron(A.T, np.eye(d)) @ B
    rhs = np.kron(np.eye(d), A) @ B
    return float(np.linalg.norm(lhs - rhs))
