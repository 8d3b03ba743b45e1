"""Small convex minimizer over polytopes.

Spectral projected gradient: Barzilai-Borwein steps with a non-monotone
Armijo backtrack, preceded by an LP feasibility phase.  Box-only problems are
projected by clipping; anything else is projected with a tiny QP.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.optimize import linprog, minimize

__all__ = [
    "ConvergenceError",
    "InfeasibleError",
    "LinearConstraints",
    "SolverResult",
    "convex_minimize",
]


class InfeasibleError(ValueError):
    """The constraint set is empty."""


class ConvergenceError(RuntimeError):
    """The iteration cap was reached before the stopping test passed."""


@dataclass
class LinearConstraints:
    """``A_ub x <= b_ub``, ``A_eq x = b_eq`` and elementwise ``lo <= x <= hi``."""

    n: int
    A_ub: Optional[np.ndarray] = None
    b_ub: Optional[np.ndarray] = None
    A_eq: Optional[np.ndarray] = None
    b_eq: Optional[np.ndarray] = None
    lo: Optional[np.ndarray] = None
    hi: Optional[np.ndarray] = None

    def __post_init__(self):
        self.lo = np.full(self.n, -np.inf) if self.lo is None else np.asarray(self.lo, float)
        self.hi = np.full(self.n, np.inf) if self.hi is None else np.asarray(self.hi, float)
        for name in ("A_ub", "A_eq"):
            A = getattr(self, name)
            if A is not None and len(A) == 0:
                setattr(self, name, None)
                setattr(self, "b" + name[1:], None)

    @property
    def box_only(self) -> bool:
        return self.A_ub is None and self.A_eq is None

    def violation(self, x: np.ndarray) -> float:
        v = max(0.0, float(np.max(self.lo - x, initial=0)), float(np.max(x - self.hi, initial=0)))
        if self.A_ub is not None:
            v = max(v, float(np.max(self.A_ub @ x - self.b_ub, initial=0)))
        if self.A_eq is not None:
            v = max(v, float(np.max(np.abs(self.A_eq @ x - self.b_eq), initial=0)))
        return v


@dataclass
class SolverResult:
    value: float
    x: np.ndarray
    iterations: int
    history: list = field(default_factory=list)


def _feasible_point(c: LinearConstraints, x0: Optional[np.ndarray]) -> np.ndarray:
    if x0 is not None and c.violation(np.asarray(x0, float)) < 1e-12:
        return np.asarray(x0, float)
    if c.box_only:
        if np.any(c.lo > c.hi):
            raise InfeasibleError("empty box")
        guess = np.zeros(c.n) if x0 is None else np.asarray(x0, float)
        return np.clip(guess, c.lo, c.hi)
    # Maximize a common slack t <= 1 so the start sits inside the polytope
    # rather than on a vertex where barrier-like gradients blow up.
    n = c.n
    rows, rhs = [], []
    if c.A_ub is not None:
        rows.append(np.hstack([c.A_ub, np.ones((len(c.A_ub), 1))]))
        rhs.append(c.b_ub)
    for i in range(n):
        e = np.zeros(n + 1)
        if np.isfinite(c.lo[i]):
            e[i], e[n] = -1.0, 1.0
            rows.append(e[None, :].copy())
            rhs.append(np.array([-c.lo[i]]))
        if np.isfinite(c.hi[i]):
            e[:] = 0
            e[i], e[n] = 1.0, 1.0
            rows.append(e[None, :].copy())
            rhs.append(np.array([c.hi[i]]))
    A_eq = None if c.A_eq is None else np.hstack([c.A_eq, np.zeros((len(c.A_eq), 1))])
    cost = np.zeros(n + 1)
    cost[n] = -1.0
    res = linprog(
        cost,
        A_ub=np.vstack(rows) if rows else None,
        b_ub=np.concatenate(rhs) if rhs else None,
        A_eq=A_eq,
        b_eq=c.b_eq,
        bounds=[(None, None)] * n + [(None, 1.0)],
        method="highs",
    )
    if res.status == 2 or (res.status == 0 and res.x[n] < -1e-9):
        raise InfeasibleError("linear constraints admit no point")
    if res.status != 0:
        raise ConvergenceError(f"feasibility phase failed: {res.message}")
    x = np.clip(np.asarray(res.x[:n], float), c.lo, c.hi)
    return x


def _projector(c: LinearConstraints) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    if c.box_only:
        return lambda v, _x: np.clip(v, c.lo, c.hi)

    cons = []
    if c.A_eq is not None:
        cons.append({"type": "eq", "fun": lambda z: c.A_eq @ z - c.b_eq, "jac": lambda z: c.A_eq})
    if c.A_ub is not None:
        cons.append({"type": "ineq", "fun": lambda z: c.b_ub - c.A_ub @ z, "jac": lambda z: -c.A_ub})
    bounds = [(None if np.isinf(a) else a, None if np.isinf(b) else b) for a, b in zip(c.lo, c.hi)]

    def project(v, x):
        res = minimize(
            lambda z: 0.5 * np.sum((z - v) ** 2),
            x,
            jac=lambda z: z - v,
            bounds=bounds,
            constraints=cons,
            method="SLSQP",
            options={"ftol": 1e-16, "maxiter": 500},
        )
        z = np.clip(res.x, c.lo, c.hi)
        return z if c.violation(z) <= 1e-9 else x

    return project


def convex_minimize(
    fun: Callable[[np.ndarray], float],
    grad: Callable[[np.ndarray], np.ndarray],
    constraints: LinearConstraints,
    x0: Optional[np.ndarray] = None,
    tol: float = 1e-10,
    max_iter: int = 100_000,
    memory: int = 10,
) -> SolverResult:
    """Minimize a convex function over a polytope.

    Raises :class:`InfeasibleError` for an empty feasible set and
    :class:`ConvergenceError` when ``max_iter`` is exhausted.
    """
    c = constraints
    x = _feasible_point(c, x0)
    project = _projector(c)
    f = fun(x)
    g = grad(x)
    recent = [f]
    step = 1.0
    for it in range(1, max_iter + 1):
        p = project(x - step * g, x)
        direction = p - x
        pg = project(x - g, x) - x
        if np.linalg.norm(pg) <= tol * max(1.0, np.linalg.norm(g)) or np.linalg.norm(direction) <= 1e-15:
            return SolverResult(f, x, it)
        ref = max(recent)
        slope = float(g @ direction)
        t = 1.0
        while True:
            xn = x + t * direction
            fn = fun(xn)
            if fn <= ref + 1e-4 * t * slope or t < 1e-14:
                break
            t *= 0.5
        if t < 1e-14 and fn > f:
            return SolverResult(f, x, it)
        gn = grad(xn)
        s, yv = xn - x, gn - g
        sy = float(s @ yv)
        step = float(s @ s) / sy if sy > 1e-300 else 1e6
        step = min(max(step, 1e-12), 1e12)
        x, f, g = xn, fn, gn
        if np.linalg.norm(s) <= 1e-13 * max(1.0, np.linalg.norm(x)):
            return SolverResult(f, x, it)
        recent.append(f)
        if len(recent) > memory:
            recent.pop(0)
    raise ConvergenceError(f"no convergence in {max_iter} iterations")
