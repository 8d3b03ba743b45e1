"""Programmatic acceptance suite.

Each ``acN`` function runs one criterion at its stated tolerance and returns a
:class:`Criterion`.  ``run`` executes a scope and ``format_table`` renders one
line per criterion.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import casestudy24 as cs
from . import gram, hilbert, tradeoff
from .bitstrings import BitString, binom, dot, enumerate_weight

__all__ = ["Criterion", "CRITERIA", "run", "format_table"]

SEED = 20240611


@dataclass
class Criterion:
    key: str
    title: str
    passed: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"{self.key:<5} {'PASS' if self.passed else 'FAIL'}  {self.title}"


def _rng(offset: int = 0) -> np.random.Generator:
    return np.random.default_rng(SEED + offset)


def ac1() -> Criterion:
    bad = []
    for d in (2, 3, 4):
        for N in range(2, 7):
            for M in range(1, N):
                for L in range(1, N + 1):
                    f1 = tradeoff.symmetric_fidelity(M, L, N, d)
                    if f1 != tradeoff.symmetric_fidelity_sum(M, L, N, d):
                        bad.append(("sum form", M, L, N, d))
                    if L == 1 and f1 != Fraction(M, N) + Fraction((N - M) * (M + 1), N * (M + d)):
                        bad.append(("single", M, L, N, d))
                    if L == N and f1 != Fraction(binom(M + d - 1, M), binom(N + d - 1, N)):
                        bad.append(("global", M, L, N, d))
    return Criterion("AC1", "closed-form symmetric fidelities agree exactly", not bad, {"mismatches": bad})


def ac2() -> Criterion:
    def sweep():
        out = []
        for d in (2, 3, 4):
            for N in range(2, 7):
                for M in range(1, N):
                    for L in range(1, N + 1):
                        if tradeoff.wang_formula(M, L, N, d) != tradeoff.symmetric_fidelity(M, L, N, d):
                            out.append((M, L, N, d))
        return out

    first, second = sweep(), sweep()
    return Criterion(
        "AC2",
        "literature formula comparison is reproducible",
        first == second,
        {"counterexamples": first, "cases": 210},
    )


AC3_CASES = ((1, 2, 2, 1), (1, 3, 2, 1), (2, 3, 2, 1), (1, 2, 3, 1), (2, 4, 2, 2))
FAST_CASES = ((1, 2, 2, 1), (1, 3, 2, 1), (2, 3, 2, 1))


def _oracle_rows(cases) -> dict:
    rows = {}
    for M, N, d, L in cases:
        lam, _ = hilbert.max_eig(hilbert.build_R(M, N, d, hilbert.uniform_weights(N, L)))
        rows[(M, N, d, L)] = (lam, tradeoff.symmetric_fidelity(M, L, N, d))
    return rows


def ac3(cases=AC3_CASES) -> Criterion:
    rows = _oracle_rows(cases)
    agree = all(abs(lam - float(f)) < 1e-8 for lam, f in rows.values())
    details = {"rows": {k: (lam, str(f)) for k, (lam, f) in rows.items()}, "oracle_matches_closed_form": agree}
    passed = agree
    if (2, 4, 2, 2) in rows:
        lam = rows[(2, 4, 2, 2)][0]
        hit = abs(lam - 61 / 69) < 1e-8
        details["reproduces_61_69"] = hit
        details["value_2_4_2_2"] = lam
        passed = passed and hit
    return Criterion("AC3", "oracle eigenvalue equals the closed form", passed, details)


def oracle_tradeoff_points(N: int, d: int, count: int, seed_offset: int = 0):
    """Single-copy fidelities of the oracle's dominant eigenvector for random weights."""
    rng = _rng(seed_offset)
    xs = enumerate_weight(N, 1)
    Ry = {y: hilbert.build_R_x(1, N, d, y).data for y in xs}
    for _ in range(count):
        w = rng.dirichlet(np.ones(N))
        alpha = dict(zip(xs, w))
        _, v = hilbert.max_eig(hilbert.build_R(1, N, d, alpha))
        a = v.amplitudes
        yield [float(np.real(np.vdot(a, Ry[y] @ a))) for y in xs]


def ac4() -> Criterion:
    worst = 0.0
    for d in (2, 3):
        for F in oracle_tradeoff_points(3, d, 50, seed_offset=d):
            worst = max(worst, abs(tradeoff.tradeoff_relation_residual(F, d)))
    endpoint = tradeoff.tradeoff_1_to_N(2, 2, [1])
    ok = worst < 1e-7 and abs(endpoint - 0.5) < 1e-12
    return Criterion("AC4", "1->N oracle points lie on the trade-off surface", ok, {"max_residual": worst, "endpoint": endpoint})


def ac5() -> Criterion:
    verdicts = {}
    ok = True
    for N in (3, 4, 5):
        for d in (2, 3):
            lam = enumerate_weight(N, 1)
            f = tradeoff.nminus1_symmetric_boundary(N, d)
            if f != 1 - Fraction(d - 1, N * (N + d - 1)):
                ok = False
            at = tradeoff.solve_Nminus1(N, d, lam, {y: f for y in lam}).verdict
            above = tradeoff.solve_Nminus1(N, d, lam, {y: float(f) + 1e-3 for y in lam}).verdict
            verdicts[(N, d)] = (str(at), str(above))
            ok = ok and at == tradeoff.Verdict.FEASIBLE and above == tradeoff.Verdict.INFEASIBLE
    N, d = 3, 2
    rng = _rng(5)
    lam = enumerate_weight(N, 1)
    worst = 0.0
    for _ in range(5):
        t = {y: float(v) for y, v in zip(lam, rng.uniform(0.7, 0.9, N))}
        r = tradeoff.solve_Nminus1(N, d, lam, t)
        if r.verdict != tradeoff.Verdict.FEASIBLE:
            ok = False
            continue
        chi = hilbert.build_chi(N - 1, N, d, r.witness_beta)
        F = r.residuals["single_copy"]
        for w in range(1, N + 1):
            for y in enumerate_weight(N, w):
                pred = sum(F[n] for n in y.sites) - w + 1
                worst = max(worst, abs(hilbert.fidelity_direct(chi, N - 1, N, d, y) - pred))
    ok = ok and worst < 1e-8
    return Criterion("AC5", "N-1->N boundary verdicts and subset-fidelity map", ok, {"verdicts": verdicts, "map_error": worst})


def ac6() -> Criterion:
    bad = []
    for d in (2, 3):
        for N in range(1, 9):
            for M in range(1, min(4, N) + 1):
                exact = gram.g0_spectrum(M, N, d)
                num = gram.numeric_spectrum(gram.build_G_y(M, N, d, BitString((0,) * N)).to_numpy())
                pairs = sorted(zip(exact.eigenvalues, exact.degeneracies), key=lambda p: -p[0])
                if [g for _, g in pairs] != num.degeneracies or any(
                    abs(float(v) - w) > 1e-10 for (v, _), w in zip(pairs, num.eigenvalues)
                ):
                    bad.append(("spectrum", M, N, d))
                G0 = gram.build_G_y(M, N, d, BitString((0,) * N)).entries
                if not gram.is_identity(gram.exact_matmul(gram.g0_inverse(M, N, d).entries, G0)):
                    bad.append(("inverse", M, N, d))
    return Criterion("AC6", "G_0 spectra and inverse", not bad, {"failures": bad})


def ac7() -> Criterion:
    rows = {}
    ok = True
    for M, L, N in ((1, 3, 6), (1, 2, 5)):
        cm = tradeoff.kernel_X(M, L, N)
        kills = tradeoff.kernel_annihilates(cm, 2) and tradeoff.kernel_annihilates(cm, 3)
        dim_ok = len(cm.kernel) == binom(N, L) - cm.rank
        rows[(M, L, N)] = {"dim": len(cm.kernel), "rank": cm.rank, "annihilates": kills}
        ok = ok and cm.admissible and kills and dim_ok
    return Criterion("AC7", "kernel vectors annihilate the Gram matrices", ok, rows)


def ac8() -> Criterion:
    rng = _rng(8)
    fails = []
    for M, N in ((1, 3), (2, 3)):
        for i in range(20):
            L = 1 if M == 1 or i % 2 == 0 else 2
            xs = enumerate_weight(N, L)
            alpha = dict(zip(xs, rng.dirichlet(np.ones(len(xs)))))
            R = hilbert.build_R(M, N, 2, alpha)
            if not hilbert.lieb_mattis_check(R, M, tol=1e-10):
                fails.append((M, N, L, i))
    return Criterion("AC8", "dominant eigenvectors are non-negative per block", not fails, {"failures": fails})


def printed_phi() -> hilbert.DenseState:
    """The four-site state with |00>|S> + |S>|00> + |11>|11>, S the symmetric Bell state."""
    e = np.eye(2)
    k = lambda *v: np.kron(np.kron(v[0], v[1]), np.kron(v[2], v[3]))
    s = (1 / np.sqrt(2))
    amp = s * (k(e[0], e[0], e[0], e[1]) + k(e[0], e[0], e[1], e[0]))
    amp = amp + s * (k(e[0], e[1], e[0], e[0]) + k(e[1], e[0], e[0], e[0]))
    amp = amp + k(e[1], e[1], e[1], e[1])
    return hilbert.DenseState((2,) * 4, amp / np.sqrt(3))


def ac9() -> Criterion:
    ghz = hilbert.phi_trace_check(hilbert.ghz_state(3, 2), 1, 2)
    printed = hilbert.phi_trace_check(printed_phi(), 2, 2)
    zero = np.zeros(8)
    zero[0] = 1
    flat = hilbert.phi_trace_check(hilbert.DenseState((2,) * 3, zero), 1, 2)
    ok = ghz and printed and not flat
    return Criterion("AC9", "achievability states", ok, {"ghz": ghz, "four_site": printed, "all_zero": flat})


def ac10() -> Criterion:
    eta = 0.0
    for M, N in ((1, 2), (2, 3), (2, 4)):
        for y in enumerate_weight(N, M):
            for x in enumerate_weight(N, M):
                eta = max(eta, abs(hilbert.eta_norm_check(M, N, 2, x, y) - 1))
    inner = 0.0
    for M, N, d in ((2, 4, 2), (1, 3, 3)):
        xs = enumerate_weight(N, M)
        psi = {x: hilbert.build_psi_x(M, N, d, x) for x in xs}
        for x in xs:
            for z in xs:
                want = 1 / binom(M - dot(x, z) + d - 1, d - 1)
                inner = max(inner, abs(psi[x].inner(psi[z]).real - want))
    comm = max(hilbert.commutator_check(1, w, d) for w in (1, 2) for d in (2, 3))
    twirl = max(hilbert.twirl_residual(d) for d in (2, 3, 4))
    ok = eta < 1e-10 and inner < 1e-10 and comm < 1e-10 and twirl < 1e-12
    return Criterion(
        "AC10",
        "lemma-level numerics",
        ok,
        {"eta": eta, "inner_products": inner, "commutator": comm, "twirl": twirl},
    )


def class2_surface_samples(count: int, seed_offset: int = 11, kernel: str = cs.DEFAULT_KERNEL):
    """Points on the class-2 surface found by root-finding F_1100 for random (F_1010, F_0110)."""
    rng = _rng(seed_offset)
    out = []
    while len(out) < count:
        a = rng.random(3)
        P = cs.class2_fidelities(*a, kernel=kernel)
        x = cs.class2_solve_F1100(P.F_1010, P.F_0110, kernel)
        if x is None:
            continue
        out.append(cs.PairFidelities(x, P.F_1010, P.F_0110))
    return out


def ac11() -> Criterion:
    q = Fraction(61, 69)
    try:
        sym_res = cs.class2_relation(cs.PairFidelities(q, q, q))
        sym_ok = abs(sym_res) < 1e-12
    except cs.DomainError as exc:
        sym_res, sym_ok = str(exc), False
    worst = 0.0
    for P in class2_surface_samples(10):
        bt = cs.class2_witness(P)
        got = cs.oracle_pair_fidelities(bt)
        want = P.six()
        worst = max(worst, max(abs(got[k] - want[k]) for k in want))
    half = cs.region_membership(cs.PairFidelities(0.5, 0.5, 0.5))
    high = cs.region_membership(cs.PairFidelities(0.95, 0.95, 0.95))
    ok = sym_ok and worst < 1e-8 and half and not high
    return Criterion(
        "AC11",
        "two-to-four case study",
        ok,
        {
            "residual_at_61_69": sym_res,
            "symmetric_optimum": str(cs.symmetric_optimum()),
            "oracle_closure_error": float(worst),
            "member_half": half,
            "member_095": high,
        },
    )


def ac12() -> Criterion:
    rng = _rng(12)
    conc = 0
    for N in range(1, 6):
        for _ in range(200):
            x = 1 - rng.random(N)
            z = 1 - rng.random(N)
            th = rng.random()
            f = tradeoff.concave_root_sum
            if f(th * x + (1 - th) * z) < th * f(x) + (1 - th) * f(z) - 1e-12:
                conc += 1
    prob = 0
    for N in range(2, 6):
        xs = enumerate_weight(N, 1)
        G0 = gram.build_G_y(1, N, 2, BitString((0,) * N))
        for _ in range(100):
            b = rng.random(N)
            b = b / np.sqrt(G0.quad(b))
            p = tradeoff.success_probability(dict(zip(xs, b)), 1, N, 2)
            if p < N**-1 - 1e-12:
                prob += 1
    return Criterion("AC12", "concavity and success-probability bound", conc == 0 and prob == 0, {"concavity_violations": conc, "probability_violations": prob})


CRITERIA: dict[str, Callable[[], Criterion]] = {
    "AC1": ac1,
    "AC2": ac2,
    "AC3": ac3,
    "AC4": ac4,
    "AC5": ac5,
    "AC6": ac6,
    "AC7": ac7,
    "AC8": ac8,
    "AC9": ac9,
    "AC10": ac10,
    "AC11": ac11,
    "AC12": ac12,
}


def run(scope: str = "full") -> list[Criterion]:
    if scope == "fast":
        jobs = [lambda: ac3(FAST_CASES)]
    elif scope == "full":
        jobs = list(CRITERIA.values())
    else:
        raise ValueError(f"unknown scope {scope!r}")
    out = []
    for job in jobs:
        t = time.perf_counter()
        res = job()
        res.seconds = time.perf_counter() - t
        out.append(res)
    return out


def format_table(results: list[Criterion]) -> str:
    return "\n".join(r.line() for r in results)
