from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from clonetrade import hilbert
from clonetrade import tradeoff as T
from clonetrade.bitstrings import BitString, binom, enumerate_weight
from clonetrade.gram import build_G_ML, build_G_y


def weight1(N):
    return enumerate_weight(N, 1)


# ---------------------------------------------------------------- closed forms


@pytest.mark.parametrize("args,want", [((1, 1, 2, 2), Fraction(5, 6)), ((1, 2, 2, 2), Fraction(2, 3)), ((1, 3, 3, 2), Fraction(1, 2)), ((2, 1, 3, 2), Fraction(11, 12))])
def test_symmetric_fidelity_frozen(args, want):
    assert T.symmetric_fidelity(*args) == want


def test_symmetric_fidelity_two_to_four_printed_value():
    assert T.symmetric_fidelity(2, 2, 4, 2) == Fraction(61, 69)


def test_symmetric_fidelity_two_to_four_matches_oracle():
    lam, _ = hilbert.max_eig(hilbert.build_R(2, 4, 2, hilbert.uniform_weights(4, 2)))
    assert T.symmetric_fidelity(2, 2, 4, 2) == Fraction(23, 30)
    assert abs(lam - 23 / 30) < 1e-10


@given(st.integers(2, 7), st.sampled_from([2, 3, 4]), st.data())
def test_two_closed_forms_agree(N, d, data):
    M = data.draw(st.integers(1, N - 1))
    L = data.draw(st.integers(1, N))
    f = T.symmetric_fidelity(M, L, N, d)
    assert f == T.symmetric_fidelity_sum(M, L, N, d)
    assert f == T.wang_formula(M, L, N, d)
    if L == 1:
        assert f == Fraction(M, N) + Fraction((N - M) * (M + 1), N * (M + d))
    if L == N:
        assert f == Fraction(binom(M + d - 1, M), binom(N + d - 1, N))


def test_symmetric_fidelity_rejects():
    with pytest.raises(ValueError):
        T.symmetric_fidelity(2, 1, 2, 2)


# ---------------------------------------------------------------- sum test


def test_sum_test():
    p = T.CloneProblem(1, 3, 2, 1)
    f = T.symmetric_fidelity(1, 1, 3, 2)
    assert T.necessary_sum_test(p, {y: f for y in weight1(3)})
    assert not T.necessary_sum_test(p, {y: f + Fraction(1, 100) for y in weight1(3)})
    rep = T.sum_test_report(p, {y: f for y in weight1(3)})
    assert rep["bound_count_L"] == 3 * f


def test_sum_test_is_not_sufficient():
    p = T.CloneProblem(3, 4, 2, 2)
    t = {y: Fraction(1, 2) for y in enumerate_weight(4, 2)}
    for y in ("1100", "0011", "1010"):
        t[BitString.parse(y)] = Fraction(1)
    assert T.necessary_sum_test(p, t)


# ---------------------------------------------------------------- N-1 -> N


def test_nminus1_boundary_is_symmetric_fidelity():
    for N in (2, 3, 4, 5):
        for d in (2, 3, 4):
            assert T.nminus1_symmetric_boundary(N, d) == T.symmetric_fidelity(N - 1, 1, N, d)


def test_nminus1_examples():
    lam = weight1(3)
    f = Fraction(11, 12)
    assert T.solve_Nminus1(3, 2, lam, {y: f for y in lam}).verdict == T.Verdict.FEASIBLE
    assert T.solve_Nminus1(3, 2, lam, {y: float(f) + 1e-3 for y in lam}).verdict == T.Verdict.INFEASIBLE
    assert T.nminus1_objective_exact([f, f, f], 2) == 2


def test_nminus1_general_map():
    f = Fraction(11, 12)
    F = [f, f, f]
    y = BitString.parse("110")
    assert sum(F[n] for n in y.sites) - y.weight + 1 == Fraction(5, 6)


def test_nminus1_pair_targets_and_oracle():
    lam = enumerate_weight(3, 2)
    t = {y: 0.8 for y in lam}
    r = T.solve_Nminus1(3, 2, lam, t)
    assert r.verdict == T.Verdict.FEASIBLE
    chi = hilbert.build_chi(2, 3, 2, r.witness_beta)
    for y in lam:
        assert hilbert.fidelity_direct(chi, 2, 3, 2, y) >= 0.8 - 1e-9


def test_nminus1_empty_lambda():
    with pytest.raises(ValueError):
        T.solve_Nminus1(3, 2, [], {})


# ---------------------------------------------------------------- 1 -> N


@pytest.mark.parametrize("N,d,known,want", [(2, 2, [Fraction(5, 6)], 5 / 6), (2, 2, [1], 0.5), (3, 2, [Fraction(7, 9)] * 2, 7 / 9)])
def test_tradeoff_frozen(N, d, known, want):
    assert abs(T.tradeoff_1_to_N(N, d, known) - want) < 1e-12


def test_tradeoff_outside_domain():
    with pytest.raises(ValueError):
        T.tradeoff_1_to_N(3, 2, [1, 1])
    with pytest.raises(ValueError):
        T.tradeoff_1_to_N(3, 2, [0.1, 0.5])


@given(st.integers(2, 5), st.sampled_from([2, 3]), st.data())
def test_tradeoff_point_satisfies_relation(N, d, data):
    lo = 1 / (d + 1)
    sym = (2 * N + d - 1) / ((d + 1) * N)
    known = data.draw(st.lists(st.floats(lo, sym), min_size=N - 1, max_size=N - 1))
    last = T.tradeoff_1_to_N(N, d, known)
    assert abs(T.tradeoff_relation_residual(known + [last], d)) < 1e-10


# ---------------------------------------------------------------- rank-1 reduction


@pytest.mark.parametrize("N,d,L", [(4, 2, 2), (5, 3, 2), (3, 2, 1), (6, 2, 3), (4, 3, 3), (5, 2, 4)])
def test_rank1_reduction_is_rank_one(N, d, L):
    red = T.rank1_reduction(N, d, L)
    assert red.singular_ratio < 1e-9
    assert red.gamma1 != red.gamma2


def test_rank1_entries_match_closed_forms():
    for N, d, L in [(4, 2, 2), (5, 3, 3), (6, 2, 2)]:
        assert T.rank1_reduction(N, d, L).a == T.printed_a_coefficients(N, d, L)


def test_rank1_rejects_global():
    with pytest.raises(ValueError):
        T.rank1_reduction(4, 2, 4)


def test_beta_symmetric_targets_equal():
    red = T.rank1_reduction(4, 2, 2)
    f = float(T.symmetric_fidelity(1, 2, 4, 2))
    b = T.beta_from_fidelities(red, {y: f for y in enumerate_weight(4, 2)})
    assert np.abs(b - b[0]).max() < 1e-12


def test_beta_endpoint_one_to_two():
    red = T.rank1_reduction(2, 2, 1)
    b = T.beta_from_fidelities(red, {"10": 1, "01": 0.5})
    assert min(abs(b)) < 1e-9
    assert abs(max(abs(b)) - 1) < 1e-9


@given(st.sampled_from([2, 3]), st.data())
def test_beta_closure_on_single_copy_surface(d, data):
    N = 3
    lo, sym = 1 / (d + 1), (2 * N + d - 1) / ((d + 1) * N)
    known = data.draw(st.lists(st.floats(lo + 0.05, sym), min_size=2, max_size=2))
    F = known + [T.tradeoff_1_to_N(N, d, known)]
    red = T.rank1_reduction(N, d, 1)
    xs = [BitString.from_sites(N, [n]) for n in range(N)]
    b_sites = T.beta_from_fidelities(red, dict(zip(xs, F)))
    b = T._site_vector_to_gram(b_sites, N)
    zero = BitString((0,) * N)
    assert abs(build_G_y(1, N, d, zero).quad(b) - 1) < 1e-9
    for x, f in zip(xs, F):
        assert abs(build_G_y(1, N, d, x).quad(b) - f) < 1e-9


def test_normalization_functional_is_convex_direction():
    for N, d, L in [(4, 2, 2), (5, 3, 2), (6, 2, 3)]:
        assert T.rank1_reduction(N, d, L).kappa < 0


# ---------------------------------------------------------------- kernel of X


def test_kernel_identity_case():
    cm = T.kernel_X(1, 2, 4)
    assert cm.kernel == ()
    assert cm.admissible


def test_kernel_dimension_and_annihilation():
    cm = T.kernel_X(1, 3, 6)
    assert len(cm.kernel) == 5 and cm.rank == 15
    assert T.kernel_annihilates(cm, 2)
    cm = T.kernel_X(1, 2, 5)
    assert len(cm.kernel) == binom(5, 2) - cm.rank
    assert T.kernel_annihilates(cm, 3)


def test_kernel_guard_for_larger_M():
    cm = T.kernel_X(2, 5, 8)
    assert not cm.admissible and cm.reason


# ---------------------------------------------------------------- quadratics


def test_residual_quadratics_symmetric_zero():
    assert abs(T.residual_quadratics(np.ones(4) / 3, 2, 2, (0, 1, 2, 3))) < 1e-14


@given(st.lists(st.floats(-1, 1), min_size=4, max_size=6), st.sampled_from([2, 3]), st.data())
def test_residual_quadratics_identity(beta, d, data):
    N = len(beta)
    L = data.draw(st.integers(2, N - 2))
    sites = tuple(data.draw(st.permutations(range(N)))[:4])
    assert abs(T.residual_quadratics(beta, d, L, sites)) < 1e-10


def test_residual_quadratics_without_count_factor_misses():
    beta = np.array([0.4, -0.1, 0.3, 0.2, 0.05, -0.3])
    assert abs(T.residual_quadratics(beta, 2, 3, (0, 1, 2, 3), printed=True)) > 1e-3


@pytest.mark.parametrize("L", [1, 3])
def test_residual_quadratics_level_range(L):
    with pytest.raises(ValueError):
        T.residual_quadratics(np.ones(4) / 3, 2, L, (0, 1, 2, 3))


def test_residual_quadratics_errors():
    with pytest.raises(ValueError):
        T.residual_quadratics(np.ones(4), 2, 2, (0, 0, 1, 2))


def test_swapping_sites_flips_right_side():
    b = np.array([0.3, -0.2, 0.5, 0.1])
    rhs = lambda a, bb, c, e: 2 * (b[a] - b[e]) * (b[bb] - b[c])
    assert rhs(3, 1, 2, 0) == -rhs(0, 1, 2, 3)


# ---------------------------------------------------------------- pipeline


def test_pipeline_single_copy_matches_closed_form():
    F = [0.7, 0.75]
    F.append(T.tradeoff_1_to_N(3, 2, F) - 1e-6)
    r = T.feasibility_1LN(3, 2, 1, dict(zip(weight1(3), F)))
    assert r.verdict == T.Verdict.FEASIBLE


def test_pipeline_sum_failure():
    f = float(T.symmetric_fidelity(1, 2, 4, 2)) + 0.01
    r = T.feasibility_1LN(4, 2, 2, {y: f for y in enumerate_weight(4, 2)})
    assert r.verdict == T.Verdict.INFEASIBLE and r.residuals["stage"] == 1


def test_pipeline_feasible_is_oracle_confirmed():
    rng = np.random.default_rng(7)
    ys = enumerate_weight(4, 2)
    for _ in range(3):
        t = dict(zip(ys, rng.uniform(0.45, 0.6, len(ys))))
        r = T.feasibility_1LN(4, 2, 2, t)
        assert r.verdict in (T.Verdict.FEASIBLE, T.Verdict.UNDETERMINED, T.Verdict.INFEASIBLE)
        if r.verdict == T.Verdict.FEASIBLE:
            assert r.residuals["oracle_max_error"] < 1e-9
            assert all(r.achieved[y] >= t[y] - 1e-9 for y in ys)


def test_pipeline_rejects_global():
    with pytest.raises(ValueError):
        T.feasibility_1LN(3, 2, 3, {"111": 0.5})


# ---------------------------------------------------------------- misc


@pytest.mark.parametrize("args,want", [((2, 2, 4), T.Rank1Class.EXCLUDED), ((1, 2, 5), T.Rank1Class.EXISTS), ((3, 3, 8), T.Rank1Class.UNKNOWN), ((3, 1, 4), T.Rank1Class.EXISTS)])
def test_rank1_classification(args, want):
    assert T.rank1_classification(*args) == want


def test_success_probability():
    xs = weight1(2)
    assert abs(T.success_probability(dict(zip(xs, [1 / np.sqrt(3)] * 2)), 1, 2, 2) - 0.75) < 1e-12
    assert abs(T.success_probability({xs[0]: 1.0}, 1, 2, 2) - 0.5) < 1e-12
    with pytest.raises(ValueError):
        T.success_probability({xs[0]: 2.0}, 1, 2, 2)


@given(st.integers(2, 5), st.lists(st.floats(0.01, 1), min_size=5, max_size=5))
def test_success_probability_bound_for_nonnegative_beta(N, raw):
    b = np.array(raw[:N])
    b = b / np.sqrt(build_G_y(1, N, 2, BitString((0,) * N)).quad(b))
    assert T.success_probability(dict(zip(weight1(N), b)), 1, N, 2) >= 1 / N - 1e-12


@given(st.integers(1, 6), st.data())
def test_root_sum_concave(N, data):
    unit = st.floats(1e-6, 1)
    x = np.array(data.draw(st.lists(unit, min_size=N, max_size=N)))
    z = np.array(data.draw(st.lists(unit, min_size=N, max_size=N)))
    th = data.draw(st.floats(0.01, 0.99))
    f = T.concave_root_sum
    assert f(th * x + (1 - th) * z) >= th * f(x) + (1 - th) * f(z) - 1e-12
