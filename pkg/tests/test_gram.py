import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from clonetrade.bitstrings import BitString, binom
from clonetrade.gram import (
    RecursionError_,
    build_G_ML,
    build_G_y,
    eig_lift,
    exact_matmul,
    f_standard,
    g0_inverse,
    g0_spectrum,
    is_identity,
    numeric_spectrum,
    row_sum_symmetric,
)


def zeros(N):
    return BitString((0,) * N)


def test_small_G0_entries():
    G = build_G_y(1, 2, 2, "00")
    assert G.entries == ((1, Fraction(1, 2)), (Fraction(1, 2), 1))
    G = build_G_y(2, 4, 2, "0000")
    assert G[0, 0] == 1
    assert G[0, 1] == Fraction(1, 2)
    assert G[0, 5] == Fraction(1, 3)


def test_label_shifts_entries():
    # y = 1100 against rows 0011: the complement of both rows covers y.
    G = build_G_y(2, 4, 2, "1100")
    assert G[0, 0] == Fraction(1, 3)


def test_json_is_rational():
    payload = json.loads(build_G_y(1, 2, 2, "00").to_json())
    assert payload["rows"] == [["1/1", "1/2"], ["1/2", "1/1"]]


def test_bad_label_length():
    with pytest.raises(ValueError):
        build_G_y(1, 3, 2, "00")


def test_spectrum_frozen_values():
    rep = g0_spectrum(1, 2, 2)
    assert rep.eigenvalues == [Fraction(3, 2), Fraction(1, 2)]
    assert rep.degeneracies == [1, 1]
    rep = g0_spectrum(2, 4, 2)
    assert rep.total == 6
    assert rep.trace() == 6


@pytest.mark.parametrize("M,N,d", [(1, 3, 2), (2, 4, 3), (3, 6, 2), (2, 5, 3), (4, 8, 2)])
def test_spectrum_matches_numeric(M, N, d):
    exact = g0_spectrum(M, N, d)
    num = numeric_spectrum(build_G_y(M, N, d, zeros(N)).to_numpy())
    pairs = sorted(zip(exact.eigenvalues, exact.degeneracies), key=lambda p: -p[0])
    assert [g for _, g in pairs] == num.degeneracies
    assert np.abs(np.array([float(v) for v, _ in pairs]) - np.array(num.eigenvalues)).max() < 1e-10


@given(st.integers(1, 7), st.sampled_from([2, 3, 4]), st.data())
def test_inverse_is_exact(N, d, data):
    M = data.draw(st.integers(1, N))
    A = g0_inverse(M, N, d).entries
    assert is_identity(exact_matmul(A, build_G_y(M, N, d, zeros(N)).entries))


def test_inverse_rejects_d1():
    with pytest.raises(ValueError):
        g0_inverse(1, 2, 1)


@pytest.mark.parametrize("N", [3, 5, 6, 8])
@pytest.mark.parametrize("d", [2, 3])
def test_lift_reproduces_closed_form(N, d):
    f = f_standard(d)
    rep = g0_spectrum(1, N, d)
    for M in range(1, min(4, N - 1) + 1):
        rep = eig_lift(rep, f, M, N)
        want = g0_spectrum(M + 1, N, d)
        assert sorted(rep.eigenvalues) == sorted(want.eigenvalues)
        assert sorted(zip(rep.eigenvalues, rep.degeneracies)) == sorted(zip(want.eigenvalues, want.degeneracies))


def test_lift_rejects_bad_profile():
    with pytest.raises(RecursionError_):
        eig_lift(g0_spectrum(1, 5, 2), lambda M, k: Fraction(1, 1 + k * k + M), 1, 5)


def test_row_sum_matches_matrix():
    for M, L, N, d in [(1, 1, 3, 2), (2, 2, 4, 2), (1, 2, 4, 3), (2, 3, 5, 2)]:
        G = build_G_ML(M, N, d, L, zeros(N))
        assert sum(G.entries[0]) == row_sum_symmetric(M, L, N, d)


def test_aggregate_sums_members():
    G = build_G_ML(1, 3, 2, 2, "100")
    parts = [build_G_y(1, 3, 2, y) for y in ("101", "110")]
    assert G.entries == (parts[0] + parts[1]).entries


@given(st.lists(st.floats(-1, 1), min_size=3, max_size=3))
def test_quadratic_form_exact_and_float_agree(b):
    G = build_G_y(1, 3, 3, "011")
    exact = G.quad_exact([Fraction(v) for v in b])
    assert abs(float(exact) - G.quad(b)) < 1e-12
    assert binom(3, 1) == G.size
