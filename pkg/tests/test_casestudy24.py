from fractions import Fraction as Fr

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from clonetrade import casestudy24 as cs
from clonetrade.casestudy24 import PairFidelities as PF

F6169 = 61 / 69
F2330 = 23 / 30


def _exact(rows):
    return [[Fr(v) for v in r] for r in rows]


# ---------------------------------------------------------------- basis change


def test_basis_change_is_orthogonal_involution():
    H = cs.basis_change()
    assert np.abs(H @ H - np.eye(6)).max() < 1e-15
    assert np.abs(H - H.T).max() == 0


def test_conjugated_norm_form_printed_kernel():
    G = cs.conjugate(cs.case_gram("0000", "printed"))
    want = [[Fr(0)] * 6 for _ in range(6)]
    for i in range(3):
        for j in range(3):
            want[i][j] = Fr(16 if i == j else 15, 30)
        want[3 + i][3 + i] = Fr(4, 30)
    assert G == want


def test_conjugated_anti_block_printed_kernel():
    A = cs.case_gram("0011", "printed")
    B = cs.case_gram("1100", "printed")
    G = cs.conjugate(tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(A, B)))
    t, h = Fr(2, 15), Fr(1, 10)
    want = _exact(
        [
            [0, 0, 0, 0, 0, t],
            [0, 0, 0, 0, 0, h],
            [0, 0, 0, 0, 0, h],
            [0, 0, 0, 0, -h, 0],
            [0, 0, 0, -h, 0, 0],
            [t, h, h, 0, 0, 0],
        ]
    )
    assert G == want


@pytest.mark.parametrize("kernel", cs.KERNELS)
def test_conjugated_norm_form_is_block_diagonal(kernel):
    G = cs.conjugate(cs.case_gram("0000", kernel))
    assert all(G[i][j] == 0 for i in range(3) for j in range(3, 6))


def test_definition_kernel_gram_entries():
    G = cs.case_gram("0000", "definition")
    # x.z = 2 on the diagonal, 1 for strings sharing a site, 0 for complements
    assert G[0][0] == 1 and G[0][1] == Fr(1, 2) and G[0][5] == Fr(1, 3)


def test_unknown_kernel():
    with pytest.raises(ValueError):
        cs.case_gram("0000", "other")


# ---------------------------------------------------------------- class 2


def test_class2_constants():
    assert cs.class2_constants("printed") == (Fr(1, 2), Fr(1, 30), Fr(9, 20), Fr(1, 60))
    assert cs.class2_constants("definition") == (Fr(1), Fr(1, 3), Fr(5, 6), Fr(1, 6))


def test_symmetric_optimum_per_kernel():
    assert cs.symmetric_optimum("printed") == Fr(61, 69)
    assert cs.symmetric_optimum("definition") == Fr(23, 30)


def test_printed_relation_zero_at_printed_symmetric_point():
    F = PF(F6169, F6169, F6169)
    assert abs(cs.class2_printed_residual(F)) < 1e-12
    assert abs(cs.class2_relation(F, "printed")) < 1e-12


def test_definition_relation_zero_at_its_symmetric_point():
    assert abs(cs.class2_relation(PF(F2330, F2330, F2330))) < 1e-12


@pytest.mark.parametrize("kernel,f", [("printed", F6169), ("definition", F2330)])
def test_symmetric_perturbation_leaves_surface(kernel, f):
    g = f + 1e-3
    try:
        res = cs.class2_relation(PF(g, g, g), kernel)
    except cs.DomainError:
        return
    assert abs(res) > 1e-6


def test_class2_relation_domain_error():
    with pytest.raises(cs.DomainError):
        cs.class2_relation(PF(0.0, 0.0, 0.0))
    with pytest.raises(cs.DomainError):
        cs.class2_printed_residual(PF(0.0, 0.0, 0.0))


@pytest.mark.parametrize("kernel", cs.KERNELS)
@given(st.floats(0.05, 1), st.floats(0.05, 1), st.floats(0.05, 1))
def test_class2_surface_points_close(kernel, a, b, c):
    F = cs.class2_fidelities(a, b, c, kernel)
    assert abs(cs.class2_relation(F, kernel)) < 1e-10
    bt = cs.class2_witness(F, kernel)
    back = cs.class2_fidelities(*bt[:3], kernel)
    assert np.abs(np.array(back.as_tuple()) - np.array(F.as_tuple())).max() < 1e-10


@given(st.floats(0.05, 1), st.floats(0.05, 1), st.floats(0.05, 1))
def test_class2_printed_residual_on_printed_surface(a, b, c):
    F = cs.class2_fidelities(a, b, c, "printed")
    assert abs(cs.class2_printed_residual(F)) < 1e-10


def test_class2_ray_root_and_oracle_closure():
    rng = np.random.default_rng(3)
    for _ in range(5):
        F = cs.class2_fidelities(*rng.uniform(0.1, 1, 3))
        x = cs.class2_solve_F1100(F.F_1010, F.F_0110)
        assert x is not None and x >= F.F_1100 - 1e-9
        G = PF(x, F.F_1010, F.F_0110)
        assert abs(cs.class2_relation(G)) < 1e-10
        bt = cs.class2_witness(G)
        six = cs.oracle_pair_fidelities(bt)
        for lab, v in G.six().items():
            assert abs(six[lab] - v) < 1e-8


def test_symmetric_point_is_surface_maximum():
    # Sweep the positive octant of beta at 1e-3 resolution in angle.
    t, p = np.meshgrid(np.linspace(0, np.pi / 2, 700), np.linspace(0, np.pi / 2, 700))
    v = np.stack([np.sin(t) * np.cos(p), np.sin(t) * np.sin(p), np.cos(t)], -1).reshape(-1, 3)
    pc, sc, uc, vc = (float(x) for x in cs.class2_constants())
    S2 = v.sum(1) ** 2
    nrm = pc * S2 + sc * (v**2).sum(1)
    F = (uc * S2[:, None] + vc * v**2) / nrm[:, None]
    assert F.min(1).max() <= F2330 + 1e-12


# ---------------------------------------------------------------- class 1


def test_class1_kappa():
    assert cs.class1_kappa("printed") == Fr(-3, 4)
    assert cs.class1_kappa("definition") == Fr(-1, 2)


def test_class1_printed_example_outside_range():
    res, flags = cs.class1_relation(PF(6 / 7, 1, 1), "printed")
    assert abs(res) < 1e-12
    assert flags[2] is False


def test_class1_printed_example_on_boundary():
    res, flags = cs.class1_relation(PF(9 / 16, 31 / 64, 31 / 64), "printed")
    assert abs(res) < 1e-12
    assert all(flags)


def test_class1_zero_point_residual():
    res, _ = cs.class1_relation(PF(0, 0, 0), "printed")
    assert res == pytest.approx(2 * -1)
    res, _ = cs.class1_relation(PF(0, 0, 0))
    assert res == pytest.approx(-1)


def test_class1_definition_examples():
    # symmetric branch: (2 f - 1)(1 - 2 F_1100) = 0
    res, flags = cs.class1_relation(PF(0.5, 0.5, 0.5))
    assert abs(res) < 1e-15 and all(flags)
    res, flags = cs.class1_relation(PF(0.4, 0.75, 0.75))
    assert abs(res) > 1e-3


@pytest.mark.parametrize("kernel", cs.KERNELS)
@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))
def test_class1_family_satisfies_relation(kernel, a, b, c):
    if abs(a) + abs(b) + abs(c) < 1e-2:
        return
    F = cs.class1_fidelities(a, b, c, kernel)
    res, flags = cs.class1_relation(F, kernel)
    assert abs(res) < 1e-9
    assert all(flags)


@pytest.mark.parametrize("kernel", cs.KERNELS)
def test_class1_witness_round_trip(kernel):
    rng = np.random.default_rng(5)
    for _ in range(20):
        F = cs.class1_fidelities(*rng.normal(size=3), kernel)
        bt = cs.class1_witness(F, kernel)
        G = cs._fidelities_rotated(bt, kernel)
        assert np.abs(np.array(G.as_tuple()) - np.array(F.as_tuple())).max() < 1e-9


def test_class1_witness_oracle_closure():
    rng = np.random.default_rng(6)
    for _ in range(3):
        F = cs.class1_fidelities(*rng.normal(size=3))
        six = cs.oracle_pair_fidelities(cs.class1_witness(F))
        for lab, v in F.six().items():
            assert abs(six[lab] - v) < 1e-8


@pytest.mark.parametrize("rep", [1, 2])
def test_class1_representatives_are_permutations(rep):
    rng = np.random.default_rng(rep)
    perm = cs._rep_perm(rep)
    for _ in range(10):
        abc = rng.normal(size=3)
        F0 = cs.class1_fidelities(*abc).as_tuple()
        Fr_ = cs.class1_fidelities(*abc, representative=rep).as_tuple()
        assert np.abs(np.array([Fr_[perm[i]] for i in range(3)]) - np.array(F0)).max() < 1e-12
        bt = cs.class1_witness(PF(*Fr_), representative=rep)
        G = cs._fidelities_rotated(bt, cs.DEFAULT_KERNEL).as_tuple()
        assert np.abs(np.array(G) - np.array(Fr_)).max() < 1e-9


# ---------------------------------------------------------------- region


def test_region_contains_61_69_cube():
    assert cs.region_membership(PF(F6169, F6169, F6169))


def test_region_symmetric_point_per_kernel():
    assert cs.region_membership(PF(F6169, F6169, F6169), kernel="printed")
    assert cs.region_membership(PF(F2330, F2330, F2330))
    assert not cs.region_membership(PF(F2330 + 1e-4, F2330 + 1e-4, F2330 + 1e-4))


def test_region_examples():
    assert cs.region_membership(PF(0.5, 0.5, 0.5))
    assert not cs.region_membership(PF(0.95, 0.95, 0.95))
    assert not cs.region_membership(PF(0.95, 0.95, 0.95), kernel="printed")
    assert not cs.region_membership(PF(0.2, 0.9, 0.3))


def test_region_report_witness_achieves_target():
    for F in (PF(0.5, 0.5, 0.5), PF(0.76, 0.77, 0.7), PF(0.2, 0.74, 0.3)):
        rep = cs.region_report(F)
        assert rep["member"]
        assert all(a >= f - 1e-6 for a, f in zip(rep["achieved"], F.as_tuple()))


def test_region_grid_matches_membership():
    rows = list(cs.region_grid(6))
    assert len(rows) == 216
    assert rows[0][3] and not rows[-1][3]
    checked = 0
    for a, b, c, member, _ in rows:
        lo = PF(*[max(0.0, x - 0.02) for x in (a, b, c)])
        hi = PF(*[min(1.0, x + 0.02) for x in (a, b, c)])
        if cs.region_membership(lo) != cs.region_membership(hi):
            continue  # too close to the boundary for the binned envelope
        assert member == cs.region_membership(PF(a, b, c))
        checked += 1
    assert checked > 150


def test_region_grid_deterministic():
    assert list(cs.region_grid(4)) == list(cs.region_grid(4))


def test_beta_search_agrees_on_examples():
    inside = cs.beta_search(PF(0.5, 0.5, 0.5), starts=4)
    outside = cs.beta_search(PF(0.9, 0.9, 0.9), starts=4)
    assert inside["margin"] >= -1e-8
    assert outside["margin"] < 0


def test_pair_fidelities_validation():
    with pytest.raises(ValueError):
        PF(1.2, 0, 0)
    assert PF.of([0.1, 0.2, 0.3]).six()["0011"] == 0.1
