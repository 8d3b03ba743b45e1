import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from clonetrade.convex import InfeasibleError, LinearConstraints, convex_minimize


def test_simplex_quadratic():
    c = LinearConstraints(3, A_eq=np.ones((1, 3)), b_eq=np.array([1.0]), lo=np.zeros(3), hi=np.ones(3))
    r = convex_minimize(lambda x: float(x @ x), lambda x: 2 * x, c)
    assert abs(r.value - 1 / 3) < 1e-9
    assert np.abs(r.x - 1 / 3).max() < 1e-6


def test_empty_polytope():
    c = LinearConstraints(2, A_ub=np.ones((1, 2)), b_ub=np.array([-1.0]), lo=np.zeros(2), hi=np.ones(2))
    with pytest.raises(InfeasibleError):
        convex_minimize(lambda x: float(x @ x), lambda x: 2 * x, c)


def test_empty_box():
    c = LinearConstraints(2, lo=np.ones(2), hi=np.zeros(2))
    with pytest.raises(InfeasibleError):
        convex_minimize(lambda x: 0.0, lambda x: np.zeros(2), c)


@given(st.lists(st.floats(-3, 3), min_size=2, max_size=5))
def test_box_projection_of_centre(center):
    t = np.array(center)
    c = LinearConstraints(len(t), lo=-np.ones(len(t)), hi=np.ones(len(t)))
    r = convex_minimize(lambda x: float((x - t) @ (x - t)), lambda x: 2 * (x - t), c)
    assert np.abs(r.x - np.clip(t, -1, 1)).max() < 1e-6
