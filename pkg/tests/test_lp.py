from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from randassign.lp import linprog


def test_simple_optimum():
    # min x + 2y  s.t. x + y = 1
    res = linprog([1, 2], [[1, 1]], [1])
    assert res.status == "optimal" and res.x == (F(1), F(0)) and res.value == 1


def test_maximize_and_infeasible():
    assert linprog([1, 2], [[1, 1]], [1], maximize=True).value == 2
    assert linprog([0, 0], [[1, 1]], [-1]).status == "infeasible"
    assert not linprog([0], [[1], [1]], [1, 2]).feasible


def test_unbounded():
    assert linprog([-1, 0], [[1, -1]], [0]).status == "unbounded"


def test_degenerate_redundant_rows():
    res = linprog([1, 1, 1], [[1, 1, 0], [1, 1, 0], [0, 0, 1]], [1, 1, F(1, 2)])
    assert res.status == "optimal" and res.value == F(3, 2)


small = st.integers(-3, 3)


@given(st.integers(1, 3), st.integers(1, 4), st.data())
def test_agrees_with_floating_solver(m, k, data):
    scipy_opt = pytest.importorskip("scipy.optimize")
    A = [[data.draw(small) for _ in range(k)] for _ in range(m)]
    b = [data.draw(st.integers(0, 4)) for _ in range(m)]
    c = [data.draw(small) for _ in range(k)]
    ours = linprog(c, A, b)
    ref = scipy_opt.linprog(c, A_eq=np.array(A, float), b_eq=np.array(b, float), bounds=(0, None), method="highs")
    expected = {0: "optimal", 2: "infeasible", 3: "unbounded"}[ref.status]
    assert ours.status == expected
    if expected == "optimal":
        assert abs(float(ours.value) - ref.fun) < 1e-7
        assert all(sum(F(a) * x for a, x in zip(row, ours.x)) == bb for row, bb in zip(A, b))
