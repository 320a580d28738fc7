import numpy as np
import pytest
from scipy.optimize import linprog

from conelab.simplex import solve_lp


def test_known_small_lp():
    # max 3x + 2y s.t. x + y <= 4, x + 3y <= 6, x,y >= 0 -> 12 at (4, 0)
    res = solve_lp([3, 2], A_ub=[[1, 1], [1, 3]], b_ub=[4, 6], maximize=True)
    assert res.status == "optimal"
    assert res.value == pytest.approx(12.0, abs=1e-9)
    assert np.allclose(res.x, [4, 0], atol=1e-9)


def test_equality_constraints():
    # min x + y s.t. x + 2y = 3, x,y >= 0 -> 1.5 at (0, 1.5)
    res = solve_lp([1, 1], A_eq=[[1, 2]], b_eq=[3])
    assert res.status == "optimal"
    assert res.value == pytest.approx(1.5, abs=1e-9)


def test_free_variables():
    # min x s.t. x >= -5 (i.e. -x <= 5), free var -> -5
    res = solve_lp([1], A_ub=[[-1]], b_ub=[5], nonneg=False)
    assert res.status == "optimal"
    assert res.value == pytest.approx(-5.0, abs=1e-9)


def test_infeasible():
    res = solve_lp([1], A_ub=[[1]], b_ub=[-1])  # x >= 0 and x <= -1
    assert res.status == "infeasible"
    assert res.residual > 1e-6


def test_unbounded():
    res = solve_lp([1], A_ub=[[-1]], b_ub=[0], maximize=True)
    assert res.status == "unbounded"


def test_degenerate_redundant_rows():
    # duplicated equality rows must not break phase 2
    res = solve_lp([1, 2], A_eq=[[1, 1], [1, 1], [2, 2]], b_eq=[1, 1, 2])
    assert res.status == "optimal"
    assert res.value == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("trial", range(30))
def test_random_nonneg_against_scipy(trial):
    rng = np.random.default_rng(1000 + trial)
    n = rng.integers(2, 7)
    m = rng.integers(2, 9)
    A = rng.normal(size=(m, n))
    b = rng.uniform(0.5, 3.0, size=m)  # 0 is feasible
    c = rng.normal(size=n)
    # box keeps the problem bounded
    A_full = np.vstack([A, np.eye(n)])
    b_full = np.concatenate([b, np.full(n, 10.0)])
    mine = solve_lp(c, A_ub=A_full, b_ub=b_full, maximize=True)
    ref = linprog(-c, A_ub=A_full, b_ub=b_full, bounds=(0, None),
                  method="highs")
    assert mine.status == "optimal" and ref.status == 0
    assert mine.value == pytest.approx(-ref.fun, abs=1e-7)


@pytest.mark.parametrize("trial", range(20))
def test_random_free_against_scipy(trial):
    rng = np.random.default_rng(2000 + trial)
    n = rng.integers(2, 6)
    m = rng.integers(n + 1, n + 8)
    A = rng.normal(size=(m, n))
    b = rng.uniform(0.5, 2.0, size=m)
    c = rng.normal(size=n)
    A_full = np.vstack([A, np.eye(n), -np.eye(n)])
    b_full = np.concatenate([b, np.full(2 * n, 10.0)])
    mine = solve_lp(c, A_ub=A_full, b_ub=b_full, nonneg=False, maximize=True)
    ref = linprog(-c, A_ub=A_full, b_ub=b_full, bounds=(None, None),
                  method="highs")
    assert mine.status == "optimal" and ref.status == 0
    assert mine.value == pytest.approx(-ref.fun, abs=1e-7)
