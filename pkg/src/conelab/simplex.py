"""Dense two-phase simplex solver with Bland's anti-cycling rule.

Problem sizes in this package stay below a few thousand constraints, so a
plain dense tableau is adequate and keeps the solver dependency-free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ModelingError

TOL = 1e-9


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None
    value: float | None
    residual: float = 0.0  # phase-1 objective when infeasible


def _pivot(T: np.ndarray, basis: list, r: int, j: int) -> None:
    T[r] /= T[r, j]
    col = T[:, j].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])
    T[:, j] = 0.0
    T[r, j] = 1.0
    basis[r] = j


def _bland_loop(T: np.ndarray, basis: list, ncols: int, tol: float,
                max_iter: int) -> str:
    """Run simplex iterations on tableau T until optimal or unbounded.

    T has shape (m+1, ncols+1); last row is the reduced-cost row, last
    column the RHS. Entering variable: lowest index with negative reduced
    cost; leaving: lowest basis index among minimal ratios (Bland).
    """
    m = T.shape[0] - 1
    for _ in range(max_iter):
        enter = -1
        for j in range(ncols):
            if T[m, j] < -tol:
                enter = j
                break
        if enter < 0:
            return "optimal"
        leave = -1
        best = np.inf
        for i in range(m):
            a = T[i, enter]
            if a > tol:
                ratio = T[i, ncols] / a
                if ratio < best - tol or (ratio < best + tol and
                                          (leave < 0 or basis[i] < basis[leave])):
                    best = ratio
                    leave = i
        if leave < 0:
            return "unbounded"
        _pivot(T, basis, leave, enter)
    raise ModelingError("simplex iteration limit exceeded")


def _solve_standard(c: np.ndarray, A: np.ndarray, b: np.ndarray,
                    tol: float = TOL) -> LPResult:
    """min cᵀx s.t. Ax = b, x ≥ 0."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float).copy()
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    A = A.copy()
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0

    # Phase 1: artificial variables form the starting basis.
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b
    T[m, :n] = -A.sum(axis=0)
    T[m, -1] = -b.sum()
    basis = list(range(n, n + m))
    max_iter = 200 * (m + n) + 1000
    status = _bland_loop(T, basis, n + m, tol, max_iter)
    if status != "optimal":  # phase 1 is always bounded below by 0
        raise ModelingError("phase-1 simplex reported %s" % status)
    residual = -T[m, -1]
    if residual > tol:
        return LPResult("infeasible", None, None, residual=max(residual, 0.0))

    # Drive remaining artificials out of the basis; drop redundant rows.
    keep_rows = []
    for i in range(m):
        if basis[i] >= n:
            piv = -1
            for j in range(n):
                if abs(T[i, j]) > tol:
                    piv = j
                    break
            if piv >= 0:
                _pivot(T, basis, i, piv)
                keep_rows.append(i)
            # else: redundant constraint, row dropped below
        else:
            keep_rows.append(i)
    rows = [i for i in keep_rows]
    T2 = np.zeros((len(rows) + 1, n + 1))
    T2[:len(rows), :n] = T[rows][:, :n]
    T2[:len(rows), -1] = T[rows][:, -1]
    basis2 = [basis[i] for i in rows]

    # Phase 2: rebuild reduced costs for the true objective.
    T2[len(rows), :n] = c
    for r, jb in enumerate(basis2):
        T2[len(rows)] -= c[jb] * T2[r]
    status = _bland_loop(T2, basis2, n, tol, max_iter)
    if status == "unbounded":
        return LPResult("unbounded", None, None)
    x = np.zeros(n)
    for r, jb in enumerate(basis2):
        x[jb] = max(T2[r, -1], 0.0)
    return LPResult("optimal", x, float(c @ x))


def solve_lp(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None,
             nonneg: bool = True, maximize: bool = False,
             tol: float = TOL) -> LPResult:
    """Solve min (or max) cᵀx subject to A_ub x ≤ b_ub and A_eq x = b_eq.

    With nonneg=True variables are restricted to x ≥ 0; otherwise they are
    free (internally split into positive and negative parts).
    """
    c = np.atleast_1d(np.asarray(c, dtype=float))
    n = c.shape[0]
    if maximize:
        c = -c
    rows = []
    rhs = []
    nslack = 0 if A_ub is None else np.asarray(A_ub).shape[0]
    if A_ub is not None:
        A_ub = np.atleast_2d(np.asarray(A_ub, dtype=float))
        b_ub = np.atleast_1d(np.asarray(b_ub, dtype=float))
        for i in range(A_ub.shape[0]):
            rows.append((A_ub[i], i))
            rhs.append(b_ub[i])
    if A_eq is not None:
        A_eq = np.atleast_2d(np.asarray(A_eq, dtype=float))
        b_eq = np.atleast_1d(np.asarray(b_eq, dtype=float))
        for i in range(A_eq.shape[0]):
            rows.append((A_eq[i], -1))
            rhs.append(b_eq[i])
    m = len(rows)
    width = (n if nonneg else 2 * n) + nslack
    A = np.zeros((m, width))
    for r, (arow, slack_idx) in enumerate(rows):
        if nonneg:
            A[r, :n] = arow
        else:
            A[r, :n] = arow
            A[r, n:2 * n] = -arow
        if slack_idx >= 0:
            A[r, (n if nonneg else 2 * n) + slack_idx] = 1.0
    cc = np.zeros(width)
    if nonneg:
        cc[:n] = c
    else:
        cc[:n] = c
        cc[n:2 * n] = -c
    res = _solve_standard(cc, A, np.asarray(rhs, dtype=float), tol=tol)
    if res.status != "optimal":
        return res
    if nonneg:
        x = res.x[:n]
    else:
        x = res.x[:n] - res.x[n:2 * n]
    value = float(np.dot(x, c))  # minimized objective (c was negated for max)
    if maximize:
        value = -value
    return LPResult("optimal", x, value)
