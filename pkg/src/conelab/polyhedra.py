"""Polyhedral enumeration: extreme rays of pointed cones and polytope vertices.

Double description runs in floating point with a pivot tolerance of 1e-10;
every returned ray/vertex is re-verified against the halfspace system, so a
borderline pivot can only lose redundant elements, not fabricate wrong ones.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import ConvexHull

from .errors import DegenerateConeError

PIVOT_TOL = 1e-10


def _independent_rows(H: np.ndarray, tol: float) -> list:
    """Indices of a maximal linearly independent row subset (greedy QR)."""
    d = H.shape[1]
    idx = []
    basis = np.zeros((0, d))
    for i in range(H.shape[0]):
        row = H[i]
        if basis.shape[0]:
            row = row - basis.T @ (basis @ row)
        nrm = np.linalg.norm(row)
        if nrm > tol:
            basis = np.vstack([basis, row / nrm])
            idx.append(i)
            if len(idx) == d:
                break
    return idx


def cone_extreme_rays(halfspaces: np.ndarray, tol: float = PIVOT_TOL) -> np.ndarray:
    """Extreme rays (unit vectors, one per row) of {x : H x >= 0}.

    Requires the cone to be pointed (rank(H) = dim); raises
    DegenerateConeError otherwise.
    """
    H = np.atleast_2d(np.asarray(halfspaces, dtype=float))
    norms = np.linalg.norm(H, axis=1)
    if np.any(norms < tol):
        H = H[norms >= tol]
        norms = norms[norms >= tol]
    H = H / norms[:, None]
    m, d = H.shape
    init = _independent_rows(H, tol)
    if len(init) < d:
        raise DegenerateConeError("cone contains a line (rank-deficient halfspaces)")

    B = H[init]
    rays = np.linalg.inv(B).T.copy()  # row i solves B r = e_i
    rays /= np.linalg.norm(rays, axis=1)[:, None]
    order = init + [i for i in range(m) if i not in set(init)]
    # tight[r, j]: ray r is tight on processed constraint j
    tight = np.abs(rays @ H[order[:d]].T) <= 10 * tol

    for step in range(d, m):
        a = H[order[step]]
        v = rays @ a
        pos = v > tol
        neg = v < -tol
        zero = ~pos & ~neg
        if not neg.any():
            rays_new = rays
            tight_new = np.hstack([tight, zero[:, None]])
        else:
            keep = pos | zero
            new_rays = []
            new_tight = []
            pos_idx = np.where(pos)[0]
            neg_idx = np.where(neg)[0]
            for p in pos_idx:
                for q in neg_idx:
                    common = tight[p] & tight[q]
                    if common.sum() < d - 2:
                        continue
                    # adjacency: no third ray tight on the whole common set
                    others = (tight[:, common].all(axis=1))
                    others[p] = others[q] = False
                    if others.any():
                        continue
                    w = v[p] * rays[q] - v[q] * rays[p]
                    nrm = np.linalg.norm(w)
                    if nrm < tol:
                        continue
                    w /= nrm
                    new_rays.append(w)
                    new_tight.append(np.concatenate([common, [True]]))
            rays_new = np.vstack([rays[keep]] + ([new_rays] if new_rays else []))
            kept_tight = np.hstack([tight[keep], zero[keep][:, None]])
            if new_tight:
                tight_new = np.vstack([kept_tight, np.array(new_tight)])
            else:
                tight_new = kept_tight
        rays = rays_new
        tight = tight_new
        if rays.shape[0] == 0:
            return np.zeros((0, d))

    # post-verification: feasibility, extremality, dedupe
    feas = (rays @ H.T).min(axis=1) >= -1e-8
    rays = rays[feas]
    out = []
    for r in rays:
        act = H[np.abs(H @ r) <= 1e-8]
        if act.shape[0] and np.linalg.matrix_rank(act, tol=1e-8) >= d - 1:
            out.append(r)
    if not out:
        return np.zeros((0, d))
    rays = np.array(out)
    keep = []
    for i, r in enumerate(rays):
        if all(abs(r @ rays[j]) < 1 - 1e-9 for j in keep):
            keep.append(i)
    return rays[keep]


def polytope_vertices(A: np.ndarray, b: np.ndarray, tol: float = PIVOT_TOL) -> np.ndarray:
    """Vertices of the bounded polytope {x : A x <= b} via homogenization.

    Raises DegenerateConeError if the polytope is unbounded (a recession
    ray shows up with zero homogenizing coordinate).
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    m, d = A.shape
    H = np.zeros((m + 1, d + 1))
    H[0, 0] = 1.0
    H[1:, 0] = b
    H[1:, 1:] = -A
    rays = cone_extreme_rays(H, tol=tol)
    if rays.shape[0] == 0:
        return np.zeros((0, d))
    s = rays[:, 0]
    if np.any(s <= 1e-9):
        raise DegenerateConeError("polytope is unbounded")
    verts = rays[:, 1:] / s[:, None]
    # dedupe (homogenization can emit the same vertex from two scalings)
    keep = []
    for i in range(verts.shape[0]):
        if all(np.linalg.norm(verts[i] - verts[j]) > 1e-8 for j in keep):
            keep.append(i)
    return verts[keep]


def polygon_from_halfspaces_2d(B: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Ordered (CCW) vertices of the polygon {x in R^2 : B x <= c}, 0 interior.

    Uses the polar transform: constraints map to points B_i/c_i whose convex
    hull identifies the non-redundant constraints; adjacent hull points
    intersect in primal vertices.
    """
    B = np.atleast_2d(np.asarray(B, dtype=float))
    c = np.atleast_1d(np.asarray(c, dtype=float))
    if np.any(c <= 0):
        raise DegenerateConeError("origin must lie strictly inside the polygon")
    polar = B / c[:, None]
    hull = ConvexHull(polar)
    cyc = list(hull.vertices)
    verts = []
    for i, j in zip(cyc, cyc[1:] + cyc[:1]):
        Mat = np.array([B[i], B[j]])
        rhs = np.array([c[i], c[j]])
        if abs(np.linalg.det(Mat)) < 1e-12:
            continue
        verts.append(np.linalg.solve(Mat, rhs))
    verts = np.array(verts)
    ang = np.arctan2(verts[:, 1], verts[:, 0])
    verts = verts[np.argsort(ang)]
    if verts.shape[0] < 3:
        raise DegenerateConeError("polygon degenerated to fewer than 3 vertices")
    return verts
