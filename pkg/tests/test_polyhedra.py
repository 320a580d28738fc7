import numpy as np
import pytest
from scipy.spatial import ConvexHull

from conelab.errors import DegenerateConeError
from conelab.polyhedra import (cone_extreme_rays, polygon_from_halfspaces_2d,
                               polytope_vertices)


def _ray_set_close(rays, expected, tol=1e-8):
    rays = np.asarray(rays, dtype=float)
    expected = np.asarray(expected, dtype=float)
    expected = expected / np.linalg.norm(expected, axis=1)[:, None]
    assert rays.shape[0] == expected.shape[0]
    for e in expected:
        assert np.min(np.linalg.norm(rays - e, axis=1)) < tol


def test_orthant_rays():
    H = np.eye(3)
    rays = cone_extreme_rays(H)
    _ray_set_close(rays, np.eye(3))


def test_ell1_cone_rays_from_halfspaces():
    # {(t,x1,x2): t >= |x1| + |x2|} via its 4 sign halfspaces
    H = np.array([[1, -s1, -s2] for s1 in (-1, 1) for s2 in (-1, 1)], float)
    rays = cone_extreme_rays(H)
    expected = [(1, 1, 0), (1, -1, 0), (1, 0, 1), (1, 0, -1)]
    _ray_set_close(rays, expected)


def test_square_cone_rays():
    # {(t,x1,x2): t >= max(|x1|,|x2|)} -> 4 corner rays
    H = np.array([[1, s, 0] for s in (-1, 1)] + [[1, 0, s] for s in (-1, 1)], float)
    rays = cone_extreme_rays(H)
    expected = [(1, s1, s2) for s1 in (-1, 1) for s2 in (-1, 1)]
    _ray_set_close(rays, expected)


def test_redundant_halfspaces_ignored():
    H = np.vstack([np.eye(2), [[1, 1]], [[2, 1]]])
    rays = cone_extreme_rays(H)
    _ray_set_close(rays, np.eye(2))


def test_line_containing_cone_rejected():
    with pytest.raises(DegenerateConeError):
        cone_extreme_rays(np.array([[1.0, 0.0], [-1.0, 0.0]]))


def test_unit_cube_vertices():
    A = np.vstack([np.eye(3), -np.eye(3)])
    b = np.concatenate([np.ones(3), np.zeros(3)])
    verts = polytope_vertices(A, b)
    assert verts.shape == (8, 3)
    expected = {tuple(v) for v in np.ndindex(2, 2, 2)}
    got = {tuple(np.round(v).astype(int)) for v in verts}
    assert got == expected
    assert np.abs(verts - np.round(verts)).max() < 1e-9


def test_unbounded_polytope_rejected():
    with pytest.raises(DegenerateConeError):
        polytope_vertices(np.array([[1.0, 0.0]]), np.array([1.0]))


@pytest.mark.parametrize("trial", range(10))
def test_random_polytopes_against_hull_oracle(trial):
    # hull of random points -> H-rep -> my vertex enumeration recovers them
    rng = np.random.default_rng(300 + trial)
    d = int(rng.integers(2, 4))
    pts = rng.normal(size=(12, d))
    hull = ConvexHull(pts)
    A = hull.equations[:, :-1]
    b = -hull.equations[:, -1]
    verts = polytope_vertices(A, b)
    expected = pts[hull.vertices]
    assert verts.shape[0] == expected.shape[0]
    for e in expected:
        assert np.min(np.linalg.norm(verts - e, axis=1)) < 1e-7


def test_polygon_square():
    B = np.vstack([np.eye(2), -np.eye(2)])
    c = np.ones(4)
    verts = polygon_from_halfspaces_2d(B, c)
    assert verts.shape == (4, 2)
    assert np.allclose(np.abs(verts), 1.0, atol=1e-12)
    # CCW ordering by angle
    ang = np.arctan2(verts[:, 1], verts[:, 0])
    assert np.all(np.diff(ang) > 0)


def test_polygon_matches_vertex_enum():
    rng = np.random.default_rng(7)
    dirs = rng.normal(size=(25, 2))
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    c = rng.uniform(0.5, 2.0, size=25)
    poly = polygon_from_halfspaces_2d(dirs, c)
    verts = polytope_vertices(dirs, c)
    assert poly.shape[0] == verts.shape[0]
    for v in verts:
        assert np.min(np.linalg.norm(poly - v, axis=1)) < 1e-8
