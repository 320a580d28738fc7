"""Closed convex cones with a distinguished interior order unit.

Five families are supported, all over real coordinates:

* ``euclidean`` (ratio ``c``): {(t, x) : t >= c * ||x||_2}, ambient n+1
* ``ell1``: {(t, x) : t >= sum |x_i|}, ambient n+1
* ``ellinf``: {(t, x) : t >= max |x_i|}, ambient n+1
* ``polyhedral``: H-representation rows a_i (a_i . v >= 0) and/or generators
* ``psd``: positive semidefinite d x d hermitian matrices, vectorized into
  d^2 real coordinates through an orthonormal hermitian basis

The two scalar functionals everything else builds on are the membership
test and the gauge: gauge(z) is the least t >= 0 with t*e + scale*z inside
the cone, and the order norm is max(gauge(z), gauge(-z)).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import (DegenerateConeError, InvalidConeError, SizeError,
                     UnsupportedFamilyError)
from .polyhedra import cone_extreme_rays, polytope_vertices
from .simplex import solve_lp

MEMBERSHIP_TOL = 1e-9
ELLINF_RAY_CAP = 20  # 2^20 rays; larger n must use closed-form gauges

FAMILIES = ("euclidean", "ell1", "ellinf", "polyhedral", "psd")


def sign_vectors(n: int) -> np.ndarray:
    """All 2^n sign patterns in {-1,+1}^n, binary-counting order."""
    if n > ELLINF_RAY_CAP:
        raise SizeError(f"2^{n} sign vectors exceed the enumeration cap")
    bits = (np.arange(2 ** n)[:, None] >> np.arange(n)[None, :]) & 1
    return (2 * bits - 1).astype(float)


def vec_hermitian(H: np.ndarray) -> np.ndarray:
    """Coordinates of a hermitian matrix in the orthonormal real basis.

    Diagonal entries first, then (sqrt2*Re, sqrt2*Im) per upper-triangle
    entry; the map is a linear isometry for the Frobenius norm.
    """
    H = np.asarray(H, dtype=complex)
    d = H.shape[0]
    iu = np.triu_indices(d, k=1)
    s = np.sqrt(2.0)
    return np.concatenate([np.real(np.diag(H)),
                           s * np.real(H[iu]), s * np.imag(H[iu])])


def unvec_hermitian(v: np.ndarray, d: int) -> np.ndarray:
    """Inverse of vec_hermitian."""
    v = np.asarray(v, dtype=float)
    if v.shape != (d * d,):
        raise ValueError(f"expected {d*d} coordinates, got {v.shape}")
    H = np.zeros((d, d), dtype=complex)
    H[np.diag_indices(d)] = v[:d]
    iu = np.triu_indices(d, k=1)
    k = len(iu[0])
    s = 1.0 / np.sqrt(2.0)
    H[iu] = s * (v[d:d + k] + 1j * v[d + k:d + 2 * k])
    H[(iu[1], iu[0])] = np.conj(H[iu])
    return H


class HermitianMatrix:
    """A d x d complex matrix with exact conjugate symmetry."""

    def __init__(self, entries):
        arr = np.asarray(entries, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("hermitian matrix must be square")
        if np.max(np.abs(arr - arr.conj().T)) > 1e-10 * max(1.0, np.abs(arr).max()):
            raise ValueError("matrix is not hermitian")
        self.entries = (arr + arr.conj().T) / 2.0
        self.entries.setflags(write=False)
        self.dim = arr.shape[0]

    def eigenvalues(self) -> np.ndarray:
        """Real eigenvalues in ascending order."""
        return np.linalg.eigvalsh(self.entries)

    def trace(self) -> float:
        return float(np.real(np.trace(self.entries)))

    def vectorize(self) -> np.ndarray:
        return vec_hermitian(self.entries)

    def __str__(self) -> str:
        rows = []
        for row in self.entries:
            rows.append(" ".join(f"{z.real:+.6g}{z.imag:+.6g}i" for z in row))
        return "\n".join(rows)


@dataclass(frozen=True, eq=False)
class ConeSpec:
    """A closed cone family plus the data needed for its functionals."""

    family: str
    ambient_dim: int
    unit: np.ndarray
    c: float | None = None
    d: int | None = None
    halfspaces: np.ndarray | None = None
    generators: np.ndarray | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidConeError(f"unknown family {self.family!r}")
        object.__setattr__(self, "unit", np.asarray(self.unit, dtype=float))
        self.unit.setflags(write=False)
        for name in ("halfspaces", "generators"):
            val = getattr(self, name)
            if val is not None:
                arr = np.atleast_2d(np.asarray(val, dtype=float))
                arr.setflags(write=False)
                object.__setattr__(self, name, arr)
        if self.family == "polyhedral" and self.halfspaces is not None:
            if np.any(self.halfspaces @ self.unit <= 0):
                raise InvalidConeError("unit is not interior: some a_i . e <= 0")

    # -- constructors -------------------------------------------------
    @staticmethod
    def euclidean(n: int, c: float = 1.0) -> "ConeSpec":
        """Ball cone over R^n with length-diameter ratio c."""
        if c <= 0:
            raise InvalidConeError("euclidean ratio c must be positive")
        e = np.zeros(n + 1)
        e[0] = 1.0
        return ConeSpec("euclidean", n + 1, e, c=float(c))

    @staticmethod
    def ell1(n: int) -> "ConeSpec":
        e = np.zeros(n + 1)
        e[0] = 1.0
        return ConeSpec("ell1", n + 1, e)

    @staticmethod
    def ellinf(n: int) -> "ConeSpec":
        e = np.zeros(n + 1)
        e[0] = 1.0
        return ConeSpec("ellinf", n + 1, e)

    @staticmethod
    def polyhedral(halfspaces=None, generators=None, unit=None) -> "ConeSpec":
        if halfspaces is None and generators is None:
            raise InvalidConeError("polyhedral cone needs halfspaces or generators")
        ref = halfspaces if halfspaces is not None else generators
        dim = np.atleast_2d(np.asarray(ref)).shape[1]
        if unit is None:
            unit = np.zeros(dim)
            unit[0] = 1.0
        return ConeSpec("polyhedral", dim, np.asarray(unit, dtype=float),
                        halfspaces=halfspaces, generators=generators)

    @staticmethod
    def psd(d: int) -> "ConeSpec":
        return ConeSpec("psd", d * d, vec_hermitian(np.eye(d)), d=d)

    # -- serialization -------------------------------------------------
    def to_json(self) -> str:
        doc = {"family": self.family}
        if self.family == "euclidean":
            doc["c"] = self.c
            doc["n"] = self.ambient_dim - 1
        elif self.family in ("ell1", "ellinf"):
            doc["n"] = self.ambient_dim - 1
        elif self.family == "psd":
            doc["n"] = self.d
        else:
            doc["n"] = self.ambient_dim
            if self.halfspaces is not None:
                doc["halfspaces"] = self.halfspaces.tolist()
            if self.generators is not None:
                doc["generators"] = self.generators.tolist()
        return json.dumps(doc)

    @staticmethod
    def from_json(text: str) -> "ConeSpec":
        doc = json.loads(text)
        family = doc["family"]
        if family == "euclidean":
            return ConeSpec.euclidean(doc["n"], c=doc.get("c", 1.0))
        if family == "ell1":
            return ConeSpec.ell1(doc["n"])
        if family == "ellinf":
            return ConeSpec.ellinf(doc["n"])
        if family == "psd":
            return ConeSpec.psd(doc["n"])
        if family == "polyhedral":
            return ConeSpec.polyhedral(halfspaces=doc.get("halfspaces"),
                                       generators=doc.get("generators"))
        raise InvalidConeError(f"unknown family {family!r}")


def _check_dim(cone: ConeSpec, v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (cone.ambient_dim,):
        raise ValueError(
            f"vector has shape {v.shape}, cone ambient dim is {cone.ambient_dim}")
    return v


def membership(cone: ConeSpec, v, tol: float = MEMBERSHIP_TOL) -> bool:
    """Whether v lies in the cone up to violation tol."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    v = _check_dim(cone, v)
    if cone.family == "euclidean":
        return cone.c * np.linalg.norm(v[1:]) - v[0] <= tol
    if cone.family == "ell1":
        return np.abs(v[1:]).sum() - v[0] <= tol
    if cone.family == "ellinf":
        x = v[1:]
        mx = np.abs(x).max() if x.size else 0.0
        return mx - v[0] <= tol
    if cone.family == "psd":
        Z = unvec_hermitian(v, cone.d)
        return np.linalg.eigvalsh(Z)[0] >= -tol
    if cone.halfspaces is not None:
        return float((cone.halfspaces @ v).min()) >= -tol
    # generators-only polyhedral cone: nonnegative-combination feasibility LP
    G = cone.generators
    k = G.shape[0]
    n = cone.ambient_dim
    A_eq = np.hstack([G.T, np.eye(n), -np.eye(n)])
    c_obj = np.concatenate([np.zeros(k), np.ones(2 * n)])
    res = solve_lp(c_obj, A_eq=A_eq, b_eq=v)
    return res.status == "optimal" and res.value <= max(tol, 1e-12)


def gauge(cone: ConeSpec, z, scale: float = 1.0) -> float:
    """Least t >= 0 with t*e + scale*z in the cone."""
    z = _check_dim(cone, z)
    if cone.family == "euclidean":
        return max(0.0, cone.c * scale * np.linalg.norm(z[1:]) - scale * z[0])
    if cone.family == "ell1":
        return max(0.0, scale * np.abs(z[1:]).sum() - scale * z[0])
    if cone.family == "ellinf":
        x = z[1:]
        mx = np.abs(x).max() if x.size else 0.0
        return max(0.0, scale * mx - scale * z[0])
    if cone.family == "psd":
        Z = unvec_hermitian(z, cone.d)
        return max(0.0, -scale * float(np.linalg.eigvalsh(Z)[0]))
    if cone.halfspaces is not None:
        denom = cone.halfspaces @ cone.unit
        if np.any(denom <= 0):
            raise InvalidConeError("unit is not interior: some a_i . e <= 0")
        return float(np.max(np.maximum(0.0, -scale * (cone.halfspaces @ z) / denom)))
    # generators-only: min t with t*e + scale*z = G^T lam, lam >= 0
    G = cone.generators
    k = G.shape[0]
    A_eq = np.hstack([cone.unit[:, None], -G.T])
    c_obj = np.concatenate([[1.0], np.zeros(k)])
    res = solve_lp(c_obj, A_eq=A_eq, b_eq=-scale * z)
    if res.status != "optimal":
        raise InvalidConeError("gauge LP infeasible; unit may not be interior")
    return max(0.0, res.value)


def order_norm(cone: ConeSpec, z, scale: float = 1.0) -> float:
    """Order-unit norm: max of the gauges of z and -z."""
    z = _check_dim(cone, z)
    return max(gauge(cone, z, scale), gauge(cone, -z, scale))


def cone_halfspaces(cone: ConeSpec) -> np.ndarray:
    """Explicit H-representation rows a_i with cone = {v : a_i . v >= 0}."""
    n = cone.ambient_dim - 1
    if cone.family == "ell1":
        S = sign_vectors(n)
        return np.hstack([np.ones((S.shape[0], 1)), -S])
    if cone.family == "ellinf":
        rows = np.zeros((2 * n, n + 1))
        rows[:, 0] = 1.0
        rows[:n, 1:] = -np.eye(n)
        rows[n:, 1:] = np.eye(n)
        return rows
    if cone.family == "polyhedral":
        if cone.halfspaces is None:
            raise UnsupportedFamilyError("polyhedral cone has no H-representation")
        return cone.halfspaces
    raise UnsupportedFamilyError(f"no halfspace form for family {cone.family!r}")


def _fibonacci_sphere(count: int) -> np.ndarray:
    """Deterministic quasi-uniform points on S^2 (golden-angle spiral)."""
    i = np.arange(count)
    phi = np.pi * (3.0 - np.sqrt(5.0)) * i
    z = 1.0 - 2.0 * (i + 0.5) / count
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def sphere_mesh(dim: int, count: int) -> np.ndarray:
    """Quasi-uniform unit directions in R^dim (dim <= 3)."""
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        th = 2 * np.pi * np.arange(count) / count
        return np.column_stack([np.cos(th), np.sin(th)])
    if dim == 3:
        return _fibonacci_sphere(count)
    raise SizeError("sphere meshes are only generated for dimensions 1..3")


def extreme_rays(cone: ConeSpec, ray_count: int | None = None) -> np.ndarray:
    """Extreme rays, normalized to unit e-component (rows of the result).

    Euclidean cones are discretized: ray_count boundary directions on the
    x-sphere (required argument for that family).
    """
    n = cone.ambient_dim - 1
    if cone.family == "ell1":
        rays = np.zeros((2 * n, n + 1))
        rays[:, 0] = 1.0
        rays[:n, 1:] = np.eye(n)
        rays[n:, 1:] = -np.eye(n)
        return rays
    if cone.family == "ellinf":
        if n > ELLINF_RAY_CAP:
            raise SizeError(f"ellinf ray enumeration capped at n={ELLINF_RAY_CAP}")
        S = sign_vectors(n)
        return np.hstack([np.ones((S.shape[0], 1)), S])
    if cone.family == "euclidean":
        if ray_count is None:
            raise ValueError("euclidean discretization needs a ray count")
        mesh = sphere_mesh(n, ray_count)
        return np.hstack([np.ones((mesh.shape[0], 1)), mesh / cone.c])
    if cone.family == "polyhedral":
        if cone.halfspaces is not None:
            raw = cone_extreme_rays(cone.halfspaces)
        else:
            raw = np.array(cone.generators, dtype=float)
        ecomp = raw @ cone.unit / float(cone.unit @ cone.unit)
        if np.any(ecomp <= 1e-12):
            raise DegenerateConeError("a ray has nonpositive e-component")
        return raw / ecomp[:, None]
    raise UnsupportedFamilyError(f"extreme rays unsupported for {cone.family!r}")


def effect_polytope_vertices(cone: ConeSpec) -> np.ndarray:
    """Vertices of the order interval [0, e]; always contains 0 and e."""
    n = cone.ambient_dim - 1
    if cone.family == "ell1":
        # bipyramid over the cross-polytope of radius 1/2
        eq = np.zeros((2 * n, n + 1))
        eq[:, 0] = 0.5
        eq[:n, 1:] = 0.5 * np.eye(n)
        eq[n:, 1:] = -0.5 * np.eye(n)
        return np.vstack([np.zeros(n + 1), cone.unit, eq])
    if cone.family == "ellinf":
        if n > ELLINF_RAY_CAP:
            raise SizeError(f"ellinf vertex enumeration capped at n={ELLINF_RAY_CAP}")
        S = sign_vectors(n)
        eq = np.hstack([np.full((S.shape[0], 1), 0.5), 0.5 * S])
        return np.vstack([np.zeros(n + 1), cone.unit, eq])
    if cone.family == "polyhedral":
        H = cone_halfspaces(cone)
        A = np.vstack([-H, H])
        b = np.concatenate([np.zeros(H.shape[0]), H @ cone.unit])
        return polytope_vertices(A, b)
    raise UnsupportedFamilyError(
        f"effect polytope unsupported for family {cone.family!r}")


def extreme_states(cone: ConeSpec) -> np.ndarray:
    """Vertices of the state space {w : w in dual cone, w . e = 1}."""
    n = cone.ambient_dim - 1
    if cone.family == "ell1":
        S = sign_vectors(n)
        return np.hstack([np.ones((S.shape[0], 1)), S])
    if cone.family == "ellinf":
        out = np.zeros((2 * n, n + 1))
        out[:, 0] = 1.0
        out[:n, 1:] = np.eye(n)
        out[n:, 1:] = -np.eye(n)
        return out
    if cone.family == "polyhedral":
        rays = extreme_rays(cone)
        e = cone.unit
        # substitute out the equality w . e = 1 along the largest unit coord
        piv = int(np.argmax(np.abs(e)))
        others = [i for i in range(cone.ambient_dim) if i != piv]
        # w_piv = (1 - sum_{j != piv} e_j w_j) / e_piv
        A = []
        b = []
        for r in rays:
            # r . w >= 0  ->  sum_j (r_j - r_piv e_j / e_piv) w_j >= -r_piv/e_piv
            coeff = np.array([r[j] - r[piv] * e[j] / e[piv] for j in others])
            A.append(-coeff)
            b.append(r[piv] / e[piv])
        verts_red = polytope_vertices(np.array(A), np.array(b))
        out = np.zeros((verts_red.shape[0], cone.ambient_dim))
        for i, vr in enumerate(verts_red):
            out[i, others] = vr
            out[i, piv] = (1.0 - float(np.dot(e[others], vr))) / e[piv]
        return out
    raise UnsupportedFamilyError(
        f"extreme states unsupported for family {cone.family!r}")


def validate_representations(cone: ConeSpec, samples: int = 200,
                             seed: int = 0, tol: float = 1e-8) -> None:
    """Cross-check H- and V-representations of a polyhedral cone.

    Random nonnegative generator combinations must satisfy every halfspace,
    and random halfspace-feasible points must be generator-representable.
    """
    if cone.family != "polyhedral" or cone.halfspaces is None \
            or cone.generators is None:
        return
    rng = np.random.default_rng(seed)
    G = cone.generators
    H = cone.halfspaces
    lam = rng.uniform(0.0, 1.0, size=(samples, G.shape[0]))
    pts = lam @ G
    if float((pts @ H.T).min()) < -tol:
        raise InvalidConeError("V-representation escapes the halfspaces")
    probe = ConeSpec.polyhedral(generators=G)
    for _ in range(min(samples, 50)):
        z = rng.normal(size=cone.ambient_dim)
        t = gauge(cone, z) + 0.5
        v = t * cone.unit + z
        if not membership(probe, v, tol=1e-7):
            raise InvalidConeError("H-feasible point escapes the generators")
