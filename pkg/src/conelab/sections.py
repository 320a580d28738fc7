"""Haar-random centered sections of an ambient cone and their sphericity.

A section is spanned by the order unit plus a random orthonormal k-frame
drawn in the orthogonal complement of the unit direction, so the unit ray
is always contained and the frame never grazes it. The gauge of the
normalized section, restricted to the section's unit sphere, measures how
far the section is from a perfectly round (euclidean) cone; its sup/inf
sandwich the section between two round cones.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .cones import (ConeSpec, cone_halfspaces, membership, unvec_hermitian,
                    vec_hermitian)
from .errors import InvalidConeError, ModeError

MASK64 = (1 << 64) - 1
ELL1_HALFSPACE_CAP = 20  # 2^n section halfspaces kept explicit up to here
CHUNK = 2048


def derive_seed(*parts) -> int:
    """Deterministic 64-bit sub-seed from a tuple of integers."""
    ss = np.random.SeedSequence([int(p) & MASK64 for p in parts])
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class Subspace:
    """Orthonormal k-frame in R^n with its seed provenance."""
    ambient_dim: int
    section_dim: int
    frame: np.ndarray
    seed: int

    def __post_init__(self):
        self.frame.setflags(write=False)


def haar_subspace(n: int, k: int, seed: int) -> Subspace:
    """Haar-distributed orthonormal n x k frame (QR of a Gaussian draw).

    The R-diagonal sign fix makes the distribution exactly rotation
    invariant; a rank-deficient draw (probability zero, pivot < 1e-13)
    triggers a redraw with an incremented sub-seed.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    base = int(seed) & MASK64
    for attempt in range(64):
        rng = np.random.default_rng(base if attempt == 0
                                    else derive_seed(base, attempt))
        G = rng.standard_normal((n, k))
        Q, R = np.linalg.qr(G)
        diag = np.diag(R)
        if np.min(np.abs(diag)) < 1e-13:
            continue
        Q = Q * np.sign(diag)[None, :]
        return Subspace(n, k, Q.copy(), int(seed))
    raise RuntimeError("could not draw a full-rank Gaussian frame")


def _unit_complement(cone: ConeSpec) -> np.ndarray:
    """Orthonormal basis (columns) of the complement of the unit direction."""
    dim = cone.ambient_dim
    e = cone.unit / np.linalg.norm(cone.unit)
    e0 = np.zeros(dim)
    e0[0] = 1.0
    diff = e0 - e
    nrm = np.linalg.norm(diff)
    if nrm < 1e-14:
        H = np.eye(dim)
    else:
        u = diff / nrm
        H = np.eye(dim) - 2.0 * np.outer(u, u)  # swaps e0 and e
    return H[:, 1:]


@dataclass(frozen=True)
class SectionCone:
    """A centered section: t, x maps to t*e + scale * directions @ x."""
    ambient: ConeSpec
    subspace: Subspace
    scale: float
    directions: np.ndarray          # ambient_dim x k
    halfspaces: np.ndarray | None   # rows b_i; section = {t >= max(-b_i . x)}

    def __post_init__(self):
        self.directions.setflags(write=False)
        if self.halfspaces is not None:
            self.halfspaces.setflags(write=False)

    @property
    def k(self) -> int:
        return self.subspace.section_dim

    def ambient_point(self, t: float, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return t * self.ambient.unit + self.scale * (self.directions @ x)

    def membership(self, t: float, x, tol: float = 1e-9) -> bool:
        return membership(self.ambient, self.ambient_point(t, x), tol=tol)

    def gauge(self, x) -> float:
        return float(self.gauge_batch(np.asarray(x, dtype=float)[None, :])[0])

    def gauge_batch(self, X: np.ndarray) -> np.ndarray:
        """Section gauge for each direction row of X (N x k)."""
        fam = self.ambient.family
        s = self.scale
        out = np.empty(X.shape[0])
        for lo in range(0, X.shape[0], CHUNK):
            ch = X[lo:lo + CHUNK]
            Z = ch @ self.directions.T
            if fam == "euclidean":
                v = np.maximum(0.0, self.ambient.c * s *
                               np.linalg.norm(Z[:, 1:], axis=1) - s * Z[:, 0])
            elif fam == "ell1":
                v = np.maximum(0.0, s * np.abs(Z[:, 1:]).sum(axis=1) - s * Z[:, 0])
            elif fam == "ellinf":
                v = np.maximum(0.0, s * np.abs(Z[:, 1:]).max(axis=1) - s * Z[:, 0])
            elif fam == "polyhedral":
                H = self.ambient.halfspaces
                den = H @ self.ambient.unit
                v = np.maximum(0.0, -s * (Z @ H.T) / den[None, :]).max(axis=1)
            else:  # psd
                v = np.empty(ch.shape[0])
                for i in range(ch.shape[0]):
                    M = unvec_hermitian(Z[i], self.ambient.d)
                    v[i] = max(0.0, -s * float(np.linalg.eigvalsh(M)[0]))
            out[lo:lo + ch.shape[0]] = v
        return out

    def gauge_and_subgrad(self, x: np.ndarray):
        """Gauge value and a subgradient with respect to the direction x."""
        fam = self.ambient.family
        s = self.scale
        z = self.directions @ x
        if fam == "euclidean":
            nx = np.linalg.norm(z[1:])
            val = max(0.0, self.ambient.c * s * nx - s * z[0])
            gz = np.zeros_like(z)
            if val > 0 and nx > 1e-300:
                gz[0] = -s
                gz[1:] = s * self.ambient.c * z[1:] / nx
        elif fam == "ell1":
            val = max(0.0, s * np.abs(z[1:]).sum() - s * z[0])
            gz = np.zeros_like(z)
            if val > 0:
                gz[0] = -s
                gz[1:] = s * np.sign(z[1:])
        elif fam == "ellinf":
            i = 1 + int(np.argmax(np.abs(z[1:])))
            val = max(0.0, s * abs(z[i]) - s * z[0])
            gz = np.zeros_like(z)
            if val > 0:
                gz[0] = -s
                gz[i] = s * np.sign(z[i])
        elif fam == "polyhedral":
            H = self.ambient.halfspaces
            den = H @ self.ambient.unit
            vals = -s * (H @ z) / den
            i = int(np.argmax(vals))
            val = max(0.0, float(vals[i]))
            gz = -s * H[i] / den[i] if val > 0 else np.zeros_like(z)
        else:  # psd
            M = unvec_hermitian(z, self.ambient.d)
            w, V = np.linalg.eigh(M)
            val = max(0.0, -s * float(w[0]))
            v0 = V[:, 0]
            gz = -s * vec_hermitian(np.outer(v0, v0.conj())) if val > 0 \
                else np.zeros_like(z)
        return val, self.directions.T @ gz

    def as_polyhedral(self) -> ConeSpec:
        """The section as a (k+1)-dim polyhedral cone with unit (1, 0)."""
        if self.halfspaces is None:
            raise ModeError("section has no explicit halfspace representation")
        rows = np.hstack([np.ones((self.halfspaces.shape[0], 1)),
                          self.halfspaces])
        return ConeSpec.polyhedral(halfspaces=rows)

    def to_json_dict(self) -> dict:
        return {"ambient": self.ambient.to_json(),
                "scale": self.scale,
                "seed": self.subspace.seed,
                "k": self.k,
                "frame": self.subspace.frame.tolist()}


def centered_section(cone: ConeSpec, sub: Subspace, scale: float) -> SectionCone:
    """Intersect the cone with span{e} + scale * (complement frame) R^k."""
    if sub.ambient_dim != cone.ambient_dim - 1:
        raise ValueError(
            f"subspace lives in dim {sub.ambient_dim}, expected "
            f"{cone.ambient_dim - 1} (complement of the unit direction)")
    if scale <= 0:
        raise ValueError("scale must be positive")
    D = _unit_complement(cone) @ sub.frame
    B = None
    fam = cone.family
    n = cone.ambient_dim - 1
    if fam in ("ellinf", "polyhedral") or (fam == "ell1"
                                           and n <= ELL1_HALFSPACE_CAP):
        H = cone_halfspaces(cone)
        den = H @ cone.unit
        if np.any(den <= 0):
            raise InvalidConeError("unit is not interior: some a_i . e <= 0")
        B = scale * (H @ D) / den[:, None]
    return SectionCone(cone, sub, float(scale), D, B)


def _ambient_gauge_batch(cone: ConeSpec, Z: np.ndarray) -> np.ndarray:
    fam = cone.family
    if fam == "euclidean":
        return np.maximum(0.0, cone.c * np.linalg.norm(Z[:, 1:], axis=1) - Z[:, 0])
    if fam == "ell1":
        return np.maximum(0.0, np.abs(Z[:, 1:]).sum(axis=1) - Z[:, 0])
    if fam == "ellinf":
        return np.maximum(0.0, np.abs(Z[:, 1:]).max(axis=1) - Z[:, 0])
    if fam == "polyhedral":
        den = cone.halfspaces @ cone.unit
        return np.maximum(0.0, -(Z @ cone.halfspaces.T) / den[None, :]).max(axis=1)
    out = np.empty(Z.shape[0])
    for i in range(Z.shape[0]):
        out[i] = max(0.0, -float(np.linalg.eigvalsh(
            unvec_hermitian(Z[i], cone.d))[0]))
    return out


def normalize_scale(cone: ConeSpec, samples: int = 100_000, seed: int = 0,
                    sphere: str = "ambient") -> float:
    """Scale alpha = 1/mean so the gauge has spherical mean 1.

    The mean is the Monte Carlo average of the unit-scale gauge over
    uniform points of the full ambient unit sphere. With
    sphere="complement" the average runs over the sphere of the unit
    direction's orthogonal complement instead (the sphere random sections
    actually live in; the two differ by O(1/n)).
    """
    if samples < 1000:
        raise ValueError("need at least 1000 samples")
    if sphere not in ("ambient", "complement"):
        raise ValueError(f"unknown sphere {sphere!r}")
    rng = np.random.default_rng(int(seed) & MASK64)
    embed = None if sphere == "ambient" else _unit_complement(cone)
    dim = cone.ambient_dim if embed is None else cone.ambient_dim - 1
    total = 0.0
    done = 0
    while done < samples:
        m = min(CHUNK, samples - done)
        G = rng.standard_normal((m, dim))
        G /= np.linalg.norm(G, axis=1)[:, None]
        if embed is not None:
            G = G @ embed.T
        total += float(_ambient_gauge_batch(cone, G).sum())
        done += m
    mean = total / samples
    if mean <= 1e-300:
        raise InvalidConeError("gauge has zero spherical mean (cone fills space)")
    return 1.0 / mean


@dataclass(frozen=True)
class SphericityReport:
    eta_sup: float
    eta_inf: float
    oscillation: float
    method: str           # "exact" | "sampled"
    samples_used: int
    degenerate: bool = False


def _report(sup: float, inf: float, method: str, samples: int,
            degenerate: bool) -> SphericityReport:
    osc = max(sup - 1.0, 1.0 - inf)
    return SphericityReport(float(sup), float(inf), float(osc), method,
                            int(samples), degenerate)


def _exact_sphericity(section: SectionCone) -> SphericityReport:
    B = section.halfspaces
    pts = -B
    norms = np.linalg.norm(pts, axis=1)
    sup = float(norms.max()) if norms.size else 0.0
    k = section.k
    if k == 1:
        up = float(pts[:, 0].max())
        down = float(-pts[:, 0].min())
        inf = min(up, down)
        if inf <= 1e-12:
            return _report(sup, 0.0, "exact", 0, True)
        return _report(sup, inf, "exact", 0, False)
    try:
        hull = ConvexHull(pts)
    except QhullError:
        return _report(sup, 0.0, "exact", 0, True)  # flat point set
    dists = -hull.equations[:, -1]  # facet distances from the origin
    inf = float(dists.min())
    if inf <= 1e-12:
        return _report(sup, 0.0, "exact", 0, True)
    return _report(sup, inf, "exact", 0, False)


def _refine(section: SectionCone, x0: np.ndarray, ascend: bool,
            max_iter: int = 200):
    """Projected (sub)gradient on the sphere with step halving."""
    x = x0 / np.linalg.norm(x0)
    val, grad = section.gauge_and_subgrad(x)
    evals = 1
    step = 0.1
    sgn = 1.0 if ascend else -1.0
    for _ in range(max_iter):
        if step < 1e-10:
            break
        tang = grad - (grad @ x) * x
        nt = np.linalg.norm(tang)
        if nt < 1e-14:
            break
        cand = x + sgn * step * tang / nt
        cand /= np.linalg.norm(cand)
        cval, cgrad = section.gauge_and_subgrad(cand)
        evals += 1
        if (cval > val) if ascend else (cval < val):
            x, val, grad = cand, cval, cgrad
        else:
            step *= 0.5
    return val, evals


def _sampled_sphericity(section: SectionCone, budget: int,
                        seed: int, starts: int = 50) -> SphericityReport:
    rng = np.random.default_rng(int(seed) & MASK64)
    k = section.k
    X = rng.standard_normal((budget, k))
    X /= np.linalg.norm(X, axis=1)[:, None]
    vals = section.gauge_batch(X)
    used = budget
    order = np.argsort(vals)
    sup = float(vals[order[-1]])
    inf = float(vals[order[0]])
    for idx in order[-starts:]:
        v, ev = _refine(section, X[idx], ascend=True)
        used += ev
        sup = max(sup, v)
    for idx in order[:starts]:
        v, ev = _refine(section, X[idx], ascend=False)
        used += ev
        inf = min(inf, v)
    degenerate = inf <= 1e-12
    return _report(sup, max(inf, 0.0), "sampled", used, degenerate)


def sphericity(section: SectionCone, mode: str = "sampled",
               budget: int = 100_000, seed: int = 0) -> SphericityReport:
    """Sup/inf of the section gauge over the section's unit sphere.

    Exact mode needs explicit section halfspaces and k <= 3; it reads the
    sup off the largest halfspace norm and the inf off the inradius of the
    convex hull of the negated halfspace vectors. Sampled mode scans
    `budget` random directions and polishes the extremes by projected
    subgradient ascent/descent (50 multistarts each).
    """
    if mode == "exact":
        if section.halfspaces is None or section.k > 3:
            raise ModeError("exact sphericity needs halfspaces and k <= 3")
        return _exact_sphericity(section)
    if mode != "sampled":
        raise ModeError(f"unknown sphericity mode {mode!r}")
    return _sampled_sphericity(section, budget, seed)


@dataclass(frozen=True)
class SweepTrial:
    n: int
    trial: int
    oscillation: float
    eta_sup: float
    eta_inf: float
    method: str


@dataclass(frozen=True)
class SweepSummary:
    n: int
    fraction_exceeding: float
    median: float
    q1: float
    q3: float


@dataclass(frozen=True)
class SweepResult:
    trials: list
    summary: list


def _build_cone(family: str, n: int, c: float) -> ConeSpec:
    if family == "euclidean":
        return ConeSpec.euclidean(n, c=c)
    if family == "ell1":
        return ConeSpec.ell1(n)
    if family == "ellinf":
        return ConeSpec.ellinf(n)
    raise InvalidConeError(f"sweeps support euclidean/ell1/ellinf, not {family!r}")


EXACT_ROW_CAP = 70_000  # hull cost guard: above this, sample instead


def _sweep_one(args):
    cone, alpha, k, master_seed, n, trial, budget = args
    trial_seed = (int(master_seed) & MASK64) ^ trial  # spec'd derivation
    sub = haar_subspace(cone.ambient_dim - 1, k, trial_seed)
    section = centered_section(cone, sub, alpha)
    exact_ok = (k <= 3 and section.halfspaces is not None
                and section.halfspaces.shape[0] <= EXACT_ROW_CAP)
    rep = sphericity(section, "exact" if exact_ok else "sampled",
                     budget=budget,
                     seed=derive_seed(master_seed, n, trial, 0x5B))
    return SweepTrial(n, trial, rep.oscillation, rep.eta_sup, rep.eta_inf,
                      rep.method)


def concentration_sweep(cone_family: str, k: int, n_list, trials: int,
                        epsilon: float, seed: int, budget: int = 20_000,
                        c: float = 1.0, norm_samples: int = 100_000,
                        workers: int = 1) -> SweepResult:
    """Oscillation statistics over random sections, per ambient size n.

    Per-trial seeds are seed XOR trial_index; rows are ordered by
    (n, trial) so the output is independent of worker scheduling.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    trial_rows = []
    summaries = []
    for n in n_list:
        cone = _build_cone(cone_family, int(n), c)
        # sections live in the unit complement; normalizing over that sphere
        # keeps the euclidean control family at oscillation exactly zero
        alpha = normalize_scale(cone, norm_samples, derive_seed(seed, n, 0xA1),
                                sphere="complement")
        jobs = [(cone, alpha, k, seed, int(n), t, budget)
                for t in range(trials)]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                rows = list(pool.map(_sweep_one, jobs))
        else:
            rows = [_sweep_one(j) for j in jobs]
        trial_rows.extend(rows)
        osc = np.array([r.oscillation for r in rows])
        q1, med, q3 = np.quantile(osc, [0.25, 0.5, 0.75])
        summaries.append(SweepSummary(int(n), float(np.mean(osc > epsilon)),
                                      float(med), float(q1), float(q3)))
    return SweepResult(trial_rows, summaries)
