"""Anticommuting gamma matrices and the ball-cone/quantum-cone embedding.

A chain of 2m hermitian matrices on m qubits pairwise anticommutes and
squares to the identity. Mapping (t, x) to t*1 + c * sum_j x_j gamma_j sends
the euclidean cone {t >= c ||x||_2} exactly onto the PSD matrices inside the
image subspace, and the trace formulas give a positive unital left inverse.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cones import ConeSpec, HermitianMatrix, membership
from .errors import SizeError

M_CAP = 10  # dimension 2^m <= 1024

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
ID2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class GammaSystem:
    m: int
    matrices: tuple
    c: float

    @property
    def dim(self) -> int:
        return 2 ** self.m


def _chain(site_ops) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for op in site_ops:
        out = np.kron(out, op)
    return out


def gamma_matrices(m: int, c: float = 1.0) -> GammaSystem:
    """Jordan-Wigner chain: matrix 2j-1 puts sigma_x at site j, matrix 2j
    puts sigma_y there, with sigma_z on all earlier sites."""
    if not 1 <= m <= M_CAP:
        raise SizeError(f"qubit count m must be in 1..{M_CAP}")
    mats = []
    for j in range(1, m + 1):
        prefix = [PAULI_Z] * (j - 1)
        suffix = [ID2] * (m - j)
        mats.append(HermitianMatrix(_chain(prefix + [PAULI_X] + suffix)))
        mats.append(HermitianMatrix(_chain(prefix + [PAULI_Y] + suffix)))
    return GammaSystem(m, tuple(mats), float(c))


def gamma_system_for(n: int, c: float = 1.0) -> GammaSystem:
    """System large enough for n coefficient slots (m = ceil(n/2))."""
    return gamma_matrices((n + 1) // 2, c=c)


def embed_phi(sys: GammaSystem, t: float, x) -> HermitianMatrix:
    """t * identity + c * sum_j x_j gamma_j (x zero-padded to 2m slots)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape[0] > 2 * sys.m:
        raise SizeError(f"{x.shape[0]} coefficients exceed 2m={2*sys.m}")
    A = t * np.eye(sys.dim, dtype=complex)
    for xj, g in zip(x, sys.matrices):
        A = A + sys.c * xj * g.entries
    return HermitianMatrix(A)


def inverse_phi_prime(sys: GammaSystem, A: HermitianMatrix):
    """Left inverse: (tr A, tr(A gamma_i)/c) / 2^m. Returns (t, x[2m])."""
    if A.dim != sys.dim:
        raise ValueError(f"matrix dim {A.dim} != system dim {sys.dim}")
    norm = float(sys.dim)
    t = float(np.real(np.trace(A.entries))) / norm
    x = np.array([float(np.real(np.trace(A.entries @ g.entries)))
                  for g in sys.matrices]) / (sys.c * norm)
    return t, x


@dataclass
class SectionCheckReport:
    """Outcome of the cone <-> PSD consistency sampling."""
    trials: int
    cone_to_psd_failures: int
    outside_to_nonpsd_failures: int
    psd_to_cone_failures: int
    max_violation: float

    @property
    def passed(self) -> bool:
        return (self.cone_to_psd_failures == 0
                and self.outside_to_nonpsd_failures == 0
                and self.psd_to_cone_failures == 0)


def verify_section_of_qm(sys: GammaSystem, trials: int,
                         seed: int = 0) -> SectionCheckReport:
    """Sample-based check that the embedding is a section of the PSD cone.

    (i) cone points map to PSD matrices, (ii) strictly-outside points map
    to non-PSD matrices, (iii) the left inverse maps random PSD matrices
    back into the cone.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed & (2 ** 64 - 1))
    n = 2 * sys.m
    cone = ConeSpec.euclidean(n, c=sys.c)
    in_fail = out_fail = inv_fail = 0
    worst = 0.0
    for _ in range(trials):
        x = rng.normal(size=n)
        r = sys.c * np.linalg.norm(x)
        margin = rng.uniform(0.01, 1.0) * max(r, 1.0)

        lam = embed_phi(sys, r + margin, x).eigenvalues()[0]
        if lam < -1e-10:
            in_fail += 1
        worst = max(worst, -lam)

        lam = embed_phi(sys, r - margin, x).eigenvalues()[0]
        if lam >= -1e-12:
            out_fail += 1

        H = rng.normal(size=(sys.dim, sys.dim)) \
            + 1j * rng.normal(size=(sys.dim, sys.dim))
        H = (H + H.conj().T) / 2
        A = HermitianMatrix(H @ H)  # PSD by construction
        t, xv = inverse_phi_prime(sys, A)
        v = np.concatenate([[t], xv])
        if not membership(cone, v, tol=1e-10):
            inv_fail += 1
        worst = max(worst, sys.c * np.linalg.norm(xv) - t)
    return SectionCheckReport(trials, in_fail, out_fail, inv_fail,
                              float(max(worst, 0.0)))
