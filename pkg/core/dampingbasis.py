"""
CORE: DAMPING BASIS
- Left/right eigenoperators of the qubit dissipator and their eigenvalues.
- Generator and propagator acting on coefficients l_i = Tr(L_i rho),
  with rho reconstructed as sum_i l_i R_i.
- Closed-form channel image at omega = 0, propagator path otherwise.
- Affine (Bloch) form of the channel and its Pauli transfer matrix.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from core.channels import RateParams, bloch_rates
from core.errors import ParameterError
from core.matkernel import (
    CMat, I2, SIGMA, SIGMA_DAG, SIGMA_Z, PAULIS, as_cmat, mat_exp, validate_density_matrix,
)

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class DampingBasis:
    L: Tuple[CMat, CMat, CMat, CMat]
    R: Tuple[CMat, CMat, CMat, CMat]
    lam: Tuple[float, float, float, float]

    def duality_matrix(self) -> np.ndarray:
        """Tr(L_i R_j); the identity for a dual pair."""
        return np.array([[np.trace(Li @ Rj) for Rj in self.R] for Li in self.L])


@dataclass(frozen=True)
class AffineMap:
    """
    Bloch-vector form b -> diag(Lambda) b + shift.

    decay holds the exponents (-lambda_i t) when the map comes from a generator,
    so 1 - Lambda_i stays accurate at short times.
    """
    Lambda: Tuple[float, float, float]
    shift: Tuple[float, float, float]
    w_eq: float = 0.0
    decay: Optional[Tuple[float, float, float]] = None

    def apply(self, b) -> np.ndarray:
        return np.asarray(self.Lambda) * np.asarray(b, dtype=float) + np.asarray(self.shift)

    @property
    def complements(self) -> Tuple[float, float, float]:
        """(1 - Lambda_1, 1 - Lambda_2, 1 - Lambda_3)."""
        if self.decay is None:
            return tuple(1.0 - lam for lam in self.Lambda)
        return tuple(-math.expm1(-x) for x in self.decay)


@dataclass(frozen=True)
class Propagator:
    m: np.ndarray
    t: float


def eigenvalues(r: RateParams) -> Tuple[float, float, float, float]:
    inv_tu, inv_tv, inv_tw = bloch_rates(r)
    return (0.0, -inv_tu, -inv_tv, -inv_tw)


def damping_basis(r: RateParams) -> DampingBasis:
    """
    Eigenoperators of the dissipator (omega ignored).

    Returns:
        DampingBasis with duality Tr(L_i R_j) = delta_ij
    """
    w = r.w_eq
    L = (
        I2 / SQRT2,
        (SIGMA_DAG + SIGMA) / SQRT2,
        (SIGMA_DAG - SIGMA) / SQRT2,
        (-w * I2 + SIGMA_Z) / SQRT2,
    )
    R = (
        (I2 + w * SIGMA_Z) / SQRT2,
        (SIGMA_DAG + SIGMA) / SQRT2,
        (SIGMA - SIGMA_DAG) / SQRT2,
        SIGMA_Z / SQRT2,
    )
    return DampingBasis(L=L, R=R, lam=eigenvalues(r))


def generator_matrix(r: RateParams) -> np.ndarray:
    """
    Liouvillian in the damping basis, acting on (l0, l1, l2, l3).

    The drive couples l2 to l0 with -i w_eq omega and l2 <-> l3 with -i omega.
    """
    g = np.diag(np.asarray(eigenvalues(r), dtype=complex))
    g[2, 0] = -1j * r.w_eq * r.omega
    g[2, 3] = -1j * r.omega
    g[3, 2] = -1j * r.omega
    return g


def rotated_eigenvalues(r: RateParams) -> Tuple[complex, complex]:
    """lambda_23 +/- chi, the eigenvalues of the driven (l2, l3) block."""
    _, _, lam2, lam3 = eigenvalues(r)
    mean = 0.5 * (lam2 + lam3)
    chi = 0.5 * np.sqrt(complex((lam2 - lam3) ** 2 - (2.0 * r.omega) ** 2))
    return (mean + chi, mean - chi)


def _check_time(t: float) -> None:
    if t < 0:
        raise ParameterError(f"time must be non-negative, got {t}")


def propagator(r: RateParams, t: float) -> Propagator:
    """
    exp(G t) for the damping-basis generator G.

    Raises:
        ParameterError: If t < 0
    """
    _check_time(t)
    return Propagator(m=mat_exp(generator_matrix(r) * t), t=t)


def coefficients(basis: DampingBasis, x) -> np.ndarray:
    x = as_cmat(x, dims=(2,))
    return np.array([np.trace(Li @ x) for Li in basis.L])


def reconstruct(basis: DampingBasis, l) -> CMat:
    return sum(li * Ri for li, Ri in zip(l, basis.R))


def propagate(r: RateParams, t: float, x) -> CMat:
    """Evolve any 2x2 operator through the damping-basis propagator."""
    basis = damping_basis(r)
    prop = propagator(r, t)
    return reconstruct(basis, prop.m @ coefficients(basis, x))


def contractions(r: RateParams, t: float) -> Tuple[float, float, float]:
    """(Lambda_1, Lambda_2, Lambda_3) = exp(lambda_i t)."""
    _check_time(t)
    _, lam1, lam2, lam3 = eigenvalues(r)
    return (math.exp(lam1 * t), math.exp(lam2 * t), math.exp(lam3 * t))


def _closed_form(r: RateParams, t: float, x: CMat) -> CMat:
    lam1, lam2, lam3 = contractions(r, t)
    w = r.w_eq
    a, d = x[0, 0], x[0, 1]
    d_low, c = x[1, 0], x[1, 1]
    total = a + c
    relax = 0.5 * lam3 * (a - c - w * total)
    return np.array([
        [0.5 * total * (1.0 + w) + relax, 0.5 * (d_low * (lam1 - lam2) + d * (lam1 + lam2))],
        [0.5 * (d * (lam1 - lam2) + d_low * (lam1 + lam2)), 0.5 * total * (1.0 - w) - relax],
    ], dtype=complex)


def apply_map(r: RateParams, t: float, x) -> CMat:
    """
    Linear action of the channel on any 2x2 operator.

    Uses the closed form at omega = 0 and the propagator otherwise.
    """
    _check_time(t)
    x = as_cmat(x, dims=(2,))
    if r.omega == 0.0:
        return _closed_form(r, t, x)
    return propagate(r, t, x)


def channel_apply(r: RateParams, t: float, rho) -> CMat:
    """
    Image of a density matrix under the channel at time t.

    Args:
        r: Decay rates (any omega)
        t: Elapsed time
        rho: Valid density matrix

    Returns:
        Phi_t(rho), Hermitian with unit trace

    Raises:
        InvalidStateError: If rho is not a density matrix
        ParameterError: If t < 0
    """
    rho = validate_density_matrix(rho)
    out = apply_map(r, t, rho)
    return 0.5 * (out + out.conj().T)


def affine_map(r: RateParams, t: float) -> AffineMap:
    """
    Diagonal damping matrix and shift of the undriven channel.

    Raises:
        ParameterError: If omega != 0 (use transfer_matrix) or t < 0
    """
    if r.omega != 0.0:
        raise ParameterError("affine_map requires omega == 0; use transfer_matrix for driven channels")
    _check_time(t)
    _, lam1, lam2, lam3 = eigenvalues(r)
    decay = (-lam1 * t, -lam2 * t, -lam3 * t)
    lam = tuple(math.exp(-x) for x in decay)
    return AffineMap(Lambda=lam, shift=(0.0, 0.0, -r.w_eq * math.expm1(-decay[2])), w_eq=r.w_eq, decay=decay)


def transfer_matrix(r: RateParams, t: float) -> np.ndarray:
    """
    Real 4x4 matrix T with (1, b') = T (1, b) in the Pauli basis.

    Column 0 carries the shift; the lower-right block the contractions
    (and rotations when omega != 0).
    """
    T = np.zeros((4, 4))
    for j, Pj in enumerate(PAULIS):
        image = apply_map(r, t, 0.5 * Pj)
        for i, Pi in enumerate(PAULIS):
            T[i, j] = np.trace(Pi @ image).real
    return T


def phi_of_identity(r: RateParams, t: float) -> CMat:
    """
    Phi_t(I); I only when unital.

    Undriven channels give diag(1 + s, 1 - s) with s = w_eq (1 - Lambda_3). A drive
    rotates part of the shift into the off-diagonals.
    """
    return apply_map(r, t, I2)
