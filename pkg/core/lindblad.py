"""
CORE: LINDBLAD
- Qubit Lindblad generator built from the operator set (sigma, sigma^dag, sigma_z/sqrt2)
  and the rate c-matrix of the squeezed-vacuum family.
- Coherent drive H = (omega/2)(sigma^dag + sigma), hbar = 1.
- The generator acts on matrices; the superoperator form lives in dampingbasis.
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from core.channels import RateParams
from core.matkernel import CMat, SIGMA, SIGMA_DAG, SIGMA_Z, I2, as_cmat

C_MATRIX_TOL = 1e-12

F_OPERATORS: Tuple[CMat, CMat, CMat] = (SIGMA, SIGMA_DAG, SIGMA_Z / math.sqrt(2.0))


@dataclass(frozen=True)
class LindbladSpec:
    c: np.ndarray
    F: Tuple[CMat, CMat, CMat]
    H: CMat


def hamiltonian(r: RateParams) -> CMat:
    return 0.5 * r.omega * (SIGMA_DAG + SIGMA)


def build_spec(r: RateParams) -> LindbladSpec:
    """
    Rate matrix and operator set for the given decay rates.

    The c-matrix is
        [[(1-w)/(2T1), -1/T3, 0], [-1/T3, (1+w)/(2T1), 0], [0, 0, 1/T2 - 1/(2T1)]]
    with w the equilibrium inversion.
    """
    half_t1 = 0.5 * r.inv_T1
    c = np.array([
        [half_t1 * (1.0 - r.w_eq), -r.inv_T3, 0.0],
        [-r.inv_T3, half_t1 * (1.0 + r.w_eq), 0.0],
        [0.0, 0.0, r.inv_T2 - half_t1],
    ], dtype=complex)
    return LindbladSpec(c=c, F=F_OPERATORS, H=hamiltonian(r))


def general_dissipator(spec: LindbladSpec, rho) -> CMat:
    """Evaluate 1/2 sum_ij c_ij ([F_i, rho F_j^dag] + [F_i rho, F_j^dag])."""
    rho = as_cmat(rho, dims=(2,))
    out = np.zeros((2, 2), dtype=complex)
    for i, Fi in enumerate(spec.F):
        for j, Fj in enumerate(spec.F):
            cij = spec.c[i, j]
            if cij == 0:
                continue
            Fj_dag = Fj.conj().T
            out += cij * (Fi @ rho @ Fj_dag - 0.5 * (Fj_dag @ Fi @ rho + rho @ Fj_dag @ Fi))
    return out


def dissipator_apply(r: RateParams, rho) -> CMat:
    """
    Dissipative part of the master equation in the four-term form.

    Args:
        r: Decay rates
        rho: Any 2x2 operator (linear action)

    Returns:
        L_D rho, traceless and Hermitian for Hermitian input
    """
    rho = as_cmat(rho, dims=(2,))
    w = r.w_eq
    sds = SIGMA_DAG @ SIGMA
    ssd = SIGMA @ SIGMA_DAG

    emission = sds @ rho + rho @ sds - 2.0 * SIGMA @ rho @ SIGMA_DAG
    absorption = ssd @ rho + rho @ ssd - 2.0 * SIGMA_DAG @ rho @ SIGMA
    dephasing = rho - SIGMA_Z @ rho @ SIGMA_Z
    squeezing = SIGMA_DAG @ rho @ SIGMA_DAG + SIGMA @ rho @ SIGMA

    return (
        -(1.0 - w) * r.inv_T1 / 4.0 * emission
        - (1.0 + w) * r.inv_T1 / 4.0 * absorption
        - (0.5 * r.inv_T2 - 0.25 * r.inv_T1) * dephasing
        - r.inv_T3 * squeezing
    )


def dissipator_adjoint_apply(r: RateParams, x) -> CMat:
    """Heisenberg-picture dissipator: Tr(X L_D rho) == Tr((L_D^T X) rho) for all rho."""
    x = as_cmat(x, dims=(2,))
    spec = build_spec(r)
    out = np.zeros((2, 2), dtype=complex)
    for i, Fi in enumerate(spec.F):
        for j, Fj in enumerate(spec.F):
            cij = spec.c[i, j]
            if cij == 0:
                continue
            Fj_dag = Fj.conj().T
            out += cij * (Fj_dag @ x @ Fi - 0.5 * (x @ Fj_dag @ Fi + Fj_dag @ Fi @ x))
    return out


def liouville_apply(r: RateParams, rho) -> CMat:
    """Full generator: -i[H, rho] + L_D rho."""
    rho = as_cmat(rho, dims=(2,))
    H = hamiltonian(r)
    return -1j * (H @ rho - rho @ H) + dissipator_apply(r, rho)


def c_matrix_positive(spec: LindbladSpec, tol: float = C_MATRIX_TOL) -> bool:
    """True iff the rate matrix has no eigenvalue below -tol."""
    c = 0.5 * (spec.c + spec.c.conj().T)
    return bool(np.linalg.eigvalsh(c)[0] >= -tol)


def steady_state(r: RateParams) -> CMat:
    """Fixed point of the dissipator: (I + w_eq sigma_z) / 2."""
    return 0.5 * (I2 + r.w_eq * SIGMA_Z)
