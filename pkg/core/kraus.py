"""
CORE: KRAUS
- Operator-sum form of the squeezed-vacuum channel, applied as
  Phi(rho) = sum_k A_k^dag rho A_k with completeness sum_k A_k A_k^dag = I.
- Complete-positivity checks on contraction triples and on the rate bound.
- Residual report for the linear relations between Kraus coefficients and
  the affine map (norm, shifts, contractions, completeness).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from core.channels import RateParams
from core.dampingbasis import AffineMap
from core.errors import CompletePositivityError, ParameterError
from core.lindblad import build_spec, c_matrix_positive
from core.matkernel import CMat, I2, PAULIS, SIGMA_X, SIGMA_Y, SIGMA_Z, as_cmat, max_abs

logger = logging.getLogger(__name__)

RADICAND_TOL = 1e-12
SINGULAR_TOL = 1e-14
PRODUCT_TOL = 1e-12

# Sign patterns (s1, s2, s3) of s1*L1 + s2*L2 + s3*L3 <= 1
CP_PATTERNS = ((1, 1, -1), (1, -1, 1), (-1, 1, 1), (-1, -1, -1))


@dataclass(frozen=True)
class KrausSet:
    ops: Tuple[CMat, ...]
    completeness_residual: float
    constants: Dict[str, complex] = field(default_factory=dict)


@dataclass(frozen=True)
class CPCheck:
    passed: bool
    slacks: Tuple[float, float, float, float]


@dataclass(frozen=True)
class AppendixReport:
    shift_residuals: Tuple[float, ...]
    coefficient_residuals: Tuple[float, ...]
    identity_residual: float

    @property
    def max_residual(self) -> float:
        return max(self.shift_residuals + self.coefficient_residuals + (self.identity_residual,))


def completeness_residual(ops) -> float:
    total = sum(A @ A.conj().T for A in ops)
    return max_abs(total - I2)


def make_kraus_set(ops, constants=None) -> KrausSet:
    ops = tuple(as_cmat(A, dims=(2,)) for A in ops)
    return KrausSet(ops=ops, completeness_residual=completeness_residual(ops), constants=dict(constants or {}))


def cp_inequalities(Lambda) -> CPCheck:
    """
    Evaluate the four signed sums of the contractions against 1.

    Returns:
        CPCheck with slack 1 - (s1 L1 + s2 L2 + s3 L3) per pattern (++-), (+-+), (-++), (---)
    """
    lam = np.asarray(Lambda, dtype=float)
    slacks = tuple(float(1.0 - np.dot(pattern, lam)) for pattern in CP_PATTERNS)
    return CPCheck(passed=all(s >= -RADICAND_TOL for s in slacks), slacks=slacks)


def t3_bound_check(r: RateParams) -> bool:
    """Both |1/T3| <= |1/T2| and the c-matrix bound M^2 <= N(N+1)."""
    return abs(r.inv_T3) <= abs(r.inv_T2) and c_matrix_positive(build_spec(r))


def _root(radicand: float, name: str) -> float:
    if radicand < -RADICAND_TOL:
        raise CompletePositivityError(f"negative radicand for {name}: {radicand:.3e}")
    if radicand < 0:
        logger.warning(f"⚠️ Clipping radicand of {name} ({radicand:.3e}) to zero")
        return 0.0
    return math.sqrt(radicand)


def _ratio(s: float, root: float, name: str) -> float:
    if root > SINGULAR_TOL:
        return s / (2.0 * root)
    if abs(s) <= SINGULAR_TOL:
        return 0.0
    raise CompletePositivityError(f"{name} is singular: shift {s:.3e} with vanishing contraction gap")


def kraus_constants(m: AffineMap) -> Dict[str, complex]:
    """
    The six Kraus constants m10, m13, m21, m22, m31, m40 of an affine map
    with zero transverse shift.

    When Lambda_3 = Lambda_1 Lambda_2 (every map generated by the squeezed-vacuum
    rates) the radicands are taken in factored form, e.g. (1 - L1)(1 - L2), built
    from the map's accurate 1 - L_i. This keeps short times free of cancellation.
    """
    lam1, lam2, lam3 = m.Lambda
    c1, c2, c3 = m.complements
    s = m.shift[2]
    if m.decay is not None and abs(m.decay[0] + m.decay[1] - m.decay[2]) <= PRODUCT_TOL * max(1.0, m.decay[2]):
        p = c1 * c2
        q = c1 * (1.0 + lam2)
        r40 = (1.0 + lam1) * (1.0 + lam2)
        r31 = (1.0 + lam1) * c2
    else:
        p = c1 + c2 - c3
        q = c1 - c2 + c3
        r40 = 1.0 + lam1 + lam2 + lam3
        r31 = 1.0 + lam1 - lam2 - lam3
    sqrt_p = _root(p, "m13")
    sqrt_q = _root(q, "m22")
    s2_p = s * s / p if sqrt_p > SINGULAR_TOL else 0.0
    s2_q = s * s / q if sqrt_q > SINGULAR_TOL else 0.0
    return {
        "m10": _ratio(s, sqrt_p, "m10"),
        "m13": 0.5 * sqrt_p,
        "m21": _ratio(s, sqrt_q, "m21"),
        "m22": -0.5j * sqrt_q,
        "m40": 0.5 * _root(r40 - s2_p, "m40"),
        "m31": 0.5 * _root(r31 - s2_q, "m31"),
    }


def kraus_from_constants(constants: Dict[str, complex]) -> KrausSet:
    """Rebuild the four operators from their Pauli coefficients."""
    ops = (
        constants["m10"] * I2 + constants["m13"] * SIGMA_Z,
        constants["m21"] * SIGMA_X + constants["m22"] * SIGMA_Y,
        constants["m31"] * SIGMA_X,
        constants["m40"] * I2,
    )
    return make_kraus_set(ops, constants)


def svc_kraus(m: AffineMap) -> KrausSet:
    """
    Four-operator Kraus set of a squeezed-vacuum affine map.

    Args:
        m: Affine map with shift (0, 0, w_eq(1 - Lambda_3))

    Returns:
        KrausSet reproducing the channel; {I} at the identity map

    Raises:
        CompletePositivityError: If a radicand is negative beyond tolerance
    """
    if all(abs(1.0 - lam) <= SINGULAR_TOL for lam in m.Lambda) and abs(m.shift[2]) <= SINGULAR_TOL:
        return make_kraus_set((I2,))

    kset = kraus_from_constants(kraus_constants(m))
    logger.debug(f"Kraus set built, completeness residual {kset.completeness_residual:.2e}")
    return kset


def apply_kraus(k: KrausSet, rho) -> CMat:
    rho = as_cmat(rho, dims=(2,))
    return sum(A.conj().T @ rho @ A for A in k.ops)


def phase_damping_kraus(Lambda: float) -> KrausSet:
    """
    Two-operator dephasing set: sqrt((1+L)/2) I and sqrt((1-L)/2) sigma_z.

    Raises:
        ParameterError: If Lambda is outside [0, 1]
    """
    if not 0.0 <= Lambda <= 1.0:
        raise ParameterError(f"phase damping contraction must lie in [0, 1], got {Lambda}")
    ops = (math.sqrt(0.5 * (1.0 + Lambda)) * I2, math.sqrt(0.5 * (1.0 - Lambda)) * SIGMA_Z)
    return make_kraus_set(ops)


def pauli_coefficients(op) -> np.ndarray:
    """(m_0, m_1, m_2, m_3) with op = m_0 I + m . sigma."""
    op = as_cmat(op, dims=(2,))
    return np.array([0.5 * np.trace(P @ op) for P in PAULIS])


def _skew(v) -> np.ndarray:
    return np.array([[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]])


def kraus_transfer_matrix(k: KrausSet) -> np.ndarray:
    """
    Pauli transfer matrix T_ij = tr(sigma_i Phi(sigma_j)) / 2, i, j = 0..3.

    Built from the Kraus coefficients alone: for A = a_0 I + a . sigma,
    T_00 sums |a_0|^2 + |a|^2, column 0 holds the shift
    2 Re(a_0* a) + i (a* x a), row 0 holds the traceless part of A A^dag, and the
    3x3 block is (|a_0|^2 - |a|^2) delta_ij + 2 Re(a_i a_j*) + 2 skew(Im(a_0* a)).
    The sign of the skew term follows from applying A^dag on the left.
    """
    T = np.zeros((4, 4))
    for A in k.ops:
        a0, *rest = pauli_coefficients(A)
        a = np.array(rest)
        a0_sq = abs(a0) ** 2
        a_sq = float(np.sum(np.abs(a) ** 2))
        cross = np.real(2.0 * np.conj(a0) * a)
        T[0, 0] += a0_sq + a_sq
        T[1:, 0] += cross + np.real(1j * np.cross(np.conj(a), a))
        T[0, 1:] += cross + np.real(1j * np.cross(a, np.conj(a)))
        T[1:, 1:] += ((a0_sq - a_sq) * np.eye(3)
                      + 2.0 * np.real(np.outer(a, np.conj(a)))
                      + 2.0 * _skew(np.imag(np.conj(a0) * a)))
    return T


def verify_appendix_equations(k: KrausSet, m: AffineMap) -> AppendixReport:
    """
    Residuals of the linear relations tying a Kraus set to an affine map.

    Every relation is a bilinear sum over the Pauli coefficients of the
    operators (see kraus_transfer_matrix); no channel image is evaluated.

    Returns:
        AppendixReport with four shift residuals (norm, t1, t2, t3), nine
        coefficient residuals (the 3x3 block against diag(L1, L2, L3)) and the
        largest traceless component of sum_k A_k A_k^dag
    """
    T = kraus_transfer_matrix(k)
    shift_residuals = [abs(T[0, 0] - 1.0)] + [abs(T[i + 1, 0] - m.shift[i]) for i in range(3)]
    coefficient_residuals = np.abs(T[1:, 1:] - np.diag(m.Lambda)).ravel()

    return AppendixReport(
        shift_residuals=tuple(float(x) for x in shift_residuals),
        coefficient_residuals=tuple(float(x) for x in coefficient_residuals),
        identity_residual=float(np.max(np.abs(T[0, 1:]))),
    )
