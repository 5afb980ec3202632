"""
CORE: MATKERNEL
- Dense complex matrices of dimension 2 and 4 (qubit and qubit pair).
- Basis ordering {|e>, |g>}; sigma = |g><e| lowers the atom.
- Hermitian spectra and exponentials delegate to numpy / scipy.
"""

import numpy as np
import numpy.typing as npt
from scipy.linalg import expm

from core.errors import DimensionError, NotHermitianError, InvalidStateError

CMat = npt.NDArray[np.complex128]

HERMITIAN_TOL = 1e-10
ALLOWED_DIMS = (2, 4)

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
SIGMA = np.array([[0, 0], [1, 0]], dtype=complex)
SIGMA_DAG = SIGMA.conj().T
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (I2, SIGMA_X, SIGMA_Y, SIGMA_Z)

KET_E = np.array([1, 0], dtype=complex)
KET_G = np.array([0, 1], dtype=complex)


def as_cmat(x, dims=ALLOWED_DIMS) -> CMat:
    """Coerce to a complex square matrix and check its dimension."""
    arr = np.asarray(x, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
    if arr.shape[0] not in dims:
        raise DimensionError(f"matrix dimension {arr.shape[0]} not in {tuple(dims)}")
    return arr


def dagger(a) -> CMat:
    return as_cmat(a).conj().T


def mat_mul(a, b) -> CMat:
    """Standard matrix product of two operators of equal dimension."""
    a, b = as_cmat(a), as_cmat(b)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return a @ b


def kron(a, b) -> CMat:
    """Kronecker product of two qubit operators; subsystem A is the left factor."""
    a, b = as_cmat(a, dims=(2,)), as_cmat(b, dims=(2,))
    return np.kron(a, b)


def is_hermitian(h, tol: float = HERMITIAN_TOL) -> bool:
    h = as_cmat(h)
    return bool(np.max(np.abs(h - h.conj().T)) <= tol)


def herm_eigvals(h, tol: float = HERMITIAN_TOL) -> npt.NDArray[np.float64]:
    """
    Eigenvalues of a Hermitian matrix in ascending order.

    Raises:
        NotHermitianError: If h deviates from its adjoint by more than tol
    """
    h = as_cmat(h)
    if not is_hermitian(h, tol):
        raise NotHermitianError(
            f"matrix is not Hermitian (max |H - H^dag| = {np.max(np.abs(h - h.conj().T)):.3e})"
        )
    return np.linalg.eigvalsh(0.5 * (h + h.conj().T))


def mat_exp(g) -> CMat:
    """Matrix exponential by scaling and squaring."""
    return expm(as_cmat(g))


def max_abs(a) -> float:
    return float(np.max(np.abs(np.asarray(a))))


def validate_density_matrix(rho, tol: float = HERMITIAN_TOL) -> CMat:
    """
    Check that rho is Hermitian, has unit trace and no negative eigenvalue.

    Returns:
        The matrix as a complex array

    Raises:
        InvalidStateError: On any violated property
    """
    rho = as_cmat(rho)
    if not is_hermitian(rho, tol):
        raise InvalidStateError("density matrix is not Hermitian")
    trace = np.trace(rho)
    if abs(trace - 1.0) > tol:
        raise InvalidStateError(f"density matrix trace is {trace.real:.12g}, expected 1")
    lowest = herm_eigvals(rho, tol)[0]
    if lowest < -tol:
        raise InvalidStateError(f"density matrix has negative eigenvalue {lowest:.3e}")
    return rho
