"""
CORE: ENTANGLEMENT
- Bell pair with one half sent through the channel (identity on A).
- Partial transpose on B and the closed-form eigenvalues e1..e4.
- Separability verdict from e3, critical time of the sign change,
  and e3 curves for the M = 0, 0.8 Mmax, Mmax family.
"""

import logging
import math
from typing import Dict, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import bisect
from tqdm import tqdm

from config.channel_manager import get_numerics
from core.channels import RateParams, ReservoirParams, rates_from_reservoir
from core.dampingbasis import apply_map, contractions
from core.errors import NoSignChangeError, ParameterError
from core.matkernel import CMat, as_cmat, herm_eigvals, validate_density_matrix

logger = logging.getLogger(__name__)

SEPARABILITY_TOL = 1e-12


def bell_state() -> CMat:
    """(|ee> + |gg>)(<ee| + <gg|) / 2 in the ordering |ee>, |eg>, |ge>, |gg>."""
    rho = np.zeros((4, 4), dtype=complex)
    for i in (0, 3):
        for j in (0, 3):
            rho[i, j] = 0.5
    return rho


def _blocks(rho: CMat):
    for i in range(2):
        for j in range(2):
            yield i, j, rho[2 * i: 2 * i + 2, 2 * j: 2 * j + 2]


def extend_channel(r: RateParams, t: float, rho_ab) -> CMat:
    """
    Apply the identity on A and the channel on B.

    Every 2x2 block <i|rho|j>_A is mapped through the channel's linear action.
    """
    rho_ab = validate_density_matrix(as_cmat(rho_ab, dims=(4,)))
    out = np.zeros((4, 4), dtype=complex)
    for i, j, block in _blocks(rho_ab):
        out[2 * i: 2 * i + 2, 2 * j: 2 * j + 2] = apply_map(r, t, block)
    return 0.5 * (out + out.conj().T)


def partial_transpose_b(rho_ab) -> CMat:
    rho_ab = as_cmat(rho_ab, dims=(4,))
    out = np.empty_like(rho_ab)
    for i, j, block in _blocks(rho_ab):
        out[2 * i: 2 * i + 2, 2 * j: 2 * j + 2] = block.T
    return out


def partial_trace_b(rho_ab) -> CMat:
    rho_ab = as_cmat(rho_ab, dims=(4,))
    return np.array([[np.trace(rho_ab[2 * i: 2 * i + 2, 2 * j: 2 * j + 2]) for j in range(2)]
                     for i in range(2)])


def pt_eigenvalues_closed(r: RateParams, t: float) -> Tuple[float, float, float, float]:
    """
    Eigenvalues of the partially transposed output for the Bell input.

    e1,2 = (1 + L3 -/+ sqrt((L1 - L2)^2 + s^2)) / 4
    e3,4 = (1 - L3 -/+ sqrt((L1 + L2)^2 + s^2)) / 4
    with s = w_eq (1 - L3).
    """
    if r.omega != 0.0:
        raise ParameterError("closed-form eigenvalues require omega == 0")
    lam1, lam2, lam3 = contractions(r, t)
    s = r.w_eq * (1.0 - lam3)
    minus = math.sqrt((lam1 - lam2) ** 2 + s ** 2)
    plus = math.sqrt((lam1 + lam2) ** 2 + s ** 2)
    return (
        0.25 * (1.0 + lam3 - minus),
        0.25 * (1.0 + lam3 + minus),
        0.25 * (1.0 - lam3 - plus),
        0.25 * (1.0 - lam3 + plus),
    )


def pt_eigenvalues_numeric(r: RateParams, t: float) -> np.ndarray:
    """Sorted spectrum of the partial transpose of the evolved Bell state."""
    return herm_eigvals(partial_transpose_b(extend_channel(r, t, bell_state())))


def e3(r: RateParams, t: float) -> float:
    return pt_eigenvalues_closed(r, t)[2]


def is_nonseparable(r: RateParams, t: float) -> bool:
    return e3(r, t) < -SEPARABILITY_TOL


def critical_time(r: RateParams, t_max: Optional[float] = None) -> float:
    """
    Time at which e3 crosses zero and the transmitted pair becomes separable.

    The horizon defaults to a fixed number of 1/T2 lifetimes. A scan finds the
    first sign change, bisection refines it. Only that first root is returned:
    if e3 dips below zero again later on the scan grid a warning is logged
    and no error is raised.

    Raises:
        NoSignChangeError: If e3 does not change sign within the horizon
    """
    cfg = get_numerics("entanglement")
    if t_max is None:
        if r.inv_T2 <= 0:
            raise NoSignChangeError("no dephasing: e3 never changes sign")
        t_max = cfg["horizon_lifetimes"] / r.inv_T2

    grid = np.linspace(0.0, t_max, cfg["scan_points"])
    values = np.array([e3(r, t) for t in grid])
    # e3 underflows to exactly 0 when the pair stays entangled forever, so a
    # crossing must reach strictly positive values
    positive = np.nonzero(values > SEPARABILITY_TOL)[0]
    if values[0] >= 0 or positive.size == 0:
        raise NoSignChangeError(f"e3 has no sign change on [0, {t_max:.6g}]")

    hi = positive[0]
    lo = np.nonzero(values[:hi] <= 0)[0][-1]
    root = bisect(lambda t: e3(r, t), grid[lo], grid[hi], xtol=cfg["bisect_xtol"])
    if np.any(values[hi:] < -SEPARABILITY_TOL):
        logger.warning(f"⚠️ e3 turns negative again after t_c = {root:.6f}")
    logger.debug(f"Root bracketed in [{grid[lo]:.6g}, {grid[hi]:.6g}], t_c = {root:.12g}")
    return float(root)


def mmax_family(A: float = 1.0, N: float = 1.0, fraction: Optional[float] = None) -> Dict[str, RateParams]:
    """Rates for M = 0, fraction * Mmax and Mmax at fixed A, N."""
    fraction = get_numerics("entanglement")["mmax_fraction"] if fraction is None else fraction
    m_max = math.sqrt(N * (N + 1.0))
    return {
        "M=0": rates_from_reservoir(ReservoirParams(A=A, N=N, M=0.0)),
        f"M={fraction:g}Mmax": rates_from_reservoir(ReservoirParams(A=A, N=N, M=fraction * m_max)),
        "M=Mmax": rates_from_reservoir(ReservoirParams(A=A, N=N, M=m_max)),
    }


def critical_times(family: Mapping[str, RateParams]) -> Dict[str, float]:
    return {label: critical_time(r) for label, r in family.items()}


def e3_curve(r_family: Mapping[str, RateParams], t_grid: Sequence[float],
             progress: bool = False) -> pd.DataFrame:
    """
    e3 along a time grid for each labelled channel.

    Raises:
        ParameterError: If the grid is not ascending
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(np.diff(t_grid) <= 0):
        raise ParameterError("time grid must be strictly ascending")

    rows = []
    for label, r in tqdm(r_family.items(), desc="e3 curves", disable=not progress):
        rows.extend((label, float(t), e3(r, t)) for t in t_grid)
    return pd.DataFrame(rows, columns=["M_label", "t", "e3"])
