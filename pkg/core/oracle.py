"""
CORE: ORACLE
- Fixed-step RK4 integrators for the Bloch equations and the master equation.
- Independent of the damping-basis solver, used to cross-check it.
"""

import logging
import math
from typing import Callable, List, Literal, Optional, Sequence, TypeVar

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from config.channel_manager import get_numerics
from core.channels import RateParams, bloch_rates
from core.errors import ParameterError
from core.geometry import BlochVector
from core.lindblad import liouville_apply
from core.matkernel import CMat, validate_density_matrix

logger = logging.getLogger(__name__)

Y = TypeVar("Y")


class IntegratorConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    dt: float = Field(1e-3, gt=0)
    t_end: float = Field(0.0, ge=0)
    method: Literal["rk4"] = "rk4"

    @model_validator(mode="after")
    def check_step(self) -> "IntegratorConfig":
        if self.t_end > 0 and self.dt > self.t_end:
            raise ValueError(f"dt ({self.dt}) must not exceed t_end ({self.t_end})")
        return self

    @property
    def steps(self) -> int:
        return math.ceil(self.t_end / self.dt - 1e-9) if self.t_end > 0 else 0


def rk4_step(f: Callable[[Y], Y], y: Y, h: float) -> Y:
    """One classical Runge-Kutta step for an autonomous system."""
    k1 = f(y)
    k2 = f(y + 0.5 * h * k1)
    k3 = f(y + 0.5 * h * k2)
    k4 = f(y + h * k3)
    return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _integrate(f: Callable[[Y], Y], y0: Y, t_end: float, dt: float) -> Y:
    if t_end <= 0:
        return y0
    n = max(1, math.ceil(t_end / dt - 1e-9))
    h = t_end / n
    y = y0
    for _ in range(n):
        y = rk4_step(f, y, h)
    return y


def bloch_derivative(r: RateParams, detuning: float = 0.0) -> Callable[[np.ndarray], np.ndarray]:
    """
    Right-hand side of the Bloch equations.

        u' = -u/Tu - detuning v
        v' = -v/Tv + detuning u - omega w
        w' = -(w - w_eq)/Tw + omega v
    """
    inv_tu, inv_tv, inv_tw = bloch_rates(r)
    omega, w_eq = r.omega, r.w_eq

    def rhs(b: np.ndarray) -> np.ndarray:
        u, v, w = b
        return np.array([
            -inv_tu * u - detuning * v,
            -inv_tv * v + detuning * u - omega * w,
            -inv_tw * (w - w_eq) + omega * v,
        ])

    return rhs


def integrate_bloch(r: RateParams, b0: BlochVector, cfg: IntegratorConfig,
                    detuning: float = 0.0) -> BlochVector:
    b = _integrate(bloch_derivative(r, detuning), b0.as_array(), cfg.t_end, cfg.dt)
    return BlochVector.from_array(b)


def integrate_master(r: RateParams, rho0, cfg: IntegratorConfig) -> CMat:
    """RK4 on d(rho)/dt = -i[H, rho] + L_D rho."""
    rho0 = validate_density_matrix(rho0)
    return _integrate(lambda rho: liouville_apply(r, rho), rho0, cfg.t_end, cfg.dt)


def bloch_trajectory(r: RateParams, b0: BlochVector, t_grid: Sequence[float],
                     dt: Optional[float] = None, detuning: float = 0.0) -> List[BlochVector]:
    """Integrate through an ascending time grid, one state per grid time."""
    dt = get_numerics("oracle")["dt"] if dt is None else dt
    if dt <= 0:
        raise ParameterError(f"dt must be positive, got {dt}")
    rhs = bloch_derivative(r, detuning)
    b = b0.as_array()
    t_prev = 0.0
    out = []
    for t in t_grid:
        if t < t_prev:
            raise ParameterError(f"time grid must be non-negative and ascending, got {t} after {t_prev}")
        b = _integrate(rhs, b, t - t_prev, dt)
        t_prev = t
        out.append(BlochVector.from_array(b))
    return out
