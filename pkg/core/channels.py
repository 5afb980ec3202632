"""
CORE: CHANNELS
- Reservoir parameters (A, N, M, omega) and the decay rates they induce.
- Named channel templates: amplitude damping, phase damping, thermal field,
  squeezed vacuum, plus free-form custom rates.
- Channel config objects (JSON/YAML) validated by a discriminated union.
"""

import logging
import math
from enum import Enum
from typing import Annotated, Any, Dict, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, model_validator

from core.errors import CompletePositivityError, ParameterError, CP_RESERVOIR_MESSAGE

logger = logging.getLogger(__name__)

RATE_TOL = 1e-12


class ChannelKind(str, Enum):
    AMPLITUDE_DAMPING = "amplitude_damping"
    PHASE_DAMPING = "phase_damping"
    THERMAL = "thermal"
    SVC = "svc"
    CUSTOM = "custom"


class ReservoirParams(BaseModel):
    """Squeezed-vacuum reservoir seen by a two-level atom."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    A: float = Field(1.0, gt=0, description="Einstein A coefficient (inverse time)")
    N: float = Field(0.0, ge=0, description="Mean photon number")
    M: float = Field(0.0, ge=0, description="Squeezing parameter, taken real")
    omega: float = Field(0.0, ge=0, description="Rabi frequency")

    @property
    def m_max(self) -> float:
        return math.sqrt(self.N * (self.N + 1.0))

    def satisfies_cp_bound(self) -> bool:
        bound = self.N * (self.N + 1.0)
        return self.M ** 2 <= bound * (1.0 + RATE_TOL) + RATE_TOL


class RateParams(BaseModel):
    """Lindblad decay rates and equilibrium inversion."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    inv_T1: float
    inv_T2: float
    inv_T3: float = 0.0
    w_eq: float = 0.0
    omega: float = 0.0

    @model_validator(mode="after")
    def check_rates(self) -> "RateParams":
        if self.inv_T1 < 0 or self.inv_T2 < 0:
            raise ValueError("inv_T1 and inv_T2 must be non-negative")
        if abs(self.inv_T3) > self.inv_T2 + RATE_TOL:
            raise ValueError("|inv_T3| must not exceed inv_T2")
        if not -1.0 - RATE_TOL <= self.w_eq <= RATE_TOL:
            raise ValueError("w_eq must lie in [-1, 0]")
        if self.omega < 0:
            raise ValueError("omega must be non-negative")
        return self

    def with_omega(self, omega: float) -> "RateParams":
        return self.model_copy(update={"omega": omega})

    @property
    def is_unital(self) -> bool:
        return self.w_eq == 0.0


def rates_from_reservoir(p: ReservoirParams) -> RateParams:
    """
    Decay rates of an atom in a squeezed vacuum.

    Args:
        p: Reservoir parameters

    Returns:
        RateParams with 1/T1 = 2A(N+1/2), 1/T2 = A(N+1/2), 1/T3 = AM, w_eq = -1/(2N+1)

    Raises:
        CompletePositivityError: If M^2 > N(N+1)
    """
    if not p.satisfies_cp_bound():
        raise CompletePositivityError(CP_RESERVOIR_MESSAGE)

    half = p.N + 0.5
    return RateParams(
        inv_T1=2.0 * p.A * half,
        inv_T2=p.A * half,
        inv_T3=p.A * p.M,
        w_eq=-1.0 / (2.0 * p.N + 1.0),
        omega=p.omega,
    )


_TEMPLATE_KEYS = {
    ChannelKind.AMPLITUDE_DAMPING: {"A", "omega"},
    ChannelKind.PHASE_DAMPING: {"gamma", "omega"},
    ChannelKind.THERMAL: {"A", "N", "omega"},
    ChannelKind.SVC: {"A", "N", "M", "omega"},
    ChannelKind.CUSTOM: {"inv_T1", "inv_T2", "inv_T3", "w_eq", "omega"},
}


def named_channel(kind: Union[ChannelKind, str], **params: float) -> RateParams:
    """
    Rates for one of the named channel templates.

    Args:
        kind: Channel template
        **params: A for amplitude damping; gamma for phase damping;
            A, N for thermal; A, N, M for svc; rates for custom. omega optional.

    Raises:
        ParameterError: On unknown or negative parameters
        CompletePositivityError: If an svc template violates M^2 <= N(N+1)
    """
    kind = ChannelKind(kind)
    unknown = set(params) - _TEMPLATE_KEYS[kind]
    if unknown:
        raise ParameterError(f"unknown parameters for {kind.value}: {sorted(unknown)}")

    if kind is ChannelKind.CUSTOM:
        try:
            return RateParams(**params)
        except ValueError as e:
            raise ParameterError(str(e)) from e

    negative = sorted(k for k, v in params.items() if v < 0)
    if negative:
        raise ParameterError(f"negative parameters for {kind.value}: {negative}")

    omega = params.get("omega", 0.0)
    if kind is ChannelKind.PHASE_DAMPING:
        return RateParams(inv_T1=0.0, inv_T2=params.get("gamma", 1.0), inv_T3=0.0, w_eq=0.0, omega=omega)

    A = params.get("A", 1.0)
    if A == 0:
        raise ParameterError("A must be positive")
    N = params.get("N", 0.0) if kind is not ChannelKind.AMPLITUDE_DAMPING else 0.0
    M = params.get("M", 0.0) if kind is ChannelKind.SVC else 0.0
    return rates_from_reservoir(ReservoirParams(A=A, N=N, M=M, omega=omega))


def bloch_rates(r: RateParams) -> Tuple[float, float, float]:
    """Damping rates of u, v and w: (1/T2 + 1/T3, 1/T2 - 1/T3, 1/T1)."""
    return (r.inv_T2 + r.inv_T3, r.inv_T2 - r.inv_T3, r.inv_T1)


# --- Channel config objects -------------------------------------------------

class _ConfigBase(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    omega: float = 0.0

    def template_params(self) -> Dict[str, float]:
        return self.model_dump(exclude={"kind"})

    @property
    def channel_kind(self) -> ChannelKind:
        raise NotImplementedError

    def to_rates(self) -> RateParams:
        return named_channel(self.channel_kind, **self.template_params())

    def reservoir(self) -> Optional[ReservoirParams]:
        """Reservoir view for kinds that have one; None for phase damping and custom."""
        return None


class SvcConfig(_ConfigBase):
    kind: Literal["svc"]
    A: float = 1.0
    N: float = 0.0
    M: float = 0.0

    @property
    def channel_kind(self) -> ChannelKind:
        return ChannelKind.SVC

    def reservoir(self) -> ReservoirParams:
        return ReservoirParams(A=self.A, N=self.N, M=self.M, omega=self.omega)


class ThermalConfig(_ConfigBase):
    kind: Literal["thermal"]
    A: float = 1.0
    N: float = 0.0

    @property
    def channel_kind(self) -> ChannelKind:
        return ChannelKind.THERMAL

    def reservoir(self) -> ReservoirParams:
        return ReservoirParams(A=self.A, N=self.N, omega=self.omega)


class AmplitudeDampingConfig(_ConfigBase):
    kind: Literal["amplitude_damping", "amplitude"]
    A: float = 1.0

    @property
    def channel_kind(self) -> ChannelKind:
        return ChannelKind.AMPLITUDE_DAMPING

    def reservoir(self) -> ReservoirParams:
        return ReservoirParams(A=self.A, omega=self.omega)


class PhaseDampingConfig(_ConfigBase):
    kind: Literal["phase_damping", "phase"]
    gamma: float = 1.0

    @property
    def channel_kind(self) -> ChannelKind:
        return ChannelKind.PHASE_DAMPING


class CustomConfig(_ConfigBase):
    kind: Literal["custom"]
    inv_T1: float
    inv_T2: float
    inv_T3: float = 0.0
    w_eq: float = 0.0

    @property
    def channel_kind(self) -> ChannelKind:
        return ChannelKind.CUSTOM


ChannelConfig = Annotated[
    Union[SvcConfig, ThermalConfig, AmplitudeDampingConfig, PhaseDampingConfig, CustomConfig],
    Field(discriminator="kind"),
]
_config_adapter = TypeAdapter(ChannelConfig)


def parse_channel_config(data: Dict[str, Any]) -> _ConfigBase:
    """
    Validate a raw channel config mapping.

    Raises:
        pydantic.ValidationError: On unknown kind, unknown keys or wrong types
    """
    config = _config_adapter.validate_python(data)
    logger.debug(f"Parsed channel config: {config!r}")
    return config
