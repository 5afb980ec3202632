import math

import pytest
from pydantic import ValidationError

from core.channels import (
    ChannelKind, RateParams, ReservoirParams, bloch_rates, named_channel, parse_channel_config,
    rates_from_reservoir,
)
from core.errors import CompletePositivityError, ParameterError, CP_RESERVOIR_MESSAGE
from tests.conftest import SQRT2


def test_rates_from_reservoir_reference():
    r = rates_from_reservoir(ReservoirParams(A=1.0, N=1.0, M=SQRT2))
    assert r.inv_T1 == pytest.approx(3.0)
    assert r.inv_T2 == pytest.approx(1.5)
    assert r.inv_T3 == pytest.approx(1.414214, abs=1e-6)
    assert r.w_eq == pytest.approx(-1 / 3)


def test_rates_from_reservoir_spontaneous_emission():
    r = rates_from_reservoir(ReservoirParams(A=1.0, N=0.0, M=0.0))
    assert (r.inv_T1, r.inv_T2, r.inv_T3, r.w_eq) == (1.0, 0.5, 0.0, -1.0)


def test_rates_from_reservoir_rejects_excess_squeezing():
    with pytest.raises(CompletePositivityError, match=r"M\^2 > N\(N\+1\)"):
        rates_from_reservoir(ReservoirParams(A=1.0, N=1.0, M=SQRT2 * 1.01))
    assert str(CompletePositivityError(CP_RESERVOIR_MESSAGE)) == "complete positivity violated: M^2 > N(N+1)"


def test_reservoir_params_sign_constraints():
    with pytest.raises(ValidationError):
        ReservoirParams(A=0.0)
    with pytest.raises(ValidationError):
        ReservoirParams(N=-1.0)


@pytest.mark.parametrize("N", [0.0, 0.3, 1.0, 4.0])
def test_reservoir_family_relations(N):
    r = rates_from_reservoir(ReservoirParams(A=1.3, N=N, M=0.5 * math.sqrt(N * (N + 1))))
    assert r.inv_T1 == pytest.approx(2 * r.inv_T2)
    assert bloch_rates(r)[1] >= 0


def test_w_eq_increases_toward_zero():
    values = [rates_from_reservoir(ReservoirParams(N=N)).w_eq for N in (0.0, 0.5, 1.0, 10.0, 1000.0)]
    assert values[0] == -1.0
    assert all(a < b for a, b in zip(values, values[1:]))
    assert values[-1] > -1e-3


def test_named_channel_templates():
    phase = named_channel(ChannelKind.PHASE_DAMPING, gamma=2.0)
    assert (phase.inv_T1, phase.inv_T2, phase.inv_T3, phase.w_eq) == (0.0, 2.0, 0.0, 0.0)
    assert named_channel("thermal", A=1.0, N=0.0) == named_channel("amplitude_damping", A=1.0)
    assert named_channel("svc", A=1.0, N=1.0, M=0.0) == named_channel("thermal", A=1.0, N=1.0)
    thermal = named_channel("thermal", A=2.0, N=1.0)
    assert thermal.inv_T1 == pytest.approx(6.0)
    assert thermal.w_eq == pytest.approx(-1 / 3)


def test_named_channel_errors():
    with pytest.raises(ParameterError):
        named_channel("phase_damping", gamma=-1.0)
    with pytest.raises(ParameterError):
        named_channel("thermal", A=1.0, M=0.5)
    with pytest.raises(ParameterError):
        named_channel("custom", inv_T1=1.0, inv_T2=0.5, inv_T3=0.9)


def test_bloch_rates():
    r = RateParams(inv_T1=3.0, inv_T2=1.5, inv_T3=SQRT2, w_eq=-1 / 3)
    assert bloch_rates(r) == pytest.approx((2.914214, 0.085786, 3.0), abs=1e-6)
    symmetric = RateParams(inv_T1=1.0, inv_T2=0.7)
    assert bloch_rates(symmetric)[0] == bloch_rates(symmetric)[1]
    assert bloch_rates(RateParams(inv_T1=1.0, inv_T2=0.5, w_eq=-1.0)) == (0.5, 0.5, 1.0)


def test_rate_params_invariants():
    with pytest.raises(ValidationError):
        RateParams(inv_T1=1.0, inv_T2=0.5, inv_T3=0.6)
    with pytest.raises(ValidationError):
        RateParams(inv_T1=1.0, inv_T2=0.5, w_eq=0.2)


def test_parse_channel_config_kinds():
    svc = parse_channel_config({"kind": "svc", "A": 1.0, "N": 1.0, "M": 1.41421356, "omega": 0.0})
    assert svc.channel_kind is ChannelKind.SVC
    assert svc.to_rates().w_eq == pytest.approx(-1 / 3)
    custom = parse_channel_config({"kind": "custom", "inv_T1": 1.0, "inv_T2": 0.5, "inv_T3": 0.0,
                                   "w_eq": -1.0, "omega": 0.0})
    assert custom.to_rates() == RateParams(inv_T1=1.0, inv_T2=0.5, w_eq=-1.0)
    assert parse_channel_config({"kind": "phase", "gamma": 3.0}).to_rates().inv_T2 == 3.0
    assert parse_channel_config({"kind": "phase"}).reservoir() is None


def test_parse_channel_config_rejects_unknown_keys():
    with pytest.raises(ValidationError):
        parse_channel_config({"kind": "svc", "A": 1.0, "N": 1.0, "squeeze": 2.0})
    with pytest.raises(ValidationError):
        parse_channel_config({"kind": "laser"})
