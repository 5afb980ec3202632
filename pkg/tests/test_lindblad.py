import numpy as np
import pytest

from core.channels import RateParams, bloch_rates, named_channel
from core.lindblad import (
    F_OPERATORS, build_spec, c_matrix_positive, dissipator_apply, general_dissipator, liouville_apply,
    steady_state,
)
from core.matkernel import SIGMA_X, SIGMA_Y, SIGMA_Z
from tests.conftest import SQRT2, reservoir_rates


def _bloch(x):
    return np.array([np.trace(x @ P).real for P in (SIGMA_X, SIGMA_Y, SIGMA_Z)])


def test_operator_set_orthonormal_and_traceless():
    gram = np.array([[np.trace(Fi.conj().T @ Fj) for Fj in F_OPERATORS] for Fi in F_OPERATORS])
    assert np.allclose(gram, np.eye(3))
    assert all(abs(np.trace(F)) < 1e-15 for F in F_OPERATORS)


def test_build_spec_c_matrices(svc_rates):
    emission = build_spec(named_channel("amplitude_damping", A=1.0))
    assert np.allclose(emission.c, np.diag([1.0, 0.0, 0.0]))
    phase = build_spec(named_channel("phase_damping", gamma=1.0))
    assert np.allclose(phase.c, np.diag([0.0, 0.0, 1.0]))
    svc = build_spec(svc_rates)
    assert np.allclose(svc.c, [[2, -SQRT2, 0], [-SQRT2, 1, 0], [0, 0, 0]])
    assert np.allclose(svc.c, svc.c.conj().T)


def test_steady_state_is_fixed_point(svc_rates):
    assert np.max(np.abs(dissipator_apply(svc_rates, steady_state(svc_rates)))) < 1e-14


def test_spontaneous_emission_population_decay():
    r = named_channel("amplitude_damping", A=1.0)
    assert np.allclose(dissipator_apply(r, np.diag([1.0, 0.0])), np.diag([-1.0, 1.0]))


def test_dissipator_trace_hermiticity_linearity(svc_rates, random_rho):
    rho1, rho2 = random_rho(), random_rho()
    out = dissipator_apply(svc_rates, rho1)
    assert abs(np.trace(out)) < 1e-12
    assert np.max(np.abs(out - out.conj().T)) < 1e-12
    combo = dissipator_apply(svc_rates, 0.3 * rho1 + 0.7 * rho2)
    assert np.max(np.abs(combo - 0.3 * out - 0.7 * dissipator_apply(svc_rates, rho2))) < 1e-12


@pytest.mark.parametrize("M", [0.0, 0.6, SQRT2])
def test_general_form_matches_four_term_display(M, random_rho):
    r = reservoir_rates(N=1.0, M=M)
    rho = random_rho()
    assert np.max(np.abs(general_dissipator(build_spec(r), rho) - dissipator_apply(r, rho))) < 1e-12


def test_liouville_reduces_to_dissipator_without_drive(svc_rates, random_rho):
    rho = random_rho()
    assert np.allclose(liouville_apply(svc_rates, rho), dissipator_apply(svc_rates, rho))


def test_pure_drive_is_traceless_commutator(random_rho):
    r = RateParams(inv_T1=0.0, inv_T2=0.0, omega=1.5)
    out = liouville_apply(r, random_rho())
    assert abs(np.trace(out)) < 1e-14


def test_bloch_equation_equivalence(random_rho):
    r = reservoir_rates(N=1.0, M=1.2, omega=0.8)
    inv_tu, inv_tv, inv_tw = bloch_rates(r)
    for _ in range(5):
        rho = random_rho()
        u, v, w = _bloch(rho)
        expected = np.array([
            -inv_tu * u,
            -inv_tv * v - r.omega * w,
            -inv_tw * (w - r.w_eq) + r.omega * v,
        ])
        assert np.max(np.abs(_bloch(liouville_apply(r, rho)) - expected)) < 1e-12


def test_c_matrix_positivity():
    boundary = build_spec(reservoir_rates(N=1.0, M=SQRT2))
    assert c_matrix_positive(boundary)
    assert np.min(np.abs(np.linalg.eigvalsh(boundary.c))) < 1e-12
    beyond = RateParams(inv_T1=3.0, inv_T2=1.5, inv_T3=1.01 * SQRT2, w_eq=-1 / 3)
    assert not c_matrix_positive(build_spec(beyond))
    assert c_matrix_positive(build_spec(named_channel("phase_damping", gamma=1.0)))
