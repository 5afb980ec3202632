import math

import numpy as np
import pytest

from core.capacity import von_neumann_entropy
from core.dampingbasis import AffineMap, affine_map, channel_apply
from core.errors import DegenerateEllipsoidError, InvalidStateError, ParameterError
from core.geometry import (
    BlochVector, bloch_to_rho, containment_margin, ellipsoid_surface, image_ellipsoid, major_axis_states,
    minimal_entropy_states, rho_to_bloch, sphere_lattice,
)
from core.matkernel import I2
from tests.conftest import SQRT2, reservoir_rates

EXPECTED_MAJOR_LENGTH = 0.970908
EXACT_MAX_LENGTH = 0.971061


def test_bloch_round_trip(random_rho):
    rho = random_rho()
    assert np.allclose(bloch_to_rho(rho_to_bloch(rho)), rho, atol=1e-14)


def test_reference_states():
    assert rho_to_bloch(0.5 * I2) == BlochVector(0.0, 0.0, 0.0)
    assert rho_to_bloch(np.diag([1.0, 0.0])) == BlochVector(0.0, 0.0, 1.0)
    # v = -2 Im rho_12
    assert rho_to_bloch(np.array([[0.5, -0.5j], [0.5j, 0.5]])).v == pytest.approx(1.0)


def test_bloch_vector_outside_ball_rejected():
    with pytest.raises(InvalidStateError):
        bloch_to_rho([0.0, 0.0, 1.1])
    bloch_to_rho(BlochVector.from_angles(0.3, 1.2))


def test_sphere_lattice_is_unit_and_deterministic():
    grid = sphere_lattice(500)
    assert grid.shape == (500, 3)
    assert np.allclose(np.linalg.norm(grid, axis=1), 1.0)
    assert np.array_equal(grid, sphere_lattice(500))


def test_image_ellipsoid_axes_and_center(svc_rates):
    m = affine_map(svc_rates, 1.0)
    ellipsoid = image_ellipsoid(m)
    assert ellipsoid.semi_axes == m.Lambda
    assert ellipsoid.center == pytest.approx((0.0, 0.0, -0.316738), abs=1e-6)


def test_flat_ellipsoid_rejected():
    with pytest.raises(DegenerateEllipsoidError) as info:
        image_ellipsoid(AffineMap(Lambda=(0.5, 0.0, 0.5), shift=(0.0, 0.0, 0.0)))
    assert info.value.flattened_axes == (1,)


@pytest.mark.parametrize("M", [0.0, 0.8, SQRT2])
def test_ellipsoid_contained_in_ball(M):
    for t in (0.1, 1.0, 3.0):
        assert containment_margin(affine_map(reservoir_rates(N=1.0, M=M), t)) <= 1.0 + 1e-12


def test_surface_points_lie_on_ellipsoid(svc_rates):
    frame = ellipsoid_surface(svc_rates, [1.0], n_points=200)
    ellipsoid = image_ellipsoid(affine_map(svc_rates, 1.0))
    assert ellipsoid.surface_residual(frame[["u", "v", "w"]].to_numpy()) <= 1e-10


def test_ellipsoid_surface_frame(svc_rates):
    frame = ellipsoid_surface(svc_rates, [0.0, 0.5, 1.0], n_points=50)
    assert list(frame.columns) == ["t", "u", "v", "w"]
    assert len(frame) == 150
    start = frame[frame["t"] == 0.0][["u", "v", "w"]].to_numpy()
    assert np.allclose(np.linalg.norm(start, axis=1), 1.0)


def test_svc_minimal_entropy_pair(svc_rates):
    result = minimal_entropy_states(svc_rates, 1.0)
    assert len(result.states) == 2
    assert not result.degenerate
    for s in result.states:
        assert abs(s.input.u) < 1e-5
        assert abs(s.input.w) < 0.05
        assert s.output.norm >= EXPECTED_MAJOR_LENGTH - 1e-9
        assert s.output.norm == pytest.approx(EXACT_MAX_LENGTH, abs=1e-5)
    assert result.states[0].input.v * result.states[1].input.v < 0


def test_major_axis_endpoints(svc_rates):
    states = major_axis_states(affine_map(svc_rates, 1.0))
    assert [abs(s.input.v) for s in states] == [1.0, 1.0]
    for s in states:
        assert s.output.norm == pytest.approx(EXPECTED_MAJOR_LENGTH, abs=2e-6)


def test_thermal_optimum_is_a_circle(thermal_rates):
    result = minimal_entropy_states(thermal_rates, 1.0)
    assert result.degenerate
    assert len(result.states) >= 8
    entropies = [s.entropy for s in result.states]
    assert max(entropies) - min(entropies) <= 1e-7
    heights = [s.input.w for s in result.states]
    assert max(heights) - min(heights) <= 1e-3


def test_identity_map_is_degenerate(svc_rates):
    result = minimal_entropy_states(svc_rates, 0.0, n_grid=500)
    assert result.degenerate
    assert result.entropy == pytest.approx(0.0, abs=1e-9)


def test_optimum_entropy_matches_density_matrix(svc_rates):
    result = minimal_entropy_states(svc_rates, 1.0)
    for s in result.states:
        rho = channel_apply(svc_rates, 1.0, bloch_to_rho(s.input))
        assert s.entropy == pytest.approx(von_neumann_entropy(rho), abs=1e-9)


def test_minimal_entropy_decreases_with_squeezing():
    entropies = [minimal_entropy_states(reservoir_rates(N=1.0, M=M), 1.0, n_grid=2000).entropy
                 for M in (0.0, 0.7, SQRT2)]
    assert entropies[0] > entropies[1] > entropies[2]


def test_driven_channel_uses_transfer_matrix(svc_rates):
    result = minimal_entropy_states(svc_rates.with_omega(1.0), 1.0, n_grid=2000)
    assert result.states
    assert all(0.0 <= s.output.norm <= 1.0 for s in result.states)
    assert not math.isnan(result.entropy)


def test_empty_lattices_rejected(svc_rates):
    with pytest.raises(ParameterError):
        minimal_entropy_states(svc_rates, 1.0, n_grid=0)
    with pytest.raises(ParameterError):
        ellipsoid_surface(svc_rates, [1.0], n_points=0)
