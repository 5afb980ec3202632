"""
CORE: GEOMETRY
- Bloch-vector view of qubit states (u, v, w) with rho = (I + b.sigma)/2.
- Image ellipsoid of the pure-state sphere under the affine channel map.
- Minimal-entropy outputs: pure inputs whose image is longest.
- Surface sampler feeding the CSV output of the ellipsoid family.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import minimize
from scipy.stats import entropy
from tqdm import tqdm

from config.channel_manager import get_numerics
from core.channels import RateParams
from core.dampingbasis import AffineMap, transfer_matrix
from core.errors import DegenerateEllipsoidError, InvalidStateError, ParameterError
from core.matkernel import CMat, I2, SIGMA_X, SIGMA_Y, SIGMA_Z, validate_density_matrix

logger = logging.getLogger(__name__)

BLOCH_TOL = 1e-12


@dataclass(frozen=True)
class BlochVector:
    u: float
    v: float
    w: float

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.v, self.w])

    @property
    def norm(self) -> float:
        return math.sqrt(self.u ** 2 + self.v ** 2 + self.w ** 2)

    @classmethod
    def from_array(cls, b) -> "BlochVector":
        u, v, w = (float(x) for x in b)
        return cls(u, v, w)

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "BlochVector":
        return cls(math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta))


@dataclass(frozen=True)
class Ellipsoid:
    semi_axes: Tuple[float, float, float]
    center: Tuple[float, float, float]

    def surface_residual(self, points) -> float:
        """max |sum ((x - c)/a)^2 - 1| over the given points."""
        pts = (np.atleast_2d(points) - np.asarray(self.center)) / np.asarray(self.semi_axes)
        return float(np.max(np.abs(np.sum(pts ** 2, axis=1) - 1.0)))


@dataclass(frozen=True)
class EntropyOptimum:
    input: BlochVector
    output: BlochVector
    entropy: float


@dataclass(frozen=True)
class MinimalEntropyResult:
    states: List[EntropyOptimum]
    degenerate: bool

    @property
    def entropy(self) -> float:
        return self.states[0].entropy


def rho_to_bloch(rho) -> BlochVector:
    """(Tr rho X, Tr rho Y, Tr rho Z); u = 2 Re rho_12, v = -2 Im rho_12, w = rho_11 - rho_22."""
    rho = validate_density_matrix(rho)
    return BlochVector(
        u=float(np.trace(rho @ SIGMA_X).real),
        v=float(np.trace(rho @ SIGMA_Y).real),
        w=float(np.trace(rho @ SIGMA_Z).real),
    )


def bloch_to_rho(b) -> CMat:
    """
    Density matrix of a Bloch vector.

    Raises:
        InvalidStateError: If |b| > 1 + 1e-12
    """
    if not isinstance(b, BlochVector):
        b = BlochVector.from_array(b)
    if b.norm > 1.0 + BLOCH_TOL:
        raise InvalidStateError(f"Bloch vector length {b.norm:.12g} exceeds 1")
    return 0.5 * (I2 + b.u * SIGMA_X + b.v * SIGMA_Y + b.w * SIGMA_Z)


def bloch_entropy(length: float) -> float:
    """Von Neumann entropy (bits) of a state with the given Bloch length."""
    p = min(max(0.5 * (1.0 + length), 0.0), 1.0)
    return float(entropy([p, 1.0 - p], base=2))


def sphere_lattice(n: int) -> np.ndarray:
    """Deterministic Fibonacci lattice of n unit vectors, shape (n, 3)."""
    k = np.arange(n) + 0.5
    w = 1.0 - 2.0 * k / n
    radius = np.sqrt(1.0 - w ** 2)
    phi = math.pi * (3.0 - math.sqrt(5.0)) * k
    return np.column_stack([radius * np.cos(phi), radius * np.sin(phi), w])


def image_ellipsoid(m: AffineMap) -> Ellipsoid:
    """
    Image of the unit sphere: axes Lambda, center at the shift.

    Raises:
        DegenerateEllipsoidError: If any contraction is zero
    """
    flattened = [i for i, lam in enumerate(m.Lambda) if lam <= 0.0]
    if flattened:
        raise DegenerateEllipsoidError(flattened)
    return Ellipsoid(semi_axes=tuple(m.Lambda), center=tuple(m.shift))


def containment_margin(m: AffineMap, n_points: int = 10000) -> float:
    """Largest squared output length over the sphere lattice; <= 1 for CP maps."""
    out = sphere_lattice(n_points) * np.asarray(m.Lambda) + np.asarray(m.shift)
    return float(np.max(np.sum(out ** 2, axis=1)))


def bloch_matrix(b) -> CMat:
    """Traceless part b.sigma of a Bloch vector."""
    u, v, w = b
    return u * SIGMA_X + v * SIGMA_Y + w * SIGMA_Z


def det_contraction(m: AffineMap, b) -> Tuple[float, float]:
    """(|det B|, |det B'|) for the traceless Bloch matrices before and after the map."""
    b = np.asarray(b, dtype=float)
    before = abs(np.linalg.det(bloch_matrix(b)))
    after = abs(np.linalg.det(bloch_matrix(m.apply(b))))
    return float(before), float(after)


def _angles(b: np.ndarray) -> Tuple[float, float]:
    return math.acos(max(-1.0, min(1.0, b[2]))), math.atan2(b[1], b[0])


def _unit(theta: float, phi: float) -> np.ndarray:
    return np.array([math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)])


def minimal_entropy_states(r: RateParams, t: float, n_grid: Optional[int] = None) -> MinimalEntropyResult:
    """
    Pure inputs whose outputs have the least entropy.

    Entropy is minimized as output Bloch length is maximized: a lattice scan
    of the sphere, then local refinement of the best candidates.

    Args:
        r: Decay rates (omega allowed; the map is taken from the transfer matrix)
        t: Elapsed time
        n_grid: Lattice size, defaults to the numerics config

    Returns:
        MinimalEntropyResult with every maximizer within tolerance of the optimum
        and a flag for continuous optimum sets

    Raises:
        ParameterError: If n_grid < 1
    """
    cfg = get_numerics("geometry")
    n_grid = cfg["grid_points"] if n_grid is None else n_grid
    if n_grid < 1:
        raise ParameterError(f"n_grid must be positive, got {n_grid}")
    T = transfer_matrix(r, t)
    block, shift = T[1:, 1:], T[1:, 0]

    def length2(b):
        out = b @ block.T + shift
        return np.sum(out ** 2, axis=-1)

    grid = sphere_lattice(n_grid)
    values = length2(grid)
    # Stable order keeps tie-breaking deterministic
    order = np.argsort(-values, kind="stable")[: cfg["refine_candidates"]]

    refined = []
    for idx in order:
        theta0, phi0 = _angles(grid[idx])
        res = minimize(
            lambda x: -length2(_unit(x[0], x[1])),
            x0=np.array([theta0, phi0]),
            method="Powell",
            options={"xtol": cfg["refine_xtol"], "ftol": 1e-15},
        )
        refined.append((_unit(*res.x), -float(res.fun)))

    best = max(val for _, val in refined)
    maximizers: List[np.ndarray] = []
    for b, val in refined:
        if best - val > cfg["optimum_tol"]:
            continue
        if all(np.linalg.norm(b - kept) > cfg["dedup_distance"] for kept in maximizers):
            maximizers.append(b)

    states = []
    for b in maximizers:
        out = b @ block.T + shift
        states.append(EntropyOptimum(
            input=BlochVector.from_array(b),
            output=BlochVector.from_array(out),
            entropy=bloch_entropy(float(np.linalg.norm(out))),
        ))

    degenerate = len(states) > 2
    if degenerate:
        logger.info(f"📊 Degenerate entropy optimum: {len(states)} distinct representatives")
    return MinimalEntropyResult(states=states, degenerate=degenerate)


def major_axis_states(m: AffineMap) -> List[EntropyOptimum]:
    """Endpoints of the longest semi-axis of the image ellipsoid, as (input, output, entropy)."""
    axis = int(np.argmax(np.abs(m.Lambda)))
    states = []
    for sign in (1.0, -1.0):
        b = np.zeros(3)
        b[axis] = sign
        out = m.apply(b)
        states.append(EntropyOptimum(
            input=BlochVector.from_array(b),
            output=BlochVector.from_array(out),
            entropy=bloch_entropy(float(np.linalg.norm(out))),
        ))
    return states


def ellipsoid_surface(r: RateParams, times: Sequence[float], n_points: Optional[int] = None,
                      progress: bool = False) -> pd.DataFrame:
    """Images of the sphere lattice at each time, as rows (t, u, v, w)."""
    n_points = get_numerics("geometry")["surface_points"] if n_points is None else n_points
    if n_points < 1:
        raise ParameterError(f"n_points must be positive, got {n_points}")
    grid = sphere_lattice(n_points)
    frames = []
    for t in tqdm(times, desc="Ellipsoids", disable=not progress):
        T = transfer_matrix(r, t)
        out = grid @ T[1:, 1:].T + T[1:, 0]
        frame = pd.DataFrame(out, columns=["u", "v", "w"])
        frame.insert(0, "t", float(t))
        frames.append(frame)
    return pd.concat(frames, ignore_index=True)
