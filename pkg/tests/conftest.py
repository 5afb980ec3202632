import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to path
sys.path.append(str(Path(__file__).parent.parent))
from core.channels import RateParams, ReservoirParams, rates_from_reservoir

SQRT2 = math.sqrt(2.0)


def reservoir_rates(A=1.0, N=1.0, M=0.0, omega=0.0) -> RateParams:
    return rates_from_reservoir(ReservoirParams(A=A, N=N, M=M, omega=omega))


def ginibre_rho(rng: np.random.Generator, dim: int = 2) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


@pytest.fixture
def svc_rates() -> RateParams:
    """Pure-squeezing reference channel A=1, N=1, M=sqrt2."""
    return reservoir_rates(N=1.0, M=SQRT2)


@pytest.fixture
def thermal_rates() -> RateParams:
    return reservoir_rates(N=1.0, M=0.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def random_rho(rng):
    return lambda dim=2: ginibre_rho(rng, dim)
