import numpy as np
import pytest

from src.model.schemas import SystemParams


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240917)


@pytest.fixture
def resonant_trio() -> SystemParams:
    """Resonant three-atom ensemble used for the transmission and response runs."""
    return SystemParams(n_atoms=3, omega_r=0.0, omega=(0.0, 0.0, 0.0), gamma=(1.0, 1.0, 1.0), kappa=1.0)


@pytest.fixture
def detuned_trio() -> SystemParams:
    """Settings of the driven and undriven master-equation runs."""
    return SystemParams(n_atoms=3, omega_r=1.0, omega=(1.0, 1.0, 1.0), gamma=(1.0, 1.0, 1.0), kappa=1.5)
