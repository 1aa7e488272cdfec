from typing import Any

import numpy as np
from pydantic import field_validator

from ..model.schemas import TruncatedBasis
from ..shared.base_schemas import ArrayBase, frozen_array


class DensityMatrix(ArrayBase):
    entries: Any

    @field_validator("entries", mode="before")
    @classmethod
    def check_square(cls, value: Any) -> np.ndarray:
        array = frozen_array(value)
        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {array.shape}")
        return array

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    @property
    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    @property
    def min_eigenvalue(self) -> float:
        hermitian = 0.5 * (self.entries + self.entries.conj().T)
        return float(np.linalg.eigvalsh(hermitian)[0])


class MasterTrajectory(ArrayBase):
    """Recorded states of the vacuum master equation, shape (n_records, K, K)."""

    basis: TruncatedBasis
    times: Any
    states: Any
    halving_change: float | None = None

    @field_validator("times", mode="before")
    @classmethod
    def real_times(cls, value: Any) -> np.ndarray:
        return frozen_array(value, dtype=float)

    @field_validator("states", mode="before")
    @classmethod
    def complex_states(cls, value: Any) -> np.ndarray:
        return frozen_array(value)

    @property
    def final(self) -> DensityMatrix:
        return DensityMatrix(entries=self.states[-1])


class FockTrajectory(ArrayBase):
    """Recorded (rho11, rho10, rho01, rho00) of the single-photon driven hierarchy.

    rho11 is the physical system state; rho00 follows the vacuum master equation.
    """

    basis: TruncatedBasis
    times: Any
    rho11: Any
    rho10: Any
    rho01: Any
    rho00: Any
    halving_change: float | None = None

    @field_validator("times", mode="before")
    @classmethod
    def real_times(cls, value: Any) -> np.ndarray:
        return frozen_array(value, dtype=float)

    @field_validator("rho11", "rho10", "rho01", "rho00", mode="before")
    @classmethod
    def complex_states(cls, value: Any) -> np.ndarray:
        return frozen_array(value)


class SteadyState(ArrayBase):
    state: DensityMatrix
    t_reached: float
    residual: float
