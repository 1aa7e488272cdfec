import math
from typing import Annotated, Any, Literal

import numpy as np
from pydantic import ConfigDict, Field, field_validator
from scipy.integrate import trapezoid

from ..shared.base_schemas import ArrayBase, FrozenBase, TimeGrid, frozen_array


# Pulse specifications, as stated in run configurations
class RisingExponentialSpec(FrozenBase):
    kind: Literal["rising-exp"] = "rising-exp"
    gamma: float = Field(gt=0)

    model_config = ConfigDict(
        frozen=True,
        extra="forbid",
        json_schema_extra={"example": {"kind": "rising-exp", "gamma": 1.0}},
    )

    def evaluate(self, t: float | np.ndarray) -> np.ndarray:
        """sqrt(gamma) exp(gamma t / 2) for t <= 0, zero afterwards"""
        t = np.asarray(t, dtype=float)
        return np.where(t <= 0.0, math.sqrt(self.gamma) * np.exp(0.5 * self.gamma * np.minimum(t, 0.0)), 0.0)

    def recommended_start(self) -> float:
        return -20.0 / self.gamma


class GaussianSpec(FrozenBase):
    kind: Literal["gaussian"] = "gaussian"
    omega: float = Field(gt=0, description="Bandwidth Omega")
    t_peak: float = Field(default=0.0, description="Peak arrival time")

    model_config = ConfigDict(
        frozen=True,
        extra="forbid",
        json_schema_extra={"example": {"kind": "gaussian", "omega": 3.0, "t_peak": 3.0}},
    )

    def evaluate(self, t: float | np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        amplitude = (self.omega**2 / (2.0 * math.pi)) ** 0.25
        return amplitude * np.exp(-0.25 * self.omega**2 * (t - self.t_peak) ** 2)

    def recommended_start(self) -> float:
        return min(0.0, self.t_peak - 8.0 / self.omega)


PulseSpec = Annotated[RisingExponentialSpec | GaussianSpec, Field(discriminator="kind")]


class PulseShape(ArrayBase):
    """Complex pulse samples on the uniform grid t_start + k dt."""

    t_start: float
    dt: float = Field(gt=0)
    values: Any
    declared_norm: float = 1.0

    @field_validator("values", mode="before")
    @classmethod
    def to_samples(cls, value: Any) -> np.ndarray:
        array = frozen_array(np.atleast_1d(value))
        if array.ndim != 1:
            raise ValueError(f"pulse samples must be one-dimensional, got shape {array.shape}")
        return array

    @classmethod
    def sample(cls, spec: RisingExponentialSpec | GaussianSpec, grid: TimeGrid) -> "PulseShape":
        return cls(t_start=grid.t_min, dt=grid.dt, values=spec.evaluate(grid.times))

    @property
    def times(self) -> np.ndarray:
        return self.t_start + self.dt * np.arange(len(self.values), dtype=float)

    @property
    def norm(self) -> float:
        """Trapezoid estimate of the integral of |xi|^2."""
        if len(self.values) < 2:
            return 0.0
        return float(trapezoid(np.abs(self.values) ** 2, dx=self.dt))

    def at(self, t: float | np.ndarray) -> np.ndarray:
        """Linear interpolation between samples, zero outside the grid."""
        times = self.times
        real = np.interp(t, times, self.values.real, left=0.0, right=0.0)
        imag = np.interp(t, times, self.values.imag, left=0.0, right=0.0)
        return real + 1j * imag


class SingleExcitationState(ArrayBase):
    """Joint state with one excitation shared by the atoms, the cavity and the output field.

    The field part is c_field * phi(tau); field_norm is the integral of |phi|^2 over [0, t].
    """

    t: float
    excited_atom: int
    c: Any
    c_cavity: complex
    c_field: complex
    field_norm: float
    phi: PulseShape | None = None
    moduli_only: bool = False
    flags: tuple[str, ...] = ()

    @field_validator("c", mode="before")
    @classmethod
    def to_amplitudes(cls, value: Any) -> np.ndarray:
        return frozen_array(np.atleast_1d(value))

    @property
    def total_probability(self) -> float:
        return float(
            np.sum(np.abs(self.c) ** 2) + abs(self.c_cavity) ** 2 + abs(self.c_field) ** 2 * self.field_norm
        )


class SuperpositionState(ArrayBase):
    """Evolution of (1/sqrt(N)) sum_k (alpha + beta e^{-i phi_k}) |e_k>."""

    t: float
    alpha: complex
    beta: complex
    c: Any
    c_cavity: complex
    c_field: complex
    field_norm: float
    phi: PulseShape | None = None

    @field_validator("c", mode="before")
    @classmethod
    def to_amplitudes(cls, value: Any) -> np.ndarray:
        return frozen_array(np.atleast_1d(value))

    @property
    def atomic_excitation(self) -> float:
        return float(np.sum(np.abs(self.c) ** 2))

    @property
    def emitted_probability(self) -> float:
        return abs(self.c_field) ** 2 * self.field_norm

    @property
    def total_probability(self) -> float:
        return self.atomic_excitation + abs(self.c_cavity) ** 2 + self.emitted_probability
