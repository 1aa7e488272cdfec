from typing import Any, Literal

import numpy as np
from pydantic import Field, field_validator

from ..model.schemas import TruncatedBasis
from ..shared.base_schemas import ArrayBase, frozen_array

SimplexRule = Literal["trapezoid", "left"]


class Propagator(ArrayBase):
    """V(t_i) on the nodes t_i = i dt, i = 0..n_steps."""

    dt: float = Field(gt=0)
    n_steps: int = Field(ge=0)
    values: Any
    is_constant: bool = True

    @field_validator("values", mode="before")
    @classmethod
    def to_stack(cls, value: Any) -> np.ndarray:
        array = frozen_array(value)
        if array.ndim != 3 or array.shape[1] != array.shape[2]:
            raise ValueError(f"propagator values must have shape (nodes, K, K), got {array.shape}")
        return array

    @property
    def dimension(self) -> int:
        return self.values.shape[1]

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.n_steps + 1, dtype=float)

    @property
    def t_max(self) -> float:
        return self.dt * self.n_steps


class TransitionMatrix(ArrayBase):
    """G(t, tau) = V(t) V(tau)^-1"""

    t: float
    tau: float
    value: Any

    @field_validator("value", mode="before")
    @classmethod
    def to_matrix(cls, value: Any) -> np.ndarray:
        return frozen_array(value)


class SectorWavefunction(ArrayBase):
    """System amplitudes |eta_t(t_1, ..., t_k)> of the k-photon sector.

    Rows of `values` belong to the ordered node tuples in `nodes` (node i sits at
    time i * value_step) and columns to the basis indices in `support`.
    `norm` is the sector probability from the fine-grid density recursion.
    """

    photon_count: int = Field(ge=0)
    t: float
    step: float
    value_step: float
    basis: TruncatedBasis
    support: Any
    nodes: Any
    values: Any
    norm: float
    rule: SimplexRule = "trapezoid"

    @field_validator("support", "nodes", mode="before")
    @classmethod
    def to_indices(cls, value: Any) -> np.ndarray:
        return frozen_array(value, dtype=int)

    @field_validator("values", mode="before")
    @classmethod
    def to_amplitudes(cls, value: Any) -> np.ndarray:
        return frozen_array(value)

    @property
    def n_nodes(self) -> int:
        """Nodes per time axis of the value grid."""
        return int(round(self.t / self.value_step)) + 1

    @property
    def times(self) -> np.ndarray:
        return self.nodes * self.value_step

    def full_values(self) -> np.ndarray:
        """values expanded to K-vectors, shape (n_tuples, K)"""
        full = np.zeros((len(self.values), self.basis.dimension), dtype=complex)
        full[:, self.support] = self.values
        return full

    def value_at(self, nodes: tuple[int, ...]) -> np.ndarray:
        """K-vector at one ordered node tuple."""
        match = np.flatnonzero(np.all(self.nodes == np.asarray(nodes, dtype=int), axis=1))
        if len(match) == 0:
            raise KeyError(f"{nodes} is not a node tuple of the {self.photon_count}-photon sector")
        return self.full_values()[match[0]]

    def component(self, index: int) -> np.ndarray:
        """Amplitudes on one basis index over all node tuples."""
        position = np.flatnonzero(self.support == index)
        if len(position) == 0:
            return np.zeros(len(self.values), dtype=complex)
        return self.values[:, position[0]]


class SectorNormTrajectory(ArrayBase):
    """Sector probabilities over time and the conditional densities at the last node."""

    times: Any
    norms: Any
    densities: Any
    rule: SimplexRule | None = None

    @field_validator("times", "norms", mode="before")
    @classmethod
    def to_real(cls, value: Any) -> np.ndarray:
        return frozen_array(value, dtype=float)

    @field_validator("densities", mode="before")
    @classmethod
    def to_complex(cls, value: Any) -> np.ndarray:
        return frozen_array(value)

    @property
    def total(self) -> np.ndarray:
        return self.norms.sum(axis=1)


class OutputBranch(ArrayBase):
    """One system basis state together with the normalised photon pulse left with it."""

    photon_count: int
    system_index: int
    ket: str
    amplitude: complex
    probability: float
    pulse: Any = None

    @field_validator("pulse", mode="before")
    @classmethod
    def to_pulse(cls, value: Any) -> np.ndarray | None:
        return None if value is None else frozen_array(value)


class SteadyOutputState(ArrayBase):
    t: float
    sectors: list[SectorWavefunction]
    branches: list[OutputBranch]
    sector_norms: Any
    cavity_residual: float
    system_excitation: float

    @field_validator("sector_norms", mode="before")
    @classmethod
    def to_norms(cls, value: Any) -> np.ndarray:
        return frozen_array(value, dtype=float)


class SymmetricPulse(ArrayBase):
    """Symmetrised k-photon amplitude on the full hypercube of node times, scaled by 1/sqrt(k!)."""

    photon_count: int
    system_index: int
    axis: Any
    amplitude: Any

    @field_validator("axis", mode="before")
    @classmethod
    def to_axis(cls, value: Any) -> np.ndarray:
        return frozen_array(value, dtype=float)

    @field_validator("amplitude", mode="before")
    @classmethod
    def to_amplitude(cls, value: Any) -> np.ndarray:
        return frozen_array(value)

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.amplitude) ** 2
