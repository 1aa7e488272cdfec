from typing import Any

import numpy as np
from pydantic import Field, field_validator, model_validator

from ..shared.base_schemas import ArrayBase, FrozenBase, frozen_array


class LinearModel(ArrayBase):
    """State-space triple (A, B, C) of the single-excitation linear model."""

    a_matrix: Any
    b_vector: Any
    c_vector: Any

    @field_validator("a_matrix", "b_vector", "c_vector", mode="before")
    @classmethod
    def to_array(cls, value: Any) -> np.ndarray:
        return frozen_array(np.atleast_2d(value))

    @model_validator(mode="after")
    def check_shapes(self) -> "LinearModel":
        n = self.a_matrix.shape[0]
        if self.a_matrix.shape != (n, n):
            raise ValueError(f"A must be square, got {self.a_matrix.shape}")
        if self.b_vector.shape != (n, 1) or self.c_vector.shape != (1, n):
            raise ValueError(
                f"B and C must be ({n}, 1) and (1, {n}), got {self.b_vector.shape} and {self.c_vector.shape}"
            )
        return self

    @property
    def n_states(self) -> int:
        return self.a_matrix.shape[0]


class TransferEval(FrozenBase):
    s: complex
    g_value: complex
    t_value: complex


class ControllabilityResult(ArrayBase):
    controllable: bool
    eigenvalue: complex | None = None
    witness: Any = None


class DetuningGroup(FrozenBase):
    """Atoms (0-based indices) sharing one frequency."""

    frequency: float
    indices: tuple[int, ...]
    effective_coupling: float = Field(ge=0)


class Decomposition(ArrayBase):
    transform: Any
    a_hat: Any
    groups: tuple[DetuningGroup, ...]
    effective_couplings: tuple[float, ...]
    co_indices: tuple[int, ...]
    dfs_indices: tuple[int, ...]
    flags: tuple[str, ...] = ()

    @field_validator("transform", mode="before")
    @classmethod
    def real_transform(cls, value: Any) -> np.ndarray:
        return frozen_array(value, dtype=float)

    @field_validator("a_hat", mode="before")
    @classmethod
    def complex_generator(cls, value: Any) -> np.ndarray:
        return frozen_array(value)


class DarkBrightCoordinates(ArrayBase):
    """Coordinates of |B_N 0> and |D_N 0> in the columns of the transform."""

    transform: Any
    bright: Any
    dark: Any
    alpha: Any
