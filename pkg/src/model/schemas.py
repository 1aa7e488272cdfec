import math
from typing import Any

import numpy as np
from pydantic import ConfigDict, Field, field_validator, model_validator

from ..shared.base_schemas import ArrayBase, FrozenBase, frozen_array

ATOM_SYMBOLS = {"g": 0, "e": 1}


class SystemParams(FrozenBase):
    """Physical parameters of the Tavis-Cummings model (all frequencies are detunings)."""

    n_atoms: int = Field(ge=0)
    omega_r: float = 0.0
    omega: tuple[float, ...] = ()
    gamma: tuple[float, ...] = ()
    kappa: float = Field(ge=0)

    model_config = ConfigDict(
        frozen=True,
        extra="forbid",
        json_schema_extra={
            "example": {
                "n_atoms": 3,
                "omega_r": 0.0,
                "omega": [0.0, 0.0, 0.0],
                "gamma": [1.0, 1.0, 1.0],
                "kappa": 1.0,
            }
        },
    )

    @model_validator(mode="after")
    def check_lengths(self) -> "SystemParams":
        if len(self.omega) != self.n_atoms or len(self.gamma) != self.n_atoms:
            raise ValueError(
                f"omega and gamma need n_atoms={self.n_atoms} entries, "
                f"got {len(self.omega)} and {len(self.gamma)}"
            )
        return self

    @property
    def gamma_bar(self) -> float:
        if self.n_atoms == 0:
            return 0.0
        return math.sqrt(sum(g * g for g in self.gamma) / self.n_atoms)

    @property
    def collective_coupling(self) -> float:
        """sqrt(N) * gamma_bar"""
        return math.sqrt(self.n_atoms) * self.gamma_bar

    def has_equal_detunings(self, tol: float = 1e-9) -> bool:
        return all(abs(w - self.omega[0]) <= tol for w in self.omega)

    def with_kappa(self, kappa: float) -> "SystemParams":
        return self.model_copy(update={"kappa": kappa})


class TruncatedBasis(FrozenBase):
    """Atoms (atom 1 most significant, g=0, e=1) times a cavity truncated at R photons."""

    n_atoms: int = Field(ge=0)
    max_cavity_photons: int = Field(ge=0)

    @classmethod
    def from_dimension(cls, n_atoms: int, dimension: int) -> "TruncatedBasis":
        levels, remainder = divmod(dimension, 2**n_atoms)
        if remainder or levels < 1:
            raise ValueError(f"dimension {dimension} does not fit {n_atoms} atoms")
        return cls(n_atoms=n_atoms, max_cavity_photons=levels - 1)

    @property
    def cavity_levels(self) -> int:
        return self.max_cavity_photons + 1

    @property
    def dimension(self) -> int:
        return 2**self.n_atoms * self.cavity_levels

    def encode(self, bits: int, n: int) -> int:
        if not 0 <= bits < 2**self.n_atoms or not 0 <= n <= self.max_cavity_photons:
            raise ValueError(f"({bits}, {n}) is outside the truncated basis")
        return bits * self.cavity_levels + n

    def decode(self, index: int) -> tuple[int, int]:
        if not 0 <= index < self.dimension:
            raise ValueError(f"index {index} is outside the truncated basis")
        return divmod(index, self.cavity_levels)

    def atom_bit(self, bits: int, atom: int) -> int:
        """occupation of atom (1-based) in a bitstring"""
        return (bits >> (self.n_atoms - atom)) & 1

    def index_of(self, ket: str) -> int:
        ket = ket.strip()
        if len(ket) != self.n_atoms + 1 or not ket[-1].isdigit():
            raise ValueError(f"ket '{ket}' needs {self.n_atoms} atom symbols and a photon digit")
        bits = 0
        for symbol in ket[:-1]:
            if symbol not in ATOM_SYMBOLS:
                raise ValueError(f"ket '{ket}' has atom symbol '{symbol}', expected e or g")
            bits = (bits << 1) | ATOM_SYMBOLS[symbol]
        return self.encode(bits, int(ket[-1]))

    def label(self, index: int) -> str:
        bits, n = self.decode(index)
        atoms = "".join("e" if self.atom_bit(bits, j) else "g" for j in range(1, self.n_atoms + 1))
        return f"{atoms}{n}"

    def atom_occupations(self) -> np.ndarray:
        """(K, N) matrix of atomic excitations per basis state"""
        bits = np.arange(self.dimension) // self.cavity_levels
        shifts = self.n_atoms - np.arange(1, self.n_atoms + 1)
        return ((bits[:, None] >> shifts[None, :]) & 1).astype(float)

    def photon_numbers(self) -> np.ndarray:
        return (np.arange(self.dimension) % self.cavity_levels).astype(int)

    def excitations(self) -> np.ndarray:
        return self.atom_occupations().sum(axis=1).astype(int) + self.photon_numbers()

    def ket_vector(self, ket: str) -> np.ndarray:
        vector = np.zeros(self.dimension, dtype=complex)
        vector[self.index_of(ket)] = 1.0
        return vector


class OperatorMatrix(ArrayBase):
    """Dense complex operator on a truncated basis."""

    entries: Any

    @field_validator("entries", mode="before")
    @classmethod
    def check_square(cls, value: Any) -> np.ndarray:
        array = frozen_array(value)
        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            raise ValueError(f"operator must be square, got shape {array.shape}")
        return array

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def dagger(self) -> np.ndarray:
        return self.entries.conj().T
