"""Lindblad generator with one cavity decay channel."""
import numpy as np

from ..core.exceptions import DimensionMismatch
from ..model.operators import build_coupling, build_hamiltonian
from ..model.schemas import SystemParams, TruncatedBasis


def _check_shapes(rho: np.ndarray, h: np.ndarray, l: np.ndarray) -> None:
    if h.shape != l.shape or h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionMismatch(f"H and L must be square and alike, got {h.shape} and {l.shape}")
    if rho.shape[-2:] != h.shape:
        raise DimensionMismatch(f"state of shape {rho.shape} does not act on operators of shape {h.shape}")


def lindblad_rhs(rho: np.ndarray, h: np.ndarray, l: np.ndarray) -> np.ndarray:
    """-i[H, rho] + L rho L' - (1/2){L'L, rho}, also on stacks of matrices."""
    rho, h, l = np.asarray(rho), np.asarray(h), np.asarray(l)
    _check_shapes(rho, h, l)
    return LindbladGenerator(h, l)(rho)


class LindbladGenerator:
    """Precomputed H_eff = H - (i/2) L'L for repeated applications."""

    def __init__(self, h: np.ndarray, l: np.ndarray):
        self.h = np.asarray(h, dtype=complex)
        self.l = np.asarray(l, dtype=complex)
        self.l_dag = self.l.conj().T
        self.h_eff = self.h - 0.5j * (self.l_dag @ self.l)
        self.h_eff_dag = self.h_eff.conj().T

    @classmethod
    def from_params(cls, params: SystemParams, basis: TruncatedBasis) -> "LindbladGenerator":
        return cls(build_hamiltonian(params, basis).entries, build_coupling(params, basis).entries)

    @property
    def dimension(self) -> int:
        return self.h.shape[0]

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        return -1j * (self.h_eff @ rho) + 1j * (rho @ self.h_eff_dag) + self.l @ rho @ self.l_dag

    def residual(self, rho: np.ndarray) -> float:
        return float(np.max(np.abs(self(rho))))
