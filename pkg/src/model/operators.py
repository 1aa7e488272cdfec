"""Operators of the Tavis-Cummings model on a truncated basis.

Matrices are built as Kronecker products in the order atom 1, ..., atom N,
cavity, so the flat index is bits * (R + 1) + n with atom 1 the most
significant bit.
"""
import logging

import numpy as np

from ..core.exceptions import DimensionMismatch
from .schemas import OperatorMatrix, SystemParams, TruncatedBasis

logger = logging.getLogger(__name__)

# single-atom operators in the (g, e) order
SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
SIGMA_PLUS = SIGMA_MINUS.T.copy()
SIGMA_Z = np.diag([-1.0, 1.0]).astype(complex)


def annihilation(max_photons: int) -> np.ndarray:
    """a|n> = sqrt(n)|n-1> on photon numbers 0..max_photons"""
    return np.diag(np.sqrt(np.arange(1, max_photons + 1, dtype=float)), k=1).astype(complex)


def embed_atom(op: np.ndarray, atom: int, basis: TruncatedBasis) -> np.ndarray:
    """Lift a 2x2 operator on atom (1-based) to the full space."""
    left = np.eye(2 ** (atom - 1))
    right = np.eye(2 ** (basis.n_atoms - atom) * basis.cavity_levels)
    return np.kron(np.kron(left, op), right)


def embed_cavity(op: np.ndarray, basis: TruncatedBasis) -> np.ndarray:
    return np.kron(np.eye(2**basis.n_atoms), op)


def _check(params: SystemParams, basis: TruncatedBasis) -> None:
    if basis.n_atoms != params.n_atoms:
        raise DimensionMismatch(
            f"basis has {basis.n_atoms} atoms but params describe {params.n_atoms}"
        )


def build_hamiltonian(params: SystemParams, basis: TruncatedBasis) -> OperatorMatrix:
    """H = w_r a'a + sum_j (w_j/2) sz_j + G_j (a' s-_j + s+_j a), truncated at R photons."""
    _check(params, basis)
    a = embed_cavity(annihilation(basis.max_cavity_photons), basis)
    a_dag = a.conj().T
    h = params.omega_r * (a_dag @ a)
    for j, (w, g) in enumerate(zip(params.omega, params.gamma), start=1):
        sm = embed_atom(SIGMA_MINUS, j, basis)
        h = h + 0.5 * w * embed_atom(SIGMA_Z, j, basis)
        h = h + g * (a_dag @ sm + sm.conj().T @ a)
    return OperatorMatrix(entries=h)


def build_coupling(params: SystemParams, basis: TruncatedBasis) -> OperatorMatrix:
    """L = sqrt(kappa) a"""
    _check(params, basis)
    a = embed_cavity(annihilation(basis.max_cavity_photons), basis)
    return OperatorMatrix(entries=np.sqrt(params.kappa) * a)


def build_effective_hamiltonian(params: SystemParams, basis: TruncatedBasis) -> OperatorMatrix:
    """H_eff = H - (i/2) L'L"""
    h = build_hamiltonian(params, basis).entries
    coupling = build_coupling(params, basis)
    return OperatorMatrix(entries=h - 0.5j * (coupling.dagger @ coupling.entries))


def build_number_operator(basis: TruncatedBasis) -> OperatorMatrix:
    a = embed_cavity(annihilation(basis.max_cavity_photons), basis)
    return OperatorMatrix(entries=a.conj().T @ a)


def build_atom_projector(basis: TruncatedBasis, atom: int) -> OperatorMatrix:
    """|e_j><e_j| for atom j (1-based)"""
    if not 1 <= atom <= basis.n_atoms:
        raise DimensionMismatch(f"atom {atom} is outside 1..{basis.n_atoms}")
    return OperatorMatrix(entries=embed_atom(SIGMA_PLUS @ SIGMA_MINUS, atom, basis))


def build_excitation_operator(basis: TruncatedBasis) -> OperatorMatrix:
    """sum_j s+_j s-_j + a'a, diagonal in the basis"""
    return OperatorMatrix(entries=np.diag(basis.excitations().astype(complex)))


def ground_state(basis: TruncatedBasis) -> np.ndarray:
    """|g...g, 0>"""
    vector = np.zeros(basis.dimension, dtype=complex)
    vector[0] = 1.0
    return vector


def product_state(basis: TruncatedBasis, ket: str) -> np.ndarray:
    """Density matrix |ket><ket| of a basis product state."""
    vector = basis.ket_vector(ket)
    return np.outer(vector, vector.conj())
