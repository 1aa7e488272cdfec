"""Reduced atomic states and observables of system density matrices."""
import numpy as np

from ..core.exceptions import DimensionMismatch
from ..model.schemas import TruncatedBasis


def reduce_to_atom(rho: np.ndarray, basis: TruncatedBasis, atom: int) -> np.ndarray:
    """Partial trace onto atom j (1-based), returned in the (e, g) order. Accepts stacks."""
    rho = np.asarray(rho)
    k = basis.dimension
    if rho.shape[-2:] != (k, k):
        raise DimensionMismatch(f"state of shape {rho.shape} does not fit a basis of dimension {k}")
    if not 1 <= atom <= basis.n_atoms:
        raise DimensionMismatch(f"atom {atom} is outside 1..{basis.n_atoms}")
    before = 2 ** (atom - 1)
    after = k // (2 * before)
    blocks = rho.reshape(rho.shape[:-2] + (before, 2, after, before, 2, after))
    reduced = np.einsum("...aibajb->...ij", blocks)
    return reduced[..., ::-1, ::-1]


def reduce_to_atom1(rho: np.ndarray, basis: TruncatedBasis) -> np.ndarray:
    return reduce_to_atom(rho, basis, 1)


def excitation_probabilities(states: np.ndarray, basis: TruncatedBasis) -> np.ndarray:
    """P_TLS_j for every state of a stack, shape (..., N)."""
    populations = np.diagonal(np.asarray(states), axis1=-2, axis2=-1).real
    return populations @ basis.atom_occupations()


def ground_fidelity(rho: np.ndarray) -> np.ndarray | float:
    """<g...g,0| rho |g...g,0>"""
    value = np.asarray(rho)[..., 0, 0].real
    return float(value) if value.ndim == 0 else value


def traces(states: np.ndarray) -> np.ndarray:
    return np.trace(np.asarray(states), axis1=-2, axis2=-1).real
