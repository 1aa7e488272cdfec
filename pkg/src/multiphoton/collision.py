"""Time-bin collision model of the emitted field.

The field is a chain of bins of length step, each a mode truncated at BIN_PHOTONS photons.
Every bin meets the system once, in vacuum, through a beam splitter with the cavity whose
reflectivity is 1 - exp(-kappa step), between two half steps of the Hamiltonian
evolution. The bin is then traced out and its photon number added to the emitted count.
"""
import logging
import math

import numpy as np
from scipy.linalg import expm

from ..model.operators import annihilation, build_hamiltonian, embed_cavity
from ..model.schemas import SystemParams
from .schemas import SectorNormTrajectory
from .sectors import grid_steps, initial_excitations, initial_state

logger = logging.getLogger(__name__)

BIN_PHOTONS = 2


def _bin_kraus(a: np.ndarray, kappa: float, step: float) -> np.ndarray:
    """<m| W |0> for m = 0..BIN_PHOTONS, with W the cavity-bin beam splitter."""
    b = annihilation(BIN_PHOTONS)
    levels = BIN_PHOTONS + 1
    theta = math.acos(math.exp(-0.5 * kappa * step))
    w = expm(theta * (np.kron(a, b.conj().T) - np.kron(a.conj().T, b)))
    k = a.shape[0]
    return np.moveaxis(w.reshape(k, levels, k, levels)[:, :, :, 0], 1, 0)


def collision_model_norms(
    params: SystemParams,
    eta0: np.ndarray,
    t: float,
    step: float,
    record_every: int = 1,
) -> SectorNormTrajectory:
    """Probabilities of k emitted photons from an explicit chain of field bins."""
    basis, psi = initial_state(params, eta0)
    n_steps = grid_steps(t, step)
    n_sectors = int(initial_excitations(basis, psi).max()) + 1

    half = expm(-0.5j * build_hamiltonian(params, basis).entries * step)
    half_dag = half.conj().T
    a = embed_cavity(annihilation(basis.max_cavity_photons), basis)
    kraus = _bin_kraus(a, params.kappa, step)

    rho = np.zeros((n_sectors, basis.dimension, basis.dimension), dtype=complex)
    rho[0] = np.outer(psi, psi.conj())
    times, norms = [0.0], [np.trace(rho, axis1=1, axis2=2).real]
    for m in range(1, n_steps + 1):
        rho = half @ rho @ half_dag
        collided = np.zeros_like(rho)
        for photons, op in enumerate(kraus):
            kept = max(n_sectors - photons, 0)
            collided[photons:] += (op @ rho[:kept] @ op.conj().T)
        rho = half @ collided @ half_dag
        if m % record_every == 0 or m == n_steps:
            times.append(m * step)
            norms.append(np.trace(rho, axis1=1, axis2=2).real)

    logger.debug(f"Collision model, {n_steps} bins: sector norms {np.round(norms[-1], 6).tolist()}")
    return SectorNormTrajectory(times=times, norms=norms, densities=rho)
