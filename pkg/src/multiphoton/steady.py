"""Steady multi-photon output states and their plotting form."""
import itertools
import logging
import math

import numpy as np

from ..core.config import settings
from ..core.exceptions import NotConverged
from ..core.interfaces.executor import IGridExecutor
from ..model.schemas import SystemParams
from .schemas import OutputBranch, SectorNormTrajectory, SectorWavefunction, SteadyOutputState, SymmetricPulse
from .sectors import (
    default_step,
    factorial_scale,
    grid_norm,
    grid_steps,
    initial_state,
    sector_norms,
    sector_wavefunctions,
)

logger = logging.getLogger(__name__)


def steady_output_state(
    params: SystemParams,
    eta0: np.ndarray,
    t_max: float,
    grid_step: float | None = None,
    value_stride: int = 1,
    rule: str | None = None,
    executor: IGridExecutor | None = None,
    min_probability: float = 1e-8,
    norms: SectorNormTrajectory | None = None,
) -> SteadyOutputState:
    """Split the joint state at t_max into branches |system state> x |k-photon pulse>.

    Raises NotConverged while the cavity still holds more than STEADY_CAVITY_TOL in amplitude.
    A precomputed norm trajectory ending at t_max may be passed in as norms.
    """
    basis, psi = initial_state(params, eta0)
    step = default_step(params, grid_step)
    if norms is None:
        norms = sector_norms(params, psi, t_max, step, rule, record_every=max(grid_steps(t_max, step), 1))
    photons = basis.photon_numbers()
    populations = np.diagonal(norms.densities, axis1=1, axis2=2).real
    cavity_residual = math.sqrt(max(float(populations[:, photons > 0].sum()), 0.0))
    if cavity_residual > settings.STEADY_CAVITY_TOL:
        raise NotConverged(
            f"cavity amplitude {cavity_residual:.3e} at t={t_max} exceeds {settings.STEADY_CAVITY_TOL:.1e}"
        )

    sectors = sector_wavefunctions(
        params, psi, t_max, step, None, value_stride, rule, executor, norms=norms
    )
    branches = []
    for sector in sectors:
        k = sector.photon_count
        for index in sector.support:
            probability = float(populations[k, index])
            if probability < min_probability:
                continue
            if k == 0:
                amplitude, pulse = complex(sector.values[0, np.flatnonzero(sector.support == index)[0]]), None
            else:
                amplitude = complex(math.sqrt(probability))
                on_grid = grid_norm(sector, int(index))
                pulse = sector.component(int(index)) / math.sqrt(on_grid) if on_grid > 0.0 else None
            branch = OutputBranch(
                photon_count=k, system_index=int(index), ket=basis.label(int(index)),
                amplitude=amplitude, probability=probability, pulse=pulse,
            )
            branches.append(branch)
            logger.info(f"Steady branch |{branch.ket}> with {k} photons: probability {probability:.6f}")

    system_excitation = float(np.sum(populations @ basis.excitations()))
    return SteadyOutputState(
        t=t_max, sectors=sectors, branches=branches, sector_norms=norms.norms[-1],
        cavity_residual=cavity_residual, system_excitation=system_excitation,
    )


def symmetrize_for_plot(sector: SectorWavefunction, system_index: int | None = None) -> SymmetricPulse:
    """Extend a k >= 2 sector to the full hypercube of emission times.

    The amplitude is normalised on the value grid and scaled by 1/sqrt(k!), so the
    hypercube integral of the density is one.
    """
    k = sector.photon_count
    if k < 2:
        raise ValueError(f"symmetrisation needs at least two photons, got k={k}")
    if system_index is None:
        weights = np.sum(np.abs(sector.values) ** 2, axis=0)
        system_index = int(sector.support[np.argmax(weights)])

    amplitude = sector.component(system_index)
    on_grid = grid_norm(sector, system_index)
    if on_grid > 0.0:
        amplitude = amplitude / math.sqrt(on_grid)
    amplitude = factorial_scale(k) * amplitude

    n = sector.n_nodes
    cube = np.zeros((n,) * k, dtype=complex)
    for permutation in itertools.permutations(range(k)):
        cube[tuple(sector.nodes[:, axis] for axis in permutation)] = amplitude
    return SymmetricPulse(
        photon_count=k, system_index=system_index, axis=sector.value_step * np.arange(n), amplitude=cube,
    )
