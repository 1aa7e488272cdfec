"""Vacuum master equation and the single-photon Fock-state hierarchy.

The hierarchy evolves four matrices, stored in the order (rho11, rho10, rho01, rho00):

    rho11' = L rho11 + xi [rho01, L'] + xi* [L, rho10]
    rho10' = L rho10 + xi [rho00, L']
    rho01' = L rho01 + xi* [L, rho00]
    rho00' = L rho00

with rho11(0) = rho00(0) = rho0 and vanishing cross terms.
"""
import logging

import numpy as np

from ..core.config import settings
from ..core.exceptions import DimensionMismatch, NonConvergence, RegimeViolation, StepTooLarge
from ..core.interfaces.integrator import IIntegrator
from ..core.providers.rk4 import RK4Integrator
from ..model.schemas import SystemParams, TruncatedBasis
from ..shared.base_schemas import TimeGrid
from ..single_excitation.schemas import PulseShape
from .lindblad import LindbladGenerator
from .schemas import DensityMatrix, FockTrajectory, MasterTrajectory, SteadyState

logger = logging.getLogger(__name__)


def _basis_for(params: SystemParams, rho0: np.ndarray) -> TruncatedBasis:
    if rho0.ndim != 2 or rho0.shape[0] != rho0.shape[1]:
        raise DimensionMismatch(f"initial state must be a square matrix, got shape {rho0.shape}")
    try:
        return TruncatedBasis.from_dimension(params.n_atoms, rho0.shape[0])
    except ValueError as e:
        raise DimensionMismatch(str(e)) from e


def _populations(records: np.ndarray) -> np.ndarray:
    return np.diagonal(records, axis1=-2, axis2=-1).real


def _check_halving(change: float, what: str, dt: float) -> None:
    if not change <= settings.STEP_HALVING_TOL:
        raise StepTooLarge(f"{what}: halving dt={dt:.3e} changes populations by {change:.3e}")
    if change > 0.1 * settings.STEP_HALVING_TOL:
        logger.warning(f"{what}: halving change {change:.3e} is within a factor 10 of the tolerance")


def integrate_vacuum_master(
    params: SystemParams,
    rho0: np.ndarray,
    grid: TimeGrid,
    generator: LindbladGenerator | None = None,
    record_every: int | None = None,
    check_step: bool = True,
    integrator: IIntegrator | None = None,
) -> MasterTrajectory:
    """Fixed-step RK4 integration of the vacuum master equation on grid."""
    rho0 = np.asarray(rho0, dtype=complex)
    basis = _basis_for(params, rho0)
    generator = generator or LindbladGenerator.from_params(params, basis)
    if generator.dimension != basis.dimension:
        raise DimensionMismatch(f"generator acts on dimension {generator.dimension}, state has {basis.dimension}")
    record_every = record_every or settings.RECORD_EVERY
    integrator = integrator or RK4Integrator()

    def rhs(_: float, rho: np.ndarray) -> np.ndarray:
        return generator(rho)

    logger.info(f"Vacuum master equation: K={basis.dimension}, {grid.n_steps} steps of {grid.dt:.3e}")
    change = None
    if check_step:
        times, records, change = integrator.integrate_with_halving(
            rhs, rho0, grid.t_min, grid.dt, grid.n_steps, _populations, record_every
        )
        _check_halving(change, "vacuum master equation", grid.dt)
    else:
        times, records = integrator.integrate(rhs, rho0, grid.t_min, grid.dt, grid.n_steps, record_every)
    return MasterTrajectory(basis=basis, times=times, states=records, halving_change=change)


def integrate_fock_master(
    params: SystemParams,
    xi: PulseShape,
    rho0: np.ndarray,
    grid: TimeGrid,
    generator: LindbladGenerator | None = None,
    record_every: int | None = None,
    check_step: bool = True,
    integrator: IIntegrator | None = None,
) -> FockTrajectory:
    """Single-photon driven hierarchy; xi is interpolated linearly between its samples."""
    rho0 = np.asarray(rho0, dtype=complex)
    basis = _basis_for(params, rho0)
    generator = generator or LindbladGenerator.from_params(params, basis)
    if generator.dimension != basis.dimension:
        raise DimensionMismatch(f"generator acts on dimension {generator.dimension}, state has {basis.dimension}")
    integrator = integrator or RK4Integrator()
    l, l_dag = generator.l, generator.l_dag
    record_every = record_every or settings.RECORD_EVERY

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        out = generator(y)
        amplitude = complex(xi.at(t))
        if amplitude != 0.0:
            _, rho10, rho01, rho00 = y
            conj = amplitude.conjugate()
            out[0] += amplitude * (rho01 @ l_dag - l_dag @ rho01) + conj * (l @ rho10 - rho10 @ l)
            out[1] += amplitude * (rho00 @ l_dag - l_dag @ rho00)
            out[2] += conj * (l @ rho00 - rho00 @ l)
        return out

    y0 = np.zeros((4,) + rho0.shape, dtype=complex)
    y0[0] = rho0
    y0[3] = rho0

    logger.info(f"Fock-state hierarchy: K={basis.dimension}, {grid.n_steps} steps of {grid.dt:.3e}")
    change = None
    if check_step:
        times, records, change = integrator.integrate_with_halving(
            rhs, y0, grid.t_min, grid.dt, grid.n_steps, lambda r: _populations(r[:, 0]), record_every
        )
        _check_halving(change, "Fock-state hierarchy", grid.dt)
    else:
        times, records = integrator.integrate(rhs, y0, grid.t_min, grid.dt, grid.n_steps, record_every)
    return FockTrajectory(
        basis=basis,
        times=times,
        rho11=records[:, 0],
        rho10=records[:, 1],
        rho01=records[:, 2],
        rho00=records[:, 3],
        halving_change=change,
    )


def steady_state(
    params: SystemParams,
    rho0: np.ndarray,
    generator: LindbladGenerator | None = None,
    integrator: IIntegrator | None = None,
) -> SteadyState:
    """Integrate in chunks until the generator residual falls below STEADY_RESIDUAL."""
    rho = np.asarray(rho0, dtype=complex)
    basis = _basis_for(params, rho)
    generator = generator or LindbladGenerator.from_params(params, basis)
    integrator = integrator or RK4Integrator()

    residual = generator.residual(rho)
    if residual < settings.STEADY_RESIDUAL:
        return SteadyState(state=DensityMatrix(entries=rho), t_reached=0.0, residual=residual)
    if params.kappa <= 0.0:
        raise RegimeViolation("steady-state search needs kappa > 0")

    dt = settings.DT_KAPPA / params.kappa
    chunk_steps = int(round(settings.STEADY_CHUNK_KAPPA / settings.DT_KAPPA))
    t_limit = settings.STEADY_T_MAX_KAPPA / params.kappa
    t = 0.0

    def rhs(_: float, state: np.ndarray) -> np.ndarray:
        return generator(state)

    while t < t_limit:
        _, records = integrator.integrate(rhs, rho, t, dt, chunk_steps, chunk_steps)
        rho = records[-1]
        t += chunk_steps * dt
        residual = generator.residual(rho)
        logger.debug(f"Steady-state search at t={t:.2f}: residual {residual:.3e}")
        if residual < settings.STEADY_RESIDUAL:
            logger.info(f"Steady state reached at t={t:.2f} with residual {residual:.3e}")
            return SteadyState(state=DensityMatrix(entries=rho), t_reached=t, residual=residual)

    raise NonConvergence(f"generator residual {residual:.3e} after t={t:.1f} exceeds {settings.STEADY_RESIDUAL:.1e}")
