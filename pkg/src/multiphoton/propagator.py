"""Propagator V(t) of the no-emission evolution and the transition matrices built from it."""
import logging

import numpy as np
from scipy.linalg import expm

from ..core.config import settings
from ..core.exceptions import IllConditioned, StepTooLarge
from ..core.interfaces.generator import IGeneratorProvider
from ..core.interfaces.integrator import IIntegrator
from ..core.providers.generator import as_generator
from ..core.providers.rk4 import RK4Integrator
from ..shared.base_schemas import TimeGrid
from .schemas import Propagator, TransitionMatrix

logger = logging.getLogger(__name__)


def step_powers(u: np.ndarray, count: int) -> np.ndarray:
    """u^0, u^1, ..., u^(count-1) by repeated multiplication."""
    powers = np.empty((count,) + u.shape, dtype=complex)
    powers[0] = np.eye(u.shape[0])
    for i in range(1, count):
        powers[i] = u @ powers[i - 1]
    return powers


def compute_propagator(
    h_eff: "np.ndarray | IGeneratorProvider",
    grid: TimeGrid,
    integrator: IIntegrator | None = None,
) -> Propagator:
    """Solve V' = -i H_eff(t) V, V(0) = I, on the nodes of grid (t_min is taken as 0).

    A constant generator uses powers of expm(-i H_eff dt); a time-dependent one is
    integrated with RK4 and checked by step halving.
    """
    generator = as_generator(h_eff)
    k = generator.dimension
    n_steps = grid.n_steps

    if generator.is_constant:
        u = expm(-1j * generator(0.0) * grid.dt)
        values = step_powers(u, n_steps + 1)
        logger.debug(f"Propagator by matrix exponential: K={k}, {n_steps} steps")
        return Propagator(dt=grid.dt, n_steps=n_steps, values=values, is_constant=True)

    integrator = integrator or RK4Integrator()

    def rhs(t: float, v: np.ndarray) -> np.ndarray:
        return -1j * (generator(t) @ v)

    _, values, change = integrator.integrate_with_halving(
        rhs, np.eye(k, dtype=complex), 0.0, grid.dt, n_steps, lambda records: records, 1
    )
    if not change <= settings.PROPAGATOR_HALVING_TOL:
        raise StepTooLarge(f"propagator: halving dt={grid.dt:.3e} changes entries by {change:.3e}")
    logger.debug(f"Propagator by RK4: K={k}, {n_steps} steps, halving change {change:.3e}")
    return Propagator(dt=grid.dt, n_steps=n_steps, values=values, is_constant=False)


def propagator_at(prop: Propagator, t: float) -> np.ndarray:
    """V(t) at a node, or between nodes by linear interpolation of the entries."""
    if not -1e-12 <= t <= prop.t_max * (1.0 + 1e-12) + 1e-12:
        raise ValueError(f"t={t} is outside the propagator grid [0, {prop.t_max}]")
    position = t / prop.dt
    node = int(round(position))
    if abs(position - node) <= 1e-9:
        return prop.values[min(node, prop.n_steps)]
    lower = min(int(np.floor(position)), prop.n_steps - 1)
    weight = position - lower
    return (1.0 - weight) * prop.values[lower] + weight * prop.values[lower + 1]


def _inverse_solve(v_tau: np.ndarray, rhs: np.ndarray, tau: float) -> np.ndarray:
    """rhs V(tau)^-1"""
    condition = np.linalg.cond(v_tau)
    if not condition <= settings.CONDITION_LIMIT:
        raise IllConditioned(f"V({tau}) has condition number {condition:.3e}")
    return np.linalg.solve(v_tau.T, rhs.T).T


def transition_matrix(prop: Propagator, t: float, tau: float) -> TransitionMatrix:
    v_t = propagator_at(prop, t)
    v_tau = propagator_at(prop, tau)
    return TransitionMatrix(t=t, tau=tau, value=_inverse_solve(v_tau, v_t, tau))


def emission_operator(prop: Propagator, l: np.ndarray, t: float, tau: float) -> np.ndarray:
    """G(t, tau) L G(t, tau)^-1, which maps a k-photon sector at time t onto the sector with one more
    photon emitted at tau."""
    g = transition_matrix(prop, t, tau).value
    return _inverse_solve(g, g @ np.asarray(l, dtype=complex), t)
