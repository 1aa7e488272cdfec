"""Output pulse of the ensemble driven by a single photon from the ground state."""
import logging

import numpy as np

from ..core.config import settings
from ..core.interfaces.executor import IGridExecutor
from ..core.interfaces.integrator import IIntegrator
from ..core.providers.rk4 import RK4Integrator
from ..linear.decomposition import minimal_model
from ..linear.model import build_linear_model, transfer_response
from ..model.schemas import SystemParams
from ..shared.base_schemas import TimeGrid
from .schemas import GaussianSpec, PulseShape, RisingExponentialSpec

logger = logging.getLogger(__name__)


def single_photon_response(
    params: SystemParams,
    xi: PulseShape,
    executor: IGridExecutor | None = None,
    pad_factor: int | None = None,
) -> PulseShape:
    """eta = IDFT of G[iw] xi[iw] on the zero-padded sample grid.

    G comes from the controllable and observable block, so degenerate
    frequencies never put a pole on the grid.
    """
    pad_factor = pad_factor or settings.RESPONSE_PAD_FACTOR
    n = len(xi.values)
    size = pad_factor * n
    omega = 2.0 * np.pi * np.fft.fftfreq(size, xi.dt)
    model = minimal_model(params)
    logger.info(f"Frequency-domain response on {size} points for N={params.n_atoms}")

    g = transfer_response(model, 1j * omega, executor)
    eta = np.fft.ifft(g * np.fft.fft(xi.values, size))[:n]
    return PulseShape(t_start=xi.t_start, dt=xi.dt, values=eta, declared_norm=xi.declared_norm)


def single_photon_response_time_domain(
    params: SystemParams,
    spec: RisingExponentialSpec | GaussianSpec,
    grid: TimeGrid,
    integrator: IIntegrator | None = None,
) -> PulseShape:
    """x' = A x + B xi(t), eta = C x + xi(t), integrated with exact pulse values at the substeps."""
    integrator = integrator or RK4Integrator()
    model = build_linear_model(params)
    a = np.asarray(model.a_matrix)
    b = np.asarray(model.b_vector)[:, 0]
    c = np.asarray(model.c_vector)[0]

    def rhs(t: float, x: np.ndarray) -> np.ndarray:
        return a @ x + b * complex(spec.evaluate(t))

    x0 = np.zeros(model.n_states, dtype=complex)
    times, states = integrator.integrate(rhs, x0, grid.t_min, grid.dt, grid.n_steps)
    eta = states @ c + spec.evaluate(times)
    return PulseShape(t_start=grid.t_min, dt=grid.dt, values=eta)
