"""One handler per CLI command.

Each handler computes its results and hands them to the result repository;
the runner wraps them with the manifest and the run lifespan.
"""
import logging
from collections.abc import Callable

import numpy as np

from ..core.config import settings
from ..core.exceptions import ConfigValidationError
from ..core.interfaces.executor import IGridExecutor
from ..linear.decomposition import co_subsystem, minimal_model, structural_decompose
from ..linear.model import build_linear_model, transfer_response
from ..master.hierarchy import integrate_fock_master, integrate_vacuum_master
from ..master.reduce import excitation_probabilities, ground_fidelity, traces
from ..model.operators import build_coupling, build_effective_hamiltonian, build_hamiltonian, product_state
from ..model.schemas import TruncatedBasis
from ..multiphoton.sectors import grid_steps, sector_norms
from ..multiphoton.steady import steady_output_state
from ..shared.base_schemas import TimeGrid
from ..shared.repository import IResultRepository
from ..single_excitation.analytic import analytic_single_excitation_state, superposition_evolution
from ..single_excitation.pulses import gaussian_pulse, rising_exponential
from ..single_excitation.response import single_photon_response
from ..single_excitation.schemas import GaussianSpec, PulseShape
from .schemas import RunConfig

logger = logging.getLogger(__name__)

CommandHandler = Callable[[RunConfig, IResultRepository, IGridExecutor], None]


def _basis(config: RunConfig) -> TruncatedBasis:
    return TruncatedBasis(n_atoms=config.params.n_atoms, max_cavity_photons=config.params.max_cavity_photons)


def _time_grid(config: RunConfig) -> TimeGrid:
    grid = config.grid
    return TimeGrid(t_min=grid.t_min, t_max=grid.t_max, dt=grid.dt)


def _sample_pulse(config: RunConfig, grid: TimeGrid) -> PulseShape:
    pulse = config.pulse
    if isinstance(pulse, GaussianSpec):
        return gaussian_pulse(pulse.omega, pulse.t_peak, grid)
    return rising_exponential(pulse.gamma, grid)


def _atom_columns(prefix: str, n_atoms: int, unit: str) -> list[str]:
    return [f"{prefix}{j} [{unit}]" for j in range(1, n_atoms + 1)]


def run_model(config: RunConfig, repository: IResultRepository, executor: IGridExecutor) -> None:
    params = config.system_params
    basis = _basis(config)
    repository.write_blocks(
        "operators.csv",
        {
            "H": build_hamiltonian(params, basis).entries,
            "L": build_coupling(params, basis).entries,
            "H_eff": build_effective_hamiltonian(params, basis).entries,
        },
    )
    model = build_linear_model(params)
    repository.write_blocks("linear_model.csv", {"A": model.a_matrix, "B": model.b_vector, "C": model.c_vector})
    logger.info(f"Operators on K={basis.dimension} and a linear model with {model.n_states} states")


def run_transfer(config: RunConfig, repository: IResultRepository, executor: IGridExecutor) -> None:
    grid = config.grid
    omega = grid.omega_min + grid.d_omega * np.arange(config.omega_grid_size, dtype=float)
    g = transfer_response(minimal_model(config.system_params), 1j * omega, executor)
    t_sq = np.abs(g - 1.0) ** 2
    repository.write_table(
        "transfer.csv",
        ["omega [1/time]", "re_G [1]", "im_G [1]", "abs_T_sq [1]"],
        [omega, g.real, g.imag, t_sq],
    )
    peak = int(np.argmax(t_sq))
    logger.info(f"|T|^2 peaks at omega={omega[peak]:.6f} with {t_sq[peak]:.6f}")


def run_decompose(config: RunConfig, repository: IResultRepository, executor: IGridExecutor) -> None:
    params = config.system_params
    decomp = structural_decompose(params)
    repository.write_blocks("decomposition.csv", {"transform": decomp.transform, "a_hat": decomp.a_hat})
    rows = [
        [index, group.frequency, " ".join(str(j + 1) for j in group.indices), group.effective_coupling]
        for index, group in enumerate(decomp.groups, start=1)
    ]
    repository.write_rows(
        "groups.csv", ["group [1]", "frequency [1/time]", "atoms [1]", "effective_coupling [1/time^2]"], rows
    )
    model = co_subsystem(decomp, params)
    repository.write_blocks("co_subsystem.csv", {"A": model.a_matrix, "B": model.b_vector, "C": model.c_vector})
    for flag in decomp.flags:
        logger.warning(flag)


def run_response(config: RunConfig, repository: IResultRepository, executor: IGridExecutor) -> None:
    xi = _sample_pulse(config, _time_grid(config))
    eta = single_photon_response(config.system_params, xi, executor)
    repository.write_table(
        "response.csv",
        ["t [time]", "abs_xi_sq [1/time]", "abs_eta_sq [1/time]"],
        [xi.times, np.abs(xi.values) ** 2, np.abs(eta.values) ** 2],
    )
    logger.info(f"Output pulse norm {eta.norm:.6f} for input norm {xi.norm:.6f}")


def run_analytic_state(config: RunConfig, repository: IResultRepository, executor: IGridExecutor) -> None:
    params = config.system_params
    grid = config.grid
    times = TimeGrid(t_min=0.0, t_max=grid.t_max, dt=grid.dt).times[:: settings.RECORD_EVERY]
    instants = [float(t) for t in times]

    if config.superposition is not None:
        alpha, beta = config.superposition.coefficients
        states = executor.map(lambda t: superposition_evolution(alpha, beta, params, t, phi_points=2), instants)
    else:
        ket = config.initial_ket
        excited = [j for j, symbol in enumerate(ket[:-1], start=1) if symbol == "e"]
        if len(excited) != 1 or ket[-1] != "0":
            raise ConfigValidationError(f"analytic-state needs one excited atom and an empty cavity, got '{ket}'")
        states = executor.map(
            lambda t: analytic_single_excitation_state(params, excited[0], t, phi_points=2), instants
        )
    columns = [times]
    columns.extend(np.array([abs(state.c[j]) for state in states]) for j in range(params.n_atoms))
    columns.append(np.array([abs(state.c_cavity) for state in states]))
    columns.append(np.array([abs(state.c_field) for state in states]))
    columns.append(np.array([state.field_norm for state in states]))
    columns.append(np.array([state.total_probability for state in states]))
    header = (
        ["t [time]"]
        + _atom_columns("abs_c", params.n_atoms, "1")
        + ["abs_c_cavity [1]", "abs_c_field [1]", "field_norm [1]", "total [1]"]
    )
    repository.write_table("analytic_state.csv", header, columns)


def run_master(config: RunConfig, repository: IResultRepository, executor: IGridExecutor) -> None:
    params = config.system_params
    basis = _basis(config)
    grid = _time_grid(config)
    rho0 = product_state(basis, config.initial_ket)
    if config.drive == "single-photon":
        xi = _sample_pulse(config, grid)
        trajectory = integrate_fock_master(params, xi, rho0, grid, record_every=settings.RECORD_EVERY)
        states = trajectory.rho11
    else:
        trajectory = integrate_vacuum_master(params, rho0, grid, record_every=settings.RECORD_EVERY)
        states = trajectory.states

    probabilities = excitation_probabilities(states, basis)
    columns = [trajectory.times]
    columns.extend(probabilities[:, j] for j in range(params.n_atoms))
    columns.extend([traces(states), ground_fidelity(states)])
    header = ["t [time]"] + _atom_columns("P_TLS", params.n_atoms, "1") + ["trace [1]", "ground_fidelity [1]"]
    repository.write_table("master.csv", header, columns)
    logger.info(f"Final excitation probabilities {np.round(probabilities[-1], 6).tolist()}")


def auto_value_stride(n_steps: int, max_k: int) -> int:
    """Smallest stride dividing n_steps that keeps the densities within the node limits."""
    if max_k < 2 or n_steps == 0:
        return 1
    limit = settings.MAX_NODES_PAIR if max_k <= 2 else settings.MAX_NODES_TRIPLE
    for stride in range(1, n_steps + 1):
        if n_steps % stride == 0 and n_steps // stride + 1 <= limit:
            return stride
    return n_steps


def run_multiphoton(config: RunConfig, repository: IResultRepository, executor: IGridExecutor) -> None:
    params = config.system_params
    basis = _basis(config)
    grid = config.grid
    eta0 = basis.ket_vector(config.initial_ket)
    step = grid.multiphoton_step
    n_steps = grid_steps(grid.t_max, step)
    max_k = config.ket_excitations
    stride = grid.value_stride or auto_value_stride(n_steps, max_k)

    norms = sector_norms(params, eta0, grid.t_max, step, record_every=settings.RECORD_EVERY)
    repository.write_table(
        "sector_norms.csv",
        ["t [time]"] + [f"p_k{k} [1]" for k in range(norms.norms.shape[1])] + ["total [1]"],
        [norms.times, *norms.norms.T, norms.total],
    )
    steady = steady_output_state(params, eta0, grid.t_max, step, stride, executor=executor, norms=norms)
    repository.write_rows(
        "steady_amplitudes.csv",
        ["photons [1]", "ket [1]", "re_amplitude [1]", "im_amplitude [1]", "probability [1]"],
        [
            [branch.photon_count, branch.ket, branch.amplitude.real, branch.amplitude.imag, branch.probability]
            for branch in steady.branches
        ],
    )

    single = [branch for branch in steady.branches if branch.photon_count == 1 and branch.pulse is not None]
    if single:
        sector = steady.sectors[1]
        columns = [sector.times[:, 0]]
        header = ["t [time]"]
        for branch in single:
            columns.extend([branch.pulse.real, branch.pulse.imag])
            header.extend([f"re_{branch.ket} [1/sqrt(time)]", f"im_{branch.ket} [1/sqrt(time)]"])
        repository.write_table("pulse_k1.csv", header, columns)

    for sector in steady.sectors[2:4]:
        k = sector.photon_count
        if len(sector.values) == 0:
            continue
        density = np.sum(np.abs(sector.values) ** 2, axis=1)
        repository.write_table(
            f"density_k{k}.csv",
            [f"t{i} [time]" for i in range(1, k + 1)] + [f"density [1/time^{k}]"],
            [*sector.times.T, density],
        )
    logger.info(
        f"Steady output: {len(steady.branches)} branches, residual system excitation {steady.system_excitation:.3e}"
    )


COMMANDS: dict[str, CommandHandler] = {
    "model": run_model,
    "transfer": run_transfer,
    "decompose": run_decompose,
    "response": run_response,
    "analytic-state": run_analytic_state,
    "master": run_master,
    "multiphoton": run_multiphoton,
}
