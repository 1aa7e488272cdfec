"""Photon-number sectors of the joint system-field state under vacuum input.

With one output channel and L = sqrt(kappa) a, the k-photon sector at time t is

    |eta_t(t_1, ..., t_k)> = G(t, t_k) L G(t_k, t_{k-1}) L ... L G(t_1, 0) |eta_0>

on the ordered simplex 0 <= t_1 <= ... <= t_k <= t. Amplitudes are evaluated at the
nodes of a value grid by extending prefix products one emission at a time, so V(tau)^-1
is never formed. Sector probabilities come from the conditional densities

    rho_k(m+1) = U rho_k(m) U' + emission terms fed by rho_{k-1},

which reproduce the simplex quadrature of |eta|^2 node by node.
"""
import logging
import math

import numpy as np
from scipy.linalg import expm

from ..core.config import settings
from ..core.exceptions import (
    ConfigValidationError,
    DimensionMismatch,
    ExcitationOverflow,
    NormViolation,
    RegimeViolation,
)
from ..core.interfaces.executor import IGridExecutor
from ..core.providers.executor import get_executor
from ..model.operators import build_coupling, build_effective_hamiltonian
from ..model.schemas import SystemParams, TruncatedBasis
from .propagator import step_powers
from .schemas import SectorNormTrajectory, SectorWavefunction, SimplexRule

logger = logging.getLogger(__name__)

NORM_TOL = 1e-9


def initial_state(params: SystemParams, eta0: np.ndarray) -> tuple[TruncatedBasis, np.ndarray]:
    """Validate eta0 and infer the truncated basis it lives in."""
    psi = np.asarray(eta0, dtype=complex)
    if psi.ndim != 1:
        raise DimensionMismatch(f"eta0 must be a vector, got shape {psi.shape}")
    try:
        basis = TruncatedBasis.from_dimension(params.n_atoms, len(psi))
    except ValueError as e:
        raise DimensionMismatch(str(e)) from e
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > NORM_TOL:
        raise NormViolation(f"eta0 has norm {norm:.12f}, expected 1")
    return basis, psi


def initial_excitations(basis: TruncatedBasis, psi: np.ndarray) -> np.ndarray:
    """Excitation numbers present in psi."""
    return np.unique(basis.excitations()[np.abs(psi) > 0.0])


def sector_supports(basis: TruncatedBasis, psi: np.ndarray, max_k: int) -> list[np.ndarray]:
    """Basis indices reachable after k emissions, for k = 0..max_k."""
    excitations = basis.excitations()
    present = initial_excitations(basis, psi)
    return [np.flatnonzero(np.isin(excitations, present - k)) for k in range(max_k + 1)]


def _check_rule(rule: str | None) -> SimplexRule:
    rule = rule or settings.SIMPLEX_RULE
    if rule not in ("trapezoid", "left"):
        raise ValueError(f"unknown simplex rule '{rule}', expected trapezoid or left")
    return rule


def grid_steps(t: float, step: float) -> int:
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    if step <= 0.0:
        raise ValueError("the grid step must be positive")
    n_steps = int(round(t / step))
    if abs(n_steps * step - t) > 1e-9 * max(1.0, t):
        raise ConfigValidationError(f"t={t} is not a whole number of steps {step}")
    return n_steps


def default_step(params: SystemParams, step: float | None) -> float:
    if step is not None:
        return step
    if params.kappa <= 0.0:
        raise RegimeViolation("the default multi-photon step needs kappa > 0")
    return settings.MULTIPHOTON_STEP_KAPPA / params.kappa


def simplex_weights(nodes: np.ndarray, n: int, step: float, rule: str | None = None) -> np.ndarray:
    """Quadrature weights of ordered node tuples n_1 <= ... <= n_k <= n.

    Each emission node contributes a factor; with n_{k+1} = n the trapezoid rule uses
    (step/2)[n_i >= 1] + (step/2)[n_i < n_{i+1}] and the left rule step [n_i < n_{i+1}].
    """
    rule = _check_rule(rule)
    nodes = np.asarray(nodes, dtype=int)
    if nodes.ndim != 2:
        raise ValueError(f"nodes must have shape (tuples, k), got {nodes.shape}")
    if nodes.shape[1] == 0:
        return np.ones(len(nodes))
    upper = np.concatenate([nodes[:, 1:], np.full((len(nodes), 1), n)], axis=1)
    later = (nodes < upper).astype(float)
    if rule == "left":
        factors = step * later
    else:
        factors = 0.5 * step * ((nodes >= 1).astype(float) + later)
    return np.prod(factors, axis=1)


def sector_norms(
    params: SystemParams,
    eta0: np.ndarray,
    t: float,
    step: float | None = None,
    rule: str | None = None,
    record_every: int = 1,
) -> SectorNormTrajectory:
    """Probabilities of k = 0..R emitted photons on the grid 0, step, ..., t."""
    basis, psi = initial_state(params, eta0)
    rule = _check_rule(rule)
    step = default_step(params, step)
    n_steps = grid_steps(t, step)
    n_sectors = int(initial_excitations(basis, psi).max()) + 1

    h_eff = build_effective_hamiltonian(params, basis).entries
    l = build_coupling(params, basis).entries
    l_dag = l.conj().T
    u = expm(-1j * h_eff * step)
    u_dag = u.conj().T

    rho = np.zeros((n_sectors, basis.dimension, basis.dimension), dtype=complex)
    rho[0] = np.outer(psi, psi.conj())
    times, norms = [0.0], [np.trace(rho, axis1=1, axis2=2).real]
    for m in range(1, n_steps + 1):
        emitted = l @ rho[:-1] @ l_dag
        new = u @ rho @ u_dag
        if rule == "left":
            new[1:] += step * (u @ emitted @ u_dag)
        else:
            new[1:] += 0.5 * step * (u @ emitted @ u_dag)
            # the end-point term needs the updated sector below
            for k in range(1, n_sectors):
                new[k] += 0.5 * step * (l @ new[k - 1] @ l_dag)
        rho = new
        if m % record_every == 0 or m == n_steps:
            times.append(m * step)
            norms.append(np.trace(rho, axis1=1, axis2=2).real)

    logger.debug(f"Sector norms at t={t}: {np.round(norms[-1], 6).tolist()}")
    return SectorNormTrajectory(times=times, norms=norms, densities=rho, rule=rule)


def _extend(
    prefix: np.ndarray,
    last: np.ndarray,
    nodes: np.ndarray,
    powers: np.ndarray,
    l_k: np.ndarray,
    n_nodes: int,
    executor: IGridExecutor,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Append one emission at every node not earlier than the previous one."""

    def at_offset(offset: int) -> tuple[np.ndarray, np.ndarray]:
        rows = np.flatnonzero(last + offset <= n_nodes)
        return rows, (prefix[rows] @ powers[offset].T) @ l_k.T

    results = executor.map(at_offset, range(n_nodes + 1))
    rows = np.concatenate([r for r, _ in results])
    offsets = np.concatenate([np.full(len(r), offset) for offset, (r, _) in enumerate(results)])
    new_prefix = np.concatenate([v for _, v in results])
    new_last = last[rows] + offsets
    return new_prefix, new_last, np.column_stack([nodes[rows], new_last])


def _finish(prefix: np.ndarray, last: np.ndarray, powers: np.ndarray, n_nodes: int) -> np.ndarray:
    """Propagate every prefix from its last emission to the final node."""
    values = np.empty((len(prefix), powers.shape[1]), dtype=complex)
    remaining = n_nodes - last
    for r in np.unique(remaining):
        rows = remaining == r
        values[rows] = prefix[rows] @ powers[r].T
    return values


def _node_limit(k: int) -> int:
    return settings.MAX_NODES_PAIR if k <= 2 else settings.MAX_NODES_TRIPLE


def sector_wavefunctions(
    params: SystemParams,
    eta0: np.ndarray,
    t: float,
    grid_step: float | None = None,
    max_k: int | None = None,
    value_stride: int = 1,
    rule: str | None = None,
    executor: IGridExecutor | None = None,
    norms: SectorNormTrajectory | None = None,
) -> list[SectorWavefunction]:
    """Sectors k = 0..max_k of the joint state at time t.

    Norms use the grid step; amplitudes are exact at the nodes of the value grid,
    whose spacing is value_stride grid steps.
    """
    basis, psi = initial_state(params, eta0)
    rule = _check_rule(rule)
    n_excitations = int(initial_excitations(basis, psi).max())
    max_k = n_excitations if max_k is None else max_k
    if max_k < 0:
        raise ValueError("max_k must be nonnegative")
    if max_k > n_excitations:
        raise ExcitationOverflow(f"max_k={max_k} exceeds the {n_excitations} initial excitations")
    if value_stride < 1:
        raise ValueError("value_stride must be positive")

    step = default_step(params, grid_step)
    n_steps = grid_steps(t, step)
    if n_steps % value_stride:
        raise ConfigValidationError(f"value_stride={value_stride} does not divide the {n_steps} grid steps")
    n_nodes = n_steps // value_stride
    value_step = step * value_stride
    for k in range(2, max_k + 1):
        if n_steps and n_nodes + 1 > _node_limit(k):
            raise ConfigValidationError(
                f"{n_nodes + 1} nodes per axis exceed the limit {_node_limit(k)} for k={k}; raise value_stride"
            )

    if norms is None:
        norms = sector_norms(params, psi, t, step, rule, record_every=max(n_steps, 1))
    executor = executor or get_executor()
    supports = sector_supports(basis, psi, max_k)
    h_eff = build_effective_hamiltonian(params, basis).entries
    l = build_coupling(params, basis).entries
    u = expm(-1j * h_eff * value_step)

    logger.info(
        f"Sector amplitudes: K={basis.dimension}, sectors 0..{max_k}, {n_nodes + 1} nodes of {value_step:.3e}"
    )
    sectors: list[SectorWavefunction] = []
    prefix = psi[supports[0]][None, :]
    last = np.zeros(1, dtype=int)
    nodes = np.zeros((1, 0), dtype=int)
    powers: list[np.ndarray] = []
    for k in range(max_k + 1):
        support = supports[k]
        powers.append(step_powers(u[np.ix_(support, support)], n_nodes + 1))
        if k > 0 and n_steps == 0:
            sectors.append(
                SectorWavefunction(
                    photon_count=k, t=t, step=step, value_step=value_step, basis=basis, support=support,
                    nodes=np.zeros((0, k), dtype=int), values=np.zeros((0, len(support))), norm=0.0, rule=rule,
                )
            )
            continue
        if k > 0:
            l_k = l[np.ix_(support, supports[k - 1])]
            prefix, last, nodes = _extend(prefix, last, nodes, powers[k - 1], l_k, n_nodes, executor)
        values = _finish(prefix, last, powers[k], n_nodes)
        order = np.lexsort(nodes.T[::-1]) if k > 0 else np.zeros(1, dtype=int)
        sectors.append(
            SectorWavefunction(
                photon_count=k, t=t, step=step, value_step=value_step, basis=basis, support=support,
                nodes=nodes[order], values=values[order], norm=float(norms.norms[-1, k]), rule=rule,
            )
        )
        logger.debug(f"Sector k={k}: {len(order)} node tuples on {len(support)} basis states")
    return sectors


def grid_norm(sector: SectorWavefunction, index: int | None = None) -> float:
    """Simplex quadrature of |eta|^2 on the value grid, for one basis index or the whole sector."""
    if len(sector.values) == 0:
        return 0.0
    amplitudes = sector.values if index is None else sector.component(index)[:, None]
    weights = simplex_weights(sector.nodes, sector.n_nodes - 1, sector.value_step, sector.rule)
    return float(weights @ np.sum(np.abs(amplitudes) ** 2, axis=1))


def factorial_scale(k: int) -> float:
    """1/sqrt(k!) relating the ordered and the symmetric k-photon amplitudes."""
    return 1.0 / math.sqrt(math.factorial(k))
