"""Structural decomposition of the linear model into decoherence-free and bright parts.

Atoms sharing a frequency form a group. Inside a group with couplings
g_1..g_n and partial sums S_m = g_1^2 + ... + g_m^2 the columns are

    T_m = (g_{m+1} g_1, ..., g_{m+1} g_m, -S_m, 0, ...) / sqrt(S_m S_{m+1}),  m = 1..n-1
    T_n = g / |g|

The first n-1 columns span the decoherence-free subsystem of the group,
the last one is its bright mode. The cavity keeps the last column.
"""
import logging
import math
import warnings

import numpy as np

from ..core.config import settings
from ..core.exceptions import RegimeViolation, ZeroCouplingInGroup
from ..model.schemas import SystemParams
from .model import build_linear_model
from .schemas import DarkBrightCoordinates, Decomposition, DetuningGroup, LinearModel

logger = logging.getLogger(__name__)


def detuning_groups(params: SystemParams) -> list[DetuningGroup]:
    """Partition atoms by frequency, ascending, ties broken by index."""
    order = sorted(range(params.n_atoms), key=lambda j: (params.omega[j], j))
    groups: list[list[int]] = []
    for j in order:
        if groups and abs(params.omega[j] - params.omega[groups[-1][0]]) <= settings.GROUP_TOL:
            groups[-1].append(j)
        else:
            groups.append([j])
    return [
        DetuningGroup(
            frequency=params.omega[members[0]],
            indices=tuple(sorted(members)),
            effective_coupling=sum(params.gamma[j] ** 2 for j in members),
        )
        for members in groups
    ]


def _positive_first(column: np.ndarray) -> np.ndarray:
    nonzero = np.flatnonzero(np.abs(column) > settings.COUPLING_TOL)
    if nonzero.size and column[nonzero[0]] < 0:
        return -column
    return column


def _dark_columns(couplings: np.ndarray) -> list[np.ndarray]:
    columns = []
    partial = np.cumsum(couplings**2)
    for m in range(1, len(couplings)):
        column = np.zeros(len(couplings))
        column[:m] = couplings[m] * couplings[:m]
        column[m] = -partial[m - 1]
        column /= math.sqrt(partial[m - 1] * partial[m])
        columns.append(_positive_first(column))
    return columns


def structural_decompose(params: SystemParams) -> Decomposition:
    n = params.n_atoms + 1
    gamma = np.asarray(params.gamma, dtype=float)
    transform = np.zeros((n, n))
    co_indices: list[int] = []
    dfs_indices: list[int] = []
    flags: list[str] = []
    column = 0

    groups = detuning_groups(params)
    for group in groups:
        members = np.asarray(group.indices)
        coupled = members[np.abs(gamma[members]) > settings.COUPLING_TOL]
        uncoupled = members[np.abs(gamma[members]) <= settings.COUPLING_TOL]

        if uncoupled.size and members.size > 1:
            message = (
                f"atoms {[int(j) + 1 for j in uncoupled]} have zero coupling in the group at "
                f"frequency {group.frequency}; they enter the decoherence-free block as identity columns"
            )
            warnings.warn(message, ZeroCouplingInGroup, stacklevel=2)
            logger.warning(message)
            flags.append(message)

        for j in uncoupled:
            transform[j, column] = 1.0
            dfs_indices.append(column)
            column += 1

        if coupled.size:
            for dark in _dark_columns(gamma[coupled]):
                transform[coupled, column] = dark
                dfs_indices.append(column)
                column += 1
            transform[coupled, column] = gamma[coupled] / np.linalg.norm(gamma[coupled])
            co_indices.append(column)
            column += 1

    transform[n - 1, column] = 1.0
    co_indices.append(column)

    a = build_linear_model(params).a_matrix
    a_hat = transform.T @ a @ transform
    logger.info(
        f"Decomposed {params.n_atoms} atoms into {len(groups)} groups, "
        f"{len(dfs_indices)} decoherence-free and {len(co_indices)} coupled modes"
    )
    return Decomposition(
        transform=transform,
        a_hat=a_hat,
        groups=tuple(groups),
        effective_couplings=tuple(group.effective_coupling for group in groups),
        co_indices=tuple(co_indices),
        dfs_indices=tuple(dfs_indices),
        flags=tuple(flags),
    )


def co_subsystem(decomp: Decomposition, params: SystemParams) -> LinearModel:
    """Controllable and observable block of the transformed model."""
    model = build_linear_model(params)
    index = np.asarray(decomp.co_indices)
    b_hat = decomp.transform.T @ model.b_vector
    c_hat = model.c_vector @ decomp.transform
    return LinearModel(
        a_matrix=decomp.a_hat[np.ix_(index, index)],
        b_vector=b_hat[index],
        c_vector=c_hat[:, index],
    )


def minimal_model(params: SystemParams) -> LinearModel:
    """Input-output equivalent model without the decoherence-free modes."""
    return co_subsystem(structural_decompose(params), params)


def dark_bright_coordinates(params: SystemParams) -> DarkBrightCoordinates:
    """Coordinates of |B_N 0> and |D_N 0> for equal detunings and equal coupling magnitudes.

    The signs Gamma_j / Gamma_1 enter the atomic amplitudes of both states, so the
    alpha table is the same for every sign pattern.
    """
    n_atoms = params.n_atoms
    if n_atoms < 2:
        raise RegimeViolation("dark and bright coordinates need at least two atoms")
    if not params.has_equal_detunings(settings.GROUP_TOL):
        raise RegimeViolation("dark and bright coordinates need equal atomic detunings")
    magnitude = abs(params.gamma[0])
    if magnitude <= settings.COUPLING_TOL or any(abs(abs(g) - magnitude) > settings.GROUP_TOL for g in params.gamma):
        raise RegimeViolation("dark and bright coordinates need nonzero couplings of equal magnitude")
    signs = np.sign(params.gamma) * np.sign(params.gamma[0])

    phases = 2.0 * np.pi * np.arange(1, n_atoms + 1) / n_atoms
    bright_state = np.append(signs / math.sqrt(n_atoms), 0.0).astype(complex)
    dark_state = np.append(signs * np.exp(-1j * phases) / math.sqrt(n_atoms), 0.0)

    transform = structural_decompose(params).transform
    twist = np.exp(-1j * phases)
    alpha = np.empty(n_atoms - 1, dtype=complex)
    for j in range(1, n_atoms):
        # twist[j] is e^{-i phi_{j+1}}
        tail = twist[j + 1:].sum() / (j + 1)
        alpha[j - 1] = -math.sqrt((j + 1) / (j * n_atoms)) * (twist[j] + tail)

    return DarkBrightCoordinates(
        transform=transform,
        bright=transform.T @ bright_state,
        dark=transform.T @ dark_state,
        alpha=alpha,
    )
