"""Linear passive model and its transfer function."""
import logging
from collections.abc import Sequence

import numpy as np

from ..core.config import settings
from ..core.exceptions import RegimeViolation, SingularResolvent
from ..core.interfaces.executor import IGridExecutor
from ..core.providers.executor import SerialExecutor
from ..model.schemas import SystemParams
from .schemas import LinearModel, TransferEval

logger = logging.getLogger(__name__)


def build_linear_model(params: SystemParams) -> LinearModel:
    """A = -i[[diag w, G], [G^T, w_r]] - (kappa/2) e e^T, B = -sqrt(kappa) e, C = -B^T."""
    n = params.n_atoms + 1
    a = np.zeros((n, n), dtype=complex)
    a[np.arange(n - 1), np.arange(n - 1)] = -1j * np.asarray(params.omega, dtype=float)
    a[-1, -1] = -1j * params.omega_r - 0.5 * params.kappa
    a[:-1, -1] = -1j * np.asarray(params.gamma, dtype=float)
    a[-1, :-1] = -1j * np.asarray(params.gamma, dtype=float)
    b = np.zeros((n, 1), dtype=complex)
    b[-1, 0] = -np.sqrt(params.kappa)
    return LinearModel(a_matrix=a, b_vector=b, c_vector=-b.T)


def passivity_residual(model: LinearModel) -> float:
    """max-abs residual of A + A' + C'C = 0 and B + C' = 0 for the output row C = -B^T"""
    a, b, c = model.a_matrix, model.b_vector, model.c_vector
    lyapunov = a + a.conj().T + c.conj().T @ c
    return float(max(np.max(np.abs(lyapunov)), np.max(np.abs(b + c.conj().T))))


def _singular_points(model: LinearModel, s_values: np.ndarray) -> np.ndarray:
    eigenvalues = np.linalg.eigvals(model.a_matrix)
    scale = max(1.0, float(np.linalg.norm(model.a_matrix, 2)))
    distance = np.min(np.abs(s_values[:, None] - eigenvalues[None, :]), axis=1)
    return distance <= settings.RESOLVENT_RTOL * scale


def transfer_function(model: LinearModel, s: complex) -> TransferEval:
    """G[s] = 1 + C (sI - A)^-1 B"""
    if _singular_points(model, np.array([s], dtype=complex))[0]:
        raise SingularResolvent(f"s={s} is an eigenvalue of A")
    n = model.n_states
    x = np.linalg.solve(s * np.eye(n) - model.a_matrix, model.b_vector)
    g = complex(1.0 + (model.c_vector @ x)[0, 0])
    return TransferEval(s=s, g_value=g, t_value=g - 1.0)


def _transfer_chunk(model: LinearModel, s_chunk: np.ndarray) -> np.ndarray:
    n = model.n_states
    resolvent = s_chunk[:, None, None] * np.eye(n)[None] - model.a_matrix[None]
    rhs = np.broadcast_to(model.b_vector, (len(s_chunk), n, 1))
    x = np.linalg.solve(resolvent, rhs)
    return 1.0 + (model.c_vector[None] @ x)[:, 0, 0]


def transfer_response(
    model: LinearModel,
    s_values: Sequence[complex] | np.ndarray,
    executor: IGridExecutor | None = None,
) -> np.ndarray:
    """G over a grid of Laplace points, evaluated in chunks of batched solves."""
    s_values = np.asarray(s_values, dtype=complex).ravel()
    singular = _singular_points(model, s_values)
    if np.any(singular):
        raise SingularResolvent(
            f"{int(singular.sum())} grid points hit eigenvalues of A, first at s={s_values[singular][0]}"
        )
    executor = executor or SerialExecutor()
    chunk = settings.TRANSFER_CHUNK
    chunks = [s_values[start:start + chunk] for start in range(0, len(s_values), chunk)]
    logger.debug(f"Evaluating transfer function on {len(s_values)} points in {len(chunks)} chunks")
    if not chunks:
        return np.zeros(0, dtype=complex)
    return np.concatenate(executor.map(lambda part: _transfer_chunk(model, part), chunks))


def transfer_closed_form(params: SystemParams, s: complex | np.ndarray) -> complex | np.ndarray:
    """Equal-detuning closed form of G[s]."""
    if not params.has_equal_detunings(settings.GROUP_TOL):
        raise RegimeViolation("the closed-form transfer function needs equal atomic detunings")
    s = np.asarray(s, dtype=complex)
    if params.gamma_bar == 0.0:
        value = (s + 1j * params.omega_r - 0.5 * params.kappa) / (s + 1j * params.omega_r + 0.5 * params.kappa)
    else:
        coupling = params.n_atoms * params.gamma_bar**2
        atom = s + 1j * params.omega[0]
        value = (coupling + atom * (s + 1j * params.omega_r - 0.5 * params.kappa)) / (
            coupling + atom * (s + 1j * params.omega_r + 0.5 * params.kappa)
        )
    return complex(value) if value.ndim == 0 else value


def t_magnitude_squared(params: SystemParams, omega: float | np.ndarray) -> float | np.ndarray:
    """|T[iw]|^2 = k^2 w^2 / ((N G^2 - w^2)^2 + k^2 w^2 / 4) for resonant atoms and cavity."""
    tol = settings.GROUP_TOL
    if not params.has_equal_detunings(tol) or any(abs(w) > tol for w in params.omega) or abs(params.omega_r) > tol:
        raise RegimeViolation("|T|^2 closed form needs all detunings equal to zero")
    omega = np.asarray(omega, dtype=float)
    coupling = params.n_atoms * params.gamma_bar**2
    numerator = params.kappa**2 * omega**2
    denominator = (coupling - omega**2) ** 2 + 0.25 * params.kappa**2 * omega**2
    with np.errstate(invalid="ignore", divide="ignore"):
        value = np.where(denominator > 0.0, numerator / np.where(denominator > 0.0, denominator, 1.0),
                         4.0 if params.kappa > 0 else 0.0)
    return float(value) if value.ndim == 0 else value
