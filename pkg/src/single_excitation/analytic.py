"""Closed-form single-excitation dynamics for atoms with a common detuning.

With p = kappa + 2i(w_r - w_s) and chi = sqrt(p^2 - 16 N G^2) the exponents
are (-p +- chi)/4. Everything is written through

    S(t) = (e^{(chi - p)t/4} - e^{-(chi + p)t/4}) / (2 chi)
    F(t) = e^{-pt/4} cosh(chi t/4) + p S(t)

which are even in chi, so the branch of the square root drops out.
"""
import cmath
import logging
import math

import numpy as np
from scipy.integrate import quad

from ..core.config import settings
from ..core.exceptions import DimensionMismatch, NormViolation, RegimeViolation
from ..model.schemas import SystemParams
from .schemas import PulseShape, SingleExcitationState, SuperpositionState

logger = logging.getLogger(__name__)

SERIES_THRESHOLD = 1e-4
FIELD_NORM_TOL = 1e-3


def _rates(params: SystemParams, chi_branch: int = 1) -> tuple[complex, complex]:
    p = params.kappa + 2j * (params.omega_r - params.omega[0])
    chi = chi_branch * cmath.sqrt(p * p - 16.0 * params.n_atoms * params.gamma_bar**2)
    return p, chi


def _s_function(p: complex, chi: complex, t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    x = 0.25 * chi * t
    decay = np.exp(-0.25 * p * t)
    small = np.abs(x) < SERIES_THRESHOLD
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        exact = (np.exp(0.25 * (chi - p) * t) - np.exp(-0.25 * (chi + p) * t)) / (2.0 * chi)
    series = 0.25 * t * (1.0 + x * x / 6.0) * decay
    return np.where(small, series, exact)


def _f_function(p: complex, chi: complex, t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    cosh_part = 0.5 * (np.exp(0.25 * (chi - p) * t) + np.exp(-0.25 * (chi + p) * t))
    return cosh_part + p * _s_function(p, chi, t)


def _e_integral(z: complex, t: float) -> complex:
    """int_0^t e^{-z tau} d tau"""
    if math.isinf(t):
        return 1.0 / z
    if abs(z * t) < 1e-8:
        return t * (1.0 - 0.5 * z * t)
    return (1.0 - cmath.exp(-z * t)) / z


def field_norm(params: SystemParams, t: float) -> float:
    """int_0^t |phi(tau)|^2 d tau, the same for every initially excited atom."""
    if t <= 0.0 or params.kappa == 0.0 or params.gamma_bar == 0.0:
        return 0.0
    p, chi = _rates(params)
    prefactor = 16.0 * params.gamma_bar**2 * params.kappa * params.n_atoms
    if abs(chi) < 1e-6:
        if math.isinf(t):
            t = settings.STEADY_T_MAX_KAPPA / params.kappa
        value, _ = quad(
            lambda tau: abs(complex(_s_function(p, chi, tau))) ** 2, 0.0, t, limit=200, epsabs=1e-12, epsrel=1e-12
        )
        return float(prefactor * value)
    a, b = chi.real, chi.imag
    bracket = 0.5 * (_e_integral(0.5 * (params.kappa - a), t) + _e_integral(0.5 * (params.kappa + a), t))
    bracket -= _e_integral(0.5 * (params.kappa - 1j * b), t).real
    return float(0.5 * prefactor / abs(chi) ** 2 * bracket.real)


def _check_regime(params: SystemParams, k: int) -> None:
    if params.n_atoms < 1:
        raise RegimeViolation("single-excitation dynamics need at least one atom")
    if not params.has_equal_detunings(settings.GROUP_TOL):
        raise RegimeViolation("the closed-form single-excitation state needs equal atomic detunings")
    if not 1 <= k <= params.n_atoms:
        raise DimensionMismatch(f"atom {k} is outside 1..{params.n_atoms}")


def _steady_state(params: SystemParams, k: int) -> SingleExcitationState:
    if params.kappa == 0.0 or params.gamma_bar == 0.0:
        raise RegimeViolation("steady single-excitation state needs kappa > 0 and nonzero couplings")
    gamma = np.asarray(params.gamma, dtype=float)
    weight = params.n_atoms * params.gamma_bar**2
    c = -gamma * gamma[k - 1] / weight
    c[k - 1] += 1.0
    c_field = gamma[k - 1] / (math.sqrt(params.n_atoms) * params.gamma_bar)
    flags: list[str] = []
    moduli_only = abs(params.omega[0]) > settings.GROUP_TOL
    if moduli_only:
        flags.append("common detuning is nonzero: steady values are moduli only")
        c = np.abs(c)
        c_field = abs(c_field)
    norm = field_norm(params, math.inf)
    if abs(norm - 1.0) > FIELD_NORM_TOL:
        flags.append(f"field norm {norm:.6f} differs from 1")
    return SingleExcitationState(
        t=math.inf, excited_atom=k, c=c, c_cavity=0j, c_field=complex(c_field),
        field_norm=norm, moduli_only=moduli_only, flags=tuple(flags),
    )


def analytic_single_excitation_state(
    params: SystemParams,
    k: int,
    t: float,
    phi_points: int = 1000,
    chi_branch: int = 1,
) -> SingleExcitationState:
    """Joint state at time t when atom k (1-based) starts excited and the field is vacuum.

    t = inf returns the steady amplitudes.
    """
    _check_regime(params, k)
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    if math.isinf(t):
        return _steady_state(params, k)

    n = params.n_atoms
    omega_s = params.omega[0]
    gamma = np.asarray(params.gamma, dtype=float)
    gamma_k = gamma[k - 1]
    phase = cmath.exp(0.5j * (n - 2) * omega_s * t)

    if params.gamma_bar == 0.0:
        c = np.zeros(n, dtype=complex)
        c[k - 1] = phase
        return SingleExcitationState(t=t, excited_atom=k, c=c, c_cavity=0j, c_field=0j, field_norm=0.0)

    p, chi = _rates(params, chi_branch)
    weight = n * params.gamma_bar**2
    f_value = complex(_f_function(p, chi, t))
    c = -gamma * gamma_k * (1.0 - f_value) / weight
    c[k - 1] += 1.0
    c = phase * c
    c_cavity = -4j * gamma_k * complex(_s_function(p, chi, t)) * phase
    c_field = gamma_k / (math.sqrt(n) * params.gamma_bar) * phase

    norm = field_norm(params, t)
    phi = None
    if t > 0.0:
        tau = np.linspace(0.0, t, phi_points)
        samples = (
            -4j * params.gamma_bar * math.sqrt(params.kappa * n)
            * _s_function(p, chi, tau) * np.exp(1j * omega_s * (t - tau))
        )
        phi = PulseShape(t_start=0.0, dt=tau[1] - tau[0], values=samples, declared_norm=norm)

    flags: tuple[str, ...] = ()
    if params.kappa * t >= settings.T_MAX_KAPPA and abs(norm - 1.0) > FIELD_NORM_TOL:
        flags = (f"field norm {norm:.6f} differs from 1 at t={t}",)
        logger.warning(flags[0])
    return SingleExcitationState(
        t=t, excited_atom=k, c=c, c_cavity=c_cavity, c_field=c_field, field_norm=norm, phi=phi, flags=flags
    )


def superposition_evolution(
    alpha: complex,
    beta: complex,
    params: SystemParams,
    t: float,
    phi_points: int = 1000,
) -> SuperpositionState:
    """Start from (1/sqrt(N)) sum_k (alpha + beta e^{-i 2 pi k / N}) |e_k, 0>.

    alpha = 1 is the superradiant state, beta = 1 the subradiant one. The
    emitted pulse shape is shared by every k, so the field amplitude is the
    weighted sum of the c_field values.
    """
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1.0) > 1e-9:
        raise NormViolation(f"|alpha|^2 + |beta|^2 = {abs(alpha) ** 2 + abs(beta) ** 2}, expected 1")
    _check_regime(params, 1)
    if math.isinf(t) and abs(params.omega[0]) > settings.GROUP_TOL:
        raise RegimeViolation("steady superposition amplitudes need a zero common detuning")

    alpha, beta = complex(alpha), complex(beta)
    n = params.n_atoms
    phases = 2.0 * np.pi * np.arange(1, n + 1) / n
    weights = (alpha + beta * np.exp(-1j * phases)) / math.sqrt(n)

    states = [analytic_single_excitation_state(params, k, t, phi_points) for k in range(1, n + 1)]
    c = sum(w * np.asarray(state.c) for w, state in zip(weights, states))
    c_cavity = complex(sum(w * state.c_cavity for w, state in zip(weights, states)))
    c_field = complex(sum(w * state.c_field for w, state in zip(weights, states)))
    result = SuperpositionState(
        t=t, alpha=alpha, beta=beta, c=c, c_cavity=c_cavity, c_field=c_field,
        field_norm=states[0].field_norm, phi=states[0].phi,
    )
    logger.debug(f"Superposition at t={t}: atomic excitation {result.atomic_excitation:.3e}")
    return result
