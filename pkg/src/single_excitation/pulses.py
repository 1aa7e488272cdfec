"""Input pulse shapes and their spectra."""
import logging

import numpy as np

from ..core.config import settings
from ..core.exceptions import GridTooShort
from ..shared.base_schemas import TimeGrid
from .schemas import GaussianSpec, PulseShape, RisingExponentialSpec

logger = logging.getLogger(__name__)


def _checked(pulse: PulseShape, what: str) -> PulseShape:
    norm = pulse.norm
    if norm < settings.NORM_MIN:
        raise GridTooShort(f"{what} keeps only {norm:.6f} of its norm on [{pulse.t_start}, {pulse.times[-1]}]")
    logger.debug(f"Sampled {what} on {len(pulse.values)} points, norm {norm:.8f}")
    return pulse


def rising_exponential(gamma: float, grid: TimeGrid) -> PulseShape:
    return _checked(PulseShape.sample(RisingExponentialSpec(gamma=gamma), grid), f"rising exponential gamma={gamma}")


def gaussian_pulse(omega: float, t_peak: float, grid: TimeGrid) -> PulseShape:
    return _checked(
        PulseShape.sample(GaussianSpec(omega=omega, t_peak=t_peak), grid),
        f"gaussian omega={omega} t_peak={t_peak}",
    )


def pulse_spectrum(pulse: PulseShape, pad_factor: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Zero-padded DFT of the samples, xi[iw] = int xi(t) e^{-iwt} dt, sorted by frequency."""
    pad_factor = pad_factor or settings.SPECTRUM_PAD_FACTOR
    size = pad_factor * len(pulse.values)
    omega = 2.0 * np.pi * np.fft.fftfreq(size, pulse.dt)
    spectrum = pulse.dt * np.exp(-1j * omega * pulse.t_start) * np.fft.fft(pulse.values, size)
    order = np.argsort(omega, kind="stable")
    return omega[order], spectrum[order]


def _crossing(omega: np.ndarray, power: np.ndarray, lower: int, upper: int, level: float) -> float:
    # linear interpolation between two neighbouring samples straddling level
    w0, w1 = omega[lower], omega[upper]
    p0, p1 = power[lower], power[upper]
    return float(w0 + (level - p0) * (w1 - w0) / (p1 - p0))


def spectral_fwhm(pulse: PulseShape, pad_factor: int | None = None) -> float:
    """Full width at half maximum of |xi[iw]|^2."""
    omega, spectrum = pulse_spectrum(pulse, pad_factor)
    power = np.abs(spectrum) ** 2
    peak = int(np.argmax(power))
    half = 0.5 * power[peak]

    below_left = np.flatnonzero(power[:peak] < half)
    below_right = np.flatnonzero(power[peak:] < half)
    if not below_left.size or not below_right.size:
        raise GridTooShort("spectrum does not fall to half maximum inside the frequency window")
    left = below_left[-1]
    right = peak + below_right[0]
    return _crossing(omega, power, right - 1, right, half) - _crossing(omega, power, left, left + 1, half)
