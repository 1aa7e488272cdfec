"""Generator providers."""
from collections.abc import Callable

import numpy as np

from ..interfaces.generator import IGeneratorProvider


class ConstantGenerator(IGeneratorProvider):
    """Time-independent H_eff."""

    def __init__(self, h_eff: np.ndarray):
        h_eff = np.asarray(h_eff, dtype=complex)
        if h_eff.ndim != 2 or h_eff.shape[0] != h_eff.shape[1]:
            raise ValueError(f"H_eff must be square, got shape {h_eff.shape}")
        self._h_eff = h_eff

    def __call__(self, t: float) -> np.ndarray:
        return self._h_eff

    @property
    def dimension(self) -> int:
        return self._h_eff.shape[0]

    @property
    def is_constant(self) -> bool:
        return True


class CallableGenerator(IGeneratorProvider):
    """H_eff(t) supplied by a function of time."""

    def __init__(self, fn: Callable[[float], np.ndarray], dimension: int):
        self._fn = fn
        self._dimension = dimension

    def __call__(self, t: float) -> np.ndarray:
        h_eff = np.asarray(self._fn(t), dtype=complex)
        if h_eff.shape != (self._dimension, self._dimension):
            raise ValueError(f"H_eff({t}) has shape {h_eff.shape}, expected {self._dimension}x{self._dimension}")
        return h_eff

    @property
    def dimension(self) -> int:
        return self._dimension

    @property
    def is_constant(self) -> bool:
        return False


def as_generator(h_eff: "np.ndarray | IGeneratorProvider") -> IGeneratorProvider:
    """Wrap a plain matrix as a constant provider."""
    if isinstance(h_eff, IGeneratorProvider):
        return h_eff
    return ConstantGenerator(getattr(h_eff, "entries", h_eff))
