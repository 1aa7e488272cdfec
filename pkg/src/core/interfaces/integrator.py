"""Integrator interfaces."""
from abc import ABC, abstractmethod
from collections.abc import Callable

import numpy as np

RightHandSide = Callable[[float, np.ndarray], np.ndarray]
Observable = Callable[[np.ndarray], np.ndarray]


class IIntegrator(ABC):
    """Interface for fixed-step integrators of linear matrix ODEs."""

    @abstractmethod
    def integrate(
        self,
        rhs: RightHandSide,
        y0: np.ndarray,
        t0: float,
        dt: float,
        n_steps: int,
        record_every: int = 1,
    ) -> tuple[np.ndarray, np.ndarray]:
        """Advance y0 by n_steps steps and return (times, recorded states).

        States are recorded at step 0, every record_every steps and at the last step.
        """
        pass

    @abstractmethod
    def integrate_with_halving(
        self,
        rhs: RightHandSide,
        y0: np.ndarray,
        t0: float,
        dt: float,
        n_steps: int,
        observable: Observable,
        record_every: int = 1,
    ) -> tuple[np.ndarray, np.ndarray, float]:
        """Integrate at dt and at dt/2 and return the largest observable change."""
        pass
