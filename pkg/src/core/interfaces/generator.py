"""Generator interfaces."""
from abc import ABC, abstractmethod

import numpy as np


class IGeneratorProvider(ABC):
    """Interface for effective Hamiltonians H_eff(t) driving a propagator."""

    @abstractmethod
    def __call__(self, t: float) -> np.ndarray:
        """Return H_eff at time t as a K x K complex matrix."""
        pass

    @property
    @abstractmethod
    def dimension(self) -> int:
        """Dimension K of the system space."""
        pass

    @property
    @abstractmethod
    def is_constant(self) -> bool:
        """Whether H_eff does not depend on t."""
        pass
