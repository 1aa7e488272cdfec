"""PBH-type controllability, observability and stability tests."""
import logging

import numpy as np

from ..core.config import settings
from .schemas import ControllabilityResult, LinearModel

logger = logging.getLogger(__name__)


def _pbh(a: np.ndarray, row: np.ndarray) -> ControllabilityResult:
    """Full column rank of [A - lI; row] at every eigenvalue l of A."""
    n = a.shape[0]
    tol = settings.PBH_RTOL * float(np.linalg.norm(a, 2))
    for eigenvalue in np.linalg.eigvals(a):
        stacked = np.vstack([a - eigenvalue * np.eye(n), row])
        _, singular_values, vh = np.linalg.svd(stacked)
        if singular_values[-1] <= tol:
            witness = vh[-1].conj()
            return ControllabilityResult(controllable=False, eigenvalue=complex(eigenvalue), witness=witness)
    return ControllabilityResult(controllable=True)


def is_controllable(model: LinearModel) -> ControllabilityResult:
    """On failure the witness x satisfies A x = l x and x' B = 0."""
    result = _pbh(model.a_matrix, model.b_vector.conj().T)
    logger.debug(f"Controllable: {result.controllable}")
    return result


def is_observable(model: LinearModel) -> ControllabilityResult:
    return _pbh(model.a_matrix, model.c_vector)


def is_hurwitz(model: LinearModel) -> bool:
    tol = settings.PBH_RTOL * max(1.0, float(np.linalg.norm(model.a_matrix, 2)))
    return bool(np.max(np.linalg.eigvals(model.a_matrix).real) < -tol)
