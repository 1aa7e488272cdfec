import numpy as np
from scipy.linalg import eigvals, hankel, pinv, svd


def fit_exponents(samples: np.ndarray, step: float, order: int) -> np.ndarray:
    """Exponents mu_i of samples[n] = sum_i c_i exp(mu_i n step) by the matrix pencil method.

    Sorted by decreasing imaginary part.
    """
    y = np.asarray(samples, dtype=complex).ravel()
    n = len(y)
    if order < 1 or n < 2 * order + 1:
        raise ValueError(f"{n} samples cannot resolve {order} exponents")
    pencil = n // 2
    matrix = hankel(y[: n - pencil], y[n - pencil - 1:])
    _, _, vh = svd(matrix, full_matrices=False)
    v = vh[:order].conj().T
    poles = eigvals(pinv(v[:-1]) @ v[1:])
    exponents = np.log(poles) / step
    return exponents[np.argsort(-exponents.imag)]
