"""
The standard normal law: density, distribution function and quantiles.
"""

from typing import Union

import numpy as np
from scipy.special import erfc, ndtri

from malstein.exceptions import OutOfRangeError

ArrayLike = Union[float, np.ndarray]

SQRT_TWO = np.sqrt(2.0)
SQRT_TWO_PI = np.sqrt(2.0 * np.pi)


class NormalEval(object):
    """
    Phi and phi evaluated at a single point.
    """

    x: float
    cdf: float
    pdf: float

    def __init__(self, x: float):
        self.x = float(x)
        self.cdf = normal_cdf(self.x)
        self.pdf = normal_pdf(self.x)

    def __repr__(self):
        return f"NormalEval(x={self.x}, cdf={self.cdf}, pdf={self.pdf})"


def _as_output(value: np.ndarray, like) -> ArrayLike:
    if np.ndim(like) == 0:
        return float(value)
    return value


def normal_pdf(x: ArrayLike) -> ArrayLike:
    array = np.asarray(x, dtype=np.float64)
    return _as_output(np.exp(-0.5 * array ** 2) / SQRT_TWO_PI, x)


def normal_cdf(x: ArrayLike) -> ArrayLike:
    """
    Phi(x), through the complementary error function so that the lower tail
    keeps full relative precision.
    """
    array = np.asarray(x, dtype=np.float64)
    return _as_output(0.5 * erfc(-array / SQRT_TWO), x)


def normal_quantile(p: ArrayLike) -> ArrayLike:
    """
    Phi^{-1}(p) for 0 < p < 1, refined by two Newton steps against
    :func:`normal_cdf`.
    """
    array = np.asarray(p, dtype=np.float64)

    if np.any(~np.isfinite(array)) or np.any(array <= 0.0) or np.any(array >= 1.0):
        raise OutOfRangeError(f"Quantiles are defined for 0 < p < 1, got {p!r}.")

    x = ndtri(array)
    for _ in range(2):
        density = np.exp(-0.5 * x ** 2) / SQRT_TWO_PI
        x = x - (0.5 * erfc(-x / SQRT_TWO) - array) / density

    return _as_output(x, p)


def normal_eval(x: float) -> NormalEval:
    return NormalEval(x)
