"""
Solutions of the Stein equation for indicator test functions,

    psi'(x) - x psi(x) = 1{x <= z} - Phi(z),

given in closed form by

    psi_z(x) = sqrt(2 pi) exp(x^2 / 2) Phi(min(x, z)) (1 - Phi(max(x, z))).

Away from the origin the three factors overflow and underflow separately,
so for |x| > 8 the product is formed in log space.
"""

import numpy as np
from scipy.special import log_ndtr

from malstein.stein.normal import ArrayLike, _as_output, normal_cdf

LOG_SPACE_THRESHOLD = 8.0


def psi_z(z: ArrayLike, x: ArrayLike) -> ArrayLike:
    """
    The bounded solution of the Stein equation for h = 1{. <= z}.

    Parameters
    ----------

    z: Union[float, np.ndarray]
        Threshold of the indicator.

    x: Union[float, np.ndarray]
        Evaluation points; broadcast against ``z``.
    """
    z_array, x_array = np.broadcast_arrays(
        np.asarray(z, dtype=np.float64), np.asarray(x, dtype=np.float64)
    )
    low = np.minimum(x_array, z_array)
    high = np.maximum(x_array, z_array)

    result = np.empty(x_array.shape, dtype=np.float64)
    far = np.abs(x_array) > LOG_SPACE_THRESHOLD
    near = ~far

    result[near] = (
        np.sqrt(2.0 * np.pi)
        * np.exp(0.5 * x_array[near] ** 2)
        * normal_cdf(low[near])
        * normal_cdf(-high[near])
    )
    result[far] = np.exp(
        0.5 * np.log(2.0 * np.pi)
        + 0.5 * x_array[far] ** 2
        + log_ndtr(low[far])
        + log_ndtr(-high[far])
    )

    return _as_output(result, x_array)


def psi_z_prime(z: ArrayLike, x: ArrayLike) -> ArrayLike:
    """
    Derivative of :func:`psi_z` in x. Differentiating the closed form on
    either side of z gives x psi_z(x) + 1 - Phi(z) for x <= z and
    x psi_z(x) - Phi(z) for x > z; at x = z the left derivative is used.
    """
    z_array, x_array = np.broadcast_arrays(
        np.asarray(z, dtype=np.float64), np.asarray(x, dtype=np.float64)
    )
    psi = np.asarray(psi_z(z_array, x_array), dtype=np.float64)

    left = x_array * psi + normal_cdf(-z_array)
    right = x_array * psi - normal_cdf(z_array)
    result = np.where(x_array <= z_array, left, right)

    return _as_output(result, x_array)


def psi_sup_norm_bound() -> float:
    """
    sup |psi_z| <= sqrt(2 pi) / 4, attained at z = x = 0.
    """
    return np.sqrt(2.0 * np.pi) / 4.0
