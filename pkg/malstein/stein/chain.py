"""
Remainders of the approximate chain rule for psi_z.

For a functional F and F_k = E[F | G_k] the two remainders

    R_k = psi(F) - psi(F_k) - psi'(F_k) D_k F
    S_k = psi(F_k) - psi(F) + psi'(F) D_k F

satisfy D_k psi(F) = psi'(F) D_k F - S_k - E[R_k | G_k], and both are
bounded by 2 |D_k F| since psi is 1-Lipschitz.
"""

from typing import Tuple

import numpy as np
from scipy.integrate import quad

from malstein.space.functional import Functional, conditional_expectation
from malstein.space.subsets import check_coordinate, full_mask
from malstein.stein.solutions import psi_z, psi_z_prime


def _all_but(F: Functional, k: int) -> int:
    return full_mask(F.space.n_coordinates) & ~(1 << k)


def chain_remainders(F: Functional, z: float, k: int) -> Tuple[Functional, Functional]:
    """
    The remainders (R_k, S_k) of the chain rule for psi_z(F) in direction k.
    """
    k = check_coordinate(k, F.space.n_coordinates)

    projected = conditional_expectation(F, _all_but(F, k))
    derivative = F.table - projected.table

    psi_of_F = psi_z(z, F.table)
    psi_of_projection = psi_z(z, projected.table)

    R = psi_of_F - psi_of_projection - psi_z_prime(z, projected.table) * derivative
    S = psi_of_projection - psi_of_F + psi_z_prime(z, F.table) * derivative

    return Functional(F.space, R), Functional(F.space, S)


def chain_rule_defect(F: Functional, z: float, k: int) -> float:
    """
    max |D_k psi(F) - (psi'(F) D_k F - S_k - E[R_k | G_k])|, which vanishes
    up to rounding.
    """
    k = check_coordinate(k, F.space.n_coordinates)
    mask = _all_but(F, k)

    R, S = chain_remainders(F, z, k)
    composed = Functional(F.space, psi_z(z, F.table))

    derivative_of_composed = composed - conditional_expectation(composed, mask)
    derivative = F - conditional_expectation(F, mask)
    expansion = (
        Functional(F.space, psi_z_prime(z, F.table)) * derivative
        - S
        - conditional_expectation(R, mask)
    )

    return derivative_of_composed.max_abs_difference(expansion)


def s_k_integral_form(F: Functional, z: float, k: int) -> Functional:
    """
    S_k written as the integral from 0 to D_k F of psi'(F) - psi'(F_k + t),
    evaluated outcome by outcome with adaptive quadrature. Only meant for
    small spaces, as a check on :func:`chain_remainders`.
    """
    k = check_coordinate(k, F.space.n_coordinates)

    projected = conditional_expectation(F, _all_but(F, k)).table
    derivative = F.table - projected
    slope_at_F = np.asarray(psi_z_prime(z, F.table), dtype=np.float64)

    result = np.zeros(F.table.size)
    for index in range(F.table.size):
        upper = derivative[index]
        if upper == 0.0:
            continue

        start, stop = sorted((0.0, upper))
        # psi' jumps where F_k + t crosses z
        kink = z - projected[index]
        points = [kink] if start < kink < stop else None

        value, _ = quad(
            lambda t: slope_at_F[index] - psi_z_prime(z, projected[index] + t),
            start,
            stop,
            points=points,
            epsabs=1e-12,
            epsrel=1e-10,
            limit=200,
        )
        result[index] = value if upper > 0 else -value

    return Functional(F.space, result)
