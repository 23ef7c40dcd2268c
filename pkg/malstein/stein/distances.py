"""
Exact Kolmogorov and Wasserstein distances between a finitely supported
law and the standard normal law.

Both distances only involve the step CDF of the law and Phi, so they are
evaluated in closed form: the Kolmogorov supremum is attained at an atom
(from one side or the other) and the Wasserstein integral of |CDF - Phi|
splits into intervals where the CDF is constant, each integrated with the
antiderivative t Phi(t) + phi(t) of Phi.
"""

from typing import Tuple

import numpy as np

from malstein.space.law import LawOfF
from malstein.stein.normal import normal_cdf, normal_pdf, normal_quantile

# Keeps interior CDF levels strictly inside (0, 1) for the quantile.
LEVEL_GUARD = 1e-16


def _phi_antiderivative(t: np.ndarray) -> np.ndarray:
    return t * normal_cdf(t) + normal_pdf(t)


def kolmogorov_distance(law: LawOfF) -> float:
    """
    sup_t |P(F <= t) - Phi(t)|.
    """
    phi = normal_cdf(law.atoms)
    after = law.cdf
    before = np.concatenate([[0.0], after[:-1]])

    return float(max(np.max(np.abs(after - phi)), np.max(np.abs(before - phi))))


def wasserstein_distance(law: LawOfF) -> float:
    """
    The integral over the real line of |P(F <= t) - Phi(t)|.
    """
    atoms = law.atoms
    cdf = law.cdf

    first = atoms[0]
    last = atoms[-1]

    # Integral of Phi below the first atom, and of 1 - Phi above the last.
    left_tail = normal_pdf(first) + first * normal_cdf(first)
    right_tail = normal_pdf(last) - last * normal_cdf(-last)

    if atoms.size == 1:
        return float(left_tail + right_tail)

    lower = atoms[:-1]
    upper = atoms[1:]
    levels = np.clip(cdf[:-1], LEVEL_GUARD, 1.0 - LEVEL_GUARD)

    # On each interval c - Phi changes sign once, at Phi^{-1}(c).
    crossing = np.clip(normal_quantile(levels), lower, upper)

    below = levels * (crossing - lower) - (
        _phi_antiderivative(crossing) - _phi_antiderivative(lower)
    )
    above = (_phi_antiderivative(upper) - _phi_antiderivative(crossing)) - levels * (
        upper - crossing
    )

    return float(left_tail + right_tail + np.sum(below) + np.sum(above))


def distances(law: LawOfF) -> Tuple[float, float]:
    """
    Both distances to N(0, 1), as (Kolmogorov, Wasserstein).
    """
    return kolmogorov_distance(law), wasserstein_distance(law)
