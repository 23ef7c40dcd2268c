"""
Quantitative de Jong bounds for normalized degenerate U-statistics: the
distance to the normal law is controlled by the fourth cumulant and the
maximal influence alone.
"""

from typing import Tuple

import numpy as np

from malstein.bounds.generic import SQRT_TWO_OVER_PI
from malstein.bounds.report import BoundReport, functional_metadata
from malstein.calculus.hoeffding import is_degenerate_ustat, max_influence
from malstein.exceptions import NotDegenerateError, NotNormalizedError, OutOfRangeError
from malstein.space.functional import Functional

NORMALIZATION_TOLERANCE = 1e-9
DEGENERACY_TOLERANCE = 1e-9

# Constants of the Kolmogorov bound
KOLMOGOROV_CUMULANT = 11.9
KOLMOGOROV_INFLUENCE = 3.5
KOLMOGOROV_KAPPA_INFLUENCE = 10.8


def dejong_bounds(F: Functional, p: int, kappa_p: float) -> Tuple[BoundReport, BoundReport]:
    """
    Wasserstein and Kolmogorov de Jong bounds.

    Parameters
    ----------

    F: Functional
        A degenerate U-statistic of order ``p`` with E[F^2] = 1.

    p: int
        The order of the U-statistic.

    kappa_p: float
        The hypercontractivity constant for order ``p``. It has no closed
        form and must be supplied by the caller.


    Returns
    -------

    Tuple[BoundReport, BoundReport]
        The Wasserstein and Kolmogorov reports.


    Raises
    ------

    NotDegenerateError
        If F carries variance outside the p-th Hoeffding space.

    NotNormalizedError
        If |E[F^2] - 1| exceeds 1e-9.
    """
    if p < 1:
        raise OutOfRangeError(f"The order of a U-statistic must be positive, got {p}.")

    if not (np.isfinite(kappa_p) and kappa_p > 0.0):
        raise OutOfRangeError(f"kappa_p must be a positive real, got {kappa_p!r}.")

    if not is_degenerate_ustat(F, p, DEGENERACY_TOLERANCE):
        raise NotDegenerateError(
            f"F is not a degenerate U-statistic of order {p}."
        )

    second_moment = F.second_moment
    if abs(second_moment - 1.0) > NORMALIZATION_TOLERANCE:
        raise NotNormalizedError(f"Expected E[F^2] = 1, got {second_moment!r}.")

    fourth_moment = float(np.dot(F.space.probabilities, F.table ** 4))
    root_cumulant = np.sqrt(abs(fourth_moment - 3.0))
    rho = np.sqrt(max_influence(F))
    root_kappa = np.sqrt(kappa_p)

    metadata = functional_metadata(F)
    metadata["order"] = int(p)
    metadata["kappa_p"] = float(kappa_p)

    sub_terms = {
        "fourth_moment": fourth_moment,
        "fourth_cumulant": fourth_moment - 3.0,
        "max_influence_root": rho,
    }

    wasserstein = BoundReport(
        "dejong_wasserstein",
        terms=[
            ("cumulant", (SQRT_TWO_OVER_PI + 4.0 / 3.0) * root_cumulant),
            (
                "influence",
                root_kappa * (SQRT_TWO_OVER_PI + 2.0 * np.sqrt(2.0) / np.sqrt(3.0)) * rho,
            ),
        ],
        metadata=metadata,
        sub_terms=sub_terms,
    )

    kolmogorov = BoundReport(
        "dejong_kolmogorov",
        terms=[
            ("cumulant", KOLMOGOROV_CUMULANT * root_cumulant),
            (
                "influence",
                (KOLMOGOROV_INFLUENCE + KOLMOGOROV_KAPPA_INFLUENCE * root_kappa) * rho,
            ),
        ],
        metadata=metadata,
        sub_terms=sub_terms,
    )

    return wasserstein, kolmogorov
