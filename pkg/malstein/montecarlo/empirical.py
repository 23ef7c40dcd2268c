"""
Distances between sampled statistics and the standard normal law.
"""

from typing import Tuple

import numpy as np

from malstein.exceptions import OutOfRangeError, TooFewSamplesError
from malstein.montecarlo.sampling import SampleSummary
from malstein.space.law import LawOfF
from malstein.stein.distances import kolmogorov_distance

MINIMUM_SAMPLES = 100
DEFAULT_ALPHA = 0.01


def dkw_radius(n_samples: int, alpha: float = DEFAULT_ALPHA) -> float:
    """
    Half-width of the Dvoretzky-Kiefer-Wolfowitz band holding the whole
    empirical CDF with probability 1 - alpha.
    """
    if not 0.0 < alpha < 1.0:
        raise OutOfRangeError(f"alpha must lie in (0, 1), got {alpha}.")

    return float(np.sqrt(np.log(2.0 / alpha) / (2.0 * n_samples)))


def empirical_kolmogorov(
    summary: SampleSummary, alpha: float = DEFAULT_ALPHA
) -> Tuple[float, float]:
    """
    Kolmogorov distance between the empirical law of the samples and
    N(0, 1), with the DKW radius at confidence 1 - alpha.

    Raises
    ------

    TooFewSamplesError
        With fewer than 100 samples.
    """
    if summary.n_samples < MINIMUM_SAMPLES:
        raise TooFewSamplesError(
            f"At least {MINIMUM_SAMPLES} samples are needed, got {summary.n_samples}."
        )

    estimate = kolmogorov_distance(LawOfF.from_samples(summary.sorted_values))

    return estimate, dkw_radius(summary.n_samples, alpha)
