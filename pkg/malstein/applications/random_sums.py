"""
Random sums S = X_1 + ... + X_N of centered i.i.d. summands with an
independent random index N of bounded support.

On the product space the index is coordinate 0 and the summands are
coordinates 1, ..., n_max, so that S = sum_k 1{N >= k} X_k and the prefix
filtration contains N from the first step on.
"""

from typing import Dict, Tuple, Union
from warnings import warn

import numpy as np
import yaml

from malstein.bounds.report import BoundReport
from malstein.exceptions import (
    DegenerateNError,
    MalsteinError,
    RandomSumSpecError,
)
from malstein.space.functional import Functional
from malstein.space.product_space import DiscreteDistribution, ProductSpace

CENTERING_TOLERANCE = 1e-12


class RandomSumSpec(object):
    """
    The laws of the index N and of a single summand X.

    Parameters
    ----------

    law_N: DiscreteDistribution
        Law of the index, supported on nonnegative integers.

    law_X: DiscreteDistribution
        Law of a summand, centered with a positive fourth moment.

    truncation_mass: float, optional
        Probability mass of N removed by truncating an unbounded law before
        renormalizing; zero for laws given with finite support.
    """

    law_N: DiscreteDistribution
    law_X: DiscreteDistribution
    truncation_mass: float

    # Cached moments
    second_moment: float
    third_absolute_moment: float
    fourth_moment: float
    index_mean: float
    index_variance: float

    def __init__(
        self,
        law_N: DiscreteDistribution,
        law_X: DiscreteDistribution,
        truncation_mass: float = 0.0,
    ):
        values = law_N.values
        if np.any(values < 0) or np.any(values != np.round(values)):
            raise RandomSumSpecError(
                f"The index must take nonnegative integer values, got {values.tolist()}."
            )

        if abs(law_X.mean) > CENTERING_TOLERANCE:
            raise RandomSumSpecError(f"Summands must be centered, E[X] = {law_X.mean!r}.")

        self.law_N = law_N
        self.law_X = law_X
        self.truncation_mass = float(truncation_mass)

        self.second_moment = law_X.moment(2)
        self.third_absolute_moment = law_X.absolute_moment(3)
        self.fourth_moment = law_X.moment(4)
        self.index_mean = law_N.mean
        self.index_variance = law_N.variance

        if not self.fourth_moment > 0.0:
            raise RandomSumSpecError("Summands must not vanish almost surely.")

        return

    @property
    def n_max(self) -> int:
        return int(np.max(self.law_N.values))

    @classmethod
    def from_document(cls, document: Dict) -> "RandomSumSpec":
        """
        Reads ``{"N": {"values": [...], "probs": [...]}, "X": {...}}``.
        """
        if not isinstance(document, dict) or not {"N", "X"} <= set(document):
            raise RandomSumSpecError(
                "A random sum document needs an 'N' and an 'X' distribution."
            )

        try:
            law_N = DiscreteDistribution.from_dict(document["N"])
            law_X = DiscreteDistribution.from_dict(document["X"])
        except MalsteinError as error:
            raise RandomSumSpecError(f"Invalid distribution: {error.message}")

        return cls(law_N, law_X)

    @classmethod
    def from_frozen(cls, n_dist, law_X: DiscreteDistribution, n_max: int) -> "RandomSumSpec":
        """
        Truncates a frozen ``scipy.stats`` discrete law of the index to
        {0, ..., n_max} and renormalizes it. The removed mass is kept as
        ``truncation_mass`` and warned about.

        Parameters
        ----------

        n_dist: scipy.stats frozen discrete distribution
            For instance ``scipy.stats.poisson(3.0)``.

        law_X: DiscreteDistribution
            Law of a summand.

        n_max: int
            Largest index value kept.
        """
        support = np.arange(int(n_max) + 1)
        pmf = np.asarray(n_dist.pmf(support), dtype=np.float64)

        kept = pmf > 0.0
        mass = float(pmf[kept].sum())
        if mass <= 0.0:
            raise RandomSumSpecError(f"The index law has no mass on 0..{n_max}.")

        truncation_mass = max(0.0, 1.0 - mass)
        if truncation_mass > 0.0:
            warn(
                f"Truncating the index law to 0..{n_max} drops a mass of "
                f"{truncation_mass:.3g}.",
                RuntimeWarning,
            )

        law_N = DiscreteDistribution(support[kept], pmf[kept] / mass)

        return cls(law_N, law_X, truncation_mass=truncation_mass)

    def to_dict(self) -> Dict:
        return {"N": self.law_N.to_dict(), "X": self.law_X.to_dict()}

    def __repr__(self):
        return f"RandomSumSpec(N={self.law_N!r}, X={self.law_X!r})"


def load_random_sum_spec(path: str) -> RandomSumSpec:
    """
    Reads a random sum specification from a JSON or YAML file.
    """
    with open(path, "r") as handle:
        try:
            document = yaml.safe_load(handle)
        except yaml.YAMLError as error:
            raise RandomSumSpecError(f"Could not parse {path}: {error}")

    return RandomSumSpec.from_document(document)


def _check_index(spec: RandomSumSpec):
    if not spec.index_mean > 0.0:
        raise DegenerateNError("The index is zero almost surely.")


def random_sum_functional(
    spec: RandomSumSpec, max_outcomes: Union[int, None] = None
) -> Tuple[ProductSpace, Functional]:
    """
    The normalized random sum F = S / sqrt(E[N] E[X^2]) on the space
    (N, X_1, ..., X_{n_max}).
    """
    _check_index(spec)

    n_max = spec.n_max
    space = ProductSpace([spec.law_N] + [spec.law_X] * n_max, max_outcomes=max_outcomes)
    grids = space.value_grids()

    total = np.zeros(space.shape)
    for k in range(1, n_max + 1):
        total = total + (grids[0] >= k) * grids[k]

    sigma = np.sqrt(spec.index_mean * spec.second_moment)

    return space, Functional.from_tensor(space, total / sigma)


def t_variance(spec: RandomSumSpec) -> float:
    """
    Var(sum_k 1{N >= k} X_k^2) = E[X^2]^2 Var(N) + (E[X^4] - E[X^2]^2) E[N].
    """
    second = spec.second_moment
    return second ** 2 * spec.index_variance + (
        spec.fourth_moment - second ** 2
    ) * spec.index_mean


def rs_bound(spec: RandomSumSpec) -> BoundReport:
    """
    The explicit Wasserstein bound for the normalized random sum, from its
    first four summand moments and the first two index moments.
    """
    _check_index(spec)

    second = spec.second_moment
    index_mean = spec.index_mean
    kurtosis_excess = max(0.0, spec.fourth_moment / second ** 2 - 1.0)

    return BoundReport(
        "rs_wasserstein",
        terms=[
            (
                "fourth_moment",
                np.sqrt(2.0 / np.pi) * np.sqrt(kurtosis_excess) / np.sqrt(index_mean),
            ),
            (
                "third_moment",
                spec.third_absolute_moment / second ** 1.5 / np.sqrt(index_mean),
            ),
            ("index_dispersion", np.sqrt(spec.index_variance) / index_mean),
        ],
        metadata={
            "index_mean": index_mean,
            "index_variance": spec.index_variance,
            "n_max": spec.n_max,
            "truncation_mass": spec.truncation_mass,
        },
        sub_terms={
            "second_moment": second,
            "third_absolute_moment": spec.third_absolute_moment,
            "fourth_moment": spec.fourth_moment,
            "t_variance": t_variance(spec),
        },
    )
