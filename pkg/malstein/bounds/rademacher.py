"""
Bounds for functionals of a (possibly non-symmetric, non-homogeneous)
Rademacher sequence, written with the discrete gradient

    D^_k F = sqrt(p_k q_k) (F|_{X_k = +1} - F|_{X_k = -1})

and the normalized coordinates Y_k = (X_k + q_k - p_k) / (2 sqrt(p_k q_k)),
for which D_k F = Y_k D^_k F.
"""

from typing import List, Tuple, Union

import numpy as np

from malstein.bounds.generic import SQRT_TWO_OVER_PI, _expect, _inverse_method
from malstein.bounds.report import BoundReport, functional_metadata
from malstein.calculus.malliavin import check_centered, ou_pseudo_inverse
from malstein.exceptions import NotTwoPointError, OutOfRangeError, SpaceMismatchError
from malstein.space.functional import Functional, prefix_expectation
from malstein.space.product_space import DiscreteDistribution, ProductSpace
from malstein.space.subsets import check_coordinate


class RademacherSpace(object):
    """
    Success probabilities p_k = P(X_k = +1) of independent signs.
    """

    p: np.ndarray
    q: np.ndarray

    def __init__(self, p: Union[List[float], np.ndarray]):
        p = np.array(p, dtype=np.float64).ravel()

        if p.size == 0:
            raise OutOfRangeError("A Rademacher space needs at least one coordinate.")

        if not np.all((p > 0.0) & (p < 1.0)):
            raise OutOfRangeError(f"Success probabilities must lie in (0, 1), got {p.tolist()}.")

        p.setflags(write=False)
        self.p = p
        self.q = 1.0 - p

        return

    @classmethod
    def from_space(cls, space: ProductSpace) -> "RademacherSpace":
        """
        Reads the success probabilities off a product space whose every
        coordinate takes the values -1 and +1.
        """
        p = []
        for k, distribution in enumerate(space.coords):
            values = set(distribution.values.tolist())
            if distribution.size != 2 or values != {-1.0, 1.0}:
                raise NotTwoPointError(
                    f"Coordinate {k} takes the values {sorted(values)}, not -1 and +1."
                )
            p.append(float(distribution.probs[distribution.values == 1.0][0]))

        return cls(p)

    @property
    def n_coordinates(self) -> int:
        return self.p.size

    def space(self, max_outcomes: Union[int, None] = None) -> ProductSpace:
        return ProductSpace(
            [DiscreteDistribution.rademacher(p) for p in self.p], max_outcomes=max_outcomes
        )

    def third_absolute_moments(self) -> np.ndarray:
        """
        E|Y_k|^3 = (1 - 2 p_k q_k) / sqrt(p_k q_k).
        """
        return (1.0 - 2.0 * self.p * self.q) / np.sqrt(self.p * self.q)

    def __repr__(self):
        return f"RademacherSpace(p={self.p.tolist()})"


def _sign_indices(space: ProductSpace, k: int) -> Tuple[int, int]:
    values = space.coords[k].values
    return int(np.flatnonzero(values == 1.0)[0]), int(np.flatnonzero(values == -1.0)[0])


def _hat_derivative_tensor(tensor: np.ndarray, space: ProductSpace, k: int, p: float) -> np.ndarray:
    plus, minus = _sign_indices(space, k)
    difference = np.take(tensor, [plus], axis=k) - np.take(tensor, [minus], axis=k)
    return np.sqrt(p * (1.0 - p)) * difference


def _y_tensor(space: ProductSpace, k: int, p: float) -> np.ndarray:
    q = 1.0 - p
    grid = space.value_grids()[k]
    return (grid + q - p) / (2.0 * np.sqrt(p * q))


def _check_space(space: RademacherSpace, F: Functional) -> RademacherSpace:
    found = RademacherSpace.from_space(F.space)
    if found.n_coordinates != space.n_coordinates or not np.allclose(
        found.p, space.p, rtol=0.0, atol=1e-15
    ):
        raise SpaceMismatchError(
            f"The functional lives on {found}, not on {space}."
        )
    return found


def hat_derivative(F: Functional, k: int) -> Functional:
    """
    D^_k F, which does not depend on X_k.
    """
    rademacher = RademacherSpace.from_space(F.space)
    k = check_coordinate(k, F.space.n_coordinates)
    return Functional.from_tensor(
        F.space, _hat_derivative_tensor(F.tensor, F.space, k, rademacher.p[k])
    )


def y_k(space: ProductSpace, k: int) -> Functional:
    """
    The normalized coordinate Y_k, centered with unit variance.
    """
    rademacher = RademacherSpace.from_space(space)
    k = check_coordinate(k, space.n_coordinates)
    return Functional.from_tensor(space, _y_tensor(space, k, rademacher.p[k]))


def _rademacher_reports(
    F: Functional,
    rademacher: RademacherSpace,
    family: str,
    integrand: List[np.ndarray],
    metadata,
) -> Tuple[BoundReport, BoundReport]:
    """
    integrand[k] is the reduced tensor of D^_k applied to the integrand
    functional, so that the Malliavin integrand is Y_k times it.
    """
    space = F.space
    tensor = F.tensor

    first_sum = np.zeros(space.shape)
    third_sum = np.zeros(space.shape)
    wasserstein_second = 0.0
    kolmogorov_second = 0.0

    for k, hat_integrand in enumerate(integrand):
        p, q = rademacher.p[k], rademacher.q[k]
        hat_derivative_k = _hat_derivative_tensor(tensor, space, k, p)
        y = _y_tensor(space, k, p)
        absolute = np.abs(hat_integrand)

        first_sum = first_sum + hat_integrand * hat_derivative_k * y ** 2
        third_sum = third_sum + np.sqrt(p * q) * absolute * hat_derivative_k * y

        wasserstein_second += rademacher.third_absolute_moments()[k] * _expect(
            absolute * hat_derivative_k ** 2, space
        )
        kolmogorov_second += abs(p - q) * _expect(
            absolute * np.abs(hat_derivative_k), space
        )

    first = _expect(np.abs(1.0 - first_sum), space)
    third = _expect(np.abs(third_sum), space)

    sub_terms = {
        "first_expectation": first,
        "asymmetry_sum": kolmogorov_second,
        "signed_sum_expectation": third,
    }

    wasserstein = BoundReport(
        f"r{family}_wasserstein",
        terms=[("first", SQRT_TWO_OVER_PI * first), ("second", wasserstein_second)],
        metadata=metadata,
        sub_terms=sub_terms,
    )
    kolmogorov = BoundReport(
        f"r{family}_kolmogorov",
        terms=[
            ("first", first),
            ("second", 2.0 * kolmogorov_second),
            ("third", 4.0 * third),
        ],
        metadata=metadata,
        sub_terms=sub_terms,
    )

    return wasserstein, kolmogorov


def rademacher_bounds(
    space: RademacherSpace, F: Functional
) -> Tuple[BoundReport, BoundReport, BoundReport, BoundReport]:
    """
    Malliavin-Stein and Clark-Ocone bounds specialised to Rademacher
    sequences.

    Parameters
    ----------

    space: RademacherSpace
        The success probabilities of the signs F is a function of.

    F: Functional
        A centered functional on ``space.space()``.


    Returns
    -------

    Tuple[BoundReport, BoundReport, BoundReport, BoundReport]
        Malliavin-Stein Wasserstein and Kolmogorov reports, then the
        Clark-Ocone ones.
    """
    rademacher = _check_space(space, F)
    check_centered(F)

    method = _inverse_method(F)
    inverse = -ou_pseudo_inverse(F, method=method)

    ms_integrand = []
    co_integrand = []
    for k in range(F.space.n_coordinates):
        p = rademacher.p[k]
        ms_integrand.append(_hat_derivative_tensor(inverse.tensor, F.space, k, p))
        # D^_k E[F | X_0..X_k] equals E[D^_k F | X_0..X_{k-1}]
        co_integrand.append(
            _hat_derivative_tensor(prefix_expectation(F, k).tensor, F.space, k, p)
        )

    metadata = functional_metadata(F)
    metadata["success_probabilities"] = rademacher.p.tolist()

    ms_metadata = dict(metadata)
    ms_metadata["inverse_method"] = method

    return _rademacher_reports(
        F, rademacher, "ms", ms_integrand, ms_metadata
    ) + _rademacher_reports(F, rademacher, "co", co_integrand, metadata)
