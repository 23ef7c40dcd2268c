"""
The three families of abstract normal-approximation bounds for a centered
functional F, each giving a Wasserstein and a Kolmogorov bound:

+ Malliavin-Stein bounds, built on the integrand D_k(-L^{-1} F);
+ Clark-Ocone bounds, built on D_k E[F | F_k] for the prefix filtration;
+ carre-du-champ bounds, built on Gamma_0(F, -L^{-1} F) and resampled
  increments.

Every expectation is taken exactly over the outcome grid.
"""

from typing import Dict, List, Tuple

import numpy as np

from malstein.bounds.report import BoundReport, functional_metadata
from malstein.calculus.hoeffding import fits_decomposition_budget
from malstein.calculus.malliavin import (
    _derivative_tensor,
    check_centered,
    gamma0,
    ou_generator,
    ou_pseudo_inverse,
    resampled_increment_average,
)
from malstein.space.functional import Functional, average_out, prefix_expectation
from malstein.space.law import atom_labels, default_merge_tol

SQRT_TWO_OVER_PI = np.sqrt(2.0 / np.pi)


def _expect(tensor: np.ndarray, space) -> float:
    """
    Expectation of a tensor that broadcasts against the space's shape.
    """
    return float(np.sum(tensor * space.probability_tensor))


def _inverse_method(F: Functional) -> str:
    return "hoeffding" if fits_decomposition_budget(F.space) else "krylov"


def _integrand_quantities(F: Functional, integrand: List[np.ndarray]) -> Dict[str, float]:
    """
    The expectations shared by the Malliavin-Stein and Clark-Ocone bounds,
    for an integrand A_k with E[A_k D_k F] summing to Var(F).
    """
    space = F.space
    tensor = F.tensor

    product_sum = np.zeros(space.shape)
    conditional_sum = np.zeros(space.shape)

    quantities = {
        "wasserstein_second": 0.0,
        "kolmogorov_second": 0.0,
        "third_absolute_moments": 0.0,
        "fourth_moments": 0.0,
        "squared_products": 0.0,
        "squared_derivatives": 0.0,
    }

    for k, A in enumerate(integrand):
        derivative = _derivative_tensor(tensor, space, k)
        absolute = np.abs(A)

        product_sum = product_sum + A * derivative
        conditional_sum = conditional_sum + average_out(absolute, space, [k]) * derivative

        quantities["wasserstein_second"] += _expect(absolute * derivative ** 2, space)
        quantities["kolmogorov_second"] += _expect(
            np.abs(_derivative_tensor(absolute, space, k) * derivative), space
        )
        quantities["third_absolute_moments"] += _expect(np.abs(derivative) ** 3, space)
        quantities["fourth_moments"] += _expect(derivative ** 4, space)
        quantities["squared_products"] += _expect(A ** 2 * derivative ** 2, space)
        quantities["squared_derivatives"] += _expect(derivative ** 2, space)

    product_mean = _expect(product_sum, space)
    quantities["first"] = _expect(np.abs(1.0 - product_sum), space)
    quantities["product_mean"] = product_mean
    quantities["product_variance"] = max(
        0.0, _expect((product_sum - product_mean) ** 2, space)
    )
    quantities["kolmogorov_third"] = _expect(np.abs(conditional_sum), space)

    return quantities


def _integrand_reports(
    F: Functional,
    family: str,
    quantities: Dict[str, float],
    metadata: Dict,
    extra_wasserstein_alternatives: Dict[str, float],
) -> Tuple[BoundReport, BoundReport]:
    root_variance = np.sqrt(quantities["product_variance"])
    sub_terms = {
        "first_expectation": quantities["first"],
        "integrand_product_mean": quantities["product_mean"],
        "integrand_product_variance": quantities["product_variance"],
    }

    wasserstein_alternatives = {"first_by_variance": SQRT_TWO_OVER_PI * root_variance}
    wasserstein_alternatives.update(extra_wasserstein_alternatives)

    wasserstein = BoundReport(
        f"{family}_wasserstein",
        terms=[
            ("first", SQRT_TWO_OVER_PI * quantities["first"]),
            ("second", quantities["wasserstein_second"]),
        ],
        metadata=metadata,
        sub_terms=sub_terms,
        alternatives=wasserstein_alternatives,
    )

    kolmogorov = BoundReport(
        f"{family}_kolmogorov",
        terms=[
            ("first", quantities["first"]),
            ("second", 2.0 * quantities["kolmogorov_second"]),
            ("third", 2.0 * quantities["kolmogorov_third"]),
        ],
        metadata=metadata,
        sub_terms=sub_terms,
        alternatives={"first_by_variance": root_variance},
    )

    return wasserstein, kolmogorov


def ms_bounds(F: Functional) -> Tuple[BoundReport, BoundReport]:
    """
    Malliavin-Stein bounds on d_W(F, Z) and d_K(F, Z).

    Parameters
    ----------

    F: Functional
        A centered functional.


    Returns
    -------

    Tuple[BoundReport, BoundReport]
        The Wasserstein and Kolmogorov reports.
    """
    check_centered(F)

    method = _inverse_method(F)
    inverse = -ou_pseudo_inverse(F, method=method)
    integrand = [
        _derivative_tensor(inverse.tensor, F.space, k)
        for k in range(F.space.n_coordinates)
    ]

    metadata = functional_metadata(F)
    metadata["inverse_method"] = method

    return _integrand_reports(
        F, "ms", _integrand_quantities(F, integrand), metadata, {}
    )


def co_bounds(F: Functional) -> Tuple[BoundReport, BoundReport]:
    """
    Clark-Ocone bounds on d_W(F, Z) and d_K(F, Z), with the prefix
    filtration in coordinate order.

    Next to the main second term the Wasserstein report lists three valid
    alternatives: the sum of E|D_k F|^3, the root of the sum of
    E[(D_k F)^4], and a product of roots of E[E[D_k F | F_k]^2 (D_k F)^2]
    and E[(D_k F)^2] sums.
    """
    check_centered(F)

    integrand = [
        _derivative_tensor(prefix_expectation(F, k).tensor, F.space, k)
        for k in range(F.space.n_coordinates)
    ]
    quantities = _integrand_quantities(F, integrand)

    alternatives = {
        "second_by_third_moments": quantities["third_absolute_moments"],
        "second_by_fourth_moments": np.sqrt(quantities["fourth_moments"]),
        "second_by_variances": np.sqrt(quantities["squared_products"])
        * np.sqrt(quantities["squared_derivatives"]),
    }

    return _integrand_reports(
        F, "co", quantities, functional_metadata(F), alternatives
    )


def cdc_bounds(F: Functional, merge_tol: float = None) -> Tuple[BoundReport, BoundReport]:
    """
    Carre-du-champ bounds on d_W(F, Z) and d_K(F, Z).

    Parameters
    ----------

    F: Functional
        A centered functional.

    merge_tol: float, optional
        Tolerance for grouping outcomes by the value of F when conditioning
        on F. Defaults to the one of :func:`malstein.space.law.law_of`.
    """
    check_centered(F)

    space = F.space
    method = _inverse_method(F)
    inverse = ou_pseudo_inverse(F, method=method)

    carre = gamma0(F, -inverse)
    first = float(np.dot(space.probabilities, np.abs(1.0 - carre.table)))
    carre_mean = carre.mean
    carre_variance = max(0.0, carre.variance)

    increment_sum = np.zeros(space.total_outcomes)
    wasserstein_second = 0.0
    fourth_increments = 0.0
    squared_inverse_increments = 0.0

    for k in range(space.n_coordinates):
        wasserstein_second += 0.5 * resampled_increment_average(
            inverse, F, k, lambda dg, df: np.abs(dg) * df ** 2
        ).mean
        increment_sum = increment_sum + resampled_increment_average(
            inverse, F, k, lambda dg, df: np.abs(dg) * df
        ).table
        fourth_increments += resampled_increment_average(
            F, None, k, lambda df, _: df ** 4
        ).mean
        squared_inverse_increments += resampled_increment_average(
            inverse, None, k, lambda dg, _: dg ** 2
        ).mean

    if merge_tol is None:
        merge_tol = default_merge_tol(F)
    labels, _ = atom_labels(F, merge_tol)
    probabilities = space.probabilities
    atom_probabilities = np.bincount(labels, weights=probabilities)
    atom_means = np.bincount(labels, weights=probabilities * increment_sum) / atom_probabilities
    kolmogorov_second = float(np.dot(atom_probabilities, np.abs(atom_means)))
    given_outcome = float(np.dot(probabilities, np.abs(increment_sum)))

    # Both sides of the fourth-moment identity for the increments of F
    fourth_moment_mixture = 3.0 * float(
        np.dot(probabilities, F.table ** 2 * gamma0(F, F).table)
    ) + float(np.dot(probabilities, F.table ** 3 * ou_generator(F).table))
    inverse_energy = -float(np.dot(probabilities, F.table * inverse.table))

    sub_terms = {
        "first_expectation": first,
        "carre_du_champ_mean": carre_mean,
        "carre_du_champ_variance": carre_variance,
        "inverse_energy": inverse_energy,
        "fourth_moment_mixture": fourth_moment_mixture,
        "increment_fourth_moments": fourth_increments,
    }

    metadata = functional_metadata(F)
    metadata["inverse_method"] = method

    wasserstein = BoundReport(
        "cdc_wasserstein",
        terms=[
            ("first", SQRT_TWO_OVER_PI * first),
            ("second", wasserstein_second),
        ],
        metadata=metadata,
        sub_terms=sub_terms,
        alternatives={
            "first_by_variance": SQRT_TWO_OVER_PI * np.sqrt(carre_variance),
            "second_by_cauchy_schwarz": 0.5
            * np.sqrt(max(0.0, squared_inverse_increments))
            * np.sqrt(max(0.0, fourth_increments)),
            "second_by_fourth_moment": np.sqrt(2.0)
            * np.sqrt(max(0.0, inverse_energy))
            * np.sqrt(max(0.0, fourth_moment_mixture)),
        },
    )

    kolmogorov_metadata = dict(metadata)
    kolmogorov_metadata["merge_tol"] = merge_tol

    kolmogorov = BoundReport(
        "cdc_kolmogorov",
        terms=[("first", first), ("second", kolmogorov_second)],
        metadata=kolmogorov_metadata,
        sub_terms=sub_terms,
        alternatives={
            "first_by_variance": np.sqrt(carre_variance),
            "second_given_outcome": given_outcome,
        },
    )

    return wasserstein, kolmogorov


def all_generic_bounds(F: Functional) -> List[BoundReport]:
    """
    The six generic reports, in the order ms, co, cdc (Wasserstein first).
    """
    reports = []
    for bounds in (ms_bounds, co_bounds, cdc_bounds):
        reports.extend(bounds(F))

    return reports
