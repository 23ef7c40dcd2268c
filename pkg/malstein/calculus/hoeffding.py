"""
Exact Hoeffding decomposition of functionals on finite product spaces.

Every F splits uniquely into orthogonal components F_M, one per subset M
of coordinates, where F_M depends only on the coordinates in M and
integrates to zero in each of them. The components are obtained from the
conditional expectations E[F | F_L] by inclusion-exclusion,

    F_M = sum over L in M of (-1)^{|M|-|L|} E[F | F_L].
"""

from typing import Dict, Union

import numpy as np

from malstein.config import DEFAULT_DECOMPOSITION_BUDGET
from malstein.exceptions import (
    ConsistencyError,
    DecompositionTooLargeError,
    OutOfRangeError,
)
from malstein.space.functional import Functional, average_out, constant
from malstein.space.subsets import (
    Subset,
    check_coordinate,
    full_mask,
    members,
    popcount,
    to_mask,
)

ZERO_COMPONENT_THRESHOLD = 1e-18


def _weighted_mean(reduced: np.ndarray, space, mask: int) -> float:
    """
    Expectation of an array that only varies along the axes in ``mask``.
    """
    return float(average_out(reduced, space, members(mask)).sum())


def decomposition_size(space) -> int:
    """
    Number of floats stored by a full decomposition: each E[F | F_L] is
    kept in reduced form, so the total is the product of (1 + |supp_k|).
    """
    total = 1
    for size in space.sizes:
        total *= 1 + size
    return total


def fits_decomposition_budget(space, budget: Union[int, None] = None) -> bool:
    if budget is None:
        budget = DEFAULT_DECOMPOSITION_BUDGET
    return decomposition_size(space) <= budget


def _conditional_expectation_lattice(F: Functional, top_mask: int) -> Dict[int, np.ndarray]:
    """
    Reduced tensors E[F | F_L] for every L contained in ``top_mask``.

    Each one is obtained from an already computed superset by integrating
    out a single axis.
    """
    n = F.space.n_coordinates
    everything = full_mask(n)

    lattice = {top_mask: average_out(F.tensor, F.space, members(everything & ~top_mask))}

    # Subsets of top_mask, enumerated in decreasing order.
    sub = top_mask
    while sub:
        sub = (sub - 1) & top_mask
        missing = top_mask & ~sub
        lowest = missing & -missing
        parent = sub | lowest
        axis = lowest.bit_length() - 1
        lattice[sub] = average_out(lattice[parent], F.space, [axis])

    return lattice


def _mobius(lattice: Dict[int, np.ndarray], top_mask: int) -> Dict[int, np.ndarray]:
    """
    In-place inclusion-exclusion over the subset lattice below ``top_mask``.
    """
    components = dict(lattice)
    for axis in members(top_mask):
        bit = 1 << axis
        for mask in components:
            if mask & bit:
                components[mask] = components[mask] - components[mask ^ bit]

    return components


class HoeffdingDecomposition(object):
    """
    The full set of Hoeffding components of a functional.

    Components with (numerically) zero variance are dropped, except the
    constant component F_empty which is always present.
    """

    # The decomposed functional
    base: Functional
    # Reduced component tensors keyed by subset mask
    reduced: Dict[int, np.ndarray]
    # Var(F_M) keyed by subset mask
    variances: Dict[int, float]

    def __init__(self, base: Functional, reduced: Dict[int, np.ndarray], variances: Dict[int, float]):
        self.base = base
        self.reduced = reduced
        self.variances = variances
        self._components = {}

        return

    @property
    def space(self):
        return self.base.space

    @property
    def components(self) -> Dict[int, Functional]:
        """
        Non-zero components as full functionals, keyed by subset mask.
        """
        for mask in self.reduced:
            self.component(mask)

        return dict(self._components)

    def component(self, M: Subset) -> Functional:
        mask = to_mask(M, self.space.n_coordinates)

        if mask not in self.reduced:
            return constant(self.space, 0.0)

        if mask not in self._components:
            self._components[mask] = Functional.from_tensor(self.space, self.reduced[mask])

        return self._components[mask]

    def chaos(self, p: int) -> Functional:
        """
        J_p(F), the sum of the components of order p.
        """
        total = np.zeros(self.space.total_outcomes)
        for mask in self.reduced:
            if popcount(mask) == p:
                total = total + self.component(mask).table

        return Functional(self.space, total)

    def chaos_variances(self) -> np.ndarray:
        """
        Var(J_p F) for p = 0, ..., n.
        """
        result = np.zeros(self.space.n_coordinates + 1)
        for mask, variance in self.variances.items():
            result[popcount(mask)] += variance

        return result

    def reconstruct(self) -> Functional:
        total = np.zeros(self.space.total_outcomes)
        for mask in self.reduced:
            total = total + self.component(mask).table

        return Functional(self.space, total)

    def __len__(self):
        return len(self.reduced)


def decompose(F: Functional, budget: Union[int, None] = None) -> HoeffdingDecomposition:
    """
    Computes all 2^n Hoeffding components of F.

    Parameters
    ----------

    F: Functional
        The functional to decompose.

    budget: Union[int, None], optional
        Maximal number of stored floats. Defaults to 2^26.


    Returns
    -------

    HoeffdingDecomposition
        Components with variance below 1e-18 * max|F|^2 are dropped, apart
        from the constant one.
    """
    if not fits_decomposition_budget(F.space, budget):
        raise DecompositionTooLargeError(
            f"A full decomposition of a space with sizes {F.space.sizes} needs "
            f"{decomposition_size(F.space)} stored values, above the budget."
        )

    everything = full_mask(F.space.n_coordinates)
    components = _mobius(_conditional_expectation_lattice(F, everything), everything)

    threshold = ZERO_COMPONENT_THRESHOLD * F.scale ** 2
    reduced = {}
    variances = {}

    for mask, tensor in components.items():
        if mask == 0:
            reduced[0] = tensor
            variances[0] = 0.0
            continue

        variance = _weighted_mean(tensor ** 2, F.space, mask)
        if variance > threshold:
            reduced[mask] = tensor
            variances[mask] = variance

    return HoeffdingDecomposition(F, reduced, variances)


def component(F: Functional, M: Subset) -> Functional:
    """
    The single Hoeffding component F_M, by inclusion-exclusion over the
    subsets of M only.
    """
    mask = to_mask(M, F.space.n_coordinates)
    components = _mobius(_conditional_expectation_lattice(F, mask), mask)

    return Functional.from_tensor(F.space, components[mask])


def chaos_projection(F: Functional, p: int, budget: Union[int, None] = None) -> Functional:
    """
    J_p(F), the projection of F on the p-th Hoeffding space.
    """
    if p < 0:
        raise OutOfRangeError(f"Chaos order must be nonnegative, got {p}.")

    if p == 0:
        return constant(F.space, F.mean)

    if p > F.space.n_coordinates:
        return constant(F.space, 0.0)

    return decompose(F, budget).chaos(p)


def influences(F: Functional) -> np.ndarray:
    """
    Inf_k(F) = E[Var(F | G_k)] for every coordinate k, where G_k is
    generated by all coordinates except k.
    """
    tensor = F.tensor
    probabilities = F.space.probabilities
    result = np.empty(F.space.n_coordinates)

    for k in range(F.space.n_coordinates):
        deviation = tensor - average_out(tensor, F.space, [k])
        result[k] = np.dot(probabilities, (deviation ** 2).ravel(order="F"))

    return result


def influence(F: Functional, k: int, check: bool = False, tolerance: float = 1e-9) -> float:
    """
    The influence of coordinate k on F.

    Parameters
    ----------

    F: Functional
        The functional.

    k: int
        Coordinate index.

    check: bool, optional
        If ``True``, also evaluate the sum of Var(F_M) over the subsets M
        containing k and raise :class:`ConsistencyError` if the two
        disagree.
    """
    k = check_coordinate(k, F.space.n_coordinates)
    tensor = F.tensor
    deviation = tensor - average_out(tensor, F.space, [k])
    value = float(np.dot(F.space.probabilities, (deviation ** 2).ravel(order="F")))

    if check:
        decomposition = decompose(F)
        from_components = sum(
            variance
            for mask, variance in decomposition.variances.items()
            if mask & (1 << k)
        )
        if abs(from_components - value) > tolerance * max(1.0, F.scale) ** 2:
            raise ConsistencyError(
                f"Influence of coordinate {k}: {value!r} from the conditional "
                f"variance but {from_components!r} from the components."
            )

    return value


def max_influence(F: Functional) -> float:
    """
    rho^2(F), the largest influence of a single coordinate.
    """
    return float(np.max(influences(F)))


def is_degenerate_ustat(
    F: Functional, p: int, tol: float = 1e-9, budget: Union[int, None] = None
) -> bool:
    """
    Whether F is a degenerate U-statistic of order p, i.e. centered and
    carried entirely by components of order p.

    When the full decomposition does not fit the budget, the eigenvalue
    test ||LF + pF||^2 < tol is used instead; it is never weaker since
    ||LF + pF||^2 dominates the variance outside chaos p.
    """
    if abs(F.mean) >= tol:
        return False

    if fits_decomposition_budget(F.space, budget):
        decomposition = decompose(F, budget)
        return all(
            variance < tol
            for mask, variance in decomposition.variances.items()
            if popcount(mask) != p
        )

    from malstein.calculus.malliavin import ou_generator

    residual = ou_generator(F) + p * F
    return residual.second_moment < tol
