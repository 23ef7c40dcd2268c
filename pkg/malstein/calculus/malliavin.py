"""
Malliavin operators on a finite product space.

D_k F = F - E[F | G_k] is the orthogonal projection removing the part of F
that does not depend on coordinate k (G_k is generated by every coordinate
except k). From it:

+ the divergence of a process, delta U = sum_k D_k U_k;
+ the Ornstein-Uhlenbeck generator L F = -sum_k D_k F, which acts as -p on
  the p-th Hoeffding space;
+ its pseudo-inverse on centered functionals;
+ the carre-du-champ operator Gamma_0, built from resampling one
  coordinate at a time.

All operators work on the dense tensor of a functional; nothing is
evaluated outcome by outcome.
"""

from typing import Callable, Iterable, List, Union
from warnings import warn

import numpy as np
from scipy.sparse.linalg import LinearOperator, cg

from malstein.calculus.hoeffding import decompose, fits_decomposition_budget
from malstein.exceptions import (
    ConsistencyError,
    NotCenteredError,
    SpaceMismatchError,
    SubsetOutOfRangeError,
)
from malstein.space.functional import (
    Functional,
    average_out,
    conditional_expectation,
    prefix_expectation,
)
from malstein.space.subsets import Subset, check_coordinate, members, popcount, to_mask

CENTERING_TOLERANCE = 1e-9

valid_inverse_methods = ["auto", "hoeffding", "krylov"]


class Process(object):
    """
    A family (U_k) of functionals indexed by the coordinates of a space.
    """

    space: object
    entries: List[Functional]

    def __init__(self, entries: List[Functional]):
        entries = list(entries)

        if len(entries) == 0:
            raise SpaceMismatchError("A process needs one entry per coordinate.")

        space = entries[0].space
        for entry in entries:
            if not entry.space.same_as(space):
                raise SpaceMismatchError("All entries of a process must share one space.")

        if len(entries) != space.n_coordinates:
            raise SpaceMismatchError(
                f"A process on {space.n_coordinates} coordinates needs as many "
                f"entries, got {len(entries)}."
            )

        self.space = space
        self.entries = entries

        return

    def __getitem__(self, k: int) -> Functional:
        return self.entries[k]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def inner(self, other: "Process") -> float:
        """
        sum_k E[U_k V_k].
        """
        probabilities = self.space.probabilities
        return float(
            sum(np.dot(probabilities, u.table * v.table) for u, v in zip(self, other))
        )


def _check_same_space(F: Functional, G: Functional):
    if not F.space.same_as(G.space):
        raise SpaceMismatchError("Functionals live on different product spaces.")


def _derivative_tensor(tensor: np.ndarray, space, k: int) -> np.ndarray:
    return tensor - average_out(tensor, space, [k])


def d_k(F: Functional, k: int) -> Functional:
    """
    The Malliavin derivative in direction k, D_k F = F - E[F | G_k].
    """
    k = check_coordinate(k, F.space.n_coordinates)
    return Functional.from_tensor(F.space, _derivative_tensor(F.tensor, F.space, k))


def gradient(F: Functional) -> Process:
    return Process([d_k(F, k) for k in range(F.space.n_coordinates)])


def divergence(U: Process) -> Functional:
    """
    delta U = sum_k D_k U_k.
    """
    total = np.zeros(U.space.shape)
    for k, entry in enumerate(U):
        total = total + _derivative_tensor(entry.tensor, U.space, k)

    return Functional.from_tensor(U.space, total)


def _generator_tensor(tensor: np.ndarray, space) -> np.ndarray:
    total = np.zeros(space.shape)
    for k in range(space.n_coordinates):
        total = total - _derivative_tensor(tensor, space, k)

    return total


def ou_generator(F: Functional, check: bool = False, tolerance: float = 1e-9) -> Functional:
    """
    The Ornstein-Uhlenbeck generator, L F = -sum_k D_k F.

    Parameters
    ----------

    F: Functional
        The functional.

    check: bool, optional
        Also evaluate -sum_M |M| F_M through the full Hoeffding decomposition
        and raise :class:`ConsistencyError` when the two disagree.
    """
    result = Functional.from_tensor(F.space, _generator_tensor(F.tensor, F.space))

    if check:
        decomposition = decompose(F)
        spectral = np.zeros(F.space.total_outcomes)
        for mask in decomposition.reduced:
            if mask:
                spectral = spectral - popcount(mask) * decomposition.component(mask).table

        difference = float(np.max(np.abs(spectral - result.table)))
        if difference > tolerance * max(1.0, F.scale):
            raise ConsistencyError(
                f"L F differs by {difference!r} between -delta D F and the "
                "Hoeffding expansion."
            )

    return result


def check_centered(G: Functional):
    if abs(G.mean) > CENTERING_TOLERANCE * max(1.0, G.scale):
        raise NotCenteredError(f"Expected a centered functional, E[G] = {G.mean!r}.")


def _pseudo_inverse_hoeffding(G: Functional) -> np.ndarray:
    decomposition = decompose(G)
    total = np.zeros(G.space.total_outcomes)
    for mask in decomposition.reduced:
        if mask:
            total = total - decomposition.component(mask).table / popcount(mask)

    return total


def _pseudo_inverse_krylov(G: Functional) -> np.ndarray:
    """
    Solves -L x = G by conjugate gradients.

    -L is self-adjoint for the P-weighted inner product, so the system is
    symmetrized with the square roots of the outcome probabilities. On
    centered functionals its spectrum is contained in {1, ..., n}.
    """
    space = G.space
    root_weights = np.sqrt(space.probabilities)

    def matvec(vector):
        vector = np.asarray(vector, dtype=np.float64).ravel()
        tensor = (vector / root_weights).reshape(space.shape, order="F")
        image = -_generator_tensor(tensor, space).ravel(order="F")
        return root_weights * image

    operator = LinearOperator(
        (space.total_outcomes, space.total_outcomes), matvec=matvec, dtype=np.float64
    )

    centered = G.table - G.mean
    solution, info = cg(
        operator,
        root_weights * centered,
        rtol=1e-13,
        atol=0.0,
        maxiter=20 * space.n_coordinates + 100,
    )

    if info != 0:
        warn(
            f"Conjugate gradients did not reach the requested tolerance (info={info}).",
            RuntimeWarning,
        )

    result = solution / root_weights
    result = result - np.dot(space.probabilities, result)

    return -result


def ou_pseudo_inverse(
    G: Functional,
    method: str = "auto",
    check: bool = False,
    tolerance: float = 1e-9,
) -> Functional:
    """
    The pseudo-inverse of the generator on centered functionals,
    L^{-1} G = -sum_{M nonempty} G_M / |M|.

    Parameters
    ----------

    G: Functional
        A centered functional.

    method: str, optional
        ``"hoeffding"`` sums the Hoeffding components, ``"krylov"`` solves
        -L x = G with conjugate gradients and ``"auto"`` (default) uses the
        decomposition whenever it fits the memory budget.

    check: bool, optional
        Compute both routes and raise :class:`ConsistencyError` when they
        disagree.


    Returns
    -------

    Functional
        The centered solution of L x = G.
    """
    check_centered(G)

    if method not in valid_inverse_methods:
        raise ValueError(
            f"Unknown method {method}, choose one of {', '.join(valid_inverse_methods)}."
        )

    if method == "auto":
        method = "hoeffding" if fits_decomposition_budget(G.space) else "krylov"

    if method == "hoeffding":
        table = _pseudo_inverse_hoeffding(G)
    else:
        table = _pseudo_inverse_krylov(G)

    if check:
        other = (
            _pseudo_inverse_krylov(G) if method == "hoeffding" else _pseudo_inverse_hoeffding(G)
        )
        difference = float(np.max(np.abs(other - table)))
        if difference > tolerance * max(1.0, G.scale):
            raise ConsistencyError(
                f"The two routes to L^-1 G differ by {difference!r}."
            )

    return Functional(G.space, table)


def resampled_increment_average(
    F: Functional,
    G: Union[Functional, None],
    k: int,
    combine: Callable[[np.ndarray, np.ndarray], np.ndarray],
) -> Functional:
    """
    E'[combine(f(X^(k)) - f(X), g(X^(k)) - g(X))], where X^(k) replaces
    coordinate k by an independent copy and E' integrates that copy only.

    The increments are read off the tensors directly: along axis k the
    table already lists f for every value of the resampled coordinate.
    """
    k = check_coordinate(k, F.space.n_coordinates)
    if G is None:
        G = F
    else:
        _check_same_space(F, G)

    weights = F.space.coords[k].probs

    def increments(tensor):
        moved = np.moveaxis(tensor, k, -1)
        # [..., x, x'] = f(x') - f(x)
        return moved[..., None, :] - moved[..., :, None]

    combined = combine(increments(F.tensor), increments(G.tensor))
    averaged = np.sum(combined * weights, axis=-1)

    return Functional.from_tensor(F.space, np.moveaxis(averaged, -1, k))


def gamma0(F: Functional, G: Functional) -> Functional:
    """
    The carre-du-champ operator,

        Gamma_0(F, G) = 1/2 sum_k E'[(f(X^(k)) - f(X)) (g(X^(k)) - g(X))].
    """
    _check_same_space(F, G)

    total = np.zeros(F.space.total_outcomes)
    for k in range(F.space.n_coordinates):
        total = total + resampled_increment_average(F, G, k, np.multiply).table

    return Functional(F.space, 0.5 * total)


def efron_stein_term(F: Functional, G: Functional, k: int) -> float:
    """
    1/2 E[(f(X^(k)) - f(X)) (g(X^(k)) - g(X))], which equals
    E[D_k F D_k G].
    """
    return 0.5 * resampled_increment_average(F, G, k, np.multiply).mean


def increment_moment(F: Functional, k: int, power: float, absolute: bool = False) -> float:
    """
    E[(f(X^(k)) - f(X))^power], or of its absolute value.
    """
    if absolute:
        combine = lambda a, b: np.abs(a) ** power
    else:
        combine = lambda a, b: a ** power

    return resampled_increment_average(F, None, k, combine).mean


def stroock_component(
    F: Functional, M: Subset, order: Union[Iterable[int], None] = None
) -> Functional:
    """
    F_M = E[D_{i_1} ... D_{i_p} F | F_M].

    Parameters
    ----------

    F: Functional
        The functional.

    M: Union[int, Iterable[int]]
        A nonempty subset of coordinates.

    order: Union[Iterable[int], None], optional
        The order in which the derivatives are applied; defaults to
        increasing coordinates. The result does not depend on it.
    """
    mask = to_mask(M, F.space.n_coordinates)
    if mask == 0:
        raise SubsetOutOfRangeError("The Stroock formula needs a nonempty subset.")

    if order is None:
        order = members(mask)
    else:
        order = list(order)
        if to_mask(order, F.space.n_coordinates) != mask or len(order) != popcount(mask):
            raise SubsetOutOfRangeError(f"{order} does not enumerate the subset {members(mask)}.")

    tensor = F.tensor
    for k in order:
        tensor = _derivative_tensor(tensor, F.space, k)

    return conditional_expectation(Functional.from_tensor(F.space, tensor), mask)


def clark_ocone_integrand(F: Functional) -> Process:
    """
    The process (D_k E[F | F_k]), with F_k the prefix filtration generated by
    coordinates 0..k. It also equals (E[D_k F | F_k]).
    """
    return Process(
        [d_k(prefix_expectation(F, k), k) for k in range(F.space.n_coordinates)]
    )
