"""
Real functionals of a product space, stored as dense value tables, with
expectations and conditional expectations.
"""

from typing import Callable, Dict, List, Union

import numpy as np

from malstein.exceptions import InvalidFunctionalError, SpaceMismatchError
from malstein.space.product_space import DiscreteDistribution, ProductSpace
from malstein.space.subsets import Subset, check_coordinate, members, to_mask, full_mask

Scalar = Union[int, float, np.floating]


class Functional(object):
    """
    A random variable F = f(X_0, ..., X_{n-1}) on a product space, held as
    the table of f on the full outcome grid.

    Parameters
    ----------

    space: ProductSpace
        The space the functional lives on.

    table: np.ndarray
        Either a flat table of length ``space.total_outcomes`` (coordinate
        0 fastest), or a tensor of shape ``space.shape``.
    """

    space: ProductSpace
    table: np.ndarray

    # numpy scalars on the left defer to our reflected operators
    __array_ufunc__ = None

    def __init__(self, space: ProductSpace, table: Union[np.ndarray, List[float]]):
        table = np.array(table, dtype=np.float64)

        if table.shape == space.shape and table.ndim > 1:
            table = table.ravel(order="F")
        else:
            table = table.ravel()

        if table.size != space.total_outcomes:
            raise InvalidFunctionalError(
                f"Table has {table.size} entries but the space has "
                f"{space.total_outcomes} outcomes."
            )

        if not np.all(np.isfinite(table)):
            raise InvalidFunctionalError("Functional tables must be finite.")

        table.setflags(write=False)

        self.space = space
        self.table = table

        return

    @classmethod
    def from_tensor(cls, space: ProductSpace, tensor: np.ndarray) -> "Functional":
        """
        Builds a functional from any array that broadcasts to the space's
        tensor shape (for instance a reduced conditional expectation).
        """
        full = np.broadcast_to(np.asarray(tensor, dtype=np.float64), space.shape)
        return cls(space, full.ravel(order="F"))

    @classmethod
    def from_function(
        cls, space: ProductSpace, function: Callable[..., np.ndarray]
    ) -> "Functional":
        """
        Evaluates ``function(x_0, ..., x_{n-1})`` on the outcome grid. The
        arguments are broadcastable numpy arrays of support values, so the
        function should be written with numpy operations.
        """
        return cls.from_tensor(space, function(*space.value_grids()))

    @property
    def tensor(self) -> np.ndarray:
        """
        Read-only view of the table with axis k indexing coordinate k.
        """
        return self.table.reshape(self.space.shape, order="F")

    @property
    def mean(self) -> float:
        return expectation(self)

    @property
    def second_moment(self) -> float:
        return float(np.dot(self.space.probabilities, self.table ** 2))

    @property
    def variance(self) -> float:
        centered = self.table - self.mean
        return float(np.dot(self.space.probabilities, centered ** 2))

    @property
    def scale(self) -> float:
        """
        Largest absolute entry.
        """
        return float(np.max(np.abs(self.table)))

    def max_abs_difference(self, other: "Functional") -> float:
        _check_same_space(self, other)
        return float(np.max(np.abs(self.table - other.table)))

    def _combine(self, other, operation) -> "Functional":
        if isinstance(other, Functional):
            _check_same_space(self, other)
            return Functional(self.space, operation(self.table, other.table))

        return Functional(self.space, operation(self.table, float(other)))

    def __add__(self, other):
        return self._combine(other, np.add)

    def __radd__(self, other):
        return self._combine(other, np.add)

    def __sub__(self, other):
        return self._combine(other, np.subtract)

    def __rsub__(self, other):
        return self._combine(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._combine(other, np.multiply)

    def __rmul__(self, other):
        return self._combine(other, np.multiply)

    def __truediv__(self, other):
        return self._combine(other, np.divide)

    def __pow__(self, exponent):
        return Functional(self.space, self.table ** exponent)

    def __neg__(self):
        return Functional(self.space, -self.table)

    def __abs__(self):
        return Functional(self.space, np.abs(self.table))

    def __repr__(self):
        return f"Functional(space={self.space!r}, mean={self.mean:.6g})"


def _check_same_space(first: Functional, second: Functional):
    if not first.space.same_as(second.space):
        raise SpaceMismatchError("Functionals live on different product spaces.")


def coordinate(space: ProductSpace, k: int) -> Functional:
    """
    The coordinate functional X_k.
    """
    k = check_coordinate(k, space.n_coordinates)
    return Functional.from_tensor(space, space.value_grids()[k])


def constant(space: ProductSpace, value: Scalar) -> Functional:
    return Functional(space, np.full(space.total_outcomes, float(value)))


def expectation(F: Functional) -> float:
    """
    E[F], the probability-weighted sum over all outcomes.
    """
    return float(np.dot(F.space.probabilities, F.table))


def average_out(
    tensor: np.ndarray, space: ProductSpace, axes: List[int]
) -> np.ndarray:
    """
    Integrates the given axes of a (possibly already reduced) tensor against
    their coordinate laws, keeping them as size-one axes.
    """
    for axis in axes:
        if tensor.shape[axis] == 1:
            continue
        weights = space.coords[axis].probs.reshape(space.axis_shape(axis))
        tensor = np.sum(tensor * weights, axis=axis, keepdims=True)

    return tensor


def conditional_expectation(F: Functional, L: Subset) -> Functional:
    """
    E[F | F_L], where F_L is generated by the coordinates in ``L``.

    Parameters
    ----------

    F: Functional
        The functional to condition.

    L: Union[int, Iterable[int]]
        Bitmask or iterable of the coordinates that are kept fixed.


    Returns
    -------

    Functional
        Constant on each fiber where the coordinates in ``L`` are fixed.
    """
    n = F.space.n_coordinates
    mask = to_mask(L, n)

    if mask == full_mask(n):
        return F

    dropped = members(full_mask(n) & ~mask)
    return Functional.from_tensor(F.space, average_out(F.tensor, F.space, dropped))


def prefix_expectation(F: Functional, k: int) -> Functional:
    """
    E[F | X_0, ..., X_k] for the prefix filtration in coordinate order.
    ``k = -1`` conditions on nothing.
    """
    n = F.space.n_coordinates
    if k != -1:
        k = check_coordinate(k, n)

    return conditional_expectation(F, (1 << (k + 1)) - 1)


def permute_functional(F: Functional, order: List[int]) -> Functional:
    """
    The same random variable on the relabeled space ``F.space.permuted(order)``,
    where new coordinate j is old coordinate ``order[j]``.
    """
    space = F.space.permuted(order)
    return Functional.from_tensor(space, np.transpose(F.tensor, axes=order))


def functional_from_document(
    document: Dict, max_outcomes: Union[int, None] = None
) -> Functional:
    """
    Reads ``{"space": [{"values": [...], "probs": [...]}, ...], "table": [...]}``.
    The table is flat with coordinate 0 varying fastest.
    """
    if not isinstance(document, dict) or not {"space", "table"} <= set(document):
        raise InvalidFunctionalError(
            "A functional document needs a 'space' list and a 'table'."
        )

    coordinates = document["space"]
    if not isinstance(coordinates, list):
        raise InvalidFunctionalError("'space' must list the coordinate distributions.")

    space = ProductSpace(
        [DiscreteDistribution.from_dict(entry) for entry in coordinates],
        max_outcomes=max_outcomes,
    )

    try:
        table = np.array(document["table"], dtype=np.float64)
    except (TypeError, ValueError):
        raise InvalidFunctionalError("The table must be a list of numbers.")

    return Functional(space, table)
