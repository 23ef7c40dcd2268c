"""
Finite discrete distributions and their product spaces.

Outcomes of a product space are stored on a dense mixed-radix grid with
coordinate 0 varying fastest. In numpy terms a value table is the
Fortran-order ravel of a tensor whose axis k is coordinate k.
"""

import math
from typing import Dict, Iterator, List, Tuple, Union

import numpy as np

from malstein.config import MAX_COORDINATES, resolve_max_outcomes
from malstein.exceptions import (
    EmptySupportError,
    InvalidDistributionError,
    ProbSumNotOneError,
    SpaceTooLargeError,
)

PROBABILITY_TOLERANCE = 1e-12


class DiscreteDistribution(object):
    """
    A probability law with finitely many support points.
    """

    # Support points, in the order the caller gave them. Digits of an
    # outcome index into this order.
    values: np.ndarray
    probs: np.ndarray

    def __init__(
        self, values: Union[List[float], np.ndarray], probs: Union[List[float], np.ndarray]
    ):
        try:
            values = np.array(values, dtype=np.float64).ravel()
            probs = np.array(probs, dtype=np.float64).ravel()
        except (TypeError, ValueError):
            raise InvalidDistributionError(
                "Support points and probabilities must be lists of numbers."
            )

        if values.size == 0:
            raise EmptySupportError("A distribution needs at least one support point.")

        if values.size != probs.size:
            raise InvalidDistributionError(
                f"Got {values.size} support points but {probs.size} probabilities."
            )

        if not (np.all(np.isfinite(values)) and np.all(np.isfinite(probs))):
            raise InvalidDistributionError("Support points and probabilities must be finite.")

        if np.any(probs <= 0.0):
            raise InvalidDistributionError("All probabilities must be strictly positive.")

        if abs(probs.sum() - 1.0) > PROBABILITY_TOLERANCE:
            raise ProbSumNotOneError(
                f"Probabilities sum to {probs.sum():.17g}, not one."
            )

        if np.unique(values).size != values.size:
            raise InvalidDistributionError("Support points must be pairwise distinct.")

        values.setflags(write=False)
        probs.setflags(write=False)

        self.values = values
        self.probs = probs

        return

    @classmethod
    def uniform(cls, values: Union[List[float], np.ndarray]) -> "DiscreteDistribution":
        values = np.asarray(values, dtype=np.float64).ravel()
        return cls(values, np.full(values.size, 1.0 / max(values.size, 1)))

    @classmethod
    def rademacher(cls, p: float = 0.5) -> "DiscreteDistribution":
        """
        Two-point law on {-1, +1} with P(+1) = p.
        """
        return cls([-1.0, 1.0], [1.0 - p, p])

    @classmethod
    def from_dict(cls, data: Dict) -> "DiscreteDistribution":
        """
        Builds the distribution from a ``{"values": [...], "probs": [...]}``
        mapping, as found in JSON and YAML input documents.
        """
        try:
            values = data["values"]
            probs = data["probs"]
        except (KeyError, TypeError):
            raise InvalidDistributionError(
                "A distribution must be given as a mapping with 'values' and 'probs'."
            )

        return cls(values, probs)

    def to_dict(self) -> Dict[str, List[float]]:
        return {"values": self.values.tolist(), "probs": self.probs.tolist()}

    @property
    def size(self) -> int:
        return self.values.size

    @property
    def mean(self) -> float:
        return float(np.dot(self.probs, self.values))

    @property
    def variance(self) -> float:
        return float(np.dot(self.probs, (self.values - self.mean) ** 2))

    def moment(self, order: int) -> float:
        return float(np.dot(self.probs, self.values ** order))

    def absolute_moment(self, order: float) -> float:
        return float(np.dot(self.probs, np.abs(self.values) ** order))

    def same_as(self, other: "DiscreteDistribution") -> bool:
        return self is other or (
            np.array_equal(self.values, other.values)
            and np.array_equal(self.probs, other.probs)
        )

    def __repr__(self):
        return f"DiscreteDistribution(values={self.values.tolist()}, probs={self.probs.tolist()})"


class Outcome(object):
    """
    A single realization of all coordinates: one digit per coordinate and
    the matching mixed-radix linear index.
    """

    digits: Tuple[int, ...]
    linear_index: int
    values: Tuple[float, ...]

    def __init__(self, digits: Tuple[int, ...], linear_index: int, values: Tuple[float, ...]):
        self.digits = digits
        self.linear_index = linear_index
        self.values = values

    def __repr__(self):
        return f"Outcome(digits={self.digits}, linear_index={self.linear_index})"


class ProductSpace(object):
    """
    Product of finitely many independent discrete distributions.

    Parameters
    ----------

    coords: List[DiscreteDistribution]
        The coordinate distributions, in coordinate order. The order is
        part of the contract: prefix filtrations follow it.

    max_outcomes: Union[int, None], optional
        Cap on the number of outcomes. Defaults to the environment variable
        ``MALSTEIN_MAX_OUTCOMES`` or 2^24.
    """

    coords: List[DiscreteDistribution]
    sizes: Tuple[int, ...]
    total_outcomes: int
    max_outcomes: int

    def __init__(
        self,
        coords: List[DiscreteDistribution],
        max_outcomes: Union[int, None] = None,
    ):
        coords = list(coords)

        if len(coords) == 0:
            raise EmptySupportError("A product space needs at least one coordinate.")

        if len(coords) > MAX_COORDINATES:
            raise SpaceTooLargeError(
                f"At most {MAX_COORDINATES} coordinates are supported, got {len(coords)}."
            )

        for coordinate in coords:
            if not isinstance(coordinate, DiscreteDistribution):
                raise InvalidDistributionError(
                    f"Coordinates must be DiscreteDistribution objects, got {type(coordinate)}."
                )

        self.max_outcomes = resolve_max_outcomes(max_outcomes)
        self.sizes = tuple(coordinate.size for coordinate in coords)
        self.total_outcomes = math.prod(self.sizes)

        if self.total_outcomes > self.max_outcomes:
            raise SpaceTooLargeError(
                f"The product space has {self.total_outcomes} outcomes, above "
                f"the cap of {self.max_outcomes}."
            )

        self.coords = coords
        self._probabilities = None

        return

    @property
    def n_coordinates(self) -> int:
        return len(self.coords)

    @property
    def shape(self) -> Tuple[int, ...]:
        """
        Tensor shape of value tables; axis k is coordinate k.
        """
        return self.sizes

    def axis_shape(self, k: int) -> Tuple[int, ...]:
        """
        Shape that broadcasts a per-support-point vector of coordinate k
        against a full tensor.
        """
        shape = [1] * self.n_coordinates
        shape[k] = self.sizes[k]
        return tuple(shape)

    def value_grids(self) -> List[np.ndarray]:
        """
        One broadcastable array per coordinate holding its support values.
        """
        return [
            coordinate.values.reshape(self.axis_shape(k))
            for k, coordinate in enumerate(self.coords)
        ]

    @property
    def probability_tensor(self) -> np.ndarray:
        if self._probabilities is None:
            tensor = self.coords[0].probs
            for coordinate in self.coords[1:]:
                tensor = np.multiply.outer(tensor, coordinate.probs)
            tensor = np.array(tensor, dtype=np.float64).reshape(self.shape)
            tensor.setflags(write=False)
            self._probabilities = tensor

        return self._probabilities

    @property
    def probabilities(self) -> np.ndarray:
        """
        Outcome probabilities as a flat table (coordinate 0 fastest).
        """
        return self.probability_tensor.ravel(order="F")

    def encode(self, digits: Tuple[int, ...]) -> int:
        return int(np.ravel_multi_index(tuple(digits), self.sizes, order="F"))

    def decode(self, linear_index: int) -> Outcome:
        digits = tuple(
            int(d) for d in np.unravel_index(int(linear_index), self.sizes, order="F")
        )
        values = tuple(
            float(coordinate.values[d]) for coordinate, d in zip(self.coords, digits)
        )
        return Outcome(digits=digits, linear_index=int(linear_index), values=values)

    def outcomes(self) -> Iterator[Outcome]:
        for linear_index in range(self.total_outcomes):
            yield self.decode(linear_index)

    def permuted(self, order: List[int]) -> "ProductSpace":
        """
        The space with coordinates relabeled: new coordinate j is old
        coordinate ``order[j]``.
        """
        if sorted(order) != list(range(self.n_coordinates)):
            raise InvalidDistributionError(f"{order} is not a permutation of the coordinates.")

        return ProductSpace(
            [self.coords[k] for k in order], max_outcomes=self.max_outcomes
        )

    def same_as(self, other: "ProductSpace") -> bool:
        return self is other or (
            self.sizes == other.sizes
            and all(a.same_as(b) for a, b in zip(self.coords, other.coords))
        )

    def __repr__(self):
        return (
            f"ProductSpace(n_coordinates={self.n_coordinates}, "
            f"sizes={self.sizes}, total_outcomes={self.total_outcomes})"
        )


def build_space(
    dists: List[DiscreteDistribution], max_outcomes: Union[int, None] = None
) -> ProductSpace:
    """
    Builds the product space of the given distributions, keeping their
    order as the coordinate order.
    """
    return ProductSpace(dists, max_outcomes=max_outcomes)
