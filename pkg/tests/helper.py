"""
Contains helper functions for the test routines.
"""

import numpy as np

from malstein.space import DiscreteDistribution, Functional, ProductSpace
from malstein.verification import normalized, random_functional, random_space


def seeded_pair(seed: int):
    """
    A random space with two random functionals on it.
    """
    rng = np.random.default_rng(seed)
    space = random_space(rng)
    return space, random_functional(space, rng), random_functional(space, rng)


def seeded_normalized(seed: int) -> Functional:
    _, F, _ = seeded_pair(seed)
    return normalized(F)


def fair_coins(n: int) -> ProductSpace:
    return ProductSpace([DiscreteDistribution.rademacher(0.5)] * n)


def mixed_space() -> ProductSpace:
    """
    Three coordinates with supports of sizes 2, 3 and 2.
    """
    return ProductSpace(
        [
            DiscreteDistribution([0.0, 1.0], [0.3, 0.7]),
            DiscreteDistribution([-1.0, 0.0, 2.0], [0.2, 0.5, 0.3]),
            DiscreteDistribution([1.0, 4.0], [0.6, 0.4]),
        ]
    )


def normalized_sum(space: ProductSpace) -> Functional:
    """
    (sum_k X_k - E) / sd for independent coordinates.
    """
    total = Functional.from_function(space, lambda *xs: sum(xs))
    return normalized(total)
