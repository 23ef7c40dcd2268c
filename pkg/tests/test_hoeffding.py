"""
Tests the Hoeffding decomposition, chaos projections and influences.
"""

import numpy as np
import pytest

from malstein.applications.graph_coloring import coloring_space, psi_kernel
from malstein.calculus.hoeffding import (
    chaos_projection,
    component,
    decompose,
    influence,
    influences,
    is_degenerate_ustat,
    max_influence,
)
from malstein.calculus.malliavin import d_k
from malstein.exceptions import DecompositionTooLargeError, OutOfRangeError
from malstein.space import Functional, conditional_expectation, constant

from .helper import fair_coins, seeded_pair


def pair_products():
    space = fair_coins(2)
    X0X1 = Functional.from_function(space, lambda x, y: x * y)
    X0 = Functional.from_function(space, lambda x, y: x + 0.0 * y)
    return space, X0, X0X1


def test_components_of_simple_functionals():
    space, X0, X0X1 = pair_products()

    assert component(X0X1, [0, 1]).max_abs_difference(X0X1) < 1e-15
    assert component(X0X1, [0]).scale < 1e-15
    assert component(X0 + X0X1, [0]).max_abs_difference(X0) < 1e-15

    decomposition = decompose(constant(space, 2.5))
    assert list(decomposition.components) == [0]
    assert decomposition.component(0).table[0] == 2.5


def test_squared_kernel_decomposition():
    """
    The square of the centered coincidence kernel has a constant part and a
    pure second order part, (1 - 2 / c) times the kernel.
    """

    c = 3
    space = coloring_space(2, c)
    psi = Functional.from_function(space, lambda x, y: psi_kernel(x, y, c))
    decomposition = decompose(psi * psi)

    assert sorted(decomposition.components) == [0, 0b11]
    assert abs(decomposition.component(0).table[0] - (1 / c) * (1 - 1 / c)) < 1e-14
    assert decomposition.component(0b11).max_abs_difference((1 - 2 / c) * psi) < 1e-14


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_reconstruction_and_variances(seed):
    _, F, _ = seeded_pair(seed)
    decomposition = decompose(F)

    assert decomposition.reconstruct().max_abs_difference(F) < 1e-9
    assert abs(sum(decomposition.chaos_variances()) - F.variance) < 1e-9

    total = sum(chaos_projection(F, p) for p in range(F.space.n_coordinates + 1))
    assert total.max_abs_difference(F) < 1e-9


@pytest.mark.parametrize("seed", [4, 5])
def test_components_are_degenerate(seed):
    """
    Tests that E[F_M | F_K] vanishes whenever M is not contained in K.
    """

    _, F, _ = seeded_pair(seed)
    n = F.space.n_coordinates

    for mask, part in decompose(F).components.items():
        for conditioning in range(1 << n):
            if mask & ~conditioning:
                assert conditional_expectation(part, conditioning).scale < 1e-12


def test_chaos_projection():
    space, X0, X0X1 = pair_products()
    F = X0 + X0X1

    assert chaos_projection(F, 0).table.tolist() == [0.0] * 4
    assert chaos_projection(F, 2).max_abs_difference(X0X1) < 1e-15
    assert chaos_projection(F, 3).scale == 0.0

    with pytest.raises(OutOfRangeError):
        chaos_projection(F, -1)


def test_influences():
    space, X0, X0X1 = pair_products()

    assert influence(constant(space, 1.0), 0) == 0.0
    assert abs(influence(X0X1, 0) - 1.0) < 1e-15
    assert abs(max_influence(X0X1) - 1.0) < 1e-15

    _, F, _ = seeded_pair(6)
    for k in range(F.space.n_coordinates):
        value = influence(F, k, check=True)
        assert abs(value - d_k(F, k).second_moment) < 1e-12

    assert np.allclose(
        influences(F), [influence(F, k) for k in range(F.space.n_coordinates)]
    )


@pytest.mark.parametrize("pairs", [2, 3])
def test_max_influence_of_pair_sums(pairs):
    space = fair_coins(2 * pairs)

    def pair_sum(*xs):
        return sum(xs[2 * i] * xs[2 * i + 1] for i in range(pairs)) / np.sqrt(pairs)

    F = Functional.from_function(space, pair_sum)

    assert abs(max_influence(F) - 1.0 / pairs) < 1e-12


def test_is_degenerate_ustat():
    space, X0, X0X1 = pair_products()
    X1 = Functional.from_function(space, lambda x, y: y + 0.0 * x)

    assert is_degenerate_ustat(X0X1, 2)
    assert not is_degenerate_ustat(X0 + X1, 2)
    assert is_degenerate_ustat(X0 + X1, 1)

    # a tiny budget forces the eigenvalue test
    assert is_degenerate_ustat(X0X1, 2, budget=1)
    assert not is_degenerate_ustat(X0 + X1, 2, budget=1)


def test_decomposition_budget():
    _, F, _ = seeded_pair(7)

    with pytest.raises(DecompositionTooLargeError):
        decompose(F, budget=2)
