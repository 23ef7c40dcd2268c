"""
Tests the bounds specialised to Rademacher sequences against the generic
ones they rewrite.
"""

import numpy as np
import pytest

from malstein.bounds import (
    RademacherSpace,
    co_bounds,
    hat_derivative,
    ms_bounds,
    rademacher_bounds,
    y_k,
)
from malstein.calculus.malliavin import d_k
from malstein.exceptions import (
    NotCenteredError,
    NotTwoPointError,
    OutOfRangeError,
    SpaceMismatchError,
)
from malstein.space import Functional
from malstein.verification import normalized

from .helper import mixed_space


def random_signs_functional(p, seed=0):
    space = RademacherSpace(p).space()
    rng = np.random.default_rng(seed)
    return normalized(Functional(space, rng.normal(size=space.total_outcomes)))


def test_rademacher_space():
    rademacher = RademacherSpace([0.2, 0.5])

    assert rademacher.n_coordinates == 2
    assert np.allclose(rademacher.q, [0.8, 0.5])
    assert np.allclose(RademacherSpace.from_space(rademacher.space()).p, [0.2, 0.5])

    for bad in [[], [0.0], [1.0], [0.5, 1.2]]:
        with pytest.raises(OutOfRangeError):
            RademacherSpace(bad)

    with pytest.raises(NotTwoPointError):
        RademacherSpace.from_space(mixed_space())


@pytest.mark.parametrize("p", [0.2, 0.5, 0.9])
def test_normalized_coordinates(p):
    """
    Y_k is centered with unit variance, E|Y_k|^3 has a closed form and
    D_k F = Y_k D^_k F.
    """

    rademacher = RademacherSpace([p, 0.35, 0.6])
    space = rademacher.space()
    F = random_signs_functional([p, 0.35, 0.6], seed=1)

    for k in range(space.n_coordinates):
        Y = y_k(space, k)

        assert abs(Y.mean) < 1e-14
        assert abs(Y.second_moment - 1.0) < 1e-12
        assert abs((abs(Y) ** 3).mean - rademacher.third_absolute_moments()[k]) < 1e-12

        assert d_k(F, k).max_abs_difference(Y * hat_derivative(F, k)) < 1e-12


def test_hat_derivative_of_a_product():
    space = RademacherSpace([0.5, 0.5]).space()
    X0X1 = Functional.from_function(space, lambda x, y: x * y)
    X1 = Functional.from_function(space, lambda x, y: y + 0.0 * x)

    # sqrt(1/4) (x1 - (-x1))
    assert hat_derivative(X0X1, 0).max_abs_difference(X1) < 1e-15


@pytest.mark.parametrize("p", [0.2, 0.5, 0.9])
def test_totals_match_the_generic_bounds(p):
    probabilities = [p, 0.4, 0.7]
    F = random_signs_functional(probabilities, seed=2)

    rms_wasserstein, rms_kolmogorov, rco_wasserstein, rco_kolmogorov = rademacher_bounds(
        RademacherSpace(probabilities), F
    )
    ms_wasserstein, ms_kolmogorov = ms_bounds(F)
    co_wasserstein, co_kolmogorov = co_bounds(F)

    assert rms_wasserstein.bound_name == "rms_wasserstein"
    assert rco_kolmogorov.bound_name == "rco_kolmogorov"

    assert abs(rms_wasserstein.total - ms_wasserstein.total) < 1e-9
    assert abs(rco_wasserstein.total - co_wasserstein.total) < 1e-9
    assert abs(rms_kolmogorov.total - ms_kolmogorov.total) < 1e-9
    assert abs(rco_kolmogorov.total - co_kolmogorov.total) < 1e-9

    assert np.allclose(rms_wasserstein.metadata["success_probabilities"], probabilities)


def test_symmetric_signs_drop_the_asymmetry_term():
    F = random_signs_functional([0.5, 0.5, 0.5], seed=3)
    reports = rademacher_bounds(RademacherSpace([0.5] * 3), F)

    for report in reports[1::2]:
        assert report.term("second") == 0.0


def test_rademacher_errors():
    F = random_signs_functional([0.3, 0.5])

    with pytest.raises(SpaceMismatchError):
        rademacher_bounds(RademacherSpace([0.5, 0.5]), F)

    with pytest.raises(SpaceMismatchError):
        rademacher_bounds(RademacherSpace([0.3, 0.5, 0.5]), F)

    with pytest.raises(NotCenteredError):
        rademacher_bounds(RademacherSpace([0.3, 0.5]), F + 1.0)

    G = Functional(mixed_space(), np.zeros(12))
    with pytest.raises(NotTwoPointError):
        rademacher_bounds(RademacherSpace([0.5, 0.5, 0.5]), G)
