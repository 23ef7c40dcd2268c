"""
Tests random sums of centered summands and their explicit Wasserstein bound.
"""

import json

import numpy as np
import pytest
from scipy import stats

from malstein.applications import (
    RandomSumSpec,
    load_random_sum_spec,
    random_sum_functional,
    rs_bound,
    t_variance,
)
from malstein.bounds import co_bounds
from malstein.calculus.malliavin import d_k
from malstein.exceptions import DegenerateNError, RandomSumSpecError, SpaceTooLargeError
from malstein.space import DiscreteDistribution, Functional, law_of, prefix_expectation
from malstein.stein import wasserstein_distance

COIN = DiscreteDistribution.rademacher(0.5)
# Centered and asymmetric
SKEWED = DiscreteDistribution([-2.0, 1.0], [1.0 / 3.0, 2.0 / 3.0])


def deterministic(n: int) -> DiscreteDistribution:
    return DiscreteDistribution([n], [1.0])


@pytest.mark.parametrize("n", [4, 9, 16])
def test_deterministic_index(n):
    spec = RandomSumSpec(deterministic(n), COIN)
    report = rs_bound(spec)

    assert abs(report.total - 1.0 / np.sqrt(n)) < 1e-12
    assert report.term("index_dispersion") == 0.0

    _, F = random_sum_functional(spec)
    assert report.total >= wasserstein_distance(law_of(F)) - 1e-9


def test_uniform_index():
    spec = RandomSumSpec(DiscreteDistribution.uniform(np.arange(1, 11)), COIN)
    report = rs_bound(spec)

    assert abs(report.total - (1.0 / np.sqrt(5.5) + np.sqrt(8.25) / 5.5)) < 1e-12
    assert abs(report.total - 0.9486) < 1e-4
    assert report.metadata["n_max"] == 10

    _, F = random_sum_functional(spec)
    assert report.total >= wasserstein_distance(law_of(F)) - 1e-9


def test_random_sum_functional():
    spec = RandomSumSpec(DiscreteDistribution.uniform([1, 2]), COIN)
    space, F = random_sum_functional(spec)

    assert space.shape == (2, 2, 2)
    assert abs(F.mean) < 1e-15
    # Var(S) = E[N] E[X^2] = 1.5
    assert abs(F.second_moment - 1.0) < 1e-12
    S = F * np.sqrt(1.5)
    assert abs(S.variance - 1.5) < 1e-12


def test_derivative_structure():
    """
    D_0 F has no prefix component and D_k F = 1{N >= k} X_k / sigma.
    """

    spec = RandomSumSpec(DiscreteDistribution.uniform([0, 1, 2, 3]), SKEWED)
    space, F = random_sum_functional(spec)
    grids = space.value_grids()
    sigma = np.sqrt(spec.index_mean * spec.second_moment)

    assert prefix_expectation(d_k(F, 0), 0).scale < 1e-12

    for k in range(1, space.n_coordinates):
        expected = Functional.from_tensor(space, (grids[0] >= k) * grids[k] / sigma)
        assert d_k(F, k).max_abs_difference(expected) < 1e-12


def test_t_variance():
    spec = RandomSumSpec(DiscreteDistribution([0, 1, 3], [0.2, 0.5, 0.3]), SKEWED)
    space, _ = random_sum_functional(spec)
    grids = space.value_grids()

    T = Functional.from_tensor(
        space, sum((grids[0] >= k) * grids[k] ** 2 for k in range(1, space.n_coordinates))
    )
    assert abs(T.variance - t_variance(spec)) < 1e-10
    assert abs(rs_bound(spec).sub_terms["t_variance"] - t_variance(spec)) < 1e-15


def test_clark_ocone_first_term():
    """
    The variance estimate of the Clark-Ocone first term only involves
    Var(T), where T = sum_k 1{N >= k} X_k^2.
    """

    spec = RandomSumSpec(DiscreteDistribution([1, 2, 3], [0.5, 0.25, 0.25]), SKEWED)
    _, F = random_sum_functional(spec)
    sigma_squared = spec.index_mean * spec.second_moment

    expected = np.sqrt(2.0 / np.pi) * np.sqrt(t_variance(spec)) / sigma_squared
    wasserstein, _ = co_bounds(F)
    assert abs(wasserstein.alternatives["first_by_variance"] - expected) < 1e-10


def test_spec_errors():
    with pytest.raises(RandomSumSpecError):
        RandomSumSpec(DiscreteDistribution([-1, 2], [0.5, 0.5]), COIN)

    with pytest.raises(RandomSumSpecError):
        RandomSumSpec(DiscreteDistribution([1, 2.5], [0.5, 0.5]), COIN)

    with pytest.raises(RandomSumSpecError):
        RandomSumSpec(deterministic(2), DiscreteDistribution([0.0, 1.0], [0.5, 0.5]))

    with pytest.raises(RandomSumSpecError):
        RandomSumSpec(deterministic(2), DiscreteDistribution([0.0], [1.0]))

    with pytest.raises(RandomSumSpecError):
        RandomSumSpec.from_document({"N": {"values": [1], "probs": [1.0]}})

    with pytest.raises(RandomSumSpecError):
        RandomSumSpec.from_document({"N": {"values": [1]}, "X": COIN.to_dict()})

    degenerate = RandomSumSpec(deterministic(0), COIN)
    with pytest.raises(DegenerateNError):
        rs_bound(degenerate)

    with pytest.raises(DegenerateNError):
        random_sum_functional(degenerate)

    with pytest.raises(SpaceTooLargeError):
        random_sum_functional(RandomSumSpec(deterministic(30), COIN))


def test_truncated_index():
    with pytest.warns(RuntimeWarning):
        spec = RandomSumSpec.from_frozen(stats.poisson(3.0), COIN, n_max=6)

    assert 0.0 < spec.truncation_mass < 0.1
    assert spec.n_max == 6
    assert abs(spec.law_N.probs.sum() - 1.0) < 1e-12
    assert rs_bound(spec).metadata["truncation_mass"] == spec.truncation_mass


def test_load_random_sum_spec(tmp_path):
    path = tmp_path / "spec.json"
    path.write_text(
        json.dumps(
            {"N": {"values": [1, 2], "probs": [0.5, 0.5]}, "X": {"values": [-1, 1], "probs": [0.5, 0.5]}}
        )
    )

    spec = load_random_sum_spec(str(path))
    assert spec.to_dict()["N"]["values"] == [1.0, 2.0]
    assert abs(spec.index_mean - 1.5) < 1e-15

    broken = tmp_path / "broken.yml"
    broken.write_text("N: [unclosed")
    with pytest.raises(RandomSumSpecError):
        load_random_sum_spec(str(broken))
