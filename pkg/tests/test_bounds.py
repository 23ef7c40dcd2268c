"""
Tests the generic Malliavin-Stein, Clark-Ocone and carre-du-champ bounds.
"""

import numpy as np
import pytest

from malstein import analyze
from malstein.bounds import (
    BoundReport,
    all_generic_bounds,
    cdc_bounds,
    co_bounds,
    ms_bounds,
)
from malstein.exceptions import NotCenteredError
from malstein.space import Functional, constant, law_of, permute_functional
from malstein.stein import distances

from .helper import fair_coins, mixed_space, normalized_sum, seeded_normalized


def single_coin():
    space = fair_coins(1)
    return Functional(space, [-1.0, 1.0])


def test_single_coin():
    """
    For one fair coin L^-1 F = -F, so the first terms vanish and the second
    ones are E|X|^3 = 1 and (1/2) E|X' - X|^3 = 2.
    """

    F = single_coin()
    ms_wasserstein, ms_kolmogorov = ms_bounds(F)
    co_wasserstein, co_kolmogorov = co_bounds(F)
    cdc_wasserstein, cdc_kolmogorov = cdc_bounds(F)

    assert abs(ms_wasserstein.term("first")) < 1e-15
    assert abs(ms_wasserstein.term("second") - 1.0) < 1e-15
    assert abs(ms_wasserstein.total - 1.0) < 1e-15
    assert not ms_wasserstein.vacuous

    assert abs(co_wasserstein.total - ms_wasserstein.total) < 1e-15
    assert abs(co_kolmogorov.total - ms_kolmogorov.total) < 1e-15

    assert abs(cdc_wasserstein.term("first")) < 1e-15
    assert abs(cdc_wasserstein.term("second") - 2.0) < 1e-15
    assert cdc_wasserstein.metadata["vacuous"]

    assert cdc_kolmogorov.metadata["merge_tol"] > 0.0


def test_centering_is_required():
    F = single_coin()

    for bounds in (ms_bounds, co_bounds, cdc_bounds):
        with pytest.raises(NotCenteredError):
            bounds(F + 1.0)


def test_degenerate_normalization_is_flagged():
    wasserstein, _ = ms_bounds(constant(fair_coins(2), 0.0))

    assert wasserstein.metadata["degenerate_normalization"]
    assert abs(wasserstein.term("first") - np.sqrt(2.0 / np.pi)) < 1e-15


def test_report_layout():
    report = ms_bounds(single_coin())[0]
    document = report.to_dict()

    assert document["bound_name"] == "ms_wasserstein"
    assert [term["label"] for term in document["terms"]] == ["first", "second"]
    assert document["total"] == report.total
    assert "inverse_method" in document["metadata"]

    with pytest.raises(KeyError):
        report.term("fourth")

    with pytest.raises(ValueError):
        BoundReport("broken", terms=[("first", -1.0)])

    with pytest.raises(ValueError):
        BoundReport("broken", terms=[("first", np.inf)])


@pytest.mark.parametrize("seed", range(200))
def test_bounds_dominate_exact_distances(seed):
    F = seeded_normalized(seed)
    kolmogorov, wasserstein = distances(law_of(F))

    reports = all_generic_bounds(F)
    assert [report.bound_name for report in reports] == [
        "ms_wasserstein",
        "ms_kolmogorov",
        "co_wasserstein",
        "co_kolmogorov",
        "cdc_wasserstein",
        "cdc_kolmogorov",
    ]

    for report in reports:
        if report.bound_name.endswith("wasserstein"):
            assert report.total >= wasserstein - 1e-9
        else:
            assert report.total >= kolmogorov - 1e-9

        for value in report.alternatives.values():
            assert np.isfinite(value) and value >= 0.0


@pytest.mark.parametrize("seed", range(4))
def test_first_term_consistency(seed):
    """
    The integrands all reproduce E[F^2] in expectation, and Jensen bounds
    the first terms by the variance alternatives.
    """

    F = seeded_normalized(seed)
    ms_wasserstein, _, co_wasserstein, _, cdc_wasserstein, _ = all_generic_bounds(F)

    assert abs(ms_wasserstein.sub_terms["integrand_product_mean"] - 1.0) < 1e-9
    assert abs(co_wasserstein.sub_terms["integrand_product_mean"] - 1.0) < 1e-9
    assert abs(cdc_wasserstein.sub_terms["carre_du_champ_mean"] - 1.0) < 1e-9

    for report in (ms_wasserstein, co_wasserstein, cdc_wasserstein):
        assert report.term("first") <= report.alternatives["first_by_variance"] + 1e-9


@pytest.mark.parametrize("seed", range(3))
def test_fourth_moment_variant(seed):
    """
    The fourth-moment variant of the second carre-du-champ term equals its
    Cauchy-Schwarz form, which dominates the exact term.
    """

    F = seeded_normalized(seed)
    wasserstein, _ = cdc_bounds(F)
    sub_terms = wasserstein.sub_terms

    assert abs(
        sub_terms["increment_fourth_moments"] - 4.0 * sub_terms["fourth_moment_mixture"]
    ) < 1e-8

    cauchy_schwarz = wasserstein.alternatives["second_by_cauchy_schwarz"]
    assert wasserstein.term("second") <= cauchy_schwarz + 1e-9
    assert abs(wasserstein.alternatives["second_by_fourth_moment"] - cauchy_schwarz) < 1e-8


@pytest.mark.parametrize("seed", range(3))
def test_symmetric_bounds_ignore_coordinate_order(seed):
    F = seeded_normalized(seed)
    order = list(range(F.space.n_coordinates))[::-1]
    permuted = permute_functional(F, order)

    for bounds in (ms_bounds, cdc_bounds):
        for original, relabeled in zip(bounds(F), bounds(permuted)):
            assert abs(original.total - relabeled.total) < 1e-9


def test_sums_of_independent_coordinates():
    """
    For a normalized sum the Clark-Ocone and Malliavin-Stein integrands
    coincide, and the carre-du-champ first term is half of theirs.
    """

    F = normalized_sum(mixed_space())
    ms_wasserstein, ms_kolmogorov, co_wasserstein, co_kolmogorov, cdc_wasserstein, _ = (
        all_generic_bounds(F)
    )

    assert abs(ms_wasserstein.total - co_wasserstein.total) < 1e-12
    assert abs(ms_kolmogorov.total - co_kolmogorov.total) < 1e-12
    assert abs(0.5 * ms_wasserstein.term("first") - cdc_wasserstein.term("first")) < 1e-12


def test_analyze():
    F = normalized_sum(fair_coins(3))
    result = analyze(F)

    assert len(result["bounds"]) == 6
    assert 0.0 < result["kolmogorov"] < 0.5
    assert all(report.total >= result["wasserstein"] - 1e-9 for report in result["bounds"][::2])
