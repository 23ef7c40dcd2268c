"""
Tests the monochromatic edge statistic: edge lists, subgraph counts, the
kernels and the explicit bounds.
"""

from itertools import combinations, permutations

import networkx as nx
import numpy as np
import pytest

from malstein.applications import (
    Graph,
    coloring_space,
    count_c4,
    degree_sort,
    fang_bound,
    graph_corpus,
    graph_stats,
    mono_bound,
    mono_clark_ocone_variance,
    mono_edge_count,
    mono_edge_functional,
    parse_edge_list,
    psi_kernel,
    rho_kernel,
    t2_moments,
)
from malstein.bounds import co_bounds
from malstein.calculus.hoeffding import decompose, is_degenerate_ustat
from malstein.exceptions import (
    BadColorsError,
    DuplicateEdgeError,
    EmptyGraphError,
    OutOfRangeError,
    ParseError,
    SelfLoopError,
)
from malstein.space import Functional, law_of
from malstein.stein import wasserstein_distance

K3 = "0 1\n1 2\n0 2"


def small_graphs():
    return [
        ("K3", parse_edge_list(K3), 2),
        ("P4", Graph.from_networkx(nx.path_graph(4)), 3),
        ("C4", Graph.from_networkx(nx.cycle_graph(4)), 2),
        ("K4", Graph.from_networkx(nx.complete_graph(4)), 2),
        ("star", Graph.from_networkx(nx.star_graph(3)), 3),
    ]


def test_parse_edge_list():
    graph = parse_edge_list(K3)

    assert graph.n == 3
    assert graph.m == 3
    assert graph.edges == [(0, 1), (0, 2), (1, 2)]

    commented = parse_edge_list("# a triangle\n\n0 1  # first\n1 2\n   \n2 0\n")
    assert commented.edges == graph.edges


@pytest.mark.parametrize(
    "text, error, line",
    [
        ("0 0", SelfLoopError, 1),
        ("0 1\n# comment\n1 0", DuplicateEdgeError, 3),
        ("0 1\n1 x", ParseError, 2),
        ("0 1 2", ParseError, 1),
        ("-1 2", ParseError, 1),
    ],
)
def test_parse_errors_carry_line_numbers(text, error, line):
    with pytest.raises(error) as caught:
        parse_edge_list(text)

    assert caught.value.line == line


def test_graph_validation():
    with pytest.raises(SelfLoopError):
        Graph(3, [(1, 1)])

    with pytest.raises(ParseError):
        Graph(3, [(0, 3)])

    with pytest.raises(DuplicateEdgeError):
        Graph(3, [(0, 1), (1, 0)])


def test_networkx_round_trip():
    for graph in graph_corpus():
        assert Graph.from_networkx(graph.to_networkx()).edges == graph.edges


def test_degree_sort():
    star = Graph(4, [(3, 0), (3, 1), (3, 2)])
    assert degree_sort(star).degrees.tolist() == [3, 1, 1, 1]

    triangle = parse_edge_list(K3)
    assert degree_sort(triangle).edges == triangle.edges

    # degrees (1, 2, 2, 1), ties kept in label order
    path = Graph.from_networkx(nx.path_graph(4))
    assert degree_sort(path).edges == [(0, 1), (0, 2), (1, 3)]

    for graph in graph_corpus():
        assert np.all(np.diff(degree_sort(graph).degrees) <= 0)


def _tuple_count_c4(graph):
    """
    One eighth of the number of distinct 4-tuples closing a cycle.
    """
    a = graph.adjacency
    closed = sum(
        a[i, j] * a[j, k] * a[k, l] * a[l, i]
        for i, j, k, l in permutations(range(graph.n), 4)
    )
    return closed // 8


def test_count_c4():
    assert count_c4(Graph.from_networkx(nx.cycle_graph(4))) == 1
    assert count_c4(Graph.from_networkx(nx.complete_graph(4))) == 3
    assert count_c4(Graph.from_networkx(nx.balanced_tree(2, 3))) == 0
    assert count_c4(Graph(5, [])) == 0

    graphs = [graph for graph in graph_corpus() if graph.n <= 10]
    graphs.append(Graph.from_networkx(nx.complete_bipartite_graph(3, 3)))
    for graph in graphs:
        assert count_c4(graph) == _tuple_count_c4(graph)


def test_wedge_sums():
    for graph in graph_corpus():
        stats = graph_stats(graph)

        assert stats.m == graph.m
        assert max(stats.wedge_sums) <= stats.wedge_bound + 1e-9

    # by brute force on a small graph
    graph = degree_sort(Graph.from_networkx(nx.gnp_random_graph(9, 0.4, seed=5)))
    a = graph.adjacency
    triples = list(combinations(range(graph.n), 3))
    expected = (
        sum(a[i, k] * a[j, k] for i, j, k in triples),
        sum(a[i, j] * a[j, k] for i, j, k in triples),
    )
    assert graph_stats(graph).wedge_sums == expected


def test_t2_moments():
    assert t2_moments(3, 2) == (1.5, 0.75)
    assert t2_moments(1, 2) == (0.5, 0.25)

    with pytest.raises(BadColorsError):
        t2_moments(3, 1)

    with pytest.raises(BadColorsError):
        t2_moments(3, 2.5)

    with pytest.raises(EmptyGraphError):
        t2_moments(0, 2)

    with pytest.raises(BadColorsError):
        coloring_space(2, 1)


def test_triangle_with_two_colors():
    graph = parse_edge_list(K3)

    _, count = mono_edge_count(graph, 2)
    law = law_of(count)
    assert law.atoms.tolist() == [1.0, 3.0]
    assert np.allclose(law.probs, [0.75, 0.25])
    assert abs(law.mean - 1.5) < 1e-15
    assert abs(law.variance - 0.75) < 1e-15

    space, F = mono_edge_functional(graph, 2)
    law = law_of(F)
    assert space.total_outcomes == 8
    assert np.allclose(law.atoms, [-0.5 / np.sqrt(0.75), 1.5 / np.sqrt(0.75)])
    assert np.allclose(law.probs, [0.75, 0.25])


def test_mono_functional_is_normalized_and_degenerate():
    for _, graph, c in small_graphs():
        _, F = mono_edge_functional(graph, c)

        assert abs(F.mean) < 1e-12
        assert abs(F.second_moment - 1.0) < 1e-12
        assert is_degenerate_ustat(F, 2)

    with pytest.raises(EmptyGraphError):
        mono_edge_functional(Graph(3, []), 2)

    with pytest.raises(EmptyGraphError):
        mono_edge_count(Graph(0, []), 2)


@pytest.mark.parametrize("c", [2, 3, 5])
def test_kernels(c):
    """
    Both kernels average to zero in their last argument and have the
    closed-form variances.
    """

    colors = np.arange(c)
    x, y, z = np.meshgrid(colors, colors, colors, indexing="ij")

    assert np.max(np.abs(psi_kernel(x[:, :, 0], y[:, :, 0], c).sum(axis=1))) < 1e-14
    assert np.max(np.abs(rho_kernel(x, y, z, c).sum(axis=2))) < 1e-14

    psi_variance = np.mean(psi_kernel(x[:, :, 0], y[:, :, 0], c) ** 2)
    rho_variance = np.mean(rho_kernel(x, y, z, c) ** 2)
    assert abs(psi_variance - (1.0 / c) * (1.0 - 1.0 / c)) < 1e-12
    assert abs(rho_variance - (2.0 / c ** 4 - 3.0 / c ** 3 + 1.0 / c ** 2)) < 1e-12


@pytest.mark.parametrize("c", [2, 3, 4])
def test_product_of_kernels_decomposition(c):
    """
    psi(X_0, X_1) psi(X_0, X_2) = psi(X_1, X_2) / c + rho(X_0, X_1, X_2).
    """

    space = coloring_space(3, c)
    W = Functional.from_function(space, lambda x, y, z: psi_kernel(x, y, c) * psi_kernel(x, z, c))
    psi = Functional.from_function(space, lambda x, y, z: psi_kernel(y, z, c) + 0.0 * x)
    rho = Functional.from_function(space, lambda x, y, z: rho_kernel(x, y, z, c))

    decomposition = decompose(W)

    assert sorted(mask for mask, part in decomposition.components.items() if part.scale > 1e-12) == [
        0b110,
        0b111,
    ]
    assert decomposition.component(0b110).max_abs_difference(psi / c) < 1e-12
    assert decomposition.component(0b111).max_abs_difference(rho) < 1e-12


def test_mono_bound():
    stats = graph_stats(parse_edge_list(K3))
    report = mono_bound(stats, 2)

    first = np.sqrt(2.0 / np.pi) * np.sqrt(10.0 * np.sqrt(2.0 / 3.0) + 15.0 * np.sqrt(2.0 / 3.0))
    second = np.sqrt(2.0) * np.sqrt(1.0 / 3.0 + 12.0 * np.sqrt(2.0 / 3.0))
    assert abs(report.total - (first + second)) < 1e-12
    assert abs(report.total - 8.106) < 1e-3
    assert report.vacuous
    assert report.metadata["c4_count"] == 0

    with pytest.raises(BadColorsError):
        mono_bound(stats, 1)


def test_mono_bound_dominates_exact_distance():
    for _, graph, c in small_graphs():
        _, F = mono_edge_functional(graph, c)
        assert mono_bound(graph_stats(graph), c).total >= wasserstein_distance(law_of(F)) - 1e-9


def test_fang_bound():
    expected = 3.0 * 0.2 + 10.0 * np.sqrt(2.0) / 2.0 + 2.0 ** 1.75 / (np.sqrt(np.pi) * 100.0 ** 0.25)
    assert abs(fang_bound(100, 4) - expected) < 1e-12
    assert abs(fang_bound(100, 4) - 8.2709) < 1e-3

    assert all(np.isfinite(fang_bound(m, c)) for m in (1, 10, 1000) for c in (2, 7, 50))

    with pytest.raises(OutOfRangeError):
        fang_bound(0, 3)

    for c in (0, 1, 2.5):
        with pytest.raises(BadColorsError):
            fang_bound(100, c)


@pytest.mark.parametrize("index", range(5))
def test_clark_ocone_variance(index):
    """
    The closed form matches the variance of the Clark-Ocone integrand
    product computed on the full coloring space.
    """

    _, graph, c = small_graphs()[index]
    _, F = mono_edge_functional(graph, c)

    exact = co_bounds(F)[0].sub_terms["integrand_product_variance"]
    assert abs(mono_clark_ocone_variance(graph, c) - exact) < 1e-9


def test_clark_ocone_variance_of_a_single_edge():
    """
    With three colors psi^2 = const + psi / 3, so the variance is 1 / 2.
    """

    graph = Graph(2, [(0, 1)])

    assert abs(mono_clark_ocone_variance(graph, 3) - 0.5) < 1e-12
    assert abs(mono_clark_ocone_variance(graph, 2)) < 1e-12


def test_cycles_approach_normality():
    """
    On two-colored cycles the exact Wasserstein distance does not grow with
    the length and stays below the explicit bound.
    """

    previous = np.inf
    for n in (8, 12, 16, 20):
        graph = Graph.from_networkx(nx.cycle_graph(n))
        _, F = mono_edge_functional(graph, 2)
        distance = wasserstein_distance(law_of(F))

        assert distance <= previous + 1e-12
        assert mono_bound(graph_stats(graph), 2).total >= distance
        previous = distance
