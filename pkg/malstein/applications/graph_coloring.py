"""
Monochromatic edges under a uniform random coloring of a simple graph.

Vertex i receives color X_i, uniform on c colors and independent of the
other vertices, and T_2 counts the edges whose two endpoints share a color.
The normalized count

    F = (T_2 - m / c) / sigma,    sigma^2 = (m / c)(1 - 1 / c),

is a weighted degenerate U-statistic of order two with kernel
psi(x, y) = 1{x = y} - 1 / c.
"""

from math import comb
from typing import Iterable, List, Tuple, Union

import networkx as nx
import numpy as np

from malstein.bounds.report import BoundReport
from malstein.exceptions import (
    BadColorsError,
    DuplicateEdgeError,
    EmptyGraphError,
    OutOfRangeError,
    ParseError,
    SelfLoopError,
)
from malstein.regex import EDGE_LINE, SKIPPED_LINE, cached_regex
from malstein.space.functional import Functional
from malstein.space.product_space import DiscreteDistribution, ProductSpace

SQRT_TWO = np.sqrt(2.0)

BERRY_ESSEEN_SHAPE = "K * (c / m + 1 / sqrt(m) + N(C4, G) / (c * m^2))^(1/5)"


class Graph(object):
    """
    A simple undirected graph on the vertices 0, ..., n - 1.

    Parameters
    ----------

    n: int
        Number of vertices.

    edges: Iterable[Tuple[int, int]]
        Unordered pairs of distinct vertices, each listed once.
    """

    n: int
    # Sorted (u, v) pairs with u < v
    edges: List[Tuple[int, int]]

    def __init__(self, n: int, edges: Iterable[Tuple[int, int]]):
        n = int(n)
        if n < 0:
            raise ParseError(f"A graph cannot have {n} vertices.")

        seen = set()
        for line, (u, v) in enumerate(edges, start=1):
            u, v = int(u), int(v)

            if u == v:
                raise SelfLoopError(f"Edge {line} is a self-loop at vertex {u}.", line=line)

            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(
                    f"Edge {line} joins {u} and {v}, outside 0..{n - 1}.", line=line
                )

            pair = (min(u, v), max(u, v))
            if pair in seen:
                raise DuplicateEdgeError(f"Edge {pair} appears twice.", line=line)
            seen.add(pair)

        self.n = n
        self.edges = sorted(seen)

        return

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def adjacency(self) -> np.ndarray:
        """
        The symmetric 0/1 adjacency matrix.
        """
        matrix = np.zeros((self.n, self.n), dtype=np.int64)
        if self.edges:
            endpoints = np.array(self.edges, dtype=np.int64)
            matrix[endpoints[:, 0], endpoints[:, 1]] = 1
            matrix[endpoints[:, 1], endpoints[:, 0]] = 1

        return matrix

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> "Graph":
        """
        Converts a networkx graph, labelling its nodes 0, ..., n - 1 in
        node order.
        """
        labels = {node: index for index, node in enumerate(graph.nodes())}
        return cls(
            graph.number_of_nodes(), [(labels[u], labels[v]) for u, v in graph.edges()]
        )

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        return graph

    def relabeled(self, new_labels: np.ndarray) -> "Graph":
        """
        The isomorphic graph where vertex i becomes ``new_labels[i]``.
        """
        return Graph(self.n, [(new_labels[u], new_labels[v]) for u, v in self.edges])

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def parse_edge_list(text: str) -> Graph:
    """
    Parses a text edge list: one ``u v`` pair of 0-based vertex ids per
    line, with ``#`` starting a comment. The vertex count is one more than
    the largest id.

    Raises
    ------

    ParseError, SelfLoopError, DuplicateEdgeError
        With the 1-based number of the offending line.
    """
    edge_line = cached_regex(EDGE_LINE)
    skipped_line = cached_regex(SKIPPED_LINE)

    edges = []
    seen = set()
    largest = -1

    for line_number, line in enumerate(text.splitlines(), start=1):
        if skipped_line.match(line):
            continue

        match = edge_line.match(line)
        if match is None:
            raise ParseError(
                f"Line {line_number} is not a 'u v' edge: {line!r}.", line=line_number
            )

        u, v = int(match.group(1)), int(match.group(2))
        if u == v:
            raise SelfLoopError(
                f"Line {line_number} is a self-loop at vertex {u}.", line=line_number
            )

        pair = (min(u, v), max(u, v))
        if pair in seen:
            raise DuplicateEdgeError(
                f"Line {line_number} repeats the edge {pair}.", line=line_number
            )

        seen.add(pair)
        edges.append(pair)
        largest = max(largest, v, u)

    return Graph(largest + 1, edges)


def read_edge_list(path: str) -> Graph:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_edge_list(handle.read())


def degree_sort(g: Graph) -> Graph:
    """
    Relabels the vertices so that degrees are non-increasing, breaking ties
    by the original label.
    """
    order = np.argsort(-g.degrees, kind="stable")
    new_labels = np.empty(g.n, dtype=np.int64)
    new_labels[order] = np.arange(g.n)

    return g.relabeled(new_labels)


def count_c4(g: Graph) -> int:
    """
    N(C4, G), the number of (not necessarily induced) 4-cycles.

    Every 4-cycle is fixed by either of its two pairs of opposite vertices
    together with two of their common neighbours.
    """
    adjacency = g.adjacency
    common = adjacency @ adjacency
    upper = common[np.triu_indices(g.n, k=1)]

    return int(sum(comb(int(x), 2) for x in upper[upper > 1])) // 2


class GraphStats(object):
    """
    The subgraph statistics entering the monochromatic-edge bound.
    """

    n: int
    m: int
    c4_count: int
    # (sum_{i<j<k} a_ik a_jk, sum_{i<j<k} a_ij a_jk) in degree-sorted labels
    wedge_sums: Tuple[int, int]

    def __init__(self, n: int, m: int, c4_count: int, wedge_sums: Tuple[int, int]):
        self.n = n
        self.m = m
        self.c4_count = c4_count
        self.wedge_sums = wedge_sums

        return

    @property
    def wedge_bound(self) -> float:
        """
        sqrt(2) m^(3/2), which dominates both wedge sums.
        """
        return SQRT_TWO * self.m ** 1.5

    def to_dict(self):
        return {
            "n": self.n,
            "m": self.m,
            "c4_count": self.c4_count,
            "wedge_sums": list(self.wedge_sums),
            "wedge_bound": self.wedge_bound,
        }


def graph_stats(g: Graph) -> GraphStats:
    sorted_graph = degree_sort(g)
    adjacency = sorted_graph.adjacency

    lower = np.tril(adjacency, k=-1).sum(axis=1)
    upper = np.triu(adjacency, k=1).sum(axis=1)

    # Common lower neighbour k of i < j < k, and middle vertex j of i < j < k
    centered_at_top = int(np.sum(lower * (lower - 1) // 2))
    through_middle = int(np.sum(lower * upper))

    return GraphStats(
        n=g.n,
        m=g.m,
        c4_count=count_c4(g),
        wedge_sums=(centered_at_top, through_middle),
    )


def _check_colors(c: int):
    if int(c) != c or c < 2:
        raise BadColorsError(f"At least two colors are needed, got {c}.")


def t2_moments(m: int, c: int) -> Tuple[float, float]:
    """
    Mean and variance of the number of monochromatic edges in a graph with
    m edges colored uniformly with c colors.
    """
    _check_colors(c)
    if m < 1:
        raise EmptyGraphError("The graph has no edges.")

    return m / c, (m / c) * (1.0 - 1.0 / c)


def psi_kernel(x: np.ndarray, y: np.ndarray, c: int) -> np.ndarray:
    """
    psi(x, y) = 1{x = y} - 1 / c, degenerate for the uniform law on c
    colors.
    """
    return np.equal(x, y).astype(np.float64) - 1.0 / c


def rho_kernel(x: np.ndarray, y: np.ndarray, z: np.ndarray, c: int) -> np.ndarray:
    """
    The degenerate order-three kernel
    1{x = y = z} - (1{x = y} + 1{x = z} + 1{y = z}) / c + 2 / c^2.
    """
    xy = np.equal(x, y).astype(np.float64)
    xz = np.equal(x, z).astype(np.float64)
    yz = np.equal(y, z).astype(np.float64)

    return xy * xz - (xy + xz + yz) / c + 2.0 / c ** 2


def coloring_space(n: int, c: int, max_outcomes: Union[int, None] = None) -> ProductSpace:
    """
    n independent colors, uniform on 0, ..., c - 1.
    """
    _check_colors(c)
    return ProductSpace(
        [DiscreteDistribution.uniform(np.arange(c)) for _ in range(n)],
        max_outcomes=max_outcomes,
    )


def mono_edge_count(
    g: Graph, c: int, max_outcomes: Union[int, None] = None
) -> Tuple[ProductSpace, Functional]:
    """
    The coloring space of ``g`` and the raw count T_2 on it.
    """
    if g.n == 0:
        raise EmptyGraphError("The graph has no vertices.")

    space = coloring_space(g.n, c, max_outcomes)
    grids = space.value_grids()

    count = np.zeros(space.shape)
    for u, v in g.edges:
        count = count + (grids[u] == grids[v])

    return space, Functional.from_tensor(space, count)


def mono_edge_functional(
    g: Graph, c: int, max_outcomes: Union[int, None] = None
) -> Tuple[ProductSpace, Functional]:
    """
    The normalized monochromatic edge count on the coloring space.

    Raises
    ------

    EmptyGraphError
        If the graph has no edges, so that the count has no variance.
    """
    if g.m == 0:
        raise EmptyGraphError("The normalized count is undefined without edges.")

    space, count = mono_edge_count(g, c, max_outcomes)
    mean, variance = t2_moments(g.m, c)

    return space, (count - mean) / np.sqrt(variance)


def mono_bound(stats: GraphStats, c: int) -> BoundReport:
    """
    The explicit Wasserstein bound for the normalized monochromatic edge
    count, in terms of m, c and the number of 4-cycles only.
    """
    _check_colors(c)
    m = stats.m
    if m < 1:
        raise EmptyGraphError("The graph has no edges.")

    root_m = np.sqrt(m)

    variance_bound = (
        3.0 * (c - 2) / m
        + 10.0 * SQRT_TWO / root_m
        + 15.0 * SQRT_TWO / (root_m * (c - 1))
        + 30.0 * stats.c4_count / (m ** 2 * (c - 1))
    )
    second_radicand = (
        (c - 1) / m + 5.0 * SQRT_TWO / (root_m * (c - 1)) + 7.0 * SQRT_TWO / root_m
    )

    return BoundReport(
        "mono_wasserstein",
        terms=[
            ("first", np.sqrt(2.0 / np.pi) * np.sqrt(variance_bound)),
            ("second", SQRT_TWO * np.sqrt(second_radicand)),
        ],
        metadata={
            "m": m,
            "colors": int(c),
            "c4_count": stats.c4_count,
            "berry_esseen_shape": BERRY_ESSEEN_SHAPE,
        },
        sub_terms={
            "first_radicand": variance_bound,
            "second_radicand": second_radicand,
        },
    )


def fang_bound(m: int, c: int) -> float:
    """
    Fang's Wasserstein bound, 3 sqrt(c / m) + 10 sqrt(2) / sqrt(c)
    + 2^(7/4) / (sqrt(pi) m^(1/4)), for comparison with :func:`mono_bound`.
    """
    _check_colors(c)
    if m < 1:
        raise OutOfRangeError(f"Fang's bound needs at least one edge, got m = {m}.")

    return float(
        3.0 * np.sqrt(c / m)
        + 10.0 * SQRT_TWO / np.sqrt(c)
        + 2.0 ** 1.75 / (np.sqrt(np.pi) * m ** 0.25)
    )


def mono_clark_ocone_variance(g: Graph, c: int) -> float:
    """
    Var(sum_k D_k E[F | F_k] D_k F) for the normalized monochromatic edge
    count, with the prefix filtration in vertex order.

    The sum has explicit Hoeffding components: order two ones on
    psi(X_u, X_v) and order three ones on rho(X_x, X_y, X_z). Their
    coefficients are matrix products of the adjacency matrix, so the
    variance is obtained in O(n^3) without enumerating colorings.
    """
    _check_colors(c)
    if g.m == 0:
        raise EmptyGraphError("The normalized count is undefined without edges.")

    n = g.n
    adjacency = g.adjacency.astype(np.float64)
    _, sigma_squared = t2_moments(g.m, c)

    psi_variance = (1.0 / c) * (1.0 - 1.0 / c)
    rho_variance = 2.0 / c ** 4 - 3.0 / c ** 3 + 1.0 / c ** 2

    labels = np.arange(n)
    # before[u, k] = 1{u < k}
    before = (labels[:, None] < labels[None, :]).astype(np.float64)
    earlier = adjacency * before

    pair_coefficients = (1.0 - 2.0 / c) * adjacency + (
        earlier @ adjacency + adjacency @ earlier.T
    ) / c
    upper = np.triu_indices(n, k=1)
    pair_part = psi_variance * np.sum(pair_coefficients[upper] ** 2)

    # centered[i, j, k] = a_ik a_jk (1{i < k} + 1{j < k}), k the shared vertex
    centered = np.einsum("ik,jk->ijk", adjacency, adjacency) * (
        before[:, None, :] + before[None, :, :]
    )
    triple_coefficients = (
        np.einsum("yzx->xyz", centered)
        + np.einsum("xzy->xyz", centered)
        + centered
    )
    increasing = (labels[:, None, None] < labels[None, :, None]) & (
        labels[None, :, None] < labels[None, None, :]
    )
    triple_part = rho_variance * np.sum(triple_coefficients[increasing] ** 2)

    return float((pair_part + triple_part) / sigma_squared ** 2)


def graph_corpus(seed: int = 0) -> List[Graph]:
    """
    Twenty test graphs: stars, paths, cycles, complete graphs and
    Erdos-Renyi graphs with up to 50 vertices, the latter seeded from
    ``seed``.
    """
    graphs = []
    graphs += [nx.star_graph(leaves) for leaves in (3, 8, 16)]
    graphs += [nx.path_graph(n) for n in (4, 8, 16)]
    graphs += [nx.cycle_graph(n) for n in (4, 8, 12, 16)]
    graphs += [nx.complete_graph(n) for n in (3, 4, 5, 8)]
    graphs += [
        nx.gnp_random_graph(n, p, seed=seed + index)
        for index, (n, p) in enumerate(
            [(10, 0.3), (20, 0.2), (30, 0.15), (40, 0.1), (50, 0.08), (50, 0.2)]
        )
    ]

    return [Graph.from_networkx(graph) for graph in graphs]
