"""
Seeded samplers for statistics too large to enumerate.

Random numbers are addressed by global counters (sample index times the
number of draws per sample, plus the draw's position), so a run is fully
determined by its seed whatever the block size or the number of worker
threads.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import List, Tuple, Union

import numpy as np
import networkx as nx

from malstein.applications.graph_coloring import (
    Graph,
    _check_colors,
    t2_moments,
)
from malstein.exceptions import EmptyGraphError, OutOfRangeError
from malstein.montecarlo.prng import uniform01
from malstein.space.law import LawOfF

DEFAULT_BLOCK_SIZE = 1024


class SampleSummary(object):
    """
    The sorted realizations of a statistic.
    """

    n_samples: int
    sorted_values: np.ndarray
    seed: int

    def __init__(self, sorted_values: np.ndarray, seed: int):
        sorted_values = np.array(sorted_values, dtype=np.float64).ravel()

        if np.any(np.diff(sorted_values) < 0.0):
            raise OutOfRangeError("Sample values must be sorted.")

        sorted_values.setflags(write=False)

        self.sorted_values = sorted_values
        self.n_samples = sorted_values.size
        self.seed = int(seed)

        return

    @property
    def mean(self) -> float:
        return float(np.mean(self.sorted_values))

    @property
    def variance(self) -> float:
        return float(np.var(self.sorted_values))

    def __repr__(self):
        return f"SampleSummary(n_samples={self.n_samples}, seed={self.seed})"


def _check_sample_count(n_samples: int):
    if n_samples < 1:
        raise OutOfRangeError(f"At least one sample is needed, got {n_samples}.")


def _blocks(n_samples: int, block_size: int) -> List[Tuple[int, int]]:
    if block_size < 1:
        raise OutOfRangeError(f"Block size must be positive, got {block_size}.")

    return [
        (start, min(start + block_size, n_samples))
        for start in range(0, n_samples, block_size)
    ]


def _run_blocks(draw, blocks, workers: int, progress: bool, description: str) -> np.ndarray:
    if workers < 1:
        raise OutOfRangeError(f"At least one worker is needed, got {workers}.")

    with ThreadPoolExecutor(max_workers=workers) as executor:
        results = executor.map(draw, blocks)

        if progress:
            from tqdm import tqdm

            results = tqdm(results, total=len(blocks), desc=description)

        values = np.concatenate(list(results))

    return np.sort(values, kind="stable")


def sample_mono_edges(
    g: Graph,
    c: int,
    n_samples: int,
    seed: int,
    workers: int = 1,
    block_size: int = DEFAULT_BLOCK_SIZE,
    progress: bool = False,
) -> SampleSummary:
    """
    Samples the normalized monochromatic edge count of ``g`` under
    independent uniform colorings with ``c`` colors.

    Parameters
    ----------

    g: Graph
        The graph; it needs at least one edge.

    c: int
        Number of colors, at least two.

    n_samples: int
        Number of colorings drawn.

    seed: int
        Seed of the generator.

    workers: int, optional
        Number of threads. The result does not depend on it.

    block_size: int, optional
        Number of colorings drawn at once.

    progress: bool, optional
        Show a progress bar over the blocks.
    """
    _check_colors(c)
    _check_sample_count(n_samples)
    if g.m == 0:
        raise EmptyGraphError("The normalized count is undefined without edges.")

    mean, variance = t2_moments(g.m, c)
    sigma = np.sqrt(variance)

    edges = np.array(g.edges, dtype=np.int64)
    vertices = np.arange(g.n, dtype=np.uint64)
    stride = np.uint64(g.n)

    def draw(block):
        start, stop = block
        samples = np.arange(start, stop, dtype=np.uint64)
        counters = samples[:, None] * stride + vertices[None, :]
        colors = np.minimum(
            np.floor(uniform01(seed, counters) * c).astype(np.int64), c - 1
        )
        count = np.sum(colors[:, edges[:, 0]] == colors[:, edges[:, 1]], axis=1)
        return (count - mean) / sigma

    values = _run_blocks(
        draw, _blocks(n_samples, block_size), workers, progress, "Sampling colorings"
    )

    return SampleSummary(values, seed)


def sample_law(
    law: LawOfF,
    n_samples: int,
    seed: int,
    workers: int = 1,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> SampleSummary:
    """
    Samples an exact law by inversion of its CDF.
    """
    _check_sample_count(n_samples)
    cdf = law.cdf
    last = len(law) - 1

    def draw(block):
        start, stop = block
        uniforms = uniform01(seed, np.arange(start, stop, dtype=np.uint64))
        indices = np.minimum(np.searchsorted(cdf, uniforms, side="right"), last)
        return law.atoms[indices]

    values = _run_blocks(
        draw, _blocks(n_samples, block_size), workers, False, "Sampling law"
    )

    return SampleSummary(values, seed)


def rate_probe(
    sizes: List[int],
    c: int,
    n_samples: int,
    seed: int,
    workers: int = 1,
    progress: bool = False,
) -> List[Tuple[int, float, float]]:
    """
    Empirical Kolmogorov distances of the monochromatic edge count on star
    graphs with the given numbers of leaves.

    Returns
    -------

    List[Tuple[int, float, float]]
        For every size, the size, the empirical distance and the 99%
        Dvoretzky-Kiefer-Wolfowitz radius.
    """
    from malstein.montecarlo.empirical import empirical_kolmogorov

    results = []
    for size in sizes:
        star = Graph.from_networkx(nx.star_graph(int(size)))
        summary = sample_mono_edges(
            star, c, n_samples, seed, workers=workers, progress=progress
        )
        estimate, radius = empirical_kolmogorov(summary)
        results.append((int(size), estimate, radius))

    return results
