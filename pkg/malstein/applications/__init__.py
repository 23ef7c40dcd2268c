"""
Concrete statistics with explicit normal-approximation bounds: monochromatic
edges in randomly colored graphs and random sums.
"""

from malstein.applications.graph_coloring import (
    Graph,
    GraphStats,
    parse_edge_list,
    read_edge_list,
    degree_sort,
    count_c4,
    graph_stats,
    t2_moments,
    psi_kernel,
    rho_kernel,
    coloring_space,
    mono_edge_count,
    mono_edge_functional,
    mono_bound,
    fang_bound,
    mono_clark_ocone_variance,
    graph_corpus,
)
from malstein.applications.random_sums import (
    RandomSumSpec,
    load_random_sum_spec,
    random_sum_functional,
    rs_bound,
    t_variance,
)
