"""
The malstein module: exact Malliavin-Stein calculus on finite product
spaces.

More information is available in the documentation.
"""

from malstein.space import (
    DiscreteDistribution,
    ProductSpace,
    Functional,
    LawOfF,
    build_space,
    law_of,
)
from malstein.bounds import BoundReport, all_generic_bounds
from malstein.stein import distances
from malstein.exceptions import MalsteinError
from malstein.__version__ import __version__

from typing import Dict, Union


def analyze(F: Functional, merge_tol: Union[float, None] = None) -> Dict:
    """
    Exact distances of F to the standard normal law, together with the six
    generic bounds.

    Parameters
    ----------

    F: Functional
        The statistic. The bounds are meaningful for centered F with
        E[F^2] = 1.

    merge_tol: Union[float, None], optional
        Tolerance under which values of F are merged into one atom of its
        law. Defaults to 1e-12 (1 + max |F|).


    Returns
    -------

    Dict
        ``kolmogorov`` and ``wasserstein`` distances, and the ``bounds`` as
        :class:`BoundReport` objects in the order ms, co, cdc.
    """

    kolmogorov, wasserstein = distances(law_of(F, merge_tol=merge_tol))

    return {
        "kolmogorov": kolmogorov,
        "wasserstein": wasserstein,
        "bounds": all_generic_bounds(F),
    }
