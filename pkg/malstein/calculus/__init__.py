"""
Hoeffding decomposition and Malliavin operators.
"""

from malstein.calculus.hoeffding import (
    HoeffdingDecomposition,
    decompose,
    component,
    chaos_projection,
    influence,
    influences,
    max_influence,
    is_degenerate_ustat,
)
from malstein.calculus.malliavin import (
    Process,
    d_k,
    gradient,
    divergence,
    ou_generator,
    ou_pseudo_inverse,
    gamma0,
    stroock_component,
    clark_ocone_integrand,
    resampled_increment_average,
    efron_stein_term,
    increment_moment,
)
