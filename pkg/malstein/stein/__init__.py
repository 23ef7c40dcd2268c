"""
Normal approximation tools: Stein solutions, exact distances to N(0, 1)
and chain-rule remainders.
"""

from malstein.stein.normal import (
    NormalEval,
    normal_cdf,
    normal_pdf,
    normal_quantile,
    normal_eval,
)
from malstein.stein.solutions import psi_z, psi_z_prime, psi_sup_norm_bound
from malstein.stein.distances import kolmogorov_distance, wasserstein_distance, distances
from malstein.stein.chain import chain_remainders, chain_rule_defect, s_k_integral_form
