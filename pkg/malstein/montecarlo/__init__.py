"""
Seeded Monte Carlo estimates for instances too large to enumerate.
"""

from malstein.montecarlo.prng import splitmix64, uniform01
from malstein.montecarlo.sampling import (
    SampleSummary,
    sample_mono_edges,
    sample_law,
    rate_probe,
)
from malstein.montecarlo.empirical import empirical_kolmogorov, dkw_radius
