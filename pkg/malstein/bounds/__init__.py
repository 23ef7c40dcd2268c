"""
Normal-approximation bounds evaluated exactly on finite product spaces.
"""

from malstein.bounds.report import BoundReport, functional_metadata
from malstein.bounds.generic import ms_bounds, co_bounds, cdc_bounds, all_generic_bounds
from malstein.bounds.rademacher import (
    RademacherSpace,
    hat_derivative,
    y_k,
    rademacher_bounds,
)
from malstein.bounds.dejong import dejong_bounds
