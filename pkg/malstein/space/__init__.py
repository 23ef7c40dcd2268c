"""
Finite product probability spaces, functionals on them and their laws.
"""

from malstein.space.product_space import (
    DiscreteDistribution,
    Outcome,
    ProductSpace,
    build_space,
)
from malstein.space.functional import (
    Functional,
    coordinate,
    constant,
    expectation,
    conditional_expectation,
    prefix_expectation,
    permute_functional,
    functional_from_document,
)
from malstein.space.law import LawOfF, law_of, atom_labels, default_merge_tol
from malstein.space.subsets import to_mask, members, popcount
