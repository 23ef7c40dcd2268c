"""
Itemized results of evaluated normal-approximation bounds.
"""

from typing import Dict, List, Tuple, Union

import numpy as np

from malstein.space.functional import Functional

# Bounds above this value say nothing about either distance.
VACUOUS_THRESHOLD = 1.0

DEGENERATE_SECOND_MOMENT = 1e-18


class BoundReport(object):
    """
    One evaluated bound.

    Parameters
    ----------

    bound_name: str
        Identifier of the bound, e.g. ``"ms_wasserstein"``.

    terms: List[Tuple[str, float]]
        The summands of the bound, constants included, in the order they
        appear in the bound. The total is their sum.

    metadata: Dict, optional
        Facts about the evaluated functional and the evaluation.

    sub_terms: Dict[str, float], optional
        Raw quantities entering the terms, before constants are applied.

    alternatives: Dict[str, float], optional
        Valid alternative estimates of individual terms that are reported
        next to the bound but not summed into it.
    """

    bound_name: str
    terms: List[Tuple[str, float]]
    metadata: Dict[str, Union[int, float, str, bool]]
    sub_terms: Dict[str, float]
    alternatives: Dict[str, float]

    def __init__(
        self,
        bound_name: str,
        terms: List[Tuple[str, float]],
        metadata: Union[Dict, None] = None,
        sub_terms: Union[Dict[str, float], None] = None,
        alternatives: Union[Dict[str, float], None] = None,
    ):
        self.bound_name = bound_name
        self.terms = [(str(label), float(value)) for label, value in terms]

        for label, value in self.terms:
            if not np.isfinite(value) or value < 0.0:
                raise ValueError(f"Term {label} of {bound_name} is {value!r}.")

        self.metadata = dict(metadata) if metadata is not None else {}
        self.sub_terms = {
            key: float(value) for key, value in (sub_terms or {}).items()
        }
        self.alternatives = {
            key: float(value) for key, value in (alternatives or {}).items()
        }
        self.metadata["vacuous"] = self.vacuous

        return

    @property
    def total(self) -> float:
        return float(sum(value for _, value in self.terms))

    @property
    def vacuous(self) -> bool:
        return self.total > VACUOUS_THRESHOLD

    def term(self, label: str) -> float:
        for name, value in self.terms:
            if name == label:
                return value

        raise KeyError(f"{self.bound_name} has no term {label}.")

    def to_dict(self) -> Dict:
        return {
            "bound_name": self.bound_name,
            "total": self.total,
            "terms": [{"label": label, "value": value} for label, value in self.terms],
            "metadata": dict(self.metadata),
            "sub_terms": dict(self.sub_terms),
            "alternatives": dict(self.alternatives),
        }

    def __repr__(self):
        return f"BoundReport({self.bound_name}, total={self.total:.6g})"


def functional_metadata(F: Functional) -> Dict[str, Union[int, float, bool]]:
    """
    The normalization facts every report carries.
    """
    second_moment = F.second_moment
    return {
        "coordinate_count": F.space.n_coordinates,
        "space_size": F.space.total_outcomes,
        "mean": F.mean,
        "second_moment": second_moment,
        "degenerate_normalization": second_moment < DEGENERATE_SECOND_MOMENT,
    }
