"""
Exact laws of functionals: the sorted atoms of a value table with their
aggregated probabilities.
"""

from typing import Dict, List, Tuple, Union

import numpy as np

from malstein.exceptions import InvalidDistributionError, ProbSumNotOneError
from malstein.space.functional import Functional
from malstein.space.product_space import PROBABILITY_TOLERANCE


class LawOfF(object):
    """
    A finitely supported law on the real line.

    Parameters
    ----------

    atoms: np.ndarray
        Strictly increasing support points.

    probs: np.ndarray
        Matching positive probabilities summing to one.
    """

    atoms: np.ndarray
    probs: np.ndarray

    def __init__(
        self, atoms: Union[List[float], np.ndarray], probs: Union[List[float], np.ndarray]
    ):
        try:
            atoms = np.array(atoms, dtype=np.float64).ravel()
            probs = np.array(probs, dtype=np.float64).ravel()
        except (TypeError, ValueError):
            raise InvalidDistributionError("Atoms and probabilities must be lists of numbers.")

        if atoms.size == 0 or atoms.size != probs.size:
            raise InvalidDistributionError(
                "A law needs as many probabilities as atoms, and at least one atom."
            )

        if not (np.all(np.isfinite(atoms)) and np.all(np.isfinite(probs))):
            raise InvalidDistributionError("Atoms and probabilities must be finite.")

        if np.any(np.diff(atoms) <= 0.0):
            raise InvalidDistributionError("Atoms must be strictly increasing.")

        if np.any(probs <= 0.0):
            raise InvalidDistributionError("Atom probabilities must be positive.")

        if abs(probs.sum() - 1.0) > PROBABILITY_TOLERANCE:
            raise ProbSumNotOneError(
                f"Atom probabilities sum to {probs.sum():.17g}, not one."
            )

        atoms.setflags(write=False)
        probs.setflags(write=False)

        self.atoms = atoms
        self.probs = probs

        return

    @classmethod
    def from_samples(cls, sorted_values: np.ndarray) -> "LawOfF":
        """
        The empirical law of a sample.
        """
        atoms, counts = np.unique(np.asarray(sorted_values, dtype=np.float64), return_counts=True)
        return cls(atoms, counts / counts.sum())

    @classmethod
    def from_dict(cls, data: Dict) -> "LawOfF":
        try:
            return cls(data["atoms"], data["probs"])
        except (KeyError, TypeError):
            raise InvalidDistributionError(
                "A law must be given as a mapping with 'atoms' and 'probs'."
            )

    def to_dict(self) -> Dict[str, List[float]]:
        return {"atoms": self.atoms.tolist(), "probs": self.probs.tolist()}

    @property
    def cdf(self) -> np.ndarray:
        """
        CDF values at the atoms (right limits). The last one is exactly 1.
        """
        cumulative = np.cumsum(self.probs)
        cumulative[-1] = 1.0
        return np.minimum(cumulative, 1.0)

    @property
    def mean(self) -> float:
        return float(np.dot(self.atoms, self.probs))

    @property
    def variance(self) -> float:
        return float(np.dot((self.atoms - self.mean) ** 2, self.probs))

    def __len__(self):
        return self.atoms.size

    def __repr__(self):
        return f"LawOfF(atoms={self.atoms.tolist()}, probs={self.probs.tolist()})"


def default_merge_tol(F: Functional) -> float:
    return 1e-12 * (1.0 + F.scale)


def atom_labels(
    F: Functional, merge_tol: Union[float, None] = None
) -> Tuple[np.ndarray, LawOfF]:
    """
    Groups the outcomes of F by value.

    Sorted values closer than ``merge_tol`` to their neighbour are merged
    into one atom, placed at the probability-weighted mean of its group.

    Returns
    -------

    np.ndarray
        For every outcome (flat order), the index of its atom.

    LawOfF
        The merged law.
    """
    if merge_tol is None:
        merge_tol = default_merge_tol(F)

    probabilities = F.space.probabilities
    order = np.argsort(F.table, kind="stable")
    values = F.table[order]

    starts_new_atom = np.diff(values) > merge_tol
    sorted_labels = np.concatenate([[0], np.cumsum(starts_new_atom)])

    weights = probabilities[order]
    atom_probs = np.bincount(sorted_labels, weights=weights)
    atom_sums = np.bincount(sorted_labels, weights=weights * values)
    atoms = atom_sums / atom_probs

    labels = np.empty(F.table.size, dtype=np.int64)
    labels[order] = sorted_labels

    return labels, LawOfF(atoms, atom_probs / atom_probs.sum())


def law_of(F: Functional, merge_tol: Union[float, None] = None) -> LawOfF:
    """
    The law of F: distinct values of its table with aggregated
    probabilities.

    Parameters
    ----------

    F: Functional
        The functional.

    merge_tol: Union[float, None], optional
        Absolute distance under which neighbouring values are merged.
        Defaults to 1e-12 * (1 + max|F|).
    """
    return atom_labels(F, merge_tol)[1]
