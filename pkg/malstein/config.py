"""
Library-wide configuration: caps on exhaustive enumeration.

The outcome cap is resolved in layers. An explicit argument wins, then the
``MALSTEIN_MAX_OUTCOMES`` environment variable, then the built-in default.
"""

import os
from typing import Union

from malstein.exceptions import MalsteinError

DEFAULT_MAX_OUTCOMES = 2 ** 24
MAX_OUTCOMES_ENVIRONMENT_VARIABLE = "MALSTEIN_MAX_OUTCOMES"

# Number of stored floats allowed for a full Hoeffding decomposition
DEFAULT_DECOMPOSITION_BUDGET = 2 ** 26

# Subsets are stored as 64-bit masks.
MAX_COORDINATES = 63


def _parse_positive_integer(value: Union[str, int], name: str) -> int:
    try:
        parsed = int(value)
    except (TypeError, ValueError):
        raise MalsteinError(f"{name} must be a positive integer, got {value!r}.")

    if parsed < 1:
        raise MalsteinError(f"{name} must be a positive integer, got {value!r}.")

    return parsed


def resolve_max_outcomes(max_outcomes: Union[int, None] = None) -> int:
    """
    Resolves the outcome cap for product spaces.

    Parameters
    ----------

    max_outcomes: Union[int, None], optional
        Explicit override. If ``None`` the environment variable
        ``MALSTEIN_MAX_OUTCOMES`` is consulted, falling back to 2^24.


    Returns
    -------

    int
        The maximal number of outcomes a product space may have.
    """

    if max_outcomes is not None:
        return _parse_positive_integer(max_outcomes, "max_outcomes")

    from_environment = os.environ.get(MAX_OUTCOMES_ENVIRONMENT_VARIABLE)

    if from_environment is not None and from_environment.strip() != "":
        return _parse_positive_integer(
            from_environment, MAX_OUTCOMES_ENVIRONMENT_VARIABLE
        )

    return DEFAULT_MAX_OUTCOMES
