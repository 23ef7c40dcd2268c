"""
Coordinate subsets, stored as integer bitmasks (bit k set means coordinate
k belongs to the subset).
"""

from typing import Iterable, List, Union

from malstein.exceptions import SubsetOutOfRangeError, CoordinateOutOfRangeError

Subset = Union[int, Iterable[int]]


def to_mask(subset: Subset, n_coordinates: int) -> int:
    """
    Converts a subset to its bitmask, validating it against the number of
    coordinates.

    Parameters
    ----------

    subset: Union[int, Iterable[int]]
        Either a bitmask already, or an iterable of coordinate indices.

    n_coordinates: int
        Number of coordinates of the space the subset refers to.


    Returns
    -------

    int
        The bitmask.
    """

    if isinstance(subset, (int,)) and not isinstance(subset, bool):
        mask = subset
        if mask < 0 or mask >> n_coordinates:
            raise SubsetOutOfRangeError(
                f"Subset mask {mask:#x} is not within {n_coordinates} coordinates."
            )
        return mask

    mask = 0
    for coordinate in subset:
        coordinate = int(coordinate)
        if coordinate < 0 or coordinate >= n_coordinates:
            raise SubsetOutOfRangeError(
                f"Coordinate {coordinate} is not within {n_coordinates} coordinates."
            )
        mask |= 1 << coordinate

    return mask


def members(mask: int) -> List[int]:
    """
    Coordinates of a bitmask, in increasing order.
    """
    result = []
    index = 0
    while mask:
        if mask & 1:
            result.append(index)
        mask >>= 1
        index += 1

    return result


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def full_mask(n_coordinates: int) -> int:
    return (1 << n_coordinates) - 1


def check_coordinate(k: int, n_coordinates: int) -> int:
    """
    Validates a single coordinate index and returns it as an int.
    """
    try:
        k = int(k)
    except (TypeError, ValueError):
        raise CoordinateOutOfRangeError(f"Coordinate {k!r} is not an integer.")

    if k < 0 or k >= n_coordinates:
        raise CoordinateOutOfRangeError(
            f"Coordinate {k} is not within {n_coordinates} coordinates."
        )

    return k
