"""
SplitMix64, a counter-based 64 bit generator.

Output i of seed s is mix(s + (i + 1) * 0x9E3779B97F4A7C15) modulo 2^64, so
any output can be produced without running through the previous ones. This
lets samplers address their random numbers with global counters and stay
independent of how the work is split between threads.

For seed 1 the first four outputs are 10451216379200822465,
13757245211066428519, 17911839290282890590 and 8196980753821780235.
"""

from typing import Union

import numpy as np

GOLDEN_GAMMA = np.uint64(0x9E3779B97F4A7C15)
MIX_MULTIPLIER_1 = np.uint64(0xBF58476D1CE4E5B9)
MIX_MULTIPLIER_2 = np.uint64(0x94D049BB133111EB)

# 2^-53, the spacing of the doubles produced by uniform01
UNIT_SPACING = 1.0 / (1 << 53)


def splitmix64(seed: int, counters: Union[int, np.ndarray]) -> np.ndarray:
    """
    The outputs with the given (0-based) indices for ``seed``.

    Parameters
    ----------

    seed: int
        Any integer; it is reduced modulo 2^64.

    counters: Union[int, np.ndarray]
        Nonnegative output indices, of any shape.


    Returns
    -------

    np.ndarray
        uint64 outputs with the shape of ``counters``.
    """
    counters = np.asarray(counters, dtype=np.uint64)
    state = np.uint64(int(seed) % (1 << 64))

    with np.errstate(over="ignore"):
        z = state + (counters + np.uint64(1)) * GOLDEN_GAMMA
        z = (z ^ (z >> np.uint64(30))) * MIX_MULTIPLIER_1
        z = (z ^ (z >> np.uint64(27))) * MIX_MULTIPLIER_2
        z = z ^ (z >> np.uint64(31))

    return z


def uniform01(seed: int, counters: Union[int, np.ndarray]) -> np.ndarray:
    """
    Doubles in [0, 1) from the top 53 bits of :func:`splitmix64`.
    """
    bits = splitmix64(seed, counters) >> np.uint64(11)
    return bits.astype(np.float64) * UNIT_SPACING
