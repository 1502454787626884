"""Counter-based pseudo-random numbers for platform-independent reproducibility.

All stochastic generators in this package draw from the splitmix64 output
function (Steele, Lea & Flood's published 64-bit finalizer).  A draw is a pure
function of (seed, counter), so any value can be regenerated independently of
evaluation order, process, or platform.  Every operation is integer arithmetic
modulo 2**64; no global state is involved.
"""

from __future__ import annotations

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = float(2.0 ** -53)


def _finalize(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    return z ^ (z >> _S31)


def mix64(seed: int, counter) -> np.ndarray:
    """splitmix64 output for the given counter(s) of the stream `seed`.

    Equivalent to seeding splitmix64 with `seed` and taking output number
    ``counter`` (0-based).  `counter` may be a scalar or integer array.
    """
    c = np.asarray(counter, dtype=np.uint64)
    state = np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + (c + np.uint64(1)) * _GOLDEN
    return _finalize(state)


def uniform01(seed: int, counter) -> np.ndarray:
    """Uniform doubles in [0, 1) from the 53 high bits of mix64."""
    return np.asarray(mix64(seed, counter) >> _S11, dtype=np.float64) * _INV53


def uniform_grid(seed: int, ny: int, nx: int) -> np.ndarray:
    """(ny, nx) array of uniform [0, 1) doubles; counter = iy*nx + ix (row-major)."""
    return uniform01(seed, np.arange(ny * nx, dtype=np.uint64)).reshape(ny, nx)


def derive(seed: int, index: int) -> int:
    """A child seed for substream `index`, itself a splitmix64 output."""
    return int(mix64(seed, np.uint64(index))[()])
