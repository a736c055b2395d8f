"""Counter-based random streams (SplitMix64).

Every random draw in the package comes from a SplitMix64 stream keyed by a
64-bit seed.  Trial ``i`` of a campaign uses ``derive_seed(master, i)``, so any
single trial can be replayed without generating the ones before it.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MUL1 = np.uint64(0xBF58476D1CE4E5B9)
_MUL2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


@njit(cache=True)
def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * _MUL1
    z = (z ^ (z >> np.uint64(27))) * _MUL2
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def _derive(master, index):
    return _mix64(_mix64(master ^ _GOLDEN) + _GOLDEN * (index + np.uint64(1)))


@njit(cache=True)
def _bounded(state, m):
    """Uniform integer in [0, m) drawn from ``state[0]`` by rejection."""
    m64 = np.uint64(m)
    threshold = (np.uint64(0) - m64) % m64
    while True:
        state[0] += _GOLDEN
        r = _mix64(state[0])
        if r >= threshold:
            return np.int64(r % m64)


@njit(cache=True)
def _partial_shuffle(perm, k, seed):
    # first k entries of perm become a uniform k-subset, in random order
    state = np.empty(1, dtype=np.uint64)
    state[0] = seed
    size = perm.shape[0]
    for i in range(k):
        j = i + _bounded(state, size - i)
        t = perm[i]
        perm[i] = perm[j]
        perm[j] = t


def as_seed(seed: int) -> np.uint64:
    return np.uint64(int(seed) & _MASK64)


def derive_seed(master: int, index: int) -> int:
    """Seed of sub-stream ``index`` under ``master``."""
    return int(_derive(as_seed(master), as_seed(index)))


def random_subset(size: int, k: int, seed: int) -> np.ndarray:
    """Uniform random ``k``-subset of ``range(size)`` as an unsorted int array."""
    dtype = np.int32 if size < 2**31 else np.int64
    perm = np.arange(size, dtype=dtype)
    _partial_shuffle(perm, k, as_seed(seed))
    return perm[:k]


def shuffled(items: np.ndarray, seed: int) -> np.ndarray:
    out = np.array(items, dtype=np.int64, copy=True)
    _partial_shuffle(out, out.shape[0], as_seed(seed))
    return out
