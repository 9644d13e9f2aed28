"""SplitMix64 random streams.

Every recursive instance owns one 64-bit state.  Child seeds are derived from
``(parent seed, child ordinal)`` with the SplitMix finalizer, so a subtree's
randomness never depends on how its siblings consumed theirs.

The stream has to be usable from inside compiled kernels, so it is a plain
``uint64[1]`` array advanced by :func:`next_u64`.
"""
import numpy as np

from ._accel import USE_NUMBA, kernel

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV53 = 1.0 / 9007199254740992.0


def _finalize(z):
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed, ordinal):
    """Seed of child number ``ordinal`` of an instance seeded with ``seed``."""
    return _finalize((int(seed) + (int(ordinal) + 1) * GOLDEN) & MASK64)


if USE_NUMBA:

    @kernel
    def next_u64(state):
        z = state[0] + np.uint64(0x9E3779B97F4A7C15)
        state[0] = z
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))

    @kernel
    def uniform(state):
        return float(next_u64(state) >> np.uint64(11)) * _INV53

else:

    def next_u64(state):
        z = (int(state[0]) + GOLDEN) & MASK64
        state[0] = z
        return _finalize(z)

    def uniform(state):
        return float(next_u64(state) >> 11) * _INV53


@kernel
def below(state, n):
    """Uniform integer in ``[0, n)``; ``n`` must stay below 2**53."""
    k = int(uniform(state) * n)
    if k >= n:  # guards the float rounding edge
        k = n - 1
    return k


@kernel
def shuffle(state, arr):
    """In-place Fisher-Yates shuffle."""
    for i in range(arr.shape[0] - 1, 0, -1):
        j = below(state, i + 1)
        tmp = arr[i]
        arr[i] = arr[j]
        arr[j] = tmp


class Stream:
    """A seeded SplitMix64 stream, shareable with compiled kernels via ``state``."""

    def __init__(self, seed):
        self.seed = int(seed) & MASK64
        self.state = np.array([self.seed], dtype=np.uint64)

    def next_u64(self):
        return int(next_u64(self.state))

    def uniform(self):
        return uniform(self.state)

    def below(self, n):
        return below(self.state, n)

    def child(self, ordinal):
        return Stream(derive_seed(self.seed, ordinal))

    def __repr__(self):
        return f"Stream(seed={self.seed:#x}, state={int(self.state[0]):#x})"
