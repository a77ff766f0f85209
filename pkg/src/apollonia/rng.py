"""Deterministic pseudo-randomness for instance generation.

All structural randomness in this package flows through SplitMix64
(Steele, Lea and Flood's splittable generator; the same algorithm ships as
the seeding mixer of the xoshiro family).  It is a 64-bit counter-plus-mix
design: the state advances by a fixed odd gamma and the output is a
bijective finalizer of the state, so streams never collide and any stream
position can be reached by jumping the counter.

Two disciplines are fixed here and relied on everywhere else:

* ``bounded(k)`` draws an exactly uniform integer in ``[0, k)`` by masking
  to the next power of two and rejecting overshoots.  No modulo bias.
* ``derive(seed, stream_id)`` produces decorrelated child seeds, so
  ensemble members are reproducible independently of execution order.

The numba kernels re-implement these few lines on raw uint64s; the tests
hold them bit-for-bit to this reference.

Monte Carlo code that wants vectorized floats (the occupancy samplers)
uses numpy's PCG64 instead, always behind an explicit seed; that choice is
documented at the sampler.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """SplitMix64 output finalizer (a bijection on 64-bit words)."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive(seed: int, stream_id: int) -> int:
    """Child seed for substream `stream_id`, decorrelated from the parent.

    Defined as mix64(mix64(seed) + stream_id * GAMMA).  Both arguments may
    be any Python ints; they are reduced mod 2**64.
    """
    return mix64(mix64(seed) + (stream_id & _MASK64) * GAMMA)


class SplitMix64:
    """Reference stream implementation (pure Python, arbitrary-int safe)."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GAMMA) & _MASK64
        return mix64(self.state)

    def bounded(self, k: int) -> int:
        """Exactly uniform draw from [0, k) by mask-and-reject."""
        if k <= 0:
            raise ValueError("bound must be positive")
        mask = (1 << (k - 1).bit_length()) - 1
        while True:
            v = self.next_u64() & mask
            if v < k:
                return v
