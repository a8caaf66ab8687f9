"""Seedable, platform-independent pseudo-randomness.

Two layers:

* ``Xoshiro256StarStar`` -- a plain scalar xoshiro256** generator whose
  256-bit state is filled from a splitmix64 sequence.  This is the
  reference generator: slow but unambiguous.
* ``BlockRng`` -- 64 interleaved xoshiro256** streams advanced in lockstep
  with numpy uint64 arithmetic.  Stream ``j`` is seeded from the master
  splitmix64 sequence, and outputs are interleaved round-robin
  (draw ``i`` comes from stream ``i mod 64``), so the output sequence is a
  pure function of the seed and identical on every platform.  This is the
  hot-path generator for Markov chains and large Monte-Carlo batteries.

All integer arithmetic is modulo 2**64.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1

_SM64_GAMMA = 0x9E3779B97F4A7C15
_SM64_MUL1 = 0xBF58476D1CE4E5B9
_SM64_MUL2 = 0x94D049BB133111EB


def splitmix64_next(state: int) -> tuple[int, int]:
    """Advance a splitmix64 state; returns (new_state, output)."""
    state = (state + _SM64_GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * _SM64_MUL1) & MASK64
    z = ((z ^ (z >> 27)) * _SM64_MUL2) & MASK64
    return state, z ^ (z >> 31)


def splitmix64_stream(seed: int, count: int) -> list[int]:
    state = seed & MASK64
    out = []
    for _ in range(count):
        state, z = splitmix64_next(state)
        out.append(z)
    return out


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


class Xoshiro256StarStar:
    """Scalar xoshiro256** seeded via splitmix64."""

    def __init__(self, seed: int):
        self.s = splitmix64_stream(seed, 4)

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self.s
        result = (_rotl((s1 * 5) & MASK64, 7) * 9) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self.s = [s0, s1, s2, s3]
        return result

    def next_below(self, bound: int) -> int:
        """Exactly uniform integer in [0, bound) via bitmask rejection."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        mask = (1 << (bound - 1).bit_length()) - 1 if bound > 1 else 0
        while True:
            r = self.next_u64() & mask
            if r < bound:
                return r

    def next_float(self) -> float:
        """Uniform in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (2.0**-53)


NUM_LANES = 64


class BlockRng:
    """64 interleaved xoshiro256** streams, vectorized with numpy.

    Draw ``i`` of the flattened output comes from lane ``i % 64``; each
    lane's 4-word state is seeded from one master splitmix64 run, lane 0
    first.  Block sizes are always multiples of the lane count.
    """

    def __init__(self, seed: int):
        words = splitmix64_stream(seed, 4 * NUM_LANES)
        state = np.array(words, dtype=np.uint64).reshape(NUM_LANES, 4)
        self._s = [state[:, i].copy() for i in range(4)]
        self._buf: list[int] = []
        self._pos = 0

    def u64_block(self, count: int) -> np.ndarray:
        """Next ``count`` outputs (rounded up to a lane multiple) as uint64."""
        rounds = -(-count // NUM_LANES)
        out = np.empty((rounds, NUM_LANES), dtype=np.uint64)
        s0, s1, s2, s3 = self._s
        five = np.uint64(5)
        nine = np.uint64(9)
        for r in range(rounds):
            x = s1 * five
            out[r] = ((x << np.uint64(7)) | (x >> np.uint64(57))) * nine
            t = s1 << np.uint64(17)
            s2 ^= s0
            s3 ^= s1
            s1 ^= s2
            s0 ^= s3
            s2 ^= t
            s3 = (s3 << np.uint64(45)) | (s3 >> np.uint64(19))
        self._s = [s0, s1, s2, s3]
        return out.reshape(-1)[:count]

    def float_block(self, count: int) -> np.ndarray:
        """Uniform [0,1) float64 array of length ``count``."""
        bits = self.u64_block(count)
        return (bits >> np.uint64(11)).astype(np.float64) * (2.0**-53)

    # Buffered scalar access (Python ints) for sequential consumers.

    _REFILL = 1 << 16

    def u64(self) -> int:
        if self._pos >= len(self._buf):
            self._buf = self.u64_block(self._REFILL).tolist()
            self._pos = 0
        v = self._buf[self._pos]
        self._pos += 1
        return v

    def below(self, bound: int) -> int:
        if bound <= 0:
            raise ValueError("bound must be positive")
        mask = (1 << (bound - 1).bit_length()) - 1 if bound > 1 else 0
        while True:
            r = self.u64() & mask
            if r < bound:
                return r


def mix_seed(seed: int, *indices: int) -> int:
    """Derive an independent child seed from (seed, index...) pairs.

    Each index is absorbed additively with a golden-ratio stride and run
    through the full splitmix64 output mix, so distinct (seed, indices)
    tuples cannot collide under small perturbations of either part
    (xor-style absorption would make seed s with chain c+1 collide with
    seed s^1 and chain c).
    """
    state = seed & MASK64
    for idx in indices:
        state = (state + _SM64_GAMMA * ((idx & MASK64) + 1)) & MASK64
        _, state = splitmix64_next(state)
    return state
