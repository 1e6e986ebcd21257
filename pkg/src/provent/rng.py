"""Seedable, portable 64-bit random generator (xoshiro256**).

The update rules are the published ones (Blackman & Vigna), with state
initialized from the seed through splitmix64, so any language can
reproduce the stream bit for bit. Doubles take the top 53 bits of one
output word. docs/format.md records the exact derivations the event
generator layers on top of this stream.
"""

from __future__ import annotations

import math

MASK64 = (1 << 64) - 1
_INV_2_53 = 2.0 ** -53


def _splitmix64(state: int) -> tuple[int, int]:
    state = (state + 0x9E3779B97F4A7C15) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31), state


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


class Xoshiro256StarStar:
    def __init__(self, seed: int):
        sm = seed & MASK64
        state = []
        for _ in range(4):
            word, sm = _splitmix64(sm)
            state.append(word)
        if not any(state):  # pragma: no cover - splitmix64 never yields four zeros
            state[0] = 1
        self._s = state

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s
        result = (_rotl((s1 * 5) & MASK64, 7) * 9) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s = [s0, s1, s2, s3]
        return result

    def next_double(self) -> float:
        """Uniform in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * _INV_2_53

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.next_double()

    def exponential(self, scale: float) -> float:
        # -scale*log1p(-u) maps u in [0,1) to (0, inf) without ever taking log(0)
        return -scale * math.log1p(-self.next_double())

    def sign(self) -> int:
        return -1 if self.next_u64() >> 63 else 1

    def poisson(self, mean: float) -> int:
        """Knuth's product method, chunked so exp() never underflows."""
        if mean < 0:
            raise ValueError(f"poisson mean must be >= 0, got {mean}")
        count = 0
        remaining = mean
        while remaining > 0:
            chunk = min(remaining, 500.0)
            limit = math.exp(-chunk)
            product = 1.0
            while True:
                product *= self.next_double()
                if product <= limit:
                    break
                count += 1
            remaining -= chunk
        return count
