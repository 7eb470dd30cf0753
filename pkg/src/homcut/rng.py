"""Portable seeded pseudo-random numbers: xoshiro256** seeded through splitmix64.

The generator is pinned so that a seed produces the same stream in any language:

* seeding: four successive splitmix64 outputs starting from ``seed mod 2**64``
  (increment 0x9E3779B97F4A7C15, multipliers 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB);
* output: ``rotl(s1 * 5, 7) * 9`` followed by the standard xoshiro256 state update
  (``t = s1 << 17``, rotate ``s3`` by 45);
* ``random()`` takes the top 53 bits: ``(x >> 11) * 2**-53``;
* ``below(n)`` uses rejection on the top bits (Lemire-free, unbiased).
"""

from __future__ import annotations

MASK = (1 << 64) - 1


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK


def splitmix64(state: int) -> tuple[int, int]:
    state = (state + 0x9E3779B97F4A7C15) & MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return state, z ^ (z >> 31)


class Xoshiro256:
    def __init__(self, seed: int = 0):
        state = seed & MASK
        s = []
        for _ in range(4):
            state, z = splitmix64(state)
            s.append(z)
        self.s = s

    def next_u64(self) -> int:
        s = self.s
        result = (_rotl((s[1] * 5) & MASK, 7) * 9) & MASK
        t = (s[1] << 17) & MASK
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)``."""
        if n <= 0:
            raise ValueError("n must be positive")
        bits = max(1, (n - 1).bit_length())
        while True:
            x = self.next_u64() >> (64 - bits)
            if x < n:
                return x

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
