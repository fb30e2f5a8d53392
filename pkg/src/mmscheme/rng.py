"""SplitMix64: the package's seedable random generator.

All randomized operations (streamline sampling, random group elements,
weight hill-climbing) draw from this generator so that results are
bit-reproducible across platforms and Python versions.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection."""
        if n <= 0:
            raise ValueError("empty range")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def getbits(self, k: int) -> int:
        return self.next_u64() >> (64 - k) if k <= 64 else self._bigbits(k)

    def _bigbits(self, k: int) -> int:
        out = 0
        while k > 64:
            out = (out << 64) | self.next_u64()
            k -= 64
        return (out << k) | self.getbits(k)

    def sample(self, population, k: int) -> list:
        """k distinct elements, order given by a partial Fisher-Yates."""
        pool = list(population)
        if k > len(pool):
            raise ValueError("sample larger than population")
        for i in range(k):
            j = i + self.randbelow(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]
