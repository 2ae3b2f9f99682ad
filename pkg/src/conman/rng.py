"""Deterministic 64-bit PRNG used wherever the toolkit needs randomness.

SplitMix64 is tiny, fast, and trivial to port, so a single integer seed
reproduces every artifact bit-for-bit on any platform. Reference output
vectors are frozen in tests/test_rng.py.
"""

from __future__ import annotations

import math

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """SplitMix64 finalizer: avalanche a 64-bit value."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive(seed: int, *keys: int | str) -> int:
    """Derive a child seed from ``seed`` and a key path.

    Strings are folded in bytewise, ints directly, so streams keyed like
    ``derive(seed, "scammer", 17)`` stay stable when unrelated parts of
    the pipeline grow or shrink.
    """
    state = mix64(seed ^ GOLDEN)
    for key in keys:
        if isinstance(key, str):
            for b in key.encode("utf-8"):
                state = mix64(state ^ b ^ GOLDEN)
        else:
            state = mix64(state ^ (key & MASK64))
    return state


class SplitMix64:
    """A single SplitMix64 stream."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN) & MASK64
        return mix64(self._state)

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * 2.0 ** -53

    def randrange(self, n: int) -> int:
        """Uniform int in [0, n). Modulo bias is negligible for n << 2**64."""
        if n <= 0:
            raise ValueError("randrange bound must be positive")
        return self.next_u64() % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform int in [lo, hi] inclusive."""
        return lo + self.randrange(hi - lo + 1)

    def chance(self, p: float) -> bool:
        return self.random() < p

    def choice(self, seq):
        if not seq:
            raise ValueError("choice from empty sequence")
        return seq[self.randrange(len(seq))]

    def sample(self, n: int, k: int) -> list[int]:
        """k distinct indices from range(n), in draw order."""
        if k > n:
            raise ValueError("sample larger than population")
        picked: set[int] = set()
        out: list[int] = []
        while len(out) < k:
            i = self.randrange(n)
            if i not in picked:
                picked.add(i)
                out.append(i)
        return out

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]

    def geometric(self, p: float) -> int:
        """Number of failures before the first Bernoulli(p) success."""
        if p >= 1.0:
            return 0
        if p <= 0.0:
            raise ValueError("geometric needs p in (0, 1]")
        u = self.random()
        return int(math.log1p(-u) / math.log1p(-p))

    def gauss(self) -> float:
        """Standard normal via Box-Muller (two uniforms per call)."""
        u1 = self.random()
        u2 = self.random()
        while u1 <= 1e-300:
            u1 = self.random()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def bytes(self, n: int) -> bytes:
        out = bytearray()
        while len(out) < n:
            out += self.next_u64().to_bytes(8, "big")
        return bytes(out[:n])
