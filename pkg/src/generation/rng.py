"""Seeded random number generation for reproducible chains.

Every chain owns one ChainRNG wrapping numpy's PCG64 bit generator, which has
a documented, platform-independent output stream. Per-chain seeds come from
split_seed, a SplitMix64 finalizer over (base_seed XOR chain_index).
"""

from typing import Sequence, TypeVar

import numpy as np

from src.utils.validation import validate_seed

T = TypeVar("T")

_MASK64 = (1 << 64) - 1
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(value: int) -> int:
    """One SplitMix64 output for state `value` (a bijection on 64-bit ints)."""
    z = (value + _GOLDEN_GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def split_seed(base_seed: int, index: int) -> int:
    """Seed for work item `index` derived from `base_seed`.

    Distinct indices give distinct seeds because XOR with a fixed base and
    the SplitMix64 finalizer are both bijections.
    """
    validate_seed(base_seed)
    if index < 0:
        raise ValueError(f"Index must be non-negative, got {index}")
    return splitmix64((base_seed ^ index) & _MASK64)


class ChainRNG:
    """Wrapper around numpy's PCG64 generator for deterministic chains."""

    def __init__(self, seed: int) -> None:
        self._seed = validate_seed(seed)
        self._gen = np.random.Generator(np.random.PCG64(seed))

    @property
    def seed(self) -> int:
        return self._seed

    def uniform_array(self, size: int) -> np.ndarray:
        """`size` iid uniform draws on [0, 1)."""
        return self._gen.random(size)

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if n <= 0:
            raise ValueError(f"randbelow requires a positive bound, got {n}")
        return int(self._gen.integers(0, n))

    def choice(self, seq: Sequence[T]) -> T:
        return seq[self.randbelow(len(seq))]


def make_rng(seed: int) -> ChainRNG:
    return ChainRNG(seed)
