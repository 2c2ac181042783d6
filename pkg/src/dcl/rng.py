"""Deterministic randomness: one 64-bit seed, sub-streams by labeled hashing.

Every consumer derives its own generator from (seed, label), so runs are
reproducible regardless of evaluation order and parallel layout.
"""

from __future__ import annotations

import hashlib
from fractions import Fraction

import numpy as np


def derive_seed(seed: int, label: str) -> int:
    digest = hashlib.sha256(f"{seed}:{label}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


def generator(seed: int, label: str) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(derive_seed(seed, label)))


def random_dyadic(gen: np.random.Generator, bits: int = 53) -> Fraction:
    """Uniform dyadic rational in [0, 1) with the given resolution."""
    return Fraction(int(gen.integers(0, 1 << bits)), 1 << bits)


def random_dyadic_signed(gen: np.random.Generator, bits: int = 53) -> Fraction:
    """Uniform dyadic rational in (-1, 1)."""
    return Fraction(int(gen.integers(-(1 << bits) + 1, 1 << bits)), 1 << bits)
