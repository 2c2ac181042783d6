"""Exact integer convolution via number-theoretic transforms.

Vectorised iterative radix-2 NTT over word-sized prime fields (all primes
below 2^32, so products of residues fit in uint64 exactly), combined by
CRT.  Used for the counting convolutions: scaled fixed-point coefficient
arrays convolve exactly here, and the scaling error is accounted for by
the callers' certified-interval ledgers.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

# primes p = c * 2^k + 1 < 2^32 with primitive root g; k >= 23 supports
# transforms far beyond the package's sieve cap
NTT_PRIMES: tuple[tuple[int, int], ...] = (
    (3221225473, 5),  # 3 * 2^30 + 1
    (2281701377, 3),  # 17 * 2^27 + 1
    (2013265921, 31),  # 15 * 2^27 + 1
    (1811939329, 13),  # 27 * 2^26 + 1
    (469762049, 3),  # 7 * 2^26 + 1
    (754974721, 11),  # 45 * 2^24 + 1
    (167772161, 3),  # 5 * 2^25 + 1
)


def _two_adic_order(p: int) -> int:
    return ((p - 1) & -(p - 1)).bit_length() - 1


@lru_cache(maxsize=None)
def _bit_reverse_perm(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n, dtype=np.int64)
    rev = np.zeros(n, dtype=np.int64)
    for _ in range(bits):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    return rev


@lru_cache(maxsize=None)
def _stage_roots(p: int, g: int, n: int, inverse: bool) -> tuple[np.ndarray, ...]:
    """Twiddle tables per stage for length n (a power of two)."""
    assert (p - 1) % n == 0, f"{p} does not support length {n}"
    w = pow(g, (p - 1) // n, p)
    if inverse:
        w = pow(w, p - 2, p)
    tables = []
    length = 2
    while length <= n:
        step = pow(w, n // length, p)
        half = length // 2
        tab = np.empty(half, dtype=np.uint64)
        cur = 1
        for i in range(half):
            tab[i] = cur
            cur = (cur * step) % p
        tables.append(tab)
        length *= 2
    return tuple(tables)


def ntt(a: np.ndarray, p: int, g: int, inverse: bool = False) -> np.ndarray:
    """In-place-style radix-2 NTT of a uint64 residue array (len = 2^k)."""
    n = len(a)
    if n & (n - 1):
        raise ValueError("length must be a power of two")
    if n == 1:
        return a.copy()
    pu = np.uint64(p)
    x = a[_bit_reverse_perm(n)].astype(np.uint64)
    tables = _stage_roots(p, g, n, inverse)
    length = 2
    for tab in tables:
        half = length // 2
        blocks = x.reshape(-1, length)
        u = blocks[:, :half].copy()
        v = (blocks[:, half:] * tab[None, :]) % pu
        blocks[:, :half] = (u + v) % pu
        blocks[:, half:] = (u + pu - v) % pu
        length *= 2
    if inverse:
        n_inv = np.uint64(pow(n, p - 2, p))
        x = (x * n_inv) % pu
    return x


def cyclic_convolve_mod(a: np.ndarray, b: np.ndarray, p: int, g: int) -> np.ndarray:
    """Exact (a * b mod x^n - 1) mod p for uint64 residue arrays of equal 2^k length."""
    fa = ntt(a, p, g)
    fb = fa if b is a else ntt(b, p, g)
    return ntt((fa * fb) % np.uint64(p), p, g, inverse=True)


def _to_residues(a: np.ndarray, p: int, n: int) -> np.ndarray:
    out = np.zeros(n, dtype=np.int64)
    out[: len(a)] = a
    return np.mod(out, p).astype(np.uint64)


def select_primes(bound: int) -> list[tuple[int, int]]:
    """Enough NTT primes that the CRT modulus exceeds 2*bound + 1."""
    chosen = []
    prod = 1
    for p, g in NTT_PRIMES:
        chosen.append((p, g))
        prod *= p
        if prod > 2 * bound + 1:
            return chosen
    raise ValueError(f"bound {bound} too large for the configured prime set")


def convolve_residues(
    a: np.ndarray, b: np.ndarray, primes: list[tuple[int, int]]
) -> tuple[int, dict[int, np.ndarray]]:
    """Linear convolution residues mod each prime; returns (out_len, table)."""
    out_len = len(a) + len(b) - 1
    n = 1 << (out_len - 1).bit_length()
    table = {}
    for p, g in primes:
        ra = _to_residues(a, p, n)
        rb = ra if b is a else _to_residues(b, p, n)
        table[p] = cyclic_convolve_mod(ra, rb, p, g)[:out_len]
    return out_len, table


def crt_pair(x1: int, p1: int, x2: int, p2: int) -> tuple[int, int]:
    inv = pow(p1, p2 - 2, p2)
    t = ((x2 - x1) * inv) % p2
    return x1 + p1 * t, p1 * p2

def crt_scalar(residues: list[int], primes: list[int], signed: bool = True) -> int:
    """Combine scalar residues; symmetric lift into (-P/2, P/2] when signed."""
    x, mod = residues[0] % primes[0], primes[0]
    for r, p in zip(residues[1:], primes[1:]):
        x, mod = crt_pair(x, mod, r % p, p)
    if signed and x > mod // 2:
        x -= mod
    return x


def crt_lift_array(table: dict[int, np.ndarray], signed: bool = True) -> list[int]:
    """Per-entry CRT lift of convolution residues to Python integers."""
    primes = list(table.keys())
    length = len(next(iter(table.values())))
    out = []
    for i in range(length):
        out.append(
            crt_scalar([int(table[p][i]) for p in primes], primes, signed=signed)
        )
    return out


def convolve_exact(a: np.ndarray, b: np.ndarray, bound: int, signed: bool = True) -> list[int]:
    """Exact linear convolution of int64 arrays with |output| <= bound."""
    primes = select_primes(bound)
    _, table = convolve_residues(a, b, primes)
    return crt_lift_array(table, signed=signed)


def weighted_pairing_mod(
    conv_table: dict[int, np.ndarray],
    weights: np.ndarray,
    indices: np.ndarray,
    bound: int,
) -> int:
    """Exact sum over i of conv[indices[i]] * weights[i] (weights int64).

    The pairing is evaluated per prime field and CRT-combined once, so no
    per-entry lift of the convolution is needed.
    """
    primes = list(conv_table)
    residues = []
    for p in primes:
        pu = np.uint64(p)
        wmod = np.mod(weights.astype(np.int64), p).astype(np.uint64)
        terms = (conv_table[p][indices] * wmod) % pu
        residues.append(_sum_mod(terms, p))
    prod = 1
    for pr in primes:
        prod *= pr
    if prod <= 2 * bound:
        raise ValueError("CRT modulus too small for the stated bound")
    return crt_scalar(residues, primes, signed=True)


def _sum_mod(terms: np.ndarray, p: int) -> int:
    # entries < 2^32, so chunks of 2^20 sum exactly inside uint64
    total = 0
    for off in range(0, len(terms), 1 << 20):
        total = (total + int(np.sum(terms[off : off + (1 << 20)]))) % p
    return total
