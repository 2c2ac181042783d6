"""Segmented sieve, von Mangoldt weights and the sharp Diophantine cutoff.

The distance kernel computes ||n*alpha|| for whole ranges at once in
64-bit fixed point (exact modular arithmetic on the dyadic floor of alpha,
so the only error is the tail of alpha beyond 64 bits plus one float
conversion).  Candidates that land within the certified error margin of a
cutoff are re-decided exactly with big-integer arithmetic on the quadratic
irrational, so membership in the sharp set is never a rounding accident;
exact ties are kept and flagged.
"""

from __future__ import annotations

import math
import os
import struct
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Optional

import gmpy2
import numpy as np

from .errors import RangeTooLarge
from .intervals import CertifiedInterval
from .quadratic import QuadraticIrrational, sign_a_plus_b_sqrt_d

SIEVE_CAP = 10**9
SEGMENT_SIZE = 1 << 22
CACHE_ENV = "DCL_CACHE_DIR"
_CACHE_MAGIC = b"DSIEVE01"

# float64 error model constants (validated in the test suite)
_EPS = 2.0**-52
_LOG_ULPS = 2  # np.log relative error allowance, in ulps


# ------------------------------------------------------------------- sieving
@lru_cache(maxsize=None)
def _base_primes(limit: int) -> np.ndarray:
    """Simple sieve up to limit inclusive (used for base primes)."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.flatnonzero(mask).astype(np.int64)


@dataclass(frozen=True)
class PrimeSegment:
    """Primality over [lo, hi): bitmask plus the prime powers in range.

    ``prime_powers`` maps n -> (p, k) for the proper powers p^k (k >= 2)
    in the segment; together with the bitmask it determines Lambda.
    """

    lo: int
    hi: int
    is_prime: np.ndarray
    prime_powers: dict[int, tuple[int, int]]

    def primes(self) -> np.ndarray:
        return self.lo + np.flatnonzero(self.is_prime).astype(np.int64)


def _cache_path(lo: int, hi: int) -> Optional[Path]:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    return Path(root) / f"dsieve_{lo}_{hi}.bin"


def _cache_load(lo: int, hi: int) -> Optional[np.ndarray]:
    path = _cache_path(lo, hi)
    if path is None or not path.exists():
        return None
    raw = path.read_bytes()
    if raw[:8] != _CACHE_MAGIC:
        return None
    clo, chi = struct.unpack("<QQ", raw[8:24])
    if (clo, chi) != (lo, hi):
        return None
    bits = np.unpackbits(np.frombuffer(raw[24:], dtype=np.uint8), count=hi - lo)
    return bits.astype(bool)


def _cache_store(lo: int, hi: int, mask: np.ndarray) -> None:
    path = _cache_path(lo, hi)
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = _CACHE_MAGIC + struct.pack("<QQ", lo, hi) + np.packbits(mask).tobytes()
    path.write_bytes(payload)


def sieve_segment(lo: int, hi: int, cap: int = SIEVE_CAP) -> PrimeSegment:
    """Exact primality for [lo, hi] (inclusive endpoints, as ranges of n)."""
    if not 2 <= lo <= hi:
        raise ValueError(f"need 2 <= lo <= hi, got [{lo}, {hi}]")
    if hi > cap:
        raise RangeTooLarge(f"hi = {hi} exceeds sieve cap {cap}")
    hi_ex = hi + 1
    mask = _cache_load(lo, hi_ex)
    if mask is None:
        mask = np.ones(hi_ex - lo, dtype=bool)
        for p in _base_primes(math.isqrt(hi)):
            p = int(p)
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start < hi_ex:
                mask[start - lo :: p] = False
        # n < 2 never occurs (lo >= 2); mark entries below p^2 that are prime
        _cache_store(lo, hi_ex, mask)
    powers: dict[int, tuple[int, int]] = {}
    for p in _base_primes(math.isqrt(hi)):
        p = int(p)
        pk = p * p
        while pk <= hi:
            if pk >= lo:
                powers[pk] = (p, _power_exponent(pk, p))
            pk *= p
    return PrimeSegment(lo=lo, hi=hi_ex, is_prime=mask, prime_powers=powers)


def _power_exponent(n: int, p: int) -> int:
    k = 0
    while n > 1:
        n //= p
        k += 1
    return k


def primes_up_to(N: int, cap: int = SIEVE_CAP) -> np.ndarray:
    """All primes <= N, via cache-sized segments merged in index order."""
    if N < 2:
        return np.array([], dtype=np.int64)
    if N > cap:
        raise RangeTooLarge(f"N = {N} exceeds sieve cap {cap}")
    chunks = []
    lo = 2
    while lo <= N:
        hi = min(lo + SEGMENT_SIZE - 1, N)
        chunks.append(sieve_segment(lo, hi, cap=cap).primes())
        lo = hi + 1
    return np.concatenate(chunks)


def von_mangoldt(n: int) -> Optional[tuple[int, int]]:
    """(p, k) with n = p^k if n is a prime power, else None.

    Lambda(n) = log p is kept symbolic; convert with :func:`log_interval`.
    """
    if n < 2:
        return None
    for k in range(n.bit_length() - 1, 0, -1):
        root, exact = gmpy2.iroot(gmpy2.mpz(n), k)
        if exact and gmpy2.is_prime(root):
            return int(root), k
    return None


def log_interval(p: int, prec: int = 128) -> CertifiedInterval:
    from .intervals import ilog

    return ilog(CertifiedInterval.exact(p, prec))


def lambda_array(N: int, cap: int = SIEVE_CAP) -> tuple[np.ndarray, float]:
    """Dense Lambda(1..N) as float64 (index n) and a per-entry error bound."""
    arr = np.zeros(N + 1, dtype=np.float64)
    ps = primes_up_to(N, cap=cap)
    arr[ps] = np.log(ps.astype(np.float64))
    for p in _base_primes(math.isqrt(N)):
        p = int(p)
        lp = math.log(p)
        pk = p * p
        while pk <= N:
            arr[pk] = lp
            pk *= p
    err = _LOG_ULPS * _EPS * math.log(max(N, 3))
    return arr, err


def chebyshev_psi(N: int, cap: int = SIEVE_CAP) -> CertifiedInterval:
    """Chebyshev psi(N) = sum of Lambda(n) for n <= N, certified."""
    arr, err = lambda_array(N, cap=cap)
    nz = np.flatnonzero(arr)
    total = math.fsum(arr[nz])
    slack = err * len(nz) + _EPS * abs(total)
    return CertifiedInterval.from_float_pm(total, slack)


# ------------------------------------------------------- ||n*alpha|| kernel
def alpha_fixed_point(alpha: QuadraticIrrational) -> int:
    """floor(frac(alpha) * 2^64), exactly."""
    return alpha.fractional_part().scaled_floor(64)


def norm_dist_array(alpha: QuadraticIrrational, ns: np.ndarray) -> tuple[np.ndarray, float]:
    """(dist, err): dist[i] approximates ||ns[i] * alpha||, |error| <= err.

    Exact 64-bit modular fixed point: n * floor(frac(alpha) 2^64) mod 2^64
    wraps for free in uint64; dropping alpha's tail costs at most n * 2^-64,
    and ||.|| is 1-Lipschitz so the bound survives the fold.
    """
    a64 = np.uint64(alpha_fixed_point(alpha))
    n_u = ns.astype(np.uint64)
    frac = (n_u * a64).astype(np.float64) * 2.0**-64
    dist = np.minimum(frac, 1.0 - frac)
    n_max = int(ns.max()) if len(ns) else 1
    err = n_max * 2.0**-64 + 2.0**-52
    return dist, err


def sharp_cutoff_sign(alpha: QuadraticIrrational, n: int, tau: Fraction) -> int:
    """Exact sign of ||n*alpha|| - n^(-tau): -1 inside, 0 tie, +1 outside."""
    if tau == 0:
        return -1  # ||.|| <= 1/2 < 1 always
    u, v = tau.numerator, tau.denominator
    x = alpha.mul_int(n).dist_to_nearest_int()  # (A + B sqrt d)/C in (0, 1/2)
    A, B, C, d = x.a, x.b, x.c, x.d
    # condition: x <= n^(-u/v)  <=>  x^v * n^u <= 1  <=>  n^u (Av + Bv sqrt d) <= C^v
    Av, Bv = _pow_quadratic(A, B, d, v)
    nu = gmpy2.mpz(n) ** u
    lhs_a = int(nu * Av) - int(gmpy2.mpz(C) ** v)
    lhs_b = int(nu * Bv)
    if lhs_b == 0:
        return (lhs_a > 0) - (lhs_a < 0)
    return sign_a_plus_b_sqrt_d(lhs_a, lhs_b, d)


def _pow_quadratic(A: int, B: int, d: int, k: int) -> tuple[int, int]:
    """(A + B sqrt d)^k as (A_k, B_k) by binary exponentiation."""
    ra, rb = 1, 0
    ba, bb = A, B
    while k:
        if k & 1:
            ra, rb = ra * ba + rb * bb * d, ra * bb + rb * ba
        ba, bb = ba * ba + bb * bb * d, 2 * ba * bb
        k >>= 1
    return ra, rb


@dataclass(frozen=True)
class DiophantineSet:
    """Primes p <= N with ||alpha p|| <= p^(-tau); exact ties flagged."""

    alpha: QuadraticIrrational
    tau: Fraction
    N: int
    primes: np.ndarray
    ties: tuple[int, ...]
    borderline_checked: int

    def count(self) -> int:
        return int(len(self.primes))


def diophantine_primes(
    alpha: QuadraticIrrational,
    tau,
    N: int,
    cap: int = SIEVE_CAP,
) -> DiophantineSet:
    """Exactly the primes p <= N passing the sharp cutoff.

    Vectorised float filter with a certified margin; only candidates inside
    the margin pay for the exact big-integer comparison.
    """
    tau = Fraction(tau)
    if tau < 0 or tau >= 1:
        raise ValueError(f"tau = {tau} outside [0, 1)")
    ps = primes_up_to(N, cap=cap)
    if tau == 0:
        return DiophantineSet(alpha, tau, N, ps, (), 0)
    dist, derr = norm_dist_array(alpha, ps)
    pf = ps.astype(np.float64)
    thr = np.exp(-float(tau) * np.log(pf))
    margin = derr + 8 * _EPS * thr + 2.0**-48
    inside = dist <= thr - margin
    outside = dist >= thr + margin
    border = ~inside & ~outside
    ties = []
    for i in np.flatnonzero(border):
        sgn = sharp_cutoff_sign(alpha, int(ps[i]), tau)
        if sgn <= 0:
            inside[i] = True
            if sgn == 0:
                ties.append(int(ps[i]))
    return DiophantineSet(
        alpha, tau, N, ps[inside], tuple(ties), int(border.sum())
    )


# ------------------------------------------------------- weighted sequences
@dataclass(frozen=True)
class WeightedSequence:
    """Coefficients n -> Lambda(n) * w(||n alpha||) for n <= N, certified.

    ``coeffs`` is dense (index 0..N, zeros off the support); ``coeff_err``
    bounds the per-entry absolute error on the support.  Plateau entries
    (w = 1 exactly) carry only the Lambda rounding error; entries outside
    the bump support are exact zeros, decided exactly on the boundary.
    """

    alpha: QuadraticIrrational
    N: int
    delta: Fraction
    coeffs: np.ndarray
    coeff_err: float
    support: np.ndarray
    tau: Optional[Fraction] = None

    def sum_interval(self) -> CertifiedInterval:
        total = math.fsum(self.coeffs[self.support])
        slack = self.coeff_err * len(self.support) + _EPS * abs(total)
        return CertifiedInterval.from_float_pm(total, slack)

    def coeff_interval(self, n: int) -> CertifiedInterval:
        v = float(self.coeffs[n])
        return CertifiedInterval.from_float_pm(v, self.coeff_err if v else 0.0)


def _classify_against(
    alpha: QuadraticIrrational,
    ns: np.ndarray,
    dist: np.ndarray,
    derr: float,
    threshold: Fraction,
) -> np.ndarray:
    """Boolean array: ||n alpha|| < threshold, exact on the margin."""
    thr = float(threshold)
    below = dist <= thr - derr
    above = dist >= thr + derr
    out = below.copy()
    for i in np.flatnonzero(~below & ~above):
        x = alpha.mul_int(int(ns[i])).dist_to_nearest_int()
        out[i] = x.cmp_fraction(threshold) < 0
    return out


def weighted_lambda_sequence(alpha: QuadraticIrrational, bump, N: int, cap: int = SIEVE_CAP) -> WeightedSequence:
    """Sequence underlying the weighted exponential sum; bump must be a
    :class:`dcl.bump.BumpFunction` built with the run's smoothing width."""
    lam, lam_err = lambda_array(N, cap=cap)
    ns = np.flatnonzero(lam)  # prime powers
    dist, derr = norm_dist_array(alpha, ns)
    delta = bump.delta
    in_support = _classify_against(alpha, ns, dist, derr, 2 * delta)
    ns_sup = ns[in_support]
    dist_sup = dist[in_support]
    on_plateau = _classify_against(alpha, ns_sup, dist_sup, derr, delta)
    # w values: 1 on the plateau, transition profile elsewhere in support
    w = np.ones(len(ns_sup), dtype=np.float64)
    w_err = np.zeros(len(ns_sup), dtype=np.float64)
    trans = ~on_plateau
    if trans.any():
        wt, et = bump.eval_transition(dist_sup[trans], derr)
        w[trans] = wt
        w_err[trans] = et
    coeffs = np.zeros(N + 1, dtype=np.float64)
    coeffs[ns_sup] = lam[ns_sup] * w
    lam_sup = lam[ns_sup]
    if len(ns_sup):
        entry_err = float(np.max(lam_sup * w_err + w * lam_err + _EPS * lam_sup * w))
    else:
        entry_err = 0.0
    return WeightedSequence(
        alpha=alpha,
        N=N,
        delta=delta,
        coeffs=coeffs,
        coeff_err=entry_err,
        support=ns_sup,
    )


def bohr_weight_sum(alpha: QuadraticIrrational, bump, N: int) -> dict:
    """Certified sum of w(||n alpha||) over 1 <= n <= N and its delta*N ratio."""
    delta = bump.delta
    total = 0.0
    total_err = 0.0
    chunk = SEGMENT_SIZE
    for lo in range(1, N + 1, chunk):
        ns = np.arange(lo, min(lo + chunk, N + 1), dtype=np.int64)
        dist, derr = norm_dist_array(alpha, ns)
        in_support = _classify_against(alpha, ns, dist, derr, 2 * delta)
        dist_sup = dist[in_support]
        ns_sup = ns[in_support]
        on_plateau = _classify_against(alpha, ns_sup, dist_sup, derr, delta)
        total += float(on_plateau.sum())
        trans = ~on_plateau
        if trans.any():
            wt, et = bump.eval_transition(dist_sup[trans], derr)
            total += math.fsum(wt)
            total_err += float(np.sum(et))
    total_err += _EPS * abs(total) * math.ceil(math.log2(max(N, 2)))
    sum_iv = CertifiedInterval.from_float_pm(total, total_err)
    ratio = sum_iv / CertifiedInterval.exact(delta * N)
    return {
        "N": N,
        "delta": str(delta),
        "sum_lo": float(sum_iv.lo),
        "sum_hi": float(sum_iv.hi),
        "ratio_lo": float(ratio.lo),
        "ratio_hi": float(ratio.hi),
        "ratio_mid": float(ratio.mid()),
    }
