"""Smooth plateau bump on the torus and its certified Fourier data.

The profile is the standard smooth partition-of-unity step built from
g(u) = exp(-1/u): psi(t) = 1 for t <= 1, 0 for t >= 2 and
psi(t) = g(2-t) / (g(2-t) + g(t-1)) in between, so w_delta(x) =
psi(||x|| / delta) is C-infinity, equals 1 on [-delta, delta] and vanishes
outside [-2 delta, 2 delta].  psi(t) + psi(3 - t) = 1, which makes the
mass integral exactly 3*delta.

Fourier coefficients come from the uniform-grid rectangle rule (spectrally
accurate for smooth periodic integrands), with the grid doubled until two
successive results agree to 2^-40; the observed difference is folded into
the certified interval together with the float evaluation ledger.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .errors import DeltaOutOfRange, QuadratureNotConverged
from .intervals import CertifiedInterval, iexp
from .torus import TorusPoint, nearest_int_distance

_Frac = Union[Fraction, int]
_EPS = 2.0**-52

# sup |psi'| on [1,2] is exactly 2 (attained at t = 3/2); validated in tests
PSI_SLOPE = 2.5
# absolute float64 evaluation error of the transition profile; validated
# against 200-bit arithmetic on dense grids in the test suite
PSI_EVAL_ERR = 1e-14

MAX_QUAD_NODES = 1 << 24


def _g_interval(u: Fraction, prec: int = 128) -> CertifiedInterval:
    """g(u) = exp(-1/u) for u >= 0, as a certified interval."""
    if u <= 0:
        return CertifiedInterval.exact(0, prec)
    return iexp(CertifiedInterval.exact(-1 / u, prec))


def psi_interval(t: Fraction, prec: int = 128) -> CertifiedInterval:
    """Certified value of the transition profile at an exact rational t."""
    if t <= 1:
        return CertifiedInterval.exact(1, prec)
    if t >= 2:
        return CertifiedInterval.exact(0, prec)
    ga = _g_interval(2 - t, prec)
    gb = _g_interval(t - 1, prec)
    return ga / (ga + gb)


def psi_float(t: np.ndarray) -> np.ndarray:
    """Vectorised float64 transition profile on clipped arguments in [1, 2]."""
    t = np.clip(t, 1.0, 2.0)
    with np.errstate(divide="ignore", over="ignore"):
        ga = np.exp(-1.0 / (2.0 - t))
        gb = np.exp(-1.0 / (t - 1.0))
    return ga / (ga + gb)


class BumpFunction:
    """Even smooth weight w(x) = psi(||x|| / delta); 1 on the plateau,
    0 outside [-2 delta, 2 delta].  delta must lie in (0, 1/4)."""

    __slots__ = ("delta",)

    def __init__(self, delta: _Frac):
        delta = Fraction(delta)
        if not (0 < delta < Fraction(1, 4)):
            raise DeltaOutOfRange(f"delta = {delta} outside (0, 1/4)")
        object.__setattr__(self, "delta", delta)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("BumpFunction is immutable")

    def __repr__(self) -> str:
        return f"BumpFunction(delta={self.delta})"

    # ------------------------------------------------------------ evaluation
    def eval_at_dist(self, dist, prec: int = 128) -> CertifiedInterval:
        """w as a function of the distance ||x|| (exact Fraction or interval)."""
        d = self.delta
        if isinstance(dist, CertifiedInterval):
            if dist.hi <= d:
                return CertifiedInterval.exact(1, prec)
            if dist.lo >= 2 * d:
                return CertifiedInterval.exact(0, prec)
            # psi is nonincreasing: bracket by the endpoint evaluations
            lo_val = psi_interval(dist.hi / d, prec).lo
            hi_val = psi_interval(max(dist.lo, 0) / d, prec).hi
            return CertifiedInterval(max(lo_val, 0), min(hi_val, 1), prec)
        return psi_interval(Fraction(dist) / d, prec)

    def eval_point(self, x: TorusPoint, prec: int = 128) -> CertifiedInterval:
        if x.exact is not None:
            from .torus import ex_dist_nearest, ex_cmp_fraction

            dist = ex_dist_nearest(x.exact)
            if isinstance(dist, Fraction):
                return self.eval_at_dist(dist, prec)
            # quadratic distance: exact support/plateau tests, interval inside
            if dist.cmp_fraction(self.delta) <= 0:
                return CertifiedInterval.exact(1, prec)
            if dist.cmp_fraction(2 * self.delta) >= 0:
                return CertifiedInterval.exact(0, prec)
            return self.eval_at_dist(dist.interval(prec), prec)
        return self.eval_at_dist(nearest_int_distance(x, prec), prec)

    def eval_transition(self, dists: np.ndarray, in_err: float) -> tuple[np.ndarray, np.ndarray]:
        """Float64 profile values for distances known to lie in the open
        transition band (delta, 2 delta); returns (values, per-entry error)."""
        df = float(self.delta)
        t = dists / df
        w = psi_float(t)
        t_err = in_err / df + 4 * _EPS * t
        err = PSI_SLOPE * t_err + PSI_EVAL_ERR
        return w, err

    def sample_grid(self, K: int) -> tuple[np.ndarray, float]:
        """w at the K uniform nodes k/K, with a per-sample error bound.

        Plateau and support membership of each node is decided exactly
        (the nodes are rationals), so errors only live on the transition."""
        k = np.arange(K, dtype=np.int64)
        num = np.minimum(k, K - k)  # ||k/K|| = num / K
        dnum, dden = self.delta.numerator, self.delta.denominator
        # num/K <= delta  <=>  num * dden <= dnum * K   (exact integers)
        plateau = num * dden <= dnum * K
        outside = num * dden >= 2 * dnum * K
        vals = np.zeros(K, dtype=np.float64)
        vals[plateau] = 1.0
        trans = ~plateau & ~outside
        if trans.any():
            t = num[trans].astype(np.float64) / (K * float(self.delta))
            vals[trans] = psi_float(t)
        # node t-values carry only float conversion error (<= ~10 ulp in t)
        samp_err = PSI_SLOPE * 16 * _EPS + PSI_EVAL_ERR
        return vals, samp_err

    def mass_interval(self, prec: int = 128) -> CertifiedInterval:
        """integral of w over the torus; equals 3*delta exactly by symmetry."""
        return CertifiedInterval.exact(3 * self.delta, prec)


# ---------------------------------------------------------------- Fourier
@dataclass(frozen=True)
class FourierCoeffs:
    """Certified coefficients hat-w(l) for |l| <= L (real, even in l)."""

    delta: Fraction
    L: int
    values: np.ndarray  # midpoints, index l = 0..L
    errors: np.ndarray  # per-coefficient absolute bounds
    quadrature_points: int
    quad_diff: float

    def value(self, ell: int) -> CertifiedInterval:
        ell = abs(ell)
        if ell > self.L:
            raise IndexError(f"|l| = {ell} beyond computed band {self.L}")
        return CertifiedInterval.from_float_pm(
            float(self.values[ell]), float(self.errors[ell])
        )

    def mid(self, ell: int) -> float:
        return float(self.values[abs(ell)])

    def err(self, ell: int) -> float:
        return float(self.errors[abs(ell)])


def _grid_coeffs(bump: BumpFunction, L: int, K: int) -> tuple[np.ndarray, float]:
    vals, samp_err = bump.sample_grid(K)
    spec = np.fft.rfft(vals) / K
    c = spec.real[: L + 1].copy()
    imag_max = float(np.max(np.abs(spec.imag[: L + 1]))) if L >= 0 else 0.0
    mean_abs = float(np.mean(np.abs(vals)))
    fft_err = 6 * _EPS * math.log2(K) * mean_abs
    ledger = samp_err + fft_err + imag_max
    return c, ledger


def fourier_coeffs(bump: BumpFunction, L: int, tol: float = 2.0**-40) -> FourierCoeffs:
    """All coefficients with |l| <= L, rectangle rule with doubling certificate."""
    if L < 0:
        raise ValueError("L must be >= 0")
    K = max(4096, 64 * L, math.ceil(64 / float(bump.delta)))
    K = 1 << (K - 1).bit_length()  # round up to a power of two
    prev, prev_ledger = _grid_coeffs(bump, L, K)
    while True:
        K2 = 2 * K
        if K2 > MAX_QUAD_NODES:
            raise QuadratureNotConverged(f"no convergence by K = {K} nodes")
        cur, cur_ledger = _grid_coeffs(bump, L, K2)
        diff = float(np.max(np.abs(cur - prev)))
        if diff < tol:
            errors = np.abs(cur - prev) + cur_ledger + tol
            return FourierCoeffs(
                delta=bump.delta,
                L=L,
                values=cur,
                errors=errors,
                quadrature_points=K2,
                quad_diff=diff,
            )
        prev, prev_ledger, K = cur, cur_ledger, K2


def fourier_coefficient(bump: BumpFunction, ell: int) -> CertifiedInterval:
    """Single certified coefficient hat-w(ell)."""
    return fourier_coeffs(bump, abs(ell)).value(ell)


def truncation_error_report(bump: BumpFunction, L: int, A: int, grid: int = 1 << 14) -> dict:
    """Empirical sup of |w - S_L(w)| over a dense grid, with envelope fits.

    The classical truncation envelope is reported in two normalisations:
    the (1 + L/delta)^-A form and the scale-invariant (1 + L*delta)^-A
    form that matches how the tail sum is actually applied downstream.
    """
    if L < 1 or A < 1:
        raise ValueError("need L, A >= 1")
    K = max(grid, 4 * L)
    K = 1 << (K - 1).bit_length()
    vals, samp_err = bump.sample_grid(K)
    spec = np.fft.rfft(vals)
    spec[L + 1 :] = 0.0
    partial = np.fft.irfft(spec, n=K)
    emp = float(np.max(np.abs(vals - partial)))
    d = float(bump.delta)
    env_over = (1.0 + L / d) ** (-A)
    env_scaled = (1.0 + L * d) ** (-A)
    return {
        "delta": str(bump.delta),
        "L": L,
        "A": A,
        "grid": K,
        "empirical_sup": emp,
        "sample_err": samp_err,
        "envelope_over_delta": env_over,
        "fitted_const_over_delta": emp / env_over,
        "envelope_times_delta": env_scaled,
        "fitted_const_times_delta": emp / env_scaled,
    }


def decay_fit(fc: FourierCoeffs, A: int) -> dict:
    """Fitted constants for |hat-w(l)| <= C (1 + |l| d)^-A * d over l >= 1.

    The literal (1 + l/d)^-A normalisation is reported alongside; it is not
    scale-stable (the fitted constant grows like d^(1-2A)) and is kept for
    reference only.
    """
    d = float(fc.delta)
    ls = np.arange(1, fc.L + 1, dtype=np.float64)
    mags = np.abs(fc.values[1:]) + fc.errors[1:]
    c_scaled = float(np.max(mags * (1.0 + ls * d) ** A / d))
    c_literal = float(np.max(mags * (1.0 + ls / d) ** A))
    return {
        "delta": str(fc.delta),
        "A": A,
        "L": fc.L,
        "C_scaled": c_scaled,
        "C_literal": c_literal,
    }


def coeff_bound_4delta_ok(fc: FourierCoeffs) -> bool:
    """Exact check |hat-w(l)| <= 4 delta for every computed l."""
    cap = float(4 * fc.delta)
    return bool(np.all(np.abs(fc.values) + fc.errors <= cap))


# ---------------------------------------------------- triple convolution
def convolution_triple_sum(bump: BumpFunction, L: int) -> dict:
    """sum over |l| <= L of hat-w(l)^2 hat-w(-2l), certified, plus the
    direct-space oracle (w * w * v)(0) with v(x) = w(||x||/2)/2 by 2-D
    rectangle quadrature with doubling."""
    if L < 1:
        raise ValueError("L must be >= 1")
    fc = fourier_coeffs(bump, 2 * L)
    mids = fc.values
    errs = fc.errors
    ls = np.arange(1, L + 1)
    # hat-w is even, so hat-w(-2l) = hat-w(2l)
    term_mids = mids[ls] ** 2 * mids[2 * ls]
    term_errs = (
        2 * np.abs(mids[ls]) * np.abs(mids[2 * ls]) * errs[ls]
        + mids[ls] ** 2 * errs[2 * ls]
        + 4 * _EPS * np.abs(term_mids)
    )
    total_mid = float(mids[0] ** 3 + 2 * math.fsum(term_mids))
    total_err = float(
        3 * mids[0] ** 2 * errs[0] + 2 * math.fsum(term_errs) + 16 * _EPS * abs(total_mid)
    )
    fourier_sum = CertifiedInterval.from_float_pm(total_mid, total_err)
    direct = _triple_convolution_at_zero(bump)
    return {
        "delta": str(bump.delta),
        "L": L,
        "fourier_lo": float(fourier_sum.lo),
        "fourier_hi": float(fourier_sum.hi),
        "direct_lo": float(direct.lo),
        "direct_hi": float(direct.hi),
        "ratio_to_delta_sq": total_mid / float(bump.delta) ** 2,
        "fourier": fourier_sum,
        "direct": direct,
    }


def _v_samples(bump: BumpFunction, K: int) -> tuple[np.ndarray, float]:
    """v(k/K) = w(||k/K|| / 2) / 2 on the K-grid, with error bound."""
    k = np.arange(K, dtype=np.int64)
    num = np.minimum(k, K - k)
    # distance argument num/(2K) against plateau delta and support 2 delta
    dnum, dden = bump.delta.numerator, bump.delta.denominator
    plateau = num * dden <= 2 * dnum * K
    outside = num * dden >= 4 * dnum * K
    vals = np.zeros(K, dtype=np.float64)
    vals[plateau] = 0.5
    trans = ~plateau & ~outside
    if trans.any():
        t = num[trans].astype(np.float64) / (2 * K * float(bump.delta))
        vals[trans] = 0.5 * psi_float(t)
    samp_err = 0.5 * (PSI_SLOPE * 16 * _EPS + PSI_EVAL_ERR)
    return vals, samp_err


def _triple_quad(bump: BumpFunction, K: int) -> tuple[float, float]:
    w, w_err = bump.sample_grid(K)
    v, v_err = _v_samples(bump, K)
    # (1/K^2) sum_j sum_k w_j w_{(k-j) mod K} v_k, as K dot products
    acc = 0.0
    w_rev = w[::-1].copy()
    for k in range(K):
        ww = float(np.dot(w, np.roll(w_rev, k + 1)))
        acc += ww * float(v[k])
    total = acc / (K * K)
    # sample perturbations (all values in [0,1]) plus summation rounding
    ledger = (2 * w_err + v_err) + 8 * _EPS * K
    return total, ledger


def _triple_convolution_at_zero(bump: BumpFunction, tol: float = 2.0**-38) -> CertifiedInterval:
    K = max(2048, math.ceil(16 / float(bump.delta)))
    K = 1 << (K - 1).bit_length()
    prev, _ = _triple_quad(bump, K)
    while True:
        K *= 2
        if K > 1 << 16:
            raise QuadratureNotConverged("triple convolution quadrature did not settle")
        cur, cur_err = _triple_quad(bump, K)
        if abs(cur - prev) < tol:
            return CertifiedInterval.from_float_pm(cur, abs(cur - prev) + cur_err + tol)
        prev = cur


def export_coeffs_csv(fc: FourierCoeffs, path) -> None:
    """Write l, lo, hi, error_bound rows for l = -L..L."""
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["ell", "lo", "hi", "error_bound"])
        for ell in range(-fc.L, fc.L + 1):
            iv = fc.value(ell)
            writer.writerow([ell, repr(float(iv.lo)), repr(float(iv.hi)), repr(fc.err(ell))])
