"""Dyadic-endpoint interval arithmetic with outward rounding.

Every operation returns an interval that contains the exact result.
Endpoints are ``Fraction`` values whose denominators are powers of two;
after each operation they are rounded outward onto the 2^-prec grid so
bit growth stays bounded.  Transcendental kernels (exp, log, sqrt, pi,
sin, cos) delegate to MPFR through gmpy2 with explicit directed-rounding
contexts, so their enclosures are rigorous, not heuristic.

Comparisons between overlapping intervals are *undecided* rather than
wrong: predicates return ``None`` and callers escalate precision through
:func:`refine_until`, which raises :class:`UndecidablePrecision` at the
configured cap.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Optional, TypeVar, Union

import gmpy2

from .errors import UndecidablePrecision

DEFAULT_PRECISION = 128
PRECISION_CAP = 4096

_precision_cap = PRECISION_CAP


def set_precision_cap(bits: int) -> None:
    """Global ceiling for adaptive-precision escalation."""
    global _precision_cap
    if bits < 128:
        raise ValueError("precision cap must be >= 128 bits")
    _precision_cap = bits


def precision_cap() -> int:
    return _precision_cap

_Frac = Union[Fraction, int]

T = TypeVar("T")


def _dyadic_shift(x: Fraction, prec: int) -> int:
    """Grid exponent giving ~prec significant bits for x != 0."""
    mag = x.numerator.bit_length() - x.denominator.bit_length()
    return prec - mag


def _is_short_dyadic(x: Fraction, prec: int) -> bool:
    d = x.denominator
    return d & (d - 1) == 0 and x.numerator.bit_length() <= prec + 64


def round_down(x: Fraction, prec: int) -> Fraction:
    """Largest dyadic with ~prec significant bits that is <= x.

    Floating-style rounding: the grid scales with the magnitude of x, so
    arbitrarily small positive values never collapse to zero.
    """
    if x == 0 or _is_short_dyadic(x, prec):
        return x
    shift = _dyadic_shift(x, prec)
    if shift >= 0:
        return Fraction((x.numerator << shift) // x.denominator, 1 << shift)
    return Fraction((x.numerator // (x.denominator << -shift)) << -shift)


def round_up(x: Fraction, prec: int) -> Fraction:
    """Smallest dyadic with ~prec significant bits that is >= x."""
    if x == 0 or _is_short_dyadic(x, prec):
        return x
    shift = _dyadic_shift(x, prec)
    if shift >= 0:
        return Fraction(-((-x.numerator << shift) // x.denominator), 1 << shift)
    return Fraction(-((-x.numerator // (x.denominator << -shift))) << -shift)


class CertifiedInterval:
    """Closed real interval [lo, hi] with dyadic endpoints.

    Immutable after construction; safe to share between workers.
    """

    __slots__ = ("lo", "hi", "prec")

    def __init__(self, lo: _Frac, hi: _Frac, prec: int = DEFAULT_PRECISION):
        lo = Fraction(lo)
        hi = Fraction(hi)
        if lo > hi:
            raise ValueError(f"inverted interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", round_down(lo, prec))
        object.__setattr__(self, "hi", round_up(hi, prec))
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("CertifiedInterval is immutable")

    # ------------------------------------------------------------------ basic
    @classmethod
    def exact(cls, x: _Frac, prec: int = DEFAULT_PRECISION) -> "CertifiedInterval":
        return cls(x, x, prec)

    @classmethod
    def from_float_pm(cls, mid: float, err: float, prec: int = 64) -> "CertifiedInterval":
        """Interval mid +- err from a float computation with an error ledger."""
        m = Fraction(mid)
        e = Fraction(err)
        return cls(m - e, m + e, prec)

    def width(self) -> Fraction:
        return self.hi - self.lo

    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def mag(self) -> Fraction:
        """sup |x| over the interval."""
        return max(abs(self.lo), abs(self.hi))

    def mig(self) -> Fraction:
        """inf |x| over the interval (0 if the interval straddles 0)."""
        if self.lo <= 0 <= self.hi:
            return Fraction(0)
        return min(abs(self.lo), abs(self.hi))

    def contains(self, x: _Frac) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "CertifiedInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def overlaps(self, other: "CertifiedInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __float__(self) -> float:
        return float(self.mid())

    def __repr__(self) -> str:
        return f"CI[{float(self.lo)!r}, {float(self.hi)!r}]"

    # ------------------------------------------------------------- arithmetic
    def _coerce(self, other) -> "CertifiedInterval":
        if isinstance(other, CertifiedInterval):
            return other
        return CertifiedInterval.exact(other, self.prec)

    def __add__(self, other) -> "CertifiedInterval":
        o = self._coerce(other)
        p = min(self.prec, o.prec)
        return CertifiedInterval(self.lo + o.lo, self.hi + o.hi, p)

    __radd__ = __add__

    def __neg__(self) -> "CertifiedInterval":
        return CertifiedInterval(-self.hi, -self.lo, self.prec)

    def __sub__(self, other) -> "CertifiedInterval":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "CertifiedInterval":
        return self._coerce(other) - self

    def __mul__(self, other) -> "CertifiedInterval":
        o = self._coerce(other)
        p = min(self.prec, o.prec)
        cands = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return CertifiedInterval(min(cands), max(cands), p)

    __rmul__ = __mul__

    def inverse(self) -> "CertifiedInterval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval contains zero")
        return CertifiedInterval(1 / self.hi, 1 / self.lo, self.prec)

    def __truediv__(self, other) -> "CertifiedInterval":
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other) -> "CertifiedInterval":
        return self._coerce(other) * self.inverse()

    def __abs__(self) -> "CertifiedInterval":
        return CertifiedInterval(self.mig(), self.mag(), self.prec)

    def square(self) -> "CertifiedInterval":
        a = abs(self)
        return CertifiedInterval(a.lo * a.lo, a.hi * a.hi, self.prec)

    def hull(self, other: "CertifiedInterval") -> "CertifiedInterval":
        return CertifiedInterval(
            min(self.lo, other.lo), max(self.hi, other.hi), min(self.prec, other.prec)
        )

    def widen(self, slack: _Frac) -> "CertifiedInterval":
        s = Fraction(slack)
        return CertifiedInterval(self.lo - s, self.hi + s, self.prec)

    # ------------------------------------------------------------ comparisons
    def cmp_fraction(self, x: _Frac) -> Optional[int]:
        """-1 / 0 / +1 if the interval lies below / pins exactly / lies above x.

        ``None`` when x is interior to a non-degenerate interval (undecided).
        """
        if self.hi < x:
            return -1
        if self.lo > x:
            return 1
        if self.lo == self.hi == x:
            return 0
        return None

    def le(self, other) -> Optional[bool]:
        o = self._coerce(other)
        if self.hi <= o.lo:
            return True
        if self.lo > o.hi:
            return False
        return None

    def lt(self, other) -> Optional[bool]:
        o = self._coerce(other)
        if self.hi < o.lo:
            return True
        if self.lo >= o.hi:
            return False
        return None


# -------------------------------------------------------------------- mpfr io
def _to_mpfr_pair(x: Fraction):
    return gmpy2.mpq(x.numerator, x.denominator)


def _from_mpfr(v) -> Fraction:
    if gmpy2.is_nan(v) or gmpy2.is_infinite(v):
        raise OverflowError(f"mpfr result not finite: {v}")
    n, d = v.as_integer_ratio()
    return Fraction(int(n), int(d))


def _mpfr_down(fn: Callable, x: Fraction, prec: int) -> Fraction:
    with gmpy2.context(precision=prec + 16, round=gmpy2.RoundDown):
        return _from_mpfr(fn(_to_mpfr_pair(x)))


def _mpfr_up(fn: Callable, x: Fraction, prec: int) -> Fraction:
    with gmpy2.context(precision=prec + 16, round=gmpy2.RoundUp):
        return _from_mpfr(fn(_to_mpfr_pair(x)))


def _monotone(fn: Callable, x: CertifiedInterval, increasing: bool = True) -> CertifiedInterval:
    if increasing:
        lo, hi = x.lo, x.hi
    else:
        lo, hi = x.hi, x.lo
    return CertifiedInterval(
        _mpfr_down(fn, lo, x.prec), _mpfr_up(fn, hi, x.prec), x.prec
    )


def iexp(x: CertifiedInterval) -> CertifiedInterval:
    return _monotone(gmpy2.exp, x)


def ilog(x: CertifiedInterval) -> CertifiedInterval:
    if x.lo <= 0:
        raise ValueError("log of interval touching (-inf, 0]")
    return _monotone(gmpy2.log, x)


def isqrt_iv(x: CertifiedInterval) -> CertifiedInterval:
    if x.lo < 0:
        raise ValueError("sqrt of negative interval")
    return _monotone(gmpy2.sqrt, x)


def ipi(prec: int = DEFAULT_PRECISION) -> CertifiedInterval:
    with gmpy2.context(precision=prec + 16, round=gmpy2.RoundDown):
        lo = _from_mpfr(gmpy2.const_pi())
    with gmpy2.context(precision=prec + 16, round=gmpy2.RoundUp):
        hi = _from_mpfr(gmpy2.const_pi())
    return CertifiedInterval(lo, hi, prec)


def ipow(x: CertifiedInterval, y: Fraction) -> CertifiedInterval:
    """x^y for x > 0 and exact rational exponent y, via exp(y*log x)."""
    if y == 0:
        return CertifiedInterval.exact(1, x.prec)
    if y.denominator == 1 and abs(y.numerator) <= 64:
        n = y.numerator
        out = CertifiedInterval.exact(1, x.prec)
        base = x if n > 0 else x.inverse()
        for _ in range(abs(n)):
            out = out * base
        return out
    return iexp(ilog(x) * CertifiedInterval.exact(y, x.prec))


def _sin_point(x: Fraction, prec: int) -> CertifiedInterval:
    return CertifiedInterval(
        _mpfr_down(gmpy2.sin, x, prec), _mpfr_up(gmpy2.sin, x, prec), prec
    )


def _cos_point(x: Fraction, prec: int) -> CertifiedInterval:
    return CertifiedInterval(
        _mpfr_down(gmpy2.cos, x, prec), _mpfr_up(gmpy2.cos, x, prec), prec
    )


def cos_sin_tau(t: CertifiedInterval) -> tuple[CertifiedInterval, CertifiedInterval]:
    """Enclosures of cos(2*pi*t) and sin(2*pi*t).

    The phase t is reduced mod 1 by the caller; here we only need correct
    handling of the extrema of cos/sin inside the (typically very narrow)
    interval: cos peaks at t in Z and troughs at t in Z + 1/2, sin peaks at
    Z + 1/4 and troughs at Z + 3/4.
    """
    prec = t.prec
    if t.width() >= 1:
        full = CertifiedInterval(-1, 1, prec)
        return full, full
    two_pi = ipi(prec) * 2
    arg = two_pi * t
    c_ends = _cos_point(arg.lo, prec).hull(_cos_point(arg.hi, prec))
    s_ends = _sin_point(arg.lo, prec).hull(_sin_point(arg.hi, prec))

    def crosses(crit_num: int, crit_den: int) -> bool:
        # does [t.lo, t.hi] contain a point congruent to crit_num/crit_den mod 1?
        k_lo = (t.lo - Fraction(crit_num, crit_den)).__ceil__()
        return t.lo <= k_lo + Fraction(crit_num, crit_den) <= t.hi

    c_lo, c_hi = c_ends.lo, c_ends.hi
    if crosses(0, 1):
        c_hi = Fraction(1)
    if crosses(1, 2):
        c_lo = Fraction(-1)
    s_lo, s_hi = s_ends.lo, s_ends.hi
    if crosses(1, 4):
        s_hi = Fraction(1)
    if crosses(3, 4):
        s_lo = Fraction(-1)
    return (
        CertifiedInterval(max(c_lo, -1), min(c_hi, 1), prec),
        CertifiedInterval(max(s_lo, -1), min(s_hi, 1), prec),
    )


def sin_pi_interval(t: CertifiedInterval) -> CertifiedInterval:
    """Enclosure of sin(pi*t); used for |sum e(n beta)| = |sin(pi N beta) / sin(pi beta)|."""
    prec = t.prec
    if t.width() >= 1:
        return CertifiedInterval(-1, 1, prec)
    arg = ipi(prec) * t
    ends = _sin_point(arg.lo, prec).hull(_sin_point(arg.hi, prec))
    lo, hi = ends.lo, ends.hi
    k_lo = (t.lo - Fraction(1, 2)).__ceil__()
    if t.lo <= k_lo + Fraction(1, 2) <= t.hi:
        if k_lo % 2 == 0:
            hi = Fraction(1)
        else:
            lo = Fraction(-1)
    return CertifiedInterval(max(lo, -1), min(hi, 1), prec)


# --------------------------------------------------------------- escalation
def refine_until(
    evaluate: Callable[[int], CertifiedInterval],
    decide: Callable[[CertifiedInterval], Optional[T]],
    start_bits: int = DEFAULT_PRECISION,
    max_bits: Optional[int] = None,
) -> T:
    """Evaluate at doubling precision until ``decide`` returns a verdict.

    ``decide`` maps an enclosure to a result or ``None`` (undecided).
    Raises :class:`UndecidablePrecision` past ``max_bits`` (defaults to the
    global precision cap).
    """
    bits = start_bits
    cap = max_bits if max_bits is not None else _precision_cap
    while True:
        verdict = decide(evaluate(bits))
        if verdict is not None:
            return verdict
        if bits >= cap:
            raise UndecidablePrecision(
                f"comparison undecided at precision cap {cap} bits"
            )
        bits = min(2 * bits, cap)
