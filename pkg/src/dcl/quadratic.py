"""Exact arithmetic for quadratic irrationals (a + b*sqrt(d)) / c.

All sign tests, floors and nearest-integer distances are decided by pure
integer arithmetic, so comparisons against rational thresholds are exact;
there is no hidden rounding anywhere near the sharp Diophantine cutoff.
Interval enclosures at any requested precision are available for the
analytic layers.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

import gmpy2

from .errors import SMaxTooSmall
from .intervals import CertifiedInterval, isqrt_iv

_Frac = Union[Fraction, int]


def _is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def sign_a_plus_b_sqrt_d(a: int, b: int, d: int) -> int:
    """Exact sign of a + b*sqrt(d) for nonsquare d > 0.

    Never returns 0 when b != 0 (the value is irrational then).
    """
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return 1 if b > 0 else -1
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    # opposite signs: compare a^2 with b^2 d
    lhs, rhs = a * a, b * b * d
    if a > 0:  # b < 0:  positive iff a^2 > b^2 d
        return 1 if lhs > rhs else -1
    return 1 if rhs > lhs else -1  # a < 0 < b


class QuadraticIrrational:
    """Value (a + b*sqrt(d)) / c with d a positive nonsquare, b != 0.

    Normalised so gcd(a, b, c) = 1 and c > 0.  Immutable.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: int, b: int, c: int, d: int):
        if b == 0:
            raise ValueError("b must be nonzero (value would be rational)")
        if c == 0:
            raise ValueError("c must be nonzero")
        if d <= 0 or _is_square(d):
            raise ValueError(f"d must be a positive nonsquare, got {d}")
        if c < 0:
            a, b, c = -a, -b, -c
        g = math.gcd(math.gcd(abs(a), abs(b)), c)
        object.__setattr__(self, "a", a // g)
        object.__setattr__(self, "b", b // g)
        object.__setattr__(self, "c", c // g)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("QuadraticIrrational is immutable")

    def __repr__(self) -> str:
        return f"quad({self.a},{self.b},{self.c},{self.d})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuadraticIrrational):
            return NotImplemented
        # rational parts must match, and b*sqrt(d) parts must match as
        # signed surds (handles equivalent forms like sqrt(8) = 2*sqrt(2))
        return (
            self.a * other.c == other.a * self.c
            and (self.b > 0) == (other.b > 0)
            and self.b * self.b * self.d * other.c * other.c
            == other.b * other.b * other.d * self.c * self.c
        )

    def __hash__(self):
        return hash((Fraction(self.a, self.c), (self.b > 0), Fraction(self.b**2 * self.d, self.c**2)))

    # --------------------------------------------------------------- algebra
    def sign(self) -> int:
        return sign_a_plus_b_sqrt_d(self.a, self.b, self.d)

    def __neg__(self) -> "QuadraticIrrational":
        return QuadraticIrrational(-self.a, -self.b, self.c, self.d)

    def add_fraction(self, q: _Frac) -> "QuadraticIrrational":
        q = Fraction(q)
        return QuadraticIrrational(
            self.a * q.denominator + q.numerator * self.c,
            self.b * q.denominator,
            self.c * q.denominator,
            self.d,
        )

    def sub_fraction(self, q: _Frac) -> "QuadraticIrrational":
        return self.add_fraction(-Fraction(q))

    def mul_int(self, n: int) -> "QuadraticIrrational":
        if n == 0:
            raise ValueError("multiplying by 0 would give a rational")
        return QuadraticIrrational(self.a * n, self.b * n, self.c, self.d)

    def mul_fraction(self, q: _Frac) -> "QuadraticIrrational":
        q = Fraction(q)
        if q == 0:
            raise ValueError("multiplying by 0 would give a rational")
        return QuadraticIrrational(
            self.a * q.numerator, self.b * q.numerator, self.c * q.denominator, self.d
        )

    def cmp_fraction(self, q: _Frac) -> int:
        """Exact sign of self - q (never 0: self is irrational)."""
        q = Fraction(q)
        # (a + b sqrt d)/c - p/r  with c,r > 0:  sign of (a r - p c) + b r sqrt d
        return sign_a_plus_b_sqrt_d(
            self.a * q.denominator - q.numerator * self.c,
            self.b * q.denominator,
            self.d,
        )

    def __floor__(self) -> int:
        return self.floor()

    def floor(self) -> int:
        """Exact floor via integer square root."""
        t = math.isqrt(self.b * self.b * self.d)
        if self.b >= 0:
            low = self.a + t  # low <= a + b sqrt d < low + 1
        else:
            low = self.a - t - 1  # strict on both sides, same floor lemma applies
        return low // self.c

    def fractional_part(self) -> "QuadraticIrrational":
        return self.sub_fraction(self.floor())

    def dist_to_nearest_int(self) -> "QuadraticIrrational":
        """||self|| as an exact quadratic irrational in (0, 1/2)."""
        f = self.fractional_part()
        if f.cmp_fraction(Fraction(1, 2)) < 0:
            return f
        return (-f).add_fraction(1)

    def abs_value(self) -> "QuadraticIrrational":
        return self if self.sign() > 0 else -self

    # -------------------------------------------------------------- numerics
    def interval(self, prec: int = 128) -> CertifiedInterval:
        sq = isqrt_iv(CertifiedInterval.exact(self.d, prec))
        return (sq * self.b + self.a) * Fraction(1, self.c)

    def __float__(self) -> float:
        return (self.a + self.b * math.sqrt(self.d)) / self.c

    def scaled_floor(self, shift_bits: int) -> int:
        """Exact floor(self * 2^shift_bits); feeds the fixed-point kernels."""
        s = 1 << shift_bits
        t = gmpy2.isqrt(self.b * self.b * self.d * s * s)
        low = self.a * s + (int(t) if self.b >= 0 else -int(t) - 1)
        return low // self.c


# ----------------------------------------------------------------- parsing
_QUAD_RE = re.compile(r"^quad\(\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(\d+)\s*\)$")

ALPHA_ALIASES = {
    "sqrt2": (0, 1, 1, 2),
    "phi": (1, 1, 2, 5),
    "sqrt3": (0, 1, 1, 3),
    "sqrt5": (0, 1, 1, 5),
}


def parse_alpha(text: str) -> QuadraticIrrational:
    """Parse the CLI grammar ``quad(a,b,c,d)`` or a named alias.

    Rejects rational inputs (b = 0 or d a perfect square) at parse time.
    """
    text = text.strip()
    if text in ALPHA_ALIASES:
        return QuadraticIrrational(*ALPHA_ALIASES[text])
    m = _QUAD_RE.match(text)
    if not m:
        raise ValueError(
            f"cannot parse alpha {text!r}: expected quad(a,b,c,d) or one of "
            + ", ".join(sorted(ALPHA_ALIASES))
        )
    a, b, c, d = (int(g) for g in m.groups())
    if b == 0:
        raise ValueError("alpha must be irrational: b = 0 gives a rational")
    if _is_square(d):
        raise ValueError(f"alpha must be irrational: d = {d} is a perfect square")
    return QuadraticIrrational(a, b, c, d)


# --------------------------------------------------- continued fractions
def _floor_p_sqrtD_q(P: int, D: int, Q: int, sqrtD: int) -> int:
    """Exact floor((P + sqrt(D)) / Q) for nonsquare D > 0, Q != 0."""
    if Q > 0:
        return (P + sqrtD) // Q
    # floor(x/Q) = -ceil(x/|Q|) = -(floor(x/|Q|) + 1) since x/|Q| is irrational
    return -((P + sqrtD) // (-Q)) - 1


def cf_partial_quotients(alpha: QuadraticIrrational) -> Iterator[int]:
    """Infinite stream of continued-fraction partial quotients of alpha.

    Uses the classical integer-only recurrence on the canonical form
    (P + sqrt(D)) / Q with Q | D - P^2.
    """
    b, d = alpha.b, alpha.d
    D = b * b * d
    if b >= 0:
        P, Q = alpha.a, alpha.c
    else:
        P, Q = -alpha.a, -alpha.c
    if (D - P * P) % Q != 0:
        P *= abs(Q)
        D *= Q * Q
        Q *= abs(Q)
    sqrtD = math.isqrt(D)
    while True:
        q = _floor_p_sqrtD_q(P, D, Q, sqrtD)
        yield q
        P = q * Q - P
        Q = (D - P * P) // Q


def cf_expansion(alpha: QuadraticIrrational, k: int) -> list[int]:
    """First k+1 partial quotients [a0; a1, ..., ak]."""
    if k < 0:
        raise ValueError("k must be >= 0")
    out = []
    for i, q in enumerate(cf_partial_quotients(alpha)):
        out.append(q)
        if i == k:
            break
    return out


@dataclass(frozen=True)
class Convergent:
    """Reduced fraction r/s with |alpha - r/s| <= 1/s^2."""

    r: int
    s: int

    def as_fraction(self) -> Fraction:
        return Fraction(self.r, self.s)


def convergents(alpha: QuadraticIrrational) -> Iterator[Convergent]:
    """Stream of continued-fraction convergents r_j / s_j."""
    r_prev, s_prev = 1, 0
    r, s = None, None
    for q in cf_partial_quotients(alpha):
        if r is None:
            r, s = q, 1
        else:
            r, r_prev = q * r + r_prev, r
            s, s_prev = q * s + s_prev, s
        yield Convergent(r, s)


def convergent_below(alpha: QuadraticIrrational, s_max: int) -> Convergent:
    """Convergent with the largest denominator s <= s_max (requires s >= 2)."""
    if s_max < 2:
        raise SMaxTooSmall(f"s_max = {s_max} < 2")
    best = None
    for conv in convergents(alpha):
        if conv.s > s_max:
            break
        best = conv
    if best is None or best.s < 2:
        raise SMaxTooSmall(
            f"no convergent of {alpha!r} with 2 <= s <= {s_max}"
        )
    return best


def convergent_quality_ok(alpha: QuadraticIrrational, conv: Convergent) -> bool:
    """Exact check |alpha - r/s| <= 1/s^2, i.e. |alpha*s - r| * s <= 1."""
    diff = alpha.mul_int(conv.s).sub_fraction(conv.r).abs_value()
    return diff.mul_int(conv.s).cmp_fraction(1) <= 0
