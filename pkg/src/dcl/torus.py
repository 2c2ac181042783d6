"""Points on the torus R/Z: exact phases, ||.|| and rational approximation.

The phases this package manipulates are all of the form  r + m*alpha  with
r rational and m an integer, so a :class:`TorusPoint` usually carries an
*exact* backing value (``Fraction`` or :class:`QuadraticIrrational`) next
to its interval enclosure.  Exact backings make nearest-integer distances
and continued fractions decidable by integer arithmetic; interval-only
points fall back to precision escalation.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator, Optional, Union

from .errors import UndecidablePrecision
from .intervals import DEFAULT_PRECISION, CertifiedInterval
from .quadratic import QuadraticIrrational, cf_partial_quotients

ExactReal = Union[Fraction, QuadraticIrrational]


# ------------------------------------------------------ exact-value dispatch
def ex_floor(x: ExactReal) -> int:
    if isinstance(x, Fraction):
        return x.numerator // x.denominator
    return x.floor()


def ex_sub_int(x: ExactReal, k: int) -> ExactReal:
    if isinstance(x, Fraction):
        return x - k
    return x.sub_fraction(k)


def ex_mul_int(x: ExactReal, n: int) -> ExactReal:
    if isinstance(x, Fraction):
        return x * n
    return x.mul_int(n)


def ex_add(x: ExactReal, q: Fraction) -> ExactReal:
    if isinstance(x, Fraction):
        return x + q
    return x.add_fraction(q)


def ex_neg(x: ExactReal) -> ExactReal:
    return -x if isinstance(x, Fraction) else x.__neg__()


def ex_cmp_fraction(x: ExactReal, q: Fraction) -> int:
    if isinstance(x, Fraction):
        return (x > q) - (x < q)
    return x.cmp_fraction(q)


def ex_interval(x: ExactReal, prec: int) -> CertifiedInterval:
    if isinstance(x, Fraction):
        return CertifiedInterval.exact(x, prec)
    return x.interval(prec)


def ex_dist_nearest(x: ExactReal) -> ExactReal:
    """||x|| exactly; Fraction in [0, 1/2] or a quadratic irrational in (0, 1/2)."""
    if isinstance(x, Fraction):
        f = x - (x.numerator // x.denominator)
        return min(f, 1 - f)
    return x.dist_to_nearest_int()


# ----------------------------------------------------------------- TorusPoint
class TorusPoint:
    """A point of R/Z: certified interval plus optional exact backing."""

    __slots__ = ("exact", "_iv", "prec")

    def __init__(
        self,
        exact: Optional[ExactReal] = None,
        interval: Optional[CertifiedInterval] = None,
        prec: int = DEFAULT_PRECISION,
    ):
        if exact is None and interval is None:
            raise ValueError("need an exact value or an interval")
        if exact is not None:
            exact = ex_sub_int(exact, ex_floor(exact))  # reduce mod 1 to [0, 1)
        object.__setattr__(self, "exact", exact)
        object.__setattr__(self, "prec", prec)
        if interval is not None:
            # reduce by the floor of the midpoint, then verify containment
            k = math.floor(interval.mid())
            red = interval - k
            if not (-1 < red.lo and red.hi < 2):
                raise ValueError("interval too wide to reduce mod 1")
            object.__setattr__(self, "_iv", red)
        else:
            object.__setattr__(self, "_iv", None)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("TorusPoint is immutable")

    @classmethod
    def from_fraction(cls, q, prec: int = DEFAULT_PRECISION) -> "TorusPoint":
        return cls(exact=Fraction(q), prec=prec)

    @classmethod
    def from_exact(cls, x: ExactReal, prec: int = DEFAULT_PRECISION) -> "TorusPoint":
        return cls(exact=x, prec=prec)

    def interval(self, prec: Optional[int] = None) -> CertifiedInterval:
        prec = prec or self.prec
        if self.exact is not None:
            return ex_interval(self.exact, prec)
        return self._iv

    def refinable(self) -> bool:
        return self.exact is not None

    def __float__(self) -> float:
        return float(self.interval(64).mid())

    def __repr__(self) -> str:
        if self.exact is not None:
            return f"TorusPoint({self.exact!r})"
        return f"TorusPoint({self._iv!r})"


def phase(r, m: int = 0, alpha: Optional[QuadraticIrrational] = None) -> TorusPoint:
    """The exact phase r + m*alpha reduced mod 1."""
    r = Fraction(r)
    if m == 0 or alpha is None:
        if m != 0:
            raise ValueError("m != 0 requires alpha")
        return TorusPoint.from_fraction(r)
    return TorusPoint.from_exact(alpha.mul_int(m).add_fraction(r))


def shift_by_multiple(theta: TorusPoint, m: int, alpha: QuadraticIrrational) -> TorusPoint:
    """theta + m*alpha as a new TorusPoint (exact when theta is exact)."""
    if m == 0:
        return theta
    if theta.exact is None:
        return TorusPoint(interval=theta.interval() + alpha.mul_int(m).interval(theta.prec), prec=theta.prec)
    x = theta.exact
    if isinstance(x, Fraction):
        return TorusPoint.from_exact(alpha.mul_int(m).add_fraction(x))
    if not isinstance(x, QuadraticIrrational) or x.d != alpha.d:
        raise ValueError("cannot combine quadratic irrationals over different surds")
    shift = alpha.mul_int(m)
    # (a1 + b1 sqrt d)/c1 + (a2 + b2 sqrt d)/c2
    a = x.a * shift.c + shift.a * x.c
    b = x.b * shift.c + shift.b * x.c
    c = x.c * shift.c
    if b == 0:
        return TorusPoint.from_fraction(Fraction(a, c))
    return TorusPoint.from_exact(QuadraticIrrational(a, b, c, x.d))


def scale_phase(theta: TorusPoint, n: int) -> TorusPoint:
    """n * theta mod 1 (exact when theta is exact)."""
    if theta.exact is not None:
        if n == 0:
            return TorusPoint.from_fraction(0)
        return TorusPoint.from_exact(ex_mul_int(theta.exact, n))
    return TorusPoint(interval=theta.interval() * n, prec=theta.prec)


def shift_fraction(theta: TorusPoint, q) -> TorusPoint:
    """theta + q mod 1 for a rational shift q."""
    q = Fraction(q)
    if theta.exact is not None:
        return TorusPoint.from_exact(ex_add(theta.exact, q))
    return TorusPoint(interval=theta.interval() + q, prec=theta.prec)


# --------------------------------------------------------------- ||theta||
def _dist_piecewise(lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Image of [lo, hi] (width < 1) under t -> min_k |t - k|, exactly."""
    k = lo.numerator // lo.denominator
    lo, hi = lo - k, hi - k  # now lo in [0, 1), hi < 2

    def val(t: Fraction) -> Fraction:
        f = t - (t.numerator // t.denominator)
        return min(f, 1 - f)

    cands = [val(lo), val(hi)]
    vmin, vmax = min(cands), max(cands)
    for brk in (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2)):
        if lo <= brk <= hi:
            v = val(brk)
            vmin, vmax = min(vmin, v), max(vmax, v)
    return vmin, vmax


def nearest_int_distance(x: TorusPoint, prec: Optional[int] = None) -> CertifiedInterval:
    """Certified enclosure of ||x||; always a subset of [0, 1/2]."""
    prec = prec or x.prec
    if x.exact is not None:
        d = ex_dist_nearest(x.exact)
        return ex_interval(d, prec)
    iv = x.interval()
    if iv.width() >= 1:
        return CertifiedInterval(0, Fraction(1, 2), prec)
    vmin, vmax = _dist_piecewise(iv.lo, iv.hi)
    return CertifiedInterval(vmin, vmax, prec)


def exact_norm(x: TorusPoint) -> ExactReal:
    """||x|| as an exact value; requires an exact backing."""
    if x.exact is None:
        raise ValueError("point has no exact backing")
    return ex_dist_nearest(x.exact)


# --------------------------------------------- continued fractions of points
def _partial_quotients_fraction(x: Fraction) -> Iterator[int]:
    num, den = x.numerator, x.denominator
    while den:
        q, r = divmod(num, den)
        yield q
        num, den = den, r


def partial_quotients(x: ExactReal) -> Iterator[int]:
    if isinstance(x, Fraction):
        return _partial_quotients_fraction(x)
    return cf_partial_quotients(x)


def convergent_pairs(x: ExactReal) -> Iterator[tuple[int, int]]:
    """Convergents (r_k, s_k) of x; finite iff x is rational."""
    r_prev, s_prev = 1, 0
    r, s = None, None
    for q in partial_quotients(x):
        if r is None:
            r, s = q, 1
        else:
            r, r_prev = q * r + r_prev, r
            s, s_prev = q * s + s_prev, s
        yield r, s


def _dirichlet_from_exact(x: ExactReal, Q: int) -> tuple[int, int]:
    best = None
    for r, s in convergent_pairs(x):
        if s > Q:
            break
        best = (r, s)
    if best is None:  # cannot happen: s_0 = 1 <= Q for Q >= 1
        raise AssertionError("no convergent with denominator 1")
    return best


def _dirichlet_from_interval(iv: CertifiedInterval, Q: int) -> tuple[int, int]:
    """CF of an interval: quotients are taken only while both endpoints agree."""
    lo, hi = iv.lo, iv.hi
    r_prev, s_prev = 1, 0
    r, s = None, None
    while True:
        qlo = lo.numerator // lo.denominator
        qhi = hi.numerator // hi.denominator
        if qlo != qhi:
            raise UndecidablePrecision(
                "interval too wide to decide the next partial quotient"
            )
        q = qlo
        if r is None:
            r, s = q, 1
        else:
            r, r_prev = q * r + r_prev, r
            s, s_prev = q * s + s_prev, s
        if s > Q:
            return (r_prev, s_prev) if s_prev >= 1 else (r, s)
        flo, fhi = lo - q, hi - q
        if flo == 0 or fhi == 0:
            # rational endpoint reached: the current convergent is exact
            return (r, s)
        lo, hi = 1 / fhi, 1 / flo
    # unreachable


def dirichlet_approx(theta: TorusPoint, Q: int) -> tuple[int, int]:
    """Reduced fraction a/q with 1 <= q <= Q and |theta - a/q| <= 1/(q(Q+1)).

    Found by walking the continued fraction of theta: the last convergent
    with denominator <= Q inherits the Dirichlet bound from its successor.
    """
    if Q < 1:
        raise ValueError("Q must be >= 1")
    if theta.exact is not None:
        a, q = _dirichlet_from_exact(theta.exact, Q)
    else:
        a, q = _dirichlet_from_interval(theta.interval(), Q)
    g = math.gcd(a, q)
    return a // g, q // g


def best_denominator_below(x: ExactReal, q_cap: int) -> Optional[tuple[int, int]]:
    """Convergent (r, s) of x with the largest s <= q_cap; None if q_cap < 1.

    By the best-approximation theorem this minimises ||q*x|| over 1 <= q <= q_cap.
    """
    if q_cap < 1:
        return None
    best = None
    for r, s in convergent_pairs(x):
        if s > q_cap:
            break
        best = (r, s)
    return best
