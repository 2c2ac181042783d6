"""Exponential sums over primes, exceptional sets, and the arc geometry.

Sums are evaluated by a vectorised phase recurrence: exact 64-bit
fixed-point phases are planted at block anchors (every 2^10 terms) and
advanced inside a block by one complex multiplication, which keeps the
float drift bounded and certified.  A per-term evaluation path (fresh
exact phase reduction for every n) serves as the independent cross-check.

Scales P are carried as their exact squares (coeff * N^expo), so every
membership test -- "q < P", "||theta + m alpha - a/q|| <= P/(qN)" --
reduces to a certified comparison without ever taking a square root.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .errors import (
    DisjointnessFailure,
    HypothesisViolated,
    PreconditionViolated,
    UndecidablePrecision,
)
from .intervals import CertifiedInterval, isqrt_iv, sin_pi_interval
from .params import NPower, ParameterSet
from .primes import chebyshev_psi, lambda_array
from .quadratic import QuadraticIrrational
from .rng import random_dyadic, random_dyadic_signed
from .torus import (
    TorusPoint,
    best_denominator_below,
    ex_dist_nearest,
    ex_mul_int,
    phase,
    scale_phase,
    shift_by_multiple,
    shift_fraction,
)

_EPS = 2.0**-52
_TWO_PI = 2.0 * math.pi
_BLOCK = 1 << 10
# per-term trig evaluation slack (libm sin/cos plus argument rounding);
# validated against 200-bit evaluations in the test suite
_TRIG_SLACK = 1e-14


# ------------------------------------------------------------------ scales
class Scale:
    """Positive scale P carried as its exact square (avoids surds)."""

    __slots__ = ("sq",)

    def __init__(self, sq: NPower):
        object.__setattr__(self, "sq", sq)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("Scale is immutable")

    @classmethod
    def from_fraction(cls, value: Fraction, N: int) -> "Scale":
        value = Fraction(value)
        if value <= 0:
            raise ValueError("scale must be positive")
        return cls(NPower(N, value * value, 0))

    @classmethod
    def from_npower(cls, value: NPower) -> "Scale":
        return cls(value.pow_int(2))

    def __float__(self) -> float:
        return math.sqrt(float(self.sq))

    def __repr__(self) -> str:
        return f"Scale(sqrt of {self.sq!r})"

    def cmp_fraction(self, x: Fraction) -> int:
        """Sign of P - x for x >= 0."""
        x = Fraction(x)
        if x <= 0:
            return 1
        return self.sq.cmp_fraction(x * x)

    def cmp(self, other: "Scale") -> int:
        return self.sq.cmp(other.sq)

    def q_max(self) -> int:
        """Largest integer q with q < P (0 when P <= 1)."""
        est = max(0, math.floor(float(self) + 2))
        q = est
        while q >= 1 and self.cmp_fraction(q) <= 0:
            q -= 1
        while self.cmp_fraction(q + 1) > 0:
            q += 1
        return q

    def over(self, denom: int) -> "Scale":
        """P / denom as a scale."""
        return Scale(self.sq * Fraction(1, denom * denom))

    def times(self, factor: int) -> "Scale":
        return Scale(self.sq * Fraction(factor * factor))


def scale_of_P(params: ParameterSet, j: int) -> Scale:
    return Scale.from_npower(params.P_power(j))


def cmp_dist_vs_scale(dist, scale: Scale) -> int:
    """Sign of dist - P for an exact distance (Fraction or quadratic)."""
    if isinstance(dist, Fraction):
        return -scale.cmp_fraction(dist)
    # quadratic: compare squares; the square of a quadratic may be rational
    sq_a = dist.a * dist.a + dist.b * dist.b * dist.d
    sq_b = 2 * dist.a * dist.b
    c2 = dist.c * dist.c
    if sq_b == 0:
        return -scale.sq.cmp_fraction(Fraction(sq_a, c2))
    dist_sq = QuadraticIrrational(sq_a, sq_b, c2, dist.d)
    return _cmp_quadratic_vs_npower(dist_sq, scale.sq)


def _cmp_quadratic_vs_npower(x: QuadraticIrrational, T: NPower) -> int:
    """Sign of x - T for positive x; interval escalation, exact when T rational."""
    from .intervals import precision_cap

    exact = T._exact_rational()
    if exact is not None:
        return x.cmp_fraction(exact)
    prec = 128
    while True:
        xi = x.interval(prec)
        ti = T.interval(prec)
        if xi.hi < ti.lo:
            return -1
        if xi.lo > ti.hi:
            return 1
        if prec >= precision_cap():
            raise UndecidablePrecision("quadratic vs power comparison at cap")
        prec *= 2


# ------------------------------------------------------- exponential sums
@dataclass(frozen=True)
class ExpSum:
    """Certified complex value of an exponential sum."""

    re: CertifiedInterval
    im: CertifiedInterval

    def mid(self) -> complex:
        return complex(float(self.re.mid()), float(self.im.mid()))

    def abs_interval(self) -> CertifiedInterval:
        return isqrt_iv(self.re.square() + self.im.square())

    def abs_upper(self) -> float:
        return float(self.abs_interval().hi)

    def minus(self, other: "ExpSum") -> "ExpSum":
        return ExpSum(self.re - other.re, self.im - other.im)

    def scaled(self, factor: CertifiedInterval) -> "ExpSum":
        return ExpSum(self.re * factor, self.im * factor)


def _theta_fixed_point(theta: TorusPoint) -> tuple[int, float]:
    """(floor(theta 2^64), residual bound beyond the 64-bit value)."""
    if theta.exact is not None:
        x = theta.exact
        if isinstance(x, Fraction):
            t64 = (x.numerator << 64) // x.denominator
            return t64, 2.0**-64
        return x.scaled_floor(64), 2.0**-64
    iv = theta.interval()
    mid = iv.mid()
    t64 = (mid.numerator << 64) // mid.denominator
    return t64 % (1 << 64), 2.0**-64 + float(iv.width())


def _phase_fracs(ns: np.ndarray, t64: int) -> np.ndarray:
    """frac(n * t64 / 2^64) for int64 n, exactly mod 2^64 then to float."""
    prod = ns.astype(np.uint64) * np.uint64(t64 % (1 << 64))
    return prod.astype(np.float64) * 2.0**-64


def _e_values(ns: np.ndarray, theta: TorusPoint, method: str) -> tuple[np.ndarray, float]:
    """(complex e(n theta) values, per-term modulus error bound)."""
    t64, resid = _theta_fixed_point(theta)
    n_max = int(ns.max()) if len(ns) else 1
    phase_err = n_max * resid + 2.0**-52
    if method == "perterm":
        fr = _phase_fracs(ns, t64)
        args = _TWO_PI * fr
        vals = np.cos(args) + 1j * np.sin(args)
        return vals, _TWO_PI * phase_err + _TRIG_SLACK
    if method != "blocked":
        raise ValueError(f"unknown method {method!r}")
    # phase recurrence with exact anchors every _BLOCK terms
    ks = np.arange(_BLOCK, dtype=np.int64)
    fr_k = _phase_fracs(ks, t64)
    table = np.cos(_TWO_PI * fr_k) + 1j * np.sin(_TWO_PI * fr_k)
    anchors_n = np.arange(0, n_max + 1, _BLOCK, dtype=np.int64)
    fr_a = _phase_fracs(anchors_n, t64)
    anchor = np.cos(_TWO_PI * fr_a) + 1j * np.sin(_TWO_PI * fr_a)
    vals = anchor[ns // _BLOCK] * table[ns % _BLOCK]
    err = 2 * (_TWO_PI * phase_err + _TRIG_SLACK) + 4 * _EPS
    return vals, err


def exp_sum(
    ns: np.ndarray,
    coeffs: np.ndarray,
    coeff_err: float,
    theta: TorusPoint,
    method: str = "blocked",
) -> ExpSum:
    """sum of coeffs[i] * e(ns[i] * theta) with a certified error ledger."""
    if len(ns) == 0:
        zero = CertifiedInterval.exact(0)
        return ExpSum(zero, zero)
    evals, e_err = _e_values(ns, theta, method)
    re_terms = coeffs * evals.real
    im_terms = coeffs * evals.imag
    re = float(np.sum(re_terms))
    im = float(np.sum(im_terms))
    abs_sum = float(np.sum(np.abs(coeffs)))
    depth = math.ceil(math.log2(len(ns))) + 1
    ledger = (
        abs_sum * e_err
        + len(ns) * coeff_err
        + abs_sum * _EPS  # product rounding
        + depth * _EPS * abs_sum  # pairwise summation
    )
    return ExpSum(
        CertifiedInterval.from_float_pm(re, ledger),
        CertifiedInterval.from_float_pm(im, ledger),
    )


def exp_sum_S(theta: TorusPoint, N: int, method: str = "blocked") -> ExpSum:
    """S(theta) = sum_{n <= N} Lambda(n) e(n theta)."""
    arr, err = lambda_array(N)
    ns = np.flatnonzero(arr)
    return exp_sum(ns, arr[ns], err, theta, method=method)


def exp_sum_Sw(theta: TorusPoint, seq, method: str = "blocked") -> ExpSum:
    """S_w(theta) for a WeightedSequence."""
    return exp_sum(
        seq.support, seq.coeffs[seq.support], seq.coeff_err, theta, method=method
    )


# --------------------------------------------------------- exceptional sets
@dataclass(frozen=True)
class ExceptionalSet:
    """Members m in [-M, M] whose phase theta + m alpha is P-approximable."""

    theta: TorusPoint
    P: Scale
    N: int
    M_int: int
    members: tuple[tuple[int, int, int], ...]  # (m, a_m, q_m)

    def size(self) -> int:
        return len(self.members)

    def member_set(self) -> set[int]:
        return {m for m, _, _ in self.members}


def exceptional_set(
    theta: TorusPoint,
    P: Scale,
    N: int,
    s: int,
    M_int: int,
    alpha: QuadraticIrrational,
    check_hypothesis: bool = True,
) -> ExceptionalSet:
    """E(P; theta): all |m| <= M admitting q < P with ||theta+m alpha - a/q|| <= P/(qN).

    Membership is decided through the best-approximation theorem: the
    minimum of ||q phi|| over q < P is attained at the largest convergent
    denominator of phi below P, so only O(log) exact checks are needed.
    """
    if check_hypothesis:
        # N >= 16 s P^2, compared exactly through the squared scale
        if P.sq.cmp_fraction(Fraction(N, 16 * s)) > 0:
            raise HypothesisViolated(f"N = {N} < 16 * {s} * P^2")
    if theta.exact is None:
        raise PreconditionViolated("exceptional sets need an exact phase")
    q_cap = P.q_max()
    members = []
    for m in range(-M_int, M_int + 1):
        phi = shift_by_multiple(theta, m, alpha)
        best = best_denominator_below(phi.exact, q_cap)
        if best is None:
            continue
        a, q = best
        dist = ex_dist_nearest(ex_mul_int(phi.exact, q))
        # || q phi || <= P/N  <=>  member (witness a/q)
        if cmp_dist_vs_scale(dist, P.over(N)) <= 0:
            members.append((m, a, q))
    return ExceptionalSet(theta=theta, P=P, N=N, M_int=M_int, members=tuple(members))


def exceptional_bound_ok(E: ExceptionalSet, s: int, mu: Fraction) -> bool:
    """Exact check |E| <= 16 M P^2 / s + 1 (M the real power N^mu, not its floor)."""
    excess = E.size() - 1
    if excess <= 0:
        return True
    # 16 M P^2 / s >= excess  <=>  (16/s) * N^mu * P.sq >= excess
    rhs = E.P.sq * Fraction(16, s) * NPower(E.P.sq.N, 1, Fraction(mu))
    return rhs.cmp_fraction(excess) >= 0


# ----------------------------------------------------------- geometric sums
def geometric_sum_abs(beta: TorusPoint, N: int, prec: int = 128) -> CertifiedInterval:
    """|sum_{n=1..N} e(n beta)| = |sin(pi N beta)| / |sin(pi beta)|, certified.

    Requires an exact beta with ||beta|| > 0; escalates precision until the
    denominator enclosure excludes zero.
    """
    if beta.exact is None:
        raise PreconditionViolated("geometric sums need an exact phase")
    norm_b = ex_dist_nearest(beta.exact)
    if isinstance(norm_b, Fraction) and norm_b == 0:
        return CertifiedInterval.exact(N, prec)
    norm_Nb = ex_dist_nearest(ex_mul_int(beta.exact, N))
    p = prec
    while True:
        den = sin_pi_interval(
            norm_b.interval(p) if not isinstance(norm_b, Fraction) else CertifiedInterval.exact(norm_b, p)
        )
        num = sin_pi_interval(
            norm_Nb.interval(p) if not isinstance(norm_Nb, Fraction) else CertifiedInterval.exact(norm_Nb, p)
        )
        if den.lo > 0:
            out = abs(num) / den
            cap = CertifiedInterval.exact(N, p)
            return CertifiedInterval(max(out.lo, 0), min(out.hi, cap.hi), p)
        if p >= 4096:
            raise UndecidablePrecision("sin(pi beta) enclosure straddles zero")
        p *= 2


def repulsion_bound_check(
    theta: TorusPoint,
    m: int,
    a: int,
    q: int,
    P: Scale,
    N: int,
    s: int,
    M_int: int,
    alpha: QuadraticIrrational,
    E: Optional[ExceptionalSet] = None,
) -> dict:
    """Closed-form |sum e(n(theta + m alpha - a/q))| against N q / P.

    Preconditions (verified): gcd(a, q) = 1, 2q < P, m outside E(P; theta).
    """
    if math.gcd(a, q) != 1:
        raise PreconditionViolated(f"gcd({a},{q}) != 1")
    if P.cmp_fraction(2 * q) <= 0:
        raise PreconditionViolated("need 2q < P")
    if E is None:
        E = exceptional_set(theta, P, N, s, M_int, alpha)
    if m in E.member_set():
        raise PreconditionViolated(f"m = {m} lies in E(P; theta)")
    beta = shift_fraction(shift_by_multiple(theta, m, alpha), -Fraction(a, q))
    total = geometric_sum_abs(beta, N)
    # ratio^2 = |sum|^2 * (P / (Nq))^2, so float reporting needs no surd
    ratio_scale = P.over(N * q)  # P / (Nq)
    ratio_sq_hi = float(total.square().hi) * float(ratio_scale.sq.interval(96).hi)
    norm_beta = ex_dist_nearest(beta.exact)
    norm_beta_iv = (
        CertifiedInterval.exact(norm_beta)
        if isinstance(norm_beta, Fraction)
        else norm_beta.interval(128)
    )
    min_bound = min(float(N), 1.0 / float(norm_beta_iv.lo)) if norm_beta_iv.lo > 0 else float(N)
    return {
        "m": m,
        "a": a,
        "q": q,
        "N": N,
        "sum_abs_hi": float(total.hi),
        "ratio_to_Nq_over_P": math.sqrt(max(ratio_sq_hi, 0.0)),
        "min_bound": min_bound,
        "min_bound_ok": float(total.lo) <= min_bound * (1 + 1e-12),
    }


# ------------------------------------------------------------------- arcs
_GEOMETRY_CACHE: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


@dataclass(frozen=True)
class ArcLabel:
    a: int
    q: int
    m: int


@dataclass(frozen=True)
class MajorArc:
    """theta with ||theta + m alpha - a/q|| <= P_J / (q N)."""

    label: ArcLabel
    alpha: QuadraticIrrational
    N: int
    radius: Scale  # P_J / (q N)

    def center(self) -> TorusPoint:
        return phase(Fraction(self.label.a, self.label.q), -self.label.m, self.alpha)

    def contains(self, theta: TorusPoint) -> bool:
        if theta.exact is None:
            raise PreconditionViolated("arc membership needs an exact phase")
        phi = shift_by_multiple(theta, self.label.m, self.alpha)
        shifted = (
            phi.exact - Fraction(self.label.a, self.label.q)
            if isinstance(phi.exact, Fraction)
            else phi.exact.sub_fraction(Fraction(self.label.a, self.label.q))
        )
        dist = ex_dist_nearest(shifted)
        return cmp_dist_vs_scale(dist, self.radius) <= 0

    def radius_float(self) -> float:
        return float(self.radius)


@dataclass(frozen=True)
class ArcDecomposition:
    """All major arcs for q < P_J, (a,q)=1, |m| <= M; minor arcs = complement."""

    alpha: QuadraticIrrational
    N: int
    PJ: Scale
    M_int: int
    arcs: tuple[MajorArc, ...]

    def arc_count(self) -> int:
        return len(self.arcs)

    def find_containing(self, theta: TorusPoint) -> Optional[MajorArc]:
        centers, radii = self._float_geometry()
        tf = float(theta.interval(96).mid()) % 1.0
        d = np.abs(centers - tf)
        d = np.minimum(d, 1.0 - d)
        near = np.flatnonzero(d <= radii + 1e-9)
        for idx in near:
            if self.arcs[idx].contains(theta):
                return self.arcs[idx]
        return None

    def is_minor(self, theta: TorusPoint) -> bool:
        return self.find_containing(theta) is None

    def _float_geometry(self) -> tuple[np.ndarray, np.ndarray]:
        cached = _GEOMETRY_CACHE.get(self)
        if cached is not None:
            return cached
        alpha_f = float(self.alpha.interval(96).mid())
        centers = np.array(
            [
                (arc.label.a / arc.label.q - arc.label.m * alpha_f) % 1.0
                for arc in self.arcs
            ],
            dtype=np.float64,
        )
        radii = np.array([arc.radius_float() for arc in self.arcs], dtype=np.float64)
        _GEOMETRY_CACHE[self] = (centers, radii)
        return centers, radii

    def major_measure_upper(self) -> float:
        _, radii = self._float_geometry()
        return float(np.sum(2.0 * radii)) * (1 + 1e-9)




def build_arc_decomposition(
    alpha: QuadraticIrrational,
    N: int,
    PJ: Scale,
    M_int: int,
    verify_disjoint: bool = False,
) -> ArcDecomposition:
    """Enumerate the arcs in deterministic (q, a, m) order."""
    arcs = []
    for q in range(1, PJ.q_max() + 1):
        radius = PJ.over(q * N)
        for a in range(1, q + 1):
            if math.gcd(a, q) != 1:
                continue
            for m in range(-M_int, M_int + 1):
                arcs.append(
                    MajorArc(label=ArcLabel(a=a, q=q, m=m), alpha=alpha, N=N, radius=radius)
                )
    decomp = ArcDecomposition(alpha=alpha, N=N, PJ=PJ, M_int=M_int, arcs=tuple(arcs))
    if verify_disjoint:
        bad = disjointness_scan(decomp)
        if bad:
            raise DisjointnessFailure(f"{len(bad)} intersecting arc pairs, e.g. {bad[0]}")
    return decomp


def decomposition_from_params(
    params: ParameterSet,
    override_PJ: Optional[Fraction] = None,
    override_M: Optional[int] = None,
    verify_disjoint: bool = False,
) -> ArcDecomposition:
    PJ = (
        Scale.from_fraction(override_PJ, params.N)
        if override_PJ is not None
        else scale_of_P(params, params.J)
    )
    M_int = override_M if override_M is not None else params.m_max()
    return build_arc_decomposition(
        params.alpha, params.N, PJ, M_int, verify_disjoint=verify_disjoint
    )


def disjointness_scan(decomp: ArcDecomposition) -> list[tuple[ArcLabel, ArcLabel]]:
    """Exact pairwise intersection scan (float prefilter, certified escalation).

    Two closed arcs intersect iff the torus distance of their centers is at
    most the sum of the radii; the prefilter certifies separation whenever
    the float gap clears a rigorous error allowance, and borderline pairs
    are settled exactly.
    """
    arcs = decomp.arcs
    n = len(arcs)
    centers, radii = decomp._float_geometry()
    # center floats carry |m| * alpha rounding; radii are tiny; 1e-10 covers both
    allowance = 1e-10 + 4 * _EPS * (decomp.M_int + 2)
    suspects = []
    for i in range(n - 1):
        d = np.abs(centers[i + 1 :] - centers[i])
        d = np.minimum(d, 1.0 - d)
        close = np.flatnonzero(d <= radii[i + 1 :] + radii[i] + allowance)
        for off in close:
            suspects.append((i, i + 1 + int(off)))
    violations = []
    for i, j in suspects:
        if _arcs_intersect_exact(arcs[i], arcs[j]):
            violations.append((arcs[i].label, arcs[j].label))
    return violations


def _arcs_intersect_exact(arc1: MajorArc, arc2: MajorArc) -> bool:
    l1, l2 = arc1.label, arc2.label
    dm = l1.m - l2.m
    dq = Fraction(l2.a, l2.q) - Fraction(l1.a, l1.q)
    if dm == 0:
        if dq == 0:
            return True  # identical label
        sep = min(abs(dq) % 1, 1 - abs(dq) % 1)
        sep_exact: Union[Fraction, QuadraticIrrational] = sep
    else:
        val = arc1.alpha.mul_int(dm).add_fraction(-dq)
        sep_exact = val.dist_to_nearest_int()
    # intersect iff sep <= r1 + r2, with r_i = PJ/(q_i N) rational multiples
    # of the same PJ: r1 + r2 = PJ (q1 + q2) / (q1 q2 N), a single Scale
    combined = Scale(
        arc1.radius.sq
        * Fraction((l1.q + l2.q) ** 2, l2.q**2)  # PJ^2/(q1 N)^2 * ((q1+q2)/q2)^2
    )
    return cmp_dist_vs_scale(sep_exact, combined) <= 0


# --------------------------------------------------- prime-sum bound report
def vinogradov_bound_report(
    beta: TorusPoint, a: int, q: int, N: int, method: str = "blocked"
) -> dict:
    """|S(beta)| against (log N)^4 (N q^-1/2 + N^4/5 + (Nq)^1/2); report only.

    The implied constant is not asserted; the unconditional |S| <= psi(N)
    check is.  Requires gcd(a,q) = 1, |beta - a/q| <= 1/q^2 and N >= q.
    """
    if math.gcd(a, q) != 1:
        raise PreconditionViolated(f"gcd({a},{q}) != 1")
    if N < q:
        raise PreconditionViolated("need N >= q")
    if beta.exact is None:
        raise PreconditionViolated("beta needs an exact backing")
    diff = ex_dist_nearest(
        ex_add_signed(beta.exact, -Fraction(a, q))
    )
    bad = (
        diff > Fraction(1, q * q)
        if isinstance(diff, Fraction)
        else diff.cmp_fraction(Fraction(1, q * q)) > 0
    )
    if bad:
        raise PreconditionViolated("|beta - a/q| > 1/q^2")
    S = exp_sum_S(beta, N, method=method)
    absS = S.abs_interval()
    from .intervals import ilog, ipow

    Ni = CertifiedInterval.exact(N)
    logN4 = ipow(ilog(Ni), Fraction(4))
    rhs = logN4 * (
        Ni / isqrt_iv(CertifiedInterval.exact(q))
        + ipow(Ni, Fraction(4, 5))
        + isqrt_iv(Ni * q)
    )
    psi = chebyshev_psi(N)
    return {
        "a": a,
        "q": q,
        "N": N,
        "abs_S": float(absS.mid()),
        "rhs": float(rhs.mid()),
        "ratio": float(absS.mid()) / float(rhs.mid()),
        "psi": float(psi.mid()),
        "abs_S_le_psi": bool(absS.hi <= psi.hi + 1e-6),
    }


def ex_add_signed(x, q: Fraction):
    """x + q as an exact value (no mod-1 reduction)."""
    if isinstance(x, Fraction):
        return x + q
    return x.add_fraction(q)


# ----------------------------------------------- major-arc approximation
def _radius_lower_fraction(radius: Scale, bits: int = 96) -> Fraction:
    iv = isqrt_iv(radius.sq.interval(bits))
    return max(iv.lo, Fraction(0))


def major_arc_approx_check(
    arc: MajorArc,
    seq,
    wcoeffs,
    normalizer: CertifiedInterval,
    seed: int,
    n_random: int = 8,
    widen: int = 1,
    method: str = "blocked",
) -> dict:
    """Per-arc deviations E1 = |S_w(t) - w^(m) S(t + m a)| and the doubled
    companion E2 = |S_w(-2t) - w^(-2m) S(-2(t + m a))|, normalised.

    ``widen=2`` samples from the arc of doubled width (the companion
    estimate can be read against either width; both are reported upstream).
    """
    from .rng import generator

    label = arc.label
    center = arc.center()
    r_rat = _radius_lower_fraction(arc.radius) * widen
    gen = generator(seed, f"arc-{label.a}-{label.q}-{label.m}-{widen}")
    offsets = [Fraction(0), Fraction(1), Fraction(-1)]
    offsets += [random_dyadic_signed(gen) for _ in range(n_random)]
    w_m = wcoeffs.value(label.m)
    w_2m = wcoeffs.value(2 * label.m)
    e1_max = 0.0
    e2_max = 0.0
    for t in offsets:
        theta = shift_fraction(center, t * r_rat)
        shifted = shift_by_multiple(theta, label.m, arc.alpha)  # rational point
        Sw = exp_sum_Sw(theta, seq, method=method)
        S = exp_sum_S(shifted, seq.N, method=method)
        e1 = Sw.minus(S.scaled(w_m)).abs_interval()
        theta2 = scale_phase(theta, -2)
        shifted2 = scale_phase(shifted, -2)
        Sw2 = exp_sum_Sw(theta2, seq, method=method)
        S2 = exp_sum_S(shifted2, seq.N, method=method)
        e2 = Sw2.minus(S2.scaled(w_2m)).abs_interval()
        e1_max = max(e1_max, float(e1.hi))
        e2_max = max(e2_max, float(e2.hi))
    norm_lo = float(normalizer.lo)
    return {
        "a": label.a,
        "q": label.q,
        "m": label.m,
        "widen": widen,
        "samples": len(offsets),
        "E1_max": e1_max,
        "E2_max": e2_max,
        "E1_normalized": e1_max / norm_lo,
        "E2_normalized": e2_max / norm_lo,
    }


# -------------------------------------------------- minor-arc sup sampling
def minor_arc_sup_sample(
    decomp: ArcDecomposition,
    seq,
    K_samples: int,
    seed: int,
    normalizer: CertifiedInterval,
    wcoeffs=None,
    method: str = "blocked",
) -> dict:
    """Max of |S_w| over K points drawn from the minor arcs by rejection.

    Every retained sample is verified to lie outside all arcs (exactly on
    the borderline cases).  When Fourier data is supplied, the maximum of
    |w^(0) S(a/q)| over the m = 0 arc centers is reported for contrast.
    """
    from .rng import generator

    gen = generator(seed, "minor-arc-sampling")
    samples: list[TorusPoint] = []
    rejected = 0
    while len(samples) < K_samples:
        theta = TorusPoint.from_fraction(random_dyadic(gen))
        if decomp.is_minor(theta):
            samples.append(theta)
        else:
            rejected += 1
    best = 0.0
    norm_lo = float(normalizer.lo)
    values = []
    for theta in samples:
        v = exp_sum_Sw(theta, seq, method=method).abs_upper()
        values.append(v / norm_lo)
        best = max(best, v)
    contrast = None
    if wcoeffs is not None:
        w0 = float(wcoeffs.value(0).mid())
        contrast = 0.0
        seen = set()
        for arc in decomp.arcs:
            if arc.label.m != 0 or (arc.label.a, arc.label.q) in seen:
                continue
            seen.add((arc.label.a, arc.label.q))
            c = phase(Fraction(arc.label.a, arc.label.q))
            v = exp_sum_S(c, seq.N, method=method).abs_upper() * abs(w0)
            contrast = max(contrast, v / norm_lo)
    return {
        "samples": K_samples,
        "rejected": rejected,
        "max_normalized": best / norm_lo,
        "normalized_values_max": max(values) if values else 0.0,
        "center_m0_normalized_max": contrast,
    }
