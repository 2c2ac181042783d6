"""Parameter system: exponent bookkeeping and validated scale hierarchies.

Quantities of the form  coeff * N^exponent  (with rational coefficient and
exponent) are first-class here: comparisons go through interval logarithms
with precision escalation and fall back to exact big-integer power
comparisons, so every validation verdict is certified.  Desk-scale bundles
that violate only the asymptotic ("for N large enough") facts are accepted
with warnings; violating a defining inequality raises ValidationFailed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import gmpy2

from .errors import (
    MuOutOfRange,
    NoAdmissibleMu,
    NoSuchN,
    PreconditionViolated,
    UndecidablePrecision,
    ValidationFailed,
)
from .intervals import CertifiedInterval, iexp, ilog, ipow, round_down
from .quadratic import Convergent, QuadraticIrrational, convergent_below

_Frac = Union[Fraction, int]

# bump widths are snapped onto this dyadic grid and capped just below 1/4
DELTA_CAP = Fraction(24, 100)
DELTA_GRID_BITS = 24

# exact fallback for power comparisons refuses to build integers beyond this
_EXACT_CMP_BIT_LIMIT = 200_000_000


class NPower:
    """Positive quantity coeff * N^expo with exact comparison support."""

    __slots__ = ("N", "coeff", "expo")

    def __init__(self, N: int, coeff: _Frac, expo: _Frac):
        if N < 2:
            raise ValueError("N must be >= 2")
        coeff = Fraction(coeff)
        if coeff <= 0:
            raise ValueError("coefficient must be positive")
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "expo", Fraction(expo))

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("NPower is immutable")

    def __repr__(self) -> str:
        return f"NPower({self.coeff} * {self.N}^{self.expo})"

    # ---------------------------------------------------------------- algebra
    def __mul__(self, other: "NPower") -> "NPower":
        if isinstance(other, NPower):
            if other.N != self.N:
                raise ValueError("mixed N")
            return NPower(self.N, self.coeff * other.coeff, self.expo + other.expo)
        return NPower(self.N, self.coeff * Fraction(other), self.expo)

    __rmul__ = __mul__

    def __truediv__(self, other: "NPower") -> "NPower":
        if isinstance(other, NPower):
            if other.N != self.N:
                raise ValueError("mixed N")
            return NPower(self.N, self.coeff / other.coeff, self.expo - other.expo)
        return NPower(self.N, self.coeff / Fraction(other), self.expo)

    def pow_int(self, k: int) -> "NPower":
        return NPower(self.N, self.coeff**k, self.expo * k)

    # -------------------------------------------------------------- numerics
    def interval(self, prec: int = 128) -> CertifiedInterval:
        n_iv = CertifiedInterval.exact(self.N, prec)
        return ipow(n_iv, self.expo) * self.coeff

    def __float__(self) -> float:
        # exponent may overflow a float; go through log10
        lg = self.log10_float()
        if lg > 300:
            return math.inf
        return float(self.interval(64).mid())

    def log10_float(self) -> float:
        return float(self.expo) * math.log10(self.N) + math.log10(float(self.coeff))

    def _exact_rational(self) -> Optional[Fraction]:
        """Exact value when N^expo happens to be rational, else None."""
        u, v = self.expo.numerator, self.expo.denominator
        if v == 1:
            return self.coeff * Fraction(self.N) ** u
        root, exactp = gmpy2.iroot(gmpy2.mpz(self.N), v)
        if not exactp:
            return None
        return self.coeff * Fraction(int(root)) ** u

    def cmp_fraction(self, q: _Frac) -> int:
        """Exact sign of self - q."""
        q = Fraction(q)
        if q <= 0:
            return 1
        # self <=> q   <=>   N^expo <=> q / coeff
        rho = q / self.coeff
        x = self.expo
        if x == 0:
            return (1 > rho) - (1 < rho)
        u, v = x.numerator, x.denominator
        # interval-log decision first
        prec = 128
        while prec <= 2048:
            lhs = ilog(CertifiedInterval.exact(self.N, prec)) * u
            rhs = ilog(CertifiedInterval.exact(rho, prec)) * v
            if lhs.hi < rhs.lo:
                return -1
            if lhs.lo > rhs.hi:
                return 1
            prec *= 2
        # near-tie: decide exactly via N^u * den^v  vs  num^v
        num, den = rho.numerator, rho.denominator
        bits = abs(u) * self.N.bit_length() + v * max(num.bit_length(), den.bit_length())
        if bits > _EXACT_CMP_BIT_LIMIT:
            raise UndecidablePrecision("power comparison too large for exact fallback")
        if u > 0:
            lhs_i = gmpy2.mpz(self.N) ** u * gmpy2.mpz(den) ** v
            rhs_i = gmpy2.mpz(num) ** v
        else:
            lhs_i = gmpy2.mpz(den) ** v
            rhs_i = gmpy2.mpz(num) ** v * gmpy2.mpz(self.N) ** (-u)
        return (lhs_i > rhs_i) - (lhs_i < rhs_i)

    def cmp(self, other: "NPower") -> int:
        if other.N != self.N:
            raise ValueError("mixed N")
        ratio = NPower(self.N, self.coeff / other.coeff, self.expo - other.expo)
        return ratio.cmp_fraction(1)

    def le(self, other) -> bool:
        if isinstance(other, NPower):
            return self.cmp(other) <= 0
        return self.cmp_fraction(other) <= 0

    def floor(self) -> int:
        exact = self._exact_rational()
        if exact is not None:
            return exact.numerator // exact.denominator
        prec = 128
        while prec <= 4096:
            iv = self.interval(prec)
            flo = iv.lo.numerator // iv.lo.denominator
            fhi = iv.hi.numerator // iv.hi.denominator
            if flo == fhi:
                return flo
            prec *= 2
        raise UndecidablePrecision("floor of power undecided at precision cap")

    def dyadic_lower(self, bits: int = DELTA_GRID_BITS) -> Fraction:
        """Largest multiple of 2^-bits that is <= the exact value."""
        exact = self._exact_rational()
        if exact is not None:
            return round_down(exact, bits)
        prec = max(128, 4 * bits)
        while prec <= 4096:
            iv = self.interval(prec)
            lo_snap = round_down(iv.lo, bits)
            hi_snap = round_down(iv.hi, bits)
            if lo_snap == hi_snap:
                return lo_snap
            prec *= 2
        # value sits essentially on a grid point; the lower snap is still valid
        return round_down(self.interval(4096).lo, bits)


# --------------------------------------------------------------- choices
def choose_J(mu: _Frac) -> int:
    """Unique J >= 1 with 4^J > (1-5mu)/(1-8mu) >= 4^(J-1)."""
    mu = Fraction(mu)
    if not (0 < mu < Fraction(1, 8)):
        raise MuOutOfRange(f"mu = {mu} outside (0, 1/8)")
    ratio = (1 - 5 * mu) / (1 - 8 * mu)
    J = 1
    while not (4**J > ratio):
        J += 1
    assert ratio >= 4 ** (J - 1)
    return J


def eta_upper_bound(mu: Fraction, J: int) -> Fraction:
    return (4**J * (1 - 8 * mu) - (1 - 5 * mu)) / (16 * (4**J - 1))


def choose_eta(mu: _Frac, J: int) -> Fraction:
    """Deterministic eta: min(1/40, half the admissible upper bound)."""
    mu = Fraction(mu)
    bound = eta_upper_bound(mu, J)
    if bound <= 0:
        raise MuOutOfRange(f"eta bound nonpositive for mu={mu}, J={J}")
    eta = min(Fraction(1, 40), bound / 2)
    assert 0 < eta < Fraction(1, 20) and eta < bound
    assert eta < (1 - 8 * mu) / 4
    return eta


def p_exponents(mu: Fraction, eta: Fraction, J: int) -> list[Fraction]:
    """Exponents p_1 > ... > p_J of the scale hierarchy."""
    gap = (1 - 8 * mu) / 4 - eta
    return [Fraction(1, 4) - Fraction(2 * 4**j - 5, 3) * gap for j in range(1, J + 1)]


def derive_N(
    alpha: QuadraticIrrational, s_target: int, mu: _Frac, eta: _Frac
) -> tuple[Convergent, int]:
    """Largest N with floor(N^(1-4mu-2eta)) = s, for the best convergent s <= s_target."""
    conv = convergent_below(alpha, s_target)
    s = conv.s
    c = 1 - 4 * Fraction(mu) - 2 * Fraction(eta)
    if not (0 < c < 1):
        raise PreconditionViolated(f"exponent 1-4mu-2eta = {c} outside (0,1)")
    u, v = c.numerator, c.denominator
    if s < 1:
        raise NoSuchN("s below the solvable range")
    # N maximal with N^u < (s+1)^v
    hi = gmpy2.mpz(s + 1) ** v - 1
    N = int(gmpy2.iroot(hi, u)[0])
    if N < 2 or gmpy2.mpz(N) ** u < gmpy2.mpz(s) ** v:
        raise NoSuchN(f"no N with floor(N^{c}) = {s}")
    return conv, N


def mu_star(t: int) -> Fraction:
    """Solution of 4^t = (1-5mu)/(1-8mu)."""
    return Fraction(4**t - 1, 8 * 4**t - 5)


def choose_goldbach_mu(tau: _Frac, max_t: int = 64) -> tuple[int, Fraction]:
    """Smallest m with tau < mu_m^* < 1/8, and the midpoint mu of the largest
    subinterval of (tau, mu_m^*) on which J(mu) = m and the Goldbach chain
        2(1-5mu)/3 - 4^m (1-8mu)/6 > (1-5mu)/3 > mu
    holds (all endpoints are exact rationals, so no scanning is needed)."""
    tau = Fraction(tau)
    if not (0 < tau < Fraction(1, 8)):
        raise PreconditionViolated(f"tau = {tau} outside (0, 1/8)")
    m = 1
    while mu_star(m) <= tau:
        m += 1
        if m > max_t:
            raise NoAdmissibleMu(f"tau = {tau} too close to 1/8 for t <= {max_t}")
    hi = mu_star(m)
    # J(mu) = m exactly on [mu_{m-1}^*, mu_m^*); chain inequality (first part)
    # reduces to mu > (4^m - 2)/(8*4^m - 10); second part is mu < 1/8 (always).
    lo = max(tau, mu_star(m - 1) if m > 1 else Fraction(0), Fraction(4**m - 2, 8 * 4**m - 10))
    if not lo < hi:
        raise NoAdmissibleMu(f"empty admissible interval for tau = {tau}")
    mu = (lo + hi) / 2
    assert choose_J(mu) == m
    assert 2 * (1 - 5 * mu) / 3 - 4**m * (1 - 8 * mu) / 6 > (1 - 5 * mu) / 3 > mu
    return m, mu


# ------------------------------------------------------------- ParameterSet
@dataclass(frozen=True)
class ParameterSet:
    """Validated bundle (tau, mu, eta, J, N, s, r, scales); immutable."""

    alpha: QuadraticIrrational
    tau: Fraction
    mu: Fraction
    eta: Fraction
    J: int
    N: int
    s: int
    r: int
    p: tuple[Fraction, ...]
    goldbach: bool = False
    checks: tuple[dict, ...] = field(default_factory=tuple)
    warnings: tuple[dict, ...] = field(default_factory=tuple)

    # ------------------------------------------------------- derived values
    def delta_power(self) -> NPower:
        return NPower(self.N, 1, -self.tau)

    def M_power(self) -> NPower:
        return NPower(self.N, 1, self.mu)

    def P_power(self, j: int) -> NPower:
        if not 1 <= j <= self.J:
            raise IndexError(f"j = {j} outside 1..{self.J}")
        return NPower(self.N, Fraction(1, 256), self.p[j - 1])

    def m_max(self) -> int:
        return self.M_power().floor()

    def P_floor(self, j: int) -> int:
        return self.P_power(j).floor()

    def delta_effective(self) -> Fraction:
        """Rational bump width: N^-tau snapped down to the dyadic grid and
        capped below 1/4 (desk-scale N makes the nominal value too large)."""
        return effective_delta(self.N, self.tau)

    def delta_clipped(self) -> bool:
        return self.delta_power().cmp_fraction(DELTA_CAP) >= 0

    def normalizer(self, n_exponent: Fraction, delta_exponent: int = 1) -> NPower:
        """delta^k * N^x with the effective (rational) delta."""
        return NPower(self.N, self.delta_effective() ** delta_exponent, n_exponent)

    def describe(self) -> dict:
        return {
            "alpha": repr(self.alpha),
            "tau": str(self.tau),
            "mu": str(self.mu),
            "eta": str(self.eta),
            "J": self.J,
            "N": self.N,
            "s": self.s,
            "r": self.r,
            "p_exponents": [str(p) for p in self.p],
            "delta_log10": -float(self.tau) * math.log10(self.N),
            "delta_effective": str(self.delta_effective()),
            "delta_clipped": self.delta_clipped(),
            "M_floor": self.m_max(),
            "P_floors": [self.P_floor(j) for j in range(1, self.J + 1)],
            "goldbach_mode": self.goldbach,
            "checks": list(self.checks),
            "warnings": list(self.warnings),
        }


def effective_delta(N: int, tau: Fraction) -> Fraction:
    """Rational smoothing width for (N, tau): N^-tau snapped down onto the
    dyadic grid, capped at DELTA_CAP when desk-scale N pushes it past 1/4."""
    nominal = NPower(N, 1, -Fraction(tau))
    if nominal.cmp_fraction(DELTA_CAP) >= 0:
        return DELTA_CAP
    snapped = nominal.dyadic_lower(DELTA_GRID_BITS)
    if snapped <= 0:
        snapped = Fraction(1, 1 << DELTA_GRID_BITS)
    return snapped


@dataclass(frozen=True)
class DeskBundle:
    """Parameter bundle anchored at a caller-chosen N (sums must fit in the
    sieve cap, so the exact s = floor(N^c) coupling to a convergent
    denominator is generally unavailable; the nearest convergent below the
    floor is used and the mismatch is recorded)."""

    alpha: QuadraticIrrational
    tau: Fraction
    mu: Fraction
    eta: Fraction
    J: int
    N: int
    s: int
    r: int
    delta: Fraction
    coupling_exact: bool
    goldbach: bool

    def normalizer(self, n_exponent: Fraction, delta_power: int = 1) -> CertifiedInterval:
        base = ipow(CertifiedInterval.exact(self.N), Fraction(n_exponent))
        return base * (self.delta**delta_power)

    def describe(self) -> dict:
        return {
            "alpha": repr(self.alpha),
            "tau": str(self.tau),
            "mu": str(self.mu),
            "eta": str(self.eta),
            "J": self.J,
            "N": self.N,
            "s": self.s,
            "r": self.r,
            "delta": str(self.delta),
            "delta_float": float(self.delta),
            "coupling_exact": self.coupling_exact,
            "goldbach_mode": self.goldbach,
        }


def desk_parameters(
    alpha: QuadraticIrrational,
    tau: _Frac,
    N: int,
    mu: Optional[_Frac] = None,
    goldbach: bool = False,
) -> DeskBundle:
    """Exponent bundle for a run at a fixed desk N."""
    tau = Fraction(tau)
    if not (0 < tau < Fraction(1, 8)):
        raise PreconditionViolated(f"tau = {tau} outside (0, 1/8)")
    if mu is None:
        mu = choose_goldbach_mu(tau)[1] if goldbach else (tau + Fraction(1, 8)) / 2
    mu = Fraction(mu)
    J = choose_J(mu)
    eta = choose_eta(mu, J)
    c = 1 - 4 * mu - 2 * eta
    u, v = c.numerator, c.denominator
    s_floor = int(gmpy2.iroot(gmpy2.mpz(N) ** u, v)[0])
    conv = convergent_below(alpha, max(s_floor, 2))
    coupling = gmpy2.mpz(conv.s) ** v <= gmpy2.mpz(N) ** u < gmpy2.mpz(conv.s + 1) ** v
    return DeskBundle(
        alpha=alpha,
        tau=tau,
        mu=mu,
        eta=eta,
        J=J,
        N=N,
        s=conv.s,
        r=conv.r,
        delta=effective_delta(N, tau),
        coupling_exact=bool(coupling),
        goldbach=goldbach,
    )


def _margin_log10(lhs: NPower, rhs: NPower) -> float:
    return rhs.log10_float() - lhs.log10_float()


def _check(name: str, lhs: NPower, rhs: NPower, report: list) -> bool:
    ok = lhs.le(rhs)
    report.append(
        {
            "name": name,
            "lhs_log10": lhs.log10_float(),
            "rhs_log10": rhs.log10_float(),
            "satisfied": bool(ok),
            "margin_log10": _margin_log10(lhs, rhs),
        }
    )
    return ok


def build_parameter_set(
    alpha: QuadraticIrrational,
    tau: _Frac,
    mu: _Frac,
    s_target: int,
    goldbach: bool = False,
) -> ParameterSet:
    """Derive and validate the full parameter bundle.

    Raises ValidationFailed (with the violated inequality names) when a
    defining inequality fails; asymptotic facts that need huge N are
    reported as warnings instead.
    """
    tau, mu = Fraction(tau), Fraction(mu)
    if not (0 < tau < mu < Fraction(1, 8)):
        raise PreconditionViolated(f"need 0 < tau < mu < 1/8, got tau={tau}, mu={mu}")
    J = choose_J(mu)
    eta = choose_eta(mu, J)
    conv, N = derive_N(alpha, s_target, mu, eta)
    s, r = conv.s, conv.r
    p = p_exponents(mu, eta, J)

    checks: list[dict] = []
    ok = True

    # exact rational facts about the exponents
    ratio = (1 - 5 * mu) / (1 - 8 * mu)
    for name, cond in [
        ("J_two_sided", 4**J > ratio >= 4 ** (J - 1)),
        ("eta_window", 0 < eta < min(Fraction(1, 20), eta_upper_bound(mu, J))),
        ("p_strictly_decreasing", all(p[i] > p[i + 1] for i in range(J - 1))),
        ("pJ_ge_eta", p[-1] >= eta),
        ("p1_identity", p[0] == 2 * mu + eta),
    ]:
        checks.append(
            {"name": name, "lhs_log10": None, "rhs_log10": None, "satisfied": bool(cond), "margin_log10": None}
        )
        ok &= cond

    # s coupling, exact big-integer check
    c = 1 - 4 * mu - 2 * eta
    u, v = c.numerator, c.denominator
    s_ok = gmpy2.mpz(s) ** v <= gmpy2.mpz(N) ** u < gmpy2.mpz(s + 1) ** v
    checks.append(
        {"name": "s_floor_identity", "lhs_log10": None, "rhs_log10": None, "satisfied": bool(s_ok), "margin_log10": None}
    )
    ok &= s_ok

    P = [NPower(N, Fraction(1, 256), pj) for pj in p]
    M2 = NPower(N, 1, 2 * mu)
    N_eta = NPower(N, 1, eta)
    sqrtNs_sq = NPower(N, Fraction(1, 256 * s), 1)  # ((1/16) sqrt(N/s))^2
    for j in range(J):
        ok &= _check(f"N_eta_over_256_le_P{j + 1}", NPower(N, Fraction(1, 256), eta), P[j], checks)
        ok &= _check(f"P{j + 1}_le_sqrtNs_over16", P[j].pow_int(2), sqrtNs_sq, checks)
    ok &= _check("sqrtNs_over16_le_N_quarter", sqrtNs_sq, NPower(N, 256, Fraction(1, 2)), checks)

    for j in range(J - 1):
        lhs = N_eta * M2 * P[j].pow_int(4) * Fraction(1, s * s)
        ok &= _check(f"recursion_P{j + 1}_to_P{j + 2}", lhs, P[j + 1], checks)
    ok &= _check("M2_Neta_over256_le_P1", M2 * N_eta * Fraction(1, 256), P[0], checks)

    # (P_J)^2 <= (1/256) * s/(2M)
    ok &= _check(
        "PJ_le_sqrt_s_over_2M_over16",
        P[-1].pow_int(2),
        NPower(N, Fraction(s, 512), -mu),
        checks,
    )

    warnings: list[dict] = []
    for j in range(J):
        if P[j].cmp_fraction(1) <= 0:
            warnings.append(
                {"name": f"P{j + 1}_le_1", "note": "scale below 1 at this N; asymptotic fact needs larger N"}
            )
    if gmpy2.mpz(s) ** 2 < gmpy2.mpz(N):
        warnings.append({"name": "s_lt_sqrtN", "note": "s >= sqrt(N) needs larger N"})

    if goldbach:
        expo_ok = p[-1] > mu + eta
        checks.append(
            {"name": "pJ_gt_mu_plus_eta", "lhs_log10": None, "rhs_log10": None, "satisfied": bool(expo_ok), "margin_log10": None}
        )
        ok &= expo_ok
        if P[-1].cmp(NPower(N, 1, mu + eta)) < 0:
            warnings.append(
                {"name": "PJ_lt_N_mu_eta", "note": "P_J >= N^(mu+eta) at this N needs larger N"}
            )

    pset = ParameterSet(
        alpha=alpha,
        tau=tau,
        mu=mu,
        eta=eta,
        J=J,
        N=N,
        s=s,
        r=r,
        p=tuple(p),
        goldbach=goldbach,
        checks=tuple(checks),
        warnings=tuple(warnings),
    )
    if not ok:
        raise ValidationFailed([c["name"] for c in checks if not c["satisfied"]])
    return pset
