"""Desk-scale additive experiments: three-term progressions and Goldbach.

Counting quantities are never obtained by torus quadrature: orthogonality
turns them into exact coefficient convolutions, evaluated on scaled
fixed-point integers through the NTT with the scaling error folded into
certified intervals.  A direct double/triple loop provides the
independent oracle at small N.  Quadrature appears only in the major/minor
arc split, where the split itself is the object under study.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .bump import BumpFunction, fourier_coeffs
from .circle import ArcDecomposition, exp_sum_Sw
from .errors import OddN, PreconditionViolated
from .intervals import CertifiedInterval, ipow
from .ntt import convolve_residues, crt_lift_array, select_primes, weighted_pairing_mod
from .params import DeskBundle, desk_parameters
from .primes import (
    DiophantineSet,
    WeightedSequence,
    diophantine_primes,
    lambda_array,
    primes_up_to,
    weighted_lambda_sequence,
)
from .quadratic import QuadraticIrrational
from .torus import TorusPoint, scale_phase, shift_fraction

_EPS = 2.0**-52
_SCALE_BITS = 48

DIRECT_ORACLE_MAX = 10**4
FAST_PATH_MAX = 10**6


# ---------------------------------------------------------------- fixed point
def _to_scaled_ints(coeffs: np.ndarray, err: float) -> tuple[np.ndarray, float]:
    """Round to 2^-48 fixed point; returns (int64 array, per-entry error of
    the scaled representation against the true coefficients)."""
    scaled = np.rint(coeffs * float(1 << _SCALE_BITS)).astype(np.int64)
    # rint of values below 2^15 with 48 fractional bits is exact in float64
    rep_err = 2.0 ** (-_SCALE_BITS - 1) + err
    return scaled, rep_err


@dataclass(frozen=True)
class TripleCount:
    """Weighted progression count sum_{n1+n3=2n2} prod coeffs, certified."""

    N: int
    weighted_total: CertifiedInterval
    trivial_total: CertifiedInterval
    direct_oracle: Optional[CertifiedInterval]
    ratio_to_delta2N2: Optional[float]
    triples: tuple[tuple[int, int, int], ...] = ()
    trivial_count: int = 0


def threeAP_weighted_count(
    seq: WeightedSequence, run_oracle: Optional[bool] = None
) -> TripleCount:
    """Exact-convolution evaluation of the weighted progression count.

    The NTT path is exact on the scaled integers; the certified interval
    covers only the fixed-point representation error.  Below
    DIRECT_ORACLE_MAX a direct per-midpoint loop re-derives the value
    through an independent route.
    """
    N = seq.N
    if N > FAST_PATH_MAX:
        raise PreconditionViolated(f"N = {N} beyond the convolution path cap")
    c = seq.coeffs
    scaled, rep_err = _to_scaled_ints(c, seq.coeff_err)
    cmax = float(np.max(np.abs(c))) + rep_err if len(seq.support) else 0.0
    s_max = int(np.max(np.abs(scaled))) if len(scaled) else 0
    if s_max == 0:
        zero = CertifiedInterval.exact(0)
        return TripleCount(N, zero, zero, zero, None)
    # upper bound on sum |scaled| (float sum, padded): only used for sizing
    s_sum = int(float(np.sum(np.abs(scaled), dtype=np.float64)) * (1 + 1e-9)) + 1

    primes = select_primes(s_sum * s_sum * s_max)
    _, table = convolve_residues(scaled, scaled, primes)
    # pair conv[2 n2] with coeff[n2]
    idx = np.arange(1, N + 1, dtype=np.int64) * 2
    weights = scaled[1 : N + 1]
    total_int = weighted_pairing_mod(table, weights, idx, bound=s_sum * s_sum * s_max)

    # triple-sum perturbation: #triples * 3 * rep_err * (max coeff)^2
    n_triples = _triple_constraint_count(N)
    ledger = 3.0 * rep_err * (cmax + rep_err) ** 2 * n_triples
    total_exact = Fraction(total_int, 1 << (3 * _SCALE_BITS))
    weighted_total = CertifiedInterval(
        total_exact - Fraction(ledger), total_exact + Fraction(ledger)
    )

    triv_int = sum(int(x) ** 3 for x in scaled[seq.support])
    triv_exact = Fraction(triv_int, 1 << (3 * _SCALE_BITS))
    triv_ledger = 3.0 * rep_err * (cmax + rep_err) ** 2 * (len(seq.support) + 1)
    trivial_total = CertifiedInterval(
        triv_exact - Fraction(triv_ledger), triv_exact + Fraction(triv_ledger)
    )

    oracle = None
    if run_oracle or (run_oracle is None and N <= DIRECT_ORACLE_MAX):
        oracle = _direct_triple_oracle(c, seq.coeff_err, N)

    ratio = None
    if seq.delta:
        denom = float(seq.delta) ** 2 * float(N) ** 2
        ratio = float(weighted_total.mid()) / denom
    return TripleCount(
        N=N,
        weighted_total=weighted_total,
        trivial_total=trivial_total,
        direct_oracle=oracle,
        ratio_to_delta2N2=ratio,
    )


def _triple_constraint_count(N: int) -> int:
    # number of (n1, n2, n3) in [1,N]^3 with n1 + n3 = 2 n2
    total = 0
    for n2 in range(1, N + 1):
        lo = max(1, 2 * n2 - N)
        hi = min(N, 2 * n2 - 1)
        if hi >= lo:
            total += hi - lo + 1
    return total


def _direct_triple_oracle(c: np.ndarray, err: float, N: int) -> CertifiedInterval:
    """Independent float evaluation: per-midpoint reversed dot products."""
    total = 0.0
    cmax = float(np.max(np.abs(c)))
    for n2 in range(1, N + 1):
        lo = max(1, 2 * n2 - N)
        hi = min(N, 2 * n2 - 1)
        if hi < lo:
            continue
        window = c[lo : hi + 1]
        partner = c[2 * n2 - hi : 2 * n2 - lo + 1][::-1]
        total += float(np.dot(window, partner)) * float(c[n2])
    n_triples = _triple_constraint_count(N)
    ledger = n_triples * (3 * err * (cmax + err) ** 2 + 6 * _EPS * cmax**3) + abs(total) * _EPS * 64
    return CertifiedInterval.from_float_pm(total, ledger)


# ----------------------------------------------------------- sharp triples
def verify_triple(
    alpha: QuadraticIrrational, tau: Fraction, triple: tuple[int, int, int]
) -> bool:
    """Re-verification with machinery independent of the search path:
    trial-division primality plus a 200-bit interval cutoff check."""
    p1, p2, p3 = triple
    if p1 + p3 != 2 * p2 or p1 == p3:
        return False
    for p in triple:
        if not _trial_division_prime(p):
            return False
        if tau == 0:
            continue
        dist = alpha.mul_int(p).dist_to_nearest_int().interval(200)
        thr = ipow(CertifiedInterval.exact(p, 200), -Fraction(tau))
        if not dist.hi <= thr.lo:
            return False
    return True


def _trial_division_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def threeAP_prime_triples(
    alpha: QuadraticIrrational,
    tau,
    N: int,
    limit: int = 10,
    dioph: Optional[DiophantineSet] = None,
) -> list[tuple[int, int, int]]:
    """Up to ``limit`` non-trivial progressions p1 < p2 < p3 inside the sharp
    Diophantine set, ordered by p2 then p1.  Every emitted triple passes
    the independent re-verification."""
    tau = Fraction(tau)
    if dioph is None:
        dioph = diophantine_primes(alpha, tau, N)
    ps = dioph.primes
    if len(ps) < 3:
        return []
    mask = np.zeros(N + 1, dtype=bool)
    mask[ps] = True
    out: list[tuple[int, int, int]] = []
    for j in range(1, len(ps)):
        p2 = int(ps[j])
        cands = ps[:j]
        cands = cands[2 * p2 - cands <= N]
        if len(cands) == 0:
            continue
        hits = cands[mask[2 * p2 - cands]]
        for p1 in hits:
            triple = (int(p1), p2, 2 * p2 - int(p1))
            if not verify_triple(alpha, tau, triple):
                raise AssertionError(f"search emitted a bad triple {triple}")
            out.append(triple)
            if len(out) >= limit:
                return out
    return out


# ----------------------------------------------------------------- Goldbach
@dataclass(frozen=True)
class GoldbachReport:
    """Ordered-pair representation counts r(n) over a range of even n."""

    alpha: QuadraticIrrational
    tau: Fraction
    n_min: int
    n_max: int
    counts: dict[int, int]
    singular: dict[int, tuple[float, float]]
    exceptional: tuple[int, ...]

    def exceptional_proportion(self) -> float:
        total = len(self.counts)
        return len(self.exceptional) / total if total else 0.0


def goldbach_scan(
    alpha: QuadraticIrrational,
    tau,
    n_min: int,
    n_max: int,
    singular_cutoff: int = 10**5,
    dioph: Optional[DiophantineSet] = None,
) -> GoldbachReport:
    """Exact r(n) = #{(p, q): p + q = n, ||alpha p|| <= p^-tau} for even n.

    The Diophantine condition binds the first coordinate only; pairs are
    ordered, so (p, q) and (q, p) both count when both qualify.
    """
    tau = Fraction(tau)
    if n_min > n_max:
        raise ValueError("empty range")
    if n_min % 2 or n_max % 2:
        raise ValueError("range endpoints must be even")
    N = n_max
    if dioph is None:
        dioph = diophantine_primes(alpha, tau, N)
    dioph_ind = np.zeros(N + 1, dtype=np.int64)
    dioph_ind[dioph.primes] = 1
    prime_ind = np.zeros(N + 1, dtype=np.int64)
    prime_ind[primes_up_to(N)] = 1
    primes_set = select_primes(N)
    _, table = convolve_residues(dioph_ind, prime_ind, primes_set)
    conv = table[primes_set[0][0]].astype(np.int64)  # counts < first prime: exact
    c2 = twin_constant_interval(singular_cutoff)
    counts: dict[int, int] = {}
    singular: dict[int, tuple[float, float]] = {}
    exceptional = []
    for n in range(n_min, n_max + 1, 2):
        r = int(conv[n])
        counts[n] = r
        sv = singular_series(n, singular_cutoff, twin_constant=c2)
        singular[n] = (float(sv.lo), float(sv.hi))
        if r == 0:
            exceptional.append(n)
    return GoldbachReport(
        alpha=alpha,
        tau=tau,
        n_min=n_min,
        n_max=n_max,
        counts=counts,
        singular=singular,
        exceptional=tuple(exceptional),
    )


def twin_constant_interval(cutoff: int) -> CertifiedInterval:
    """prod over odd primes of (1 - 1/(p-1)^2), truncated at the cutoff with
    the tail enclosed by sum_{n > cutoff} 1/(n-1)^2 <= 1/(cutoff - 1)."""
    ps = primes_up_to(cutoff)[1:].astype(np.float64)  # odd primes
    factors = 1.0 - 1.0 / (ps - 1.0) ** 2
    log_sum = math.fsum(np.log(factors))
    slack = (4 * len(ps) + 8) * _EPS  # absolute slack on the log sum
    lo = math.exp(log_sum - slack) * (1 - slack)
    hi = math.exp(log_sum + slack) * (1 + slack)
    tail = Fraction(1, cutoff - 1)
    return CertifiedInterval(Fraction(lo) * (1 - tail), Fraction(hi))


def singular_series(
    n: int, cutoff: int = 10**5, twin_constant: Optional[CertifiedInterval] = None
) -> CertifiedInterval:
    """2 prod_{p | n, p > 2} (p-1)/(p-2) * prod_{p > 2} (1 - 1/(p-1)^2)."""
    if n % 2 or n < 4:
        raise OddN(f"singular series needs even n >= 4, got {n}")
    if twin_constant is None:
        twin_constant = twin_constant_interval(cutoff)
    odd_part = Fraction(2)
    m = n
    while m % 2 == 0:
        m //= 2
    f = 3
    while f * f <= m:
        if m % f == 0:
            odd_part *= Fraction(f - 1, f - 2)
            while m % f == 0:
                m //= f
        f += 2
    if m > 1:
        odd_part *= Fraction(m - 1, m - 2)
    return twin_constant * odd_part


# ------------------------------------------------------------- variance
def goldbach_variance_check(
    alpha: QuadraticIrrational,
    tau,
    N: int,
    bundle: Optional[DeskBundle] = None,
    oracle_max: int = 2000,
    constant_weight_mode: bool = False,
) -> dict:
    """V = sum_{n<=N} |sum_{a+b=n} Lambda(a) Lambda(b) (w(||alpha b||) - w^(0))|^2.

    Evaluated exactly on scaled integers via the convolution; the
    double-loop oracle confirms the path at small N.  In constant-weight
    mode the second factor is identically zero and V must be exactly 0.
    """
    tau = Fraction(tau)
    if bundle is None:
        bundle = desk_parameters(alpha, tau, N, goldbach=True)
    bump = BumpFunction(bundle.delta)
    seq = weighted_lambda_sequence(alpha, bump, N)
    lam, lam_err = lambda_array(N)
    fc = fourier_coeffs(bump, 0)
    w0 = fc.value(0)
    w0_mid = float(w0.mid())
    u_scaled, u_err = _to_scaled_ints(lam, lam_err)
    if constant_weight_mode:
        # the factor w - w^(0) is identically zero: exact zeros, no ledger
        v_arr = np.zeros(N + 1, dtype=np.float64)
        v_scaled = np.zeros(N + 1, dtype=np.int64)
        verr = 0.0
    else:
        v_arr = seq.coeffs - w0_mid * lam
        v_err = seq.coeff_err + lam_err * abs(w0_mid) + float(w0.width()) * float(np.max(lam)) + 2 * _EPS * float(np.max(np.abs(v_arr), initial=0.0))
        v_scaled, verr = _to_scaled_ints(v_arr, v_err)
    u_sum = int(np.sum(np.abs(u_scaled.astype(object))))
    v_sum = int(np.sum(np.abs(v_scaled.astype(object))))
    u_max = int(np.max(np.abs(u_scaled))) if N else 0
    v_max = int(np.max(np.abs(v_scaled))) if N else 0
    entry_bound = min(u_sum * v_max, v_sum * u_max) + 1
    primes_set = select_primes(entry_bound)
    _, table = convolve_residues(u_scaled, v_scaled, primes_set)
    lifted = crt_lift_array(table, signed=True)
    # only n <= N enters the variance
    vals = lifted[: N + 1]
    V_int = sum(x * x for x in vals)
    V_exact = Fraction(V_int, 1 << (4 * _SCALE_BITS))
    # perturbation ledger
    U1 = float(np.sum(np.abs(lam)))
    V1 = float(np.sum(np.abs(v_arr)))
    dF = u_err * V1 + verr * U1
    F_abs_sum = sum(abs(x) for x in vals) * 2.0 ** (-2 * _SCALE_BITS)
    ledger = 2 * dF * F_abs_sum + (N + 1) * dF * dF
    V_iv = CertifiedInterval(V_exact - Fraction(ledger), V_exact + Fraction(ledger))

    oracle = None
    if N <= oracle_max:
        total = 0.0
        for n in range(2, N + 1):
            f = float(np.dot(lam[1:n], v_arr[n - 1 : 0 : -1]))
            total += f * f
        # same perturbation as the exact path, plus the float dot/sum rounding
        o_ledger = 2 * dF * F_abs_sum + (N + 1) * dF * dF + _EPS * 32 * N * max(
            abs(total), 1.0
        )
        oracle = CertifiedInterval.from_float_pm(total, o_ledger)

    norm = bundle.normalizer(3 - bundle.eta / 4, delta_power=2)
    normalized = float(V_iv.mid()) / float(norm.lo)
    return {
        "N": N,
        "tau": str(tau),
        "mu": str(bundle.mu),
        "eta": str(bundle.eta),
        "delta": str(bundle.delta),
        "V_lo": float(V_iv.lo),
        "V_hi": float(V_iv.hi),
        "V_interval": V_iv,
        "oracle": oracle,
        "normalized": normalized,
        "constant_weight_mode": constant_weight_mode,
        "w0": w0_mid,
    }


# --------------------------------------------------------------- arc split
def arc_contribution_split(
    decomp: ArcDecomposition,
    seq: WeightedSequence,
    bundle: DeskBundle,
    nodes: int = 9,
    method: str = "blocked",
) -> dict:
    """R_major by per-arc Simpson quadrature of S_w(t)^2 S_w(-2t); R_minor
    as the exact convolution total minus R_major.  Reports both normalised
    forms and the per-m family tabulation."""
    if seq.N > 2 * 10**4:
        raise PreconditionViolated("arc split is a small-desk operation")
    if nodes % 2 == 0 or nodes < 3:
        raise ValueError("Simpson needs an odd node count >= 3")
    total = threeAP_weighted_count(seq, run_oracle=False).weighted_total
    from .circle import _radius_lower_fraction

    r_major = 0.0 + 0.0j
    quad_err = 0.0
    per_m: dict[int, float] = {}
    for arc in decomp.arcs:
        center = arc.center()
        r_rat = _radius_lower_fraction(arc.radius)
        # the integrand oscillates at scale 1/N: resolve each wave with ~8
        # nodes, then halve the step once more for the error estimate
        waves = max(1.0, 2.0 * float(r_rat) * seq.N)
        base = max(nodes, (math.ceil(8 * waves)) | 1)
        coarse = _simpson_arc(center, r_rat, seq, base, method)
        fine = _simpson_arc(center, r_rat, seq, 2 * base - 1, method)
        r_major += fine
        quad_err += abs(fine - coarse)
        key = arc.label.m
        per_m[key] = per_m.get(key, 0.0) + fine.real
    r_minor = float(total.mid()) - r_major.real
    d2 = float(bundle.delta) ** 2
    norm_minor = float(bundle.normalizer(2 - bundle.eta / 4, delta_power=2).lo)
    return {
        "N": seq.N,
        "arcs": decomp.arc_count(),
        "total_lo": float(total.lo),
        "total_hi": float(total.hi),
        "R_major": r_major.real,
        "R_major_imag": r_major.imag,
        "R_minor": r_minor,
        "quadrature_err": quad_err,
        "R_major_normalized": r_major.real / (d2 * seq.N**2),
        "R_minor_normalized": r_minor / norm_minor,
        "per_m_real": {str(k): v for k, v in sorted(per_m.items())},
        "identity_residual": abs((r_major.real + r_minor) - float(total.mid())),
    }


def _simpson_arc(
    center: TorusPoint, r_rat: Fraction, seq: WeightedSequence, nodes: int, method: str
) -> complex:
    """Composite Simpson of S_w(t)^2 S_w(-2t) over [center - r, center + r]."""
    h = 2 * r_rat / (nodes - 1)
    acc = 0.0 + 0.0j
    for i in range(nodes):
        t = -r_rat + i * h
        theta = shift_fraction(center, t)
        Sw = exp_sum_Sw(theta, seq, method=method).mid()
        Sw2 = exp_sum_Sw(scale_phase(theta, -2), seq, method=method).mid()
        val = Sw * Sw * Sw2
        if i == 0 or i == nodes - 1:
            wgt = 1.0
        elif i % 2 == 1:
            wgt = 4.0
        else:
            wgt = 2.0
        acc += wgt * val
    return acc * float(h) / 3.0
