import math
from fractions import Fraction

import numpy as np
import pytest

from dcl.additive import (
    arc_contribution_split,
    goldbach_scan,
    goldbach_variance_check,
    singular_series,
    threeAP_prime_triples,
    threeAP_weighted_count,
    twin_constant_interval,
    verify_triple,
    _triple_constraint_count,
)
from dcl.bump import BumpFunction
from dcl.circle import Scale, build_arc_decomposition
from dcl.errors import OddN
from dcl.params import desk_parameters
from dcl.primes import WeightedSequence, lambda_array, weighted_lambda_sequence


def _lambda_sequence_unweighted(N: int) -> WeightedSequence:
    """Test mode w = 1: coefficients are plain Lambda values."""
    from dcl.quadratic import QuadraticIrrational

    lam, err = lambda_array(N)
    return WeightedSequence(
        alpha=QuadraticIrrational(0, 1, 1, 2),
        N=N,
        delta=Fraction(6, 25),
        coeffs=lam,
        coeff_err=err,
        support=np.flatnonzero(lam),
    )


def test_hand_enumeration_N10_unweighted():
    # prime powers <= 10: 2,3,4,5,7,8,9; progressions n1+n3 = 2 n2 with all
    # Lambda nonzero, enumerated by hand
    seq = _lambda_sequence_unweighted(10)
    tc = threeAP_weighted_count(seq)
    lam, _ = lambda_array(10)
    by_hand = 0.0
    pps = [n for n in range(1, 11) if lam[n] > 0]
    for n1 in pps:
        for n3 in pps:
            if (n1 + n3) % 2 == 0 and (n1 + n3) // 2 in pps:
                by_hand += lam[n1] * lam[(n1 + n3) // 2] * lam[n3]
    assert float(tc.weighted_total.mid()) == pytest.approx(by_hand, rel=1e-12)
    assert tc.direct_oracle is not None
    assert tc.weighted_total.overlaps(tc.direct_oracle)
    # specific by-hand members: (3,3,3) trivial and (2,3,4), (3,5,7) proper
    assert lam[2] * lam[3] * lam[4] > 0 and lam[3] * lam[5] * lam[7] > 0
    assert float(tc.trivial_total.mid()) == pytest.approx(
        sum(lam[n] ** 3 for n in pps), rel=1e-12
    )


def test_all_zero_coefficients():
    from dcl.quadratic import QuadraticIrrational

    seq = WeightedSequence(
        alpha=QuadraticIrrational(0, 1, 1, 2),
        N=50,
        delta=Fraction(1, 10),
        coeffs=np.zeros(51),
        coeff_err=0.0,
        support=np.array([], dtype=np.int64),
    )
    tc = threeAP_weighted_count(seq)
    assert float(tc.weighted_total.mid()) == 0.0
    assert tc.weighted_total.width() == 0


def test_convolution_vs_direct_oracle(sqrt2):
    for N in (100, 500):
        seq = weighted_lambda_sequence(sqrt2, BumpFunction(Fraction(6, 25)), N)
        tc = threeAP_weighted_count(seq, run_oracle=True)
        assert tc.weighted_total.overlaps(tc.direct_oracle)
        rel = abs(float(tc.weighted_total.mid()) - float(tc.direct_oracle.mid()))
        rel /= max(float(tc.weighted_total.mid()), 1e-30)
        assert rel < 1e-9


def test_triple_count_formula():
    for N in (1, 2, 7, 50):
        direct = sum(
            1
            for n1 in range(1, N + 1)
            for n2 in range(1, N + 1)
            for n3 in range(1, N + 1)
            if n1 + n3 == 2 * n2
        )
        assert _triple_constraint_count(N) == direct


def test_degenerate_tau_triples(sqrt2):
    ts = threeAP_prime_triples(sqrt2, 0, 100, limit=4)
    assert ts[0] == (3, 5, 7)
    for t in ts:
        assert verify_triple(sqrt2, Fraction(0), t)


def test_triples_sharp_cutoff(sqrt2):
    ts = threeAP_prime_triples(sqrt2, Fraction(1, 10), 10**4, limit=8)
    assert len(ts) == 8
    for p1, p2, p3 in ts:
        assert p1 < p2 < p3 and p1 + p3 == 2 * p2
        assert verify_triple(sqrt2, Fraction(1, 10), (p1, p2, p3))
    # deterministic ordering by p2 then p1
    keys = [(t[1], t[0]) for t in ts]
    assert keys == sorted(keys)


def test_verify_triple_rejects(sqrt2):
    assert not verify_triple(sqrt2, Fraction(0), (3, 5, 8))  # 8 not prime
    assert not verify_triple(sqrt2, Fraction(0), (3, 4, 5))  # 4 not prime
    assert not verify_triple(sqrt2, Fraction(0), (5, 5, 5))  # trivial
    assert not verify_triple(sqrt2, Fraction(0), (3, 5, 11))  # not a progression


def test_goldbach_degenerate_counts(sqrt2):
    rep = goldbach_scan(sqrt2, 0, 4, 10)
    assert rep.counts[4] == 1  # (2,2)
    assert rep.counts[10] == 3  # (3,7), (5,5), (7,3) ordered
    assert rep.exceptional == ()


def test_goldbach_parity_invariant(sqrt2):
    # ordered pairs: r(n) is odd iff n/2 is prime (degenerate cutoff)
    rep = goldbach_scan(sqrt2, 0, 6, 200)
    from conftest import trial_division_primes

    primes = set(trial_division_primes(2, 100))
    for n, r in rep.counts.items():
        assert (r % 2 == 1) == (n // 2 in primes)


def test_goldbach_constrained_counts_cross_check(sqrt2):
    # independent per-n recount for a small window
    from dcl.primes import diophantine_primes, primes_up_to

    tau = Fraction(1, 4)
    rep = goldbach_scan(sqrt2, tau, 100, 140)
    dio = set(diophantine_primes(sqrt2, tau, 140).primes.tolist())
    ps = set(primes_up_to(140).tolist())
    for n in range(100, 141, 2):
        want = sum(1 for p in dio if p < n and (n - p) in ps)
        assert rep.counts[n] == want


def test_twin_constant_value_and_nesting():
    c1 = twin_constant_interval(10**4)
    c2 = twin_constant_interval(2 * 10**4)
    # refinement stays inside the coarser enclosure
    assert float(c1.lo) <= float(c2.lo) and float(c2.hi) <= float(c1.hi) + 1e-15
    ref = 0.6601618158468696  # classical twin-prime constant
    assert float(c1.lo) <= ref <= float(c1.hi)


def test_singular_series_values():
    # powers of two carry no odd-prime factor: S(2^k) = 2 * twin constant
    s4 = singular_series(4, cutoff=10**6)
    true_value = 1.3203236316937219  # 2 * 0.66016181584686...
    assert float(s4.lo) <= true_value <= float(s4.hi)
    assert abs(float(s4.mid()) - true_value) < 1e-5
    assert float(singular_series(64, cutoff=10**6).mid()) == pytest.approx(
        float(s4.mid()), rel=1e-12
    )
    # the p = 3 factor doubles the series: S(6)/S(4) = (3-1)/(3-2) = 2
    s6 = singular_series(6, cutoff=10**5)
    s4b = singular_series(4, cutoff=10**5)
    assert float((s6 / s4b).mid()) == pytest.approx(2.0, rel=1e-9)
    with pytest.raises(OddN):
        singular_series(9)
    with pytest.raises(OddN):
        singular_series(2)


def test_singular_series_monotone_under_new_factor():
    # multiplying in a fresh odd prime never decreases the series value
    base = singular_series(8, cutoff=10**4)
    with_three = singular_series(24, cutoff=10**4)
    with_more = singular_series(120, cutoff=10**4)
    assert float(base.hi) <= float(with_three.hi)
    assert float(with_three.hi) <= float(with_more.hi)


def test_variance_constant_mode_exact_zero(sqrt2):
    rep = goldbach_variance_check(sqrt2, Fraction(1, 20), 300, constant_weight_mode=True)
    assert rep["V_lo"] == 0.0 == rep["V_hi"]


def test_variance_oracle_agreement(sqrt2):
    rep = goldbach_variance_check(sqrt2, Fraction(1, 20), 500)
    assert rep["oracle"] is not None
    assert rep["V_interval"].overlaps(rep["oracle"])
    assert math.isfinite(rep["normalized"]) and rep["normalized"] >= 0


def test_arc_split_identity(sqrt2):
    N = 2000
    bundle = desk_parameters(sqrt2, Fraction(1, 20), N)
    seq = weighted_lambda_sequence(sqrt2, BumpFunction(bundle.delta), N)
    decomp = build_arc_decomposition(sqrt2, N, Scale.from_fraction(Fraction(6), N), 3)
    rep = arc_contribution_split(decomp, seq, bundle)
    # split identity holds by construction; the residual is zero
    assert rep["identity_residual"] < 1e-6
    total = float(rep["total_lo"])
    assert abs(rep["R_major"] + rep["R_minor"] - total) < 1e-6 * max(abs(total), 1)
    # m = 0 family carries the dominant share
    m0 = rep["per_m_real"]["0"]
    assert m0 >= max(v for k, v in rep["per_m_real"].items() if k != "0")


def test_arc_split_zero_arcs(sqrt2):
    N = 500
    bundle = desk_parameters(sqrt2, Fraction(1, 20), N)
    seq = weighted_lambda_sequence(sqrt2, BumpFunction(bundle.delta), N)
    decomp = build_arc_decomposition(sqrt2, N, Scale.from_fraction(Fraction(1, 2), N), 3)
    assert decomp.arc_count() == 0
    rep = arc_contribution_split(decomp, seq, bundle)
    assert rep["R_major"] == 0.0
    assert rep["R_minor"] == pytest.approx(float(rep["total_lo"]), rel=1e-9)
