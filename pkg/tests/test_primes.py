import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from conftest import trial_division_primes
from dcl.bump import BumpFunction
from dcl.errors import RangeTooLarge
from dcl.primes import (
    PrimeSegment,
    alpha_fixed_point,
    bohr_weight_sum,
    chebyshev_psi,
    diophantine_primes,
    lambda_array,
    norm_dist_array,
    primes_up_to,
    sharp_cutoff_sign,
    sieve_segment,
    von_mangoldt,
    weighted_lambda_sequence,
)


def test_sieve_small_ranges():
    seg = sieve_segment(2, 30)
    assert list(seg.primes()) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert list(sieve_segment(14, 16).primes()) == []


def test_sieve_million_window_against_trial_division():
    seg = sieve_segment(10**6, 10**6 + 100)
    got = list(seg.primes())
    assert got == [1000003, 1000033, 1000037, 1000039, 1000081, 1000099]
    assert got == trial_division_primes(10**6, 10**6 + 100)


def test_sieve_bitmask_matches_trial_division_to_1e4():
    seg = sieve_segment(2, 10**4)
    ref = set(trial_division_primes(2, 10**4))
    for n in range(2, 10**4 + 1):
        assert bool(seg.is_prime[n - 2]) == (n in ref)


def test_sieve_cap():
    with pytest.raises(RangeTooLarge):
        sieve_segment(2, 10**9 + 1)


def test_prime_power_table():
    seg = sieve_segment(2, 100)
    assert seg.prime_powers[8] == (2, 3)
    assert seg.prime_powers[81] == (3, 4)
    assert 12 not in seg.prime_powers


def test_von_mangoldt_examples():
    assert von_mangoldt(8) == (2, 3)
    assert von_mangoldt(12) is None
    assert von_mangoldt(9409) == (97, 2)
    assert von_mangoldt(1) is None
    assert von_mangoldt(97) == (97, 1)


def test_lambda_array_and_psi():
    arr, err = lambda_array(100)
    assert arr[8] == pytest.approx(math.log(2))
    assert arr[12] == 0.0
    assert arr[97] == pytest.approx(math.log(97))
    psi = chebyshev_psi(100)
    with mpmath.workdps(40):
        ref = mpmath.mpf(0)
        for n in range(2, 101):
            pk = von_mangoldt(n)
            if pk:
                ref += mpmath.log(pk[0])
        assert float(psi.lo) <= float(ref) <= float(psi.hi)
    assert float(psi.mid()) == pytest.approx(94.0453112293, abs=1e-6)


@pytest.mark.parametrize("N", [10**4, 10**5])
def test_psi_mass_chebyshev_window(N):
    psi = chebyshev_psi(N)
    assert 0.9 * N <= float(psi.lo) and float(psi.hi) <= 1.1 * N


def test_norm_dist_kernel_against_exact(sqrt2):
    ns = np.arange(1, 2001, dtype=np.int64)
    dist, err = norm_dist_array(sqrt2, ns)
    assert err < 1e-12
    for n in (1, 2, 3, 17, 169, 1999):
        exact = sqrt2.mul_int(int(n)).dist_to_nearest_int().interval(128)
        assert float(exact.lo) - err <= dist[n - 1] <= float(exact.hi) + err


def test_diophantine_primes_sqrt2_tau_half_against_mpmath(sqrt2):
    got = diophantine_primes(sqrt2, Fraction(1, 2), 100)
    with mpmath.workdps(60):
        root2 = mpmath.sqrt(2)
        ref = []
        for p in trial_division_primes(2, 100):
            dist = abs(root2 * p - mpmath.nint(root2 * p))
            if dist <= mpmath.mpf(p) ** mpmath.mpf("-0.5"):
                ref.append(p)
    assert list(got.primes) == ref
    assert got.ties == ()


def test_diophantine_primes_phi_tau_03_against_mpmath(phi):
    got = diophantine_primes(phi, Fraction(3, 10), 10**4)
    with mpmath.workdps(60):
        val = (1 + mpmath.sqrt(5)) / 2
        ref = []
        for p in trial_division_primes(2, 10**4):
            dist = abs(val * p - mpmath.nint(val * p))
            if dist <= mpmath.mpf(p) ** mpmath.mpf("-0.3"):
                ref.append(p)
    assert list(got.primes) == ref


def test_diophantine_degenerate_tau_zero(sqrt2):
    got = diophantine_primes(sqrt2, 0, 500)
    assert list(got.primes) == trial_division_primes(2, 500)


def test_diophantine_monotone_in_tau(sqrt2):
    big = set(diophantine_primes(sqrt2, Fraction(1, 10), 5000).primes.tolist())
    small = set(diophantine_primes(sqrt2, Fraction(1, 2), 5000).primes.tolist())
    assert small <= big


def test_sharp_cutoff_sign_consistency(sqrt2):
    # the exact path must agree with a 200-bit interval evaluation
    from dcl.intervals import CertifiedInterval, ipow

    for p in (3, 17, 1999, 99991):
        sgn = sharp_cutoff_sign(sqrt2, p, Fraction(1, 10))
        dist = sqrt2.mul_int(p).dist_to_nearest_int().interval(200)
        thr = ipow(CertifiedInterval.exact(p, 200), -Fraction(1, 10))
        if dist.hi < thr.lo:
            assert sgn < 0
        elif dist.lo > thr.hi:
            assert sgn > 0


def test_weighted_sequence_small_case(sqrt2):
    bump = BumpFunction(Fraction(1, 5))
    seq = weighted_lambda_sequence(sqrt2, bump, 10)
    # ||2 sqrt2|| = 0.1716 < 0.2 -> plateau, coefficient log 2 exactly
    assert seq.coeff_interval(2).contains(
        Fraction(6931471805599453, 10**16)
    ) or abs(seq.coeffs[2] - math.log(2)) < 1e-12
    # non prime powers carry exact zeros
    for n in (1, 6, 10):
        assert seq.coeffs[n] == 0.0
    # support is contained in {prime powers} with ||n alpha|| < 2 delta
    for n in seq.support:
        assert von_mangoldt(int(n)) is not None
        d = sqrt2.mul_int(int(n)).dist_to_nearest_int()
        assert d.cmp_fraction(2 * bump.delta) < 0


def test_weighted_sequence_range_invariant(sqrt2):
    bump = BumpFunction(Fraction(6, 25))
    seq = weighted_lambda_sequence(sqrt2, bump, 2000)
    lam, _ = lambda_array(2000)
    assert np.all(seq.coeffs >= 0)
    slack = seq.coeff_err + 1e-12
    assert np.all(seq.coeffs <= lam + slack)
    outside = np.setdiff1d(np.flatnonzero(lam), seq.support)
    for n in outside[:20]:
        d = sqrt2.mul_int(int(n)).dist_to_nearest_int()
        assert d.cmp_fraction(2 * bump.delta) >= 0


def test_bohr_weight_sum_examples(sqrt2):
    bump = BumpFunction(Fraction(6, 25))
    r1 = bohr_weight_sum(sqrt2, bump, 1)
    w1 = bump.eval_point(__import__("dcl.torus", fromlist=["TorusPoint"]).TorusPoint.from_exact(sqrt2))
    assert r1["sum_lo"] <= float(w1.hi) and float(w1.lo) <= r1["sum_hi"]
    r = bohr_weight_sum(sqrt2, bump, 10**4)
    assert r["sum_hi"] <= 10**4  # w <= 1
    assert 1.0 <= r["ratio_lo"] and r["ratio_hi"] <= 10.0


def test_sieve_cache_roundtrip(tmp_path, monkeypatch):
    monkeypatch.setenv("DCL_CACHE_DIR", str(tmp_path))
    a = sieve_segment(100, 200)
    files = list(tmp_path.glob("dsieve_*.bin"))
    assert len(files) == 1
    raw = files[0].read_bytes()
    assert raw[:8] == b"DSIEVE01"
    b = sieve_segment(100, 200)
    assert np.array_equal(a.is_prime, b.is_prime)
    assert list(a.primes()) == trial_division_primes(100, 200)


def test_alpha_fixed_point_value(sqrt2):
    a64 = alpha_fixed_point(sqrt2)
    assert abs(a64 / 2**64 - (math.sqrt(2) - 1)) < 1e-12
