import numpy as np
import pytest

from dcl.ntt import (
    NTT_PRIMES,
    convolve_exact,
    convolve_residues,
    crt_lift_array,
    crt_scalar,
    cyclic_convolve_mod,
    ntt,
    select_primes,
    weighted_pairing_mod,
)


def test_primes_and_roots_are_valid():
    for p, g in NTT_PRIMES:
        assert pow(g, p - 1, p) == 1
        k = ((p - 1) & -(p - 1)).bit_length() - 1
        assert k >= 23
        # g generates the full group: nontrivial for every prime factor of p-1
        odd = (p - 1) >> k
        factors = {2}
        f, o = 3, odd
        while f * f <= o:
            while o % f == 0:
                factors.add(f)
                o //= f
            f += 2
        if o > 1:
            factors.add(o)
        assert all(pow(g, (p - 1) // q, p) != 1 for q in factors)


def test_ntt_roundtrip_and_naive_dft():
    p, g = 469762049, 3
    a = np.array([5, 1, 4, 1, 5, 9, 2, 6], dtype=np.uint64)
    fa = ntt(a, p, g)
    n = len(a)
    w = pow(g, (p - 1) // n, p)
    for k in range(n):
        ref = sum(int(a[j]) * pow(w, j * k, p) for j in range(n)) % p
        assert int(fa[k]) == ref
    back = ntt(fa, p, g, inverse=True)
    assert np.array_equal(back, a)


def test_cyclic_convolution_small():
    p, g = 2013265921, 31
    a = np.array([1, 2, 0, 0], dtype=np.uint64)
    b = np.array([3, 4, 0, 0], dtype=np.uint64)
    got = cyclic_convolve_mod(a, b, p, g)
    assert list(got) == [3, 10, 8, 0]


def test_convolve_exact_matches_numpy():
    rng = np.random.default_rng(3)
    a = rng.integers(-999, 999, 200).astype(np.int64)
    b = rng.integers(-999, 999, 77).astype(np.int64)
    got = convolve_exact(a, b, bound=10**9)
    assert np.array_equal(np.array(got, dtype=np.int64), np.convolve(a, b))


def test_convolve_exact_big_values_against_bigint():
    rng = np.random.default_rng(4)
    a = rng.integers(-(2**40), 2**40, 40).astype(np.int64)
    b = rng.integers(-(2**40), 2**40, 40).astype(np.int64)
    ref = [
        sum(int(a[i]) * int(b[k - i]) for i in range(max(0, k - 39), min(40, k + 1)))
        for k in range(79)
    ]
    assert convolve_exact(a, b, bound=2**88) == ref


def test_crt_scalar_signed_lift():
    primes = [p for p, _ in NTT_PRIMES[:3]]
    x = -123456789012345
    res = [x % p for p in primes]
    assert crt_scalar(res, primes) == x


def test_weighted_pairing_exactness():
    rng = np.random.default_rng(5)
    a = rng.integers(-(2**30), 2**30, 150).astype(np.int64)
    primes = select_primes(2**120)
    out_len, table = convolve_residues(a, a, primes)
    conv = np.convolve(a.astype(object), a.astype(object))
    idx = np.arange(0, out_len, 2)
    w = rng.integers(-(2**30), 2**30, len(idx)).astype(np.int64)
    want = int(sum(int(conv[i]) * int(wv) for i, wv in zip(idx, w)))
    got = weighted_pairing_mod(table, w, idx, bound=2**110)
    assert got == want


def test_crt_lift_array_roundtrip():
    rng = np.random.default_rng(6)
    a = rng.integers(-(2**35), 2**35, 64).astype(np.int64)
    b = rng.integers(-(2**35), 2**35, 64).astype(np.int64)
    primes = select_primes(2**80)
    _, table = convolve_residues(a, b, primes)
    lifted = crt_lift_array(table)
    ref = np.convolve(a.astype(object), b.astype(object))
    assert lifted == [int(x) for x in ref]


def test_select_primes_bounds():
    assert len(select_primes(10**5)) == 1
    assert len(select_primes(2**60)) >= 2
    with pytest.raises(ValueError):
        select_primes(2**300)
