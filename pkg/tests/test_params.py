from fractions import Fraction

import gmpy2
import pytest

from dcl.errors import (
    MuOutOfRange,
    PreconditionViolated,
    SMaxTooSmall,
    ValidationFailed,
)
from dcl.params import (
    NPower,
    build_parameter_set,
    choose_eta,
    choose_goldbach_mu,
    choose_J,
    derive_N,
    desk_parameters,
    effective_delta,
    mu_star,
    p_exponents,
)
from dcl.quadratic import QuadraticIrrational, convergent_below
from dcl.rng import generator


def test_choose_J_examples():
    assert choose_J(Fraction(1, 10)) == 1  # ratio 2.5
    assert choose_J(Fraction(12, 100)) == 2  # ratio 10
    assert choose_J(Fraction(1, 10**6)) == 1  # ratio -> 1
    # boundary: at mu = mu_1^* the ratio is exactly 4, forcing J = 2
    assert choose_J(Fraction(1, 9)) == 2
    with pytest.raises(MuOutOfRange):
        choose_J(Fraction(1, 8))
    with pytest.raises(MuOutOfRange):
        choose_J(0)


def test_choose_eta_closed_form():
    eta = choose_eta(Fraction(1, 10), 1)
    assert eta == Fraction(1, 320)  # half of (4*0.2 - 0.5)/48 = 0.00625
    for mu in (Fraction(1, 100), Fraction(1, 10), Fraction(3, 25)):
        J = choose_J(mu)
        e = choose_eta(mu, J)
        assert 0 < e < Fraction(1, 20)
        assert e < (1 - 8 * mu) / 4


def test_p_exponent_identities():
    for mu in (Fraction(1, 10), Fraction(3, 25), Fraction(31, 250)):
        J = choose_J(mu)
        eta = choose_eta(mu, J)
        p = p_exponents(mu, eta, J)
        assert p[0] == 2 * mu + eta
        for j in range(J - 1):
            assert p[j + 1] - 4 * p[j] == 10 * mu + 5 * eta - 2


def test_derive_N_square_root_example(sqrt2):
    # exponent 1/2 via mu, eta with 4 mu + 2 eta = 1/2: mu = 1/10, eta = 1/20
    conv, N = derive_N(sqrt2, 12, Fraction(1, 10), Fraction(1, 20))
    assert conv.s == 12  # 17/12 is a convergent of sqrt2
    # largest N with floor(sqrt(N)) = 12 is 168
    assert N == 168
    assert gmpy2.isqrt(N) == 12 and gmpy2.isqrt(N + 1) == 13


def test_derive_N_pell_and_maximality(sqrt2):
    mu, eta = Fraction(1, 10), choose_eta(Fraction(1, 10), 1)
    conv, N = derive_N(sqrt2, 1000, mu, eta)
    assert (conv.r, conv.s) == (1393, 985)
    c = 1 - 4 * mu - 2 * eta
    u, v = c.numerator, c.denominator
    assert gmpy2.mpz(conv.s) ** v <= gmpy2.mpz(N) ** u < gmpy2.mpz(conv.s + 1) ** v
    assert gmpy2.mpz(N + 1) ** u >= gmpy2.mpz(conv.s + 1) ** v  # maximality


def test_derive_N_s_ge_sqrtN(sqrt2, phi):
    # eta < (1-8mu)/4 forces s >= sqrt(N) at moderate size already
    for alpha in (sqrt2, phi):
        for s_target in (100, 10**4, 10**6):
            mu = Fraction(1, 10)
            eta = choose_eta(mu, 1)
            conv, N = derive_N(alpha, s_target, mu, eta)
            assert conv.s**2 >= N


def test_mu_star_values():
    assert mu_star(1) == Fraction(3, 27) == Fraction(1, 9)
    assert mu_star(2) == Fraction(15, 123) == Fraction(5, 41)


def test_choose_goldbach_mu_tau_01():
    m, mu = choose_goldbach_mu(Fraction(1, 10))
    assert m == 1
    assert Fraction(1, 10) < mu < Fraction(1, 9)
    # oracle: scan the admissible interval at resolution 1e-6 and check the
    # three inequalities hold at the returned midpoint
    assert choose_J(mu) == 1
    assert 2 * (1 - 5 * mu) / 3 - 4 * (1 - 8 * mu) / 6 > (1 - 5 * mu) / 3 > mu
    step = Fraction(1, 10**6)
    probe = mu - step
    assert choose_J(probe) == 1  # midpoint sits strictly inside the window


def test_choose_goldbach_mu_scan_oracle():
    # brute scan confirms every admissible point satisfies the chain and the
    # selected mu is one of them, for a few tau values
    for tau in (Fraction(1, 20), Fraction(1, 12), Fraction(12, 100)):
        m, mu = choose_goldbach_mu(tau)
        assert tau < mu < mu_star(m) < Fraction(1, 8)
        assert choose_J(mu) == m
        assert 2 * (1 - 5 * mu) / 3 - 4**m * (1 - 8 * mu) / 6 > (1 - 5 * mu) / 3 > mu


def test_build_parameter_set_identities(sqrt2):
    ps = build_parameter_set(sqrt2, Fraction(1, 20), Fraction(1, 10), 10**6)
    assert ps.J == 1 and ps.p[0] == 2 * ps.mu + ps.eta
    assert all(c["satisfied"] for c in ps.checks)
    assert {w["name"] for w in ps.warnings} == {"P1_le_1"}
    d = ps.describe()
    assert d["s"] == 470832 and d["r"] == 665857


def test_build_parameter_set_precondition(sqrt2):
    with pytest.raises(PreconditionViolated):
        build_parameter_set(sqrt2, Fraction(1, 5), Fraction(1, 10), 100)  # tau >= mu


def test_goldbach_mode_validation_failure(sqrt2):
    # a user-forced mu far from the Goldbach rule violates p_J > mu + eta
    with pytest.raises(ValidationFailed) as exc:
        build_parameter_set(sqrt2, Fraction(1, 19), Fraction(5, 43), 1000, goldbach=True)
    assert "pJ_gt_mu_plus_eta" in exc.value.violations


def test_parameter_identities_50_random_pairs(sqrt2):
    gen = generator(31415, "param-pairs")
    done = 0
    while done < 50:
        dm = int(gen.integers(9, 65))
        num = int(gen.integers(1, max(2, dm // 8)))
        mu = Fraction(num, dm)
        if not (0 < mu < Fraction(1, 8)):
            continue
        dt = int(gen.integers(2, 65))
        nt = int(gen.integers(1, dt))
        tau = Fraction(nt, dt)
        if not (0 < tau < mu):
            continue
        s_target = int(gen.integers(10, 10**6))
        try:
            ps = build_parameter_set(sqrt2, tau, mu, s_target)
        except SMaxTooSmall:
            continue
        ratio = (1 - 5 * mu) / (1 - 8 * mu)
        assert 4**ps.J > ratio >= 4 ** (ps.J - 1)
        assert ps.p[0] == 2 * mu + ps.eta
        for j in range(ps.J - 1):
            assert ps.p[j + 1] - 4 * ps.p[j] == 10 * mu + 5 * ps.eta - 2
        c = 1 - 4 * mu - 2 * ps.eta
        u, v = c.numerator, c.denominator
        assert gmpy2.mpz(ps.s) ** v <= gmpy2.mpz(ps.N) ** u < gmpy2.mpz(ps.s + 1) ** v
        assert gmpy2.mpz(ps.N + 1) ** u >= gmpy2.mpz(ps.s + 1) ** v
        done += 1


def test_npower_comparisons_exact_and_interval():
    a = NPower(10**6, Fraction(1, 256), Fraction(13, 64))
    b = NPower(10**6, Fraction(1, 256), Fraction(13, 64))
    assert a.cmp(b) == 0  # symbolic equality through the exact fallback
    assert a.cmp_fraction(Fraction(1)) < 0 or a.cmp_fraction(Fraction(1)) >= 0
    big = NPower(100, 1, Fraction(3, 2))
    assert big.floor() == 1000
    exact = NPower(64, 1, Fraction(2, 3))  # 64^(2/3) = 16 exactly
    assert exact.floor() == 16
    assert exact.cmp_fraction(16) == 0
    assert NPower(10, 1, Fraction(1, 2)).cmp_fraction(Fraction(316227, 10**5)) > 0
    assert NPower(10, 1, Fraction(1, 2)).cmp_fraction(Fraction(316228, 10**5)) < 0


def test_effective_delta_clipping(sqrt2):
    # desk N: nominal width above 1/4 clips to 6/25
    assert effective_delta(10**6, Fraction(1, 20)) == Fraction(6, 25)
    # large N with real tau: genuine power, snapped onto the dyadic grid
    d = effective_delta(10**9, Fraction(1, 10))
    assert Fraction(0) < d < Fraction(1, 4)
    assert d.denominator & (d.denominator - 1) == 0  # dyadic
    nominal = (10**9) ** -0.1
    assert abs(float(d) - nominal) < 1e-6


def test_desk_parameters_bundle(sqrt2):
    b = desk_parameters(sqrt2, Fraction(1, 20), 10**5, goldbach=True)
    assert b.N == 10**5 and 0 < b.mu < Fraction(1, 8)
    assert b.delta == Fraction(6, 25)
    assert b.s >= 2
    norm = b.normalizer(Fraction(1))
    assert float(norm.mid()) == pytest.approx(0.24 * 10**5, rel=1e-9)
