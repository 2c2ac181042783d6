from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dcl.intervals import CertifiedInterval
from dcl.quadratic import QuadraticIrrational
from dcl.rng import generator, random_dyadic
from dcl.torus import (
    TorusPoint,
    dirichlet_approx,
    exact_norm,
    nearest_int_distance,
    phase,
    scale_phase,
    shift_by_multiple,
    shift_fraction,
)

fractions_st = st.fractions(
    min_value=Fraction(-100), max_value=Fraction(100), max_denominator=10**6
)


def test_nearest_int_distance_exact_quarters():
    assert nearest_int_distance(TorusPoint.from_fraction(Fraction(1, 4))).contains(
        Fraction(1, 4)
    )
    d = nearest_int_distance(TorusPoint.from_fraction(Fraction(3, 4)))
    assert d.lo == d.hi == Fraction(1, 4)  # symmetry ||x|| = ||1-x||


def test_nearest_int_distance_of_3sqrt2(sqrt2):
    x = TorusPoint.from_exact(sqrt2.mul_int(3))
    d = nearest_int_distance(x)
    assert abs(float(d.mid()) - 0.2426406871192851) < 1e-12
    assert d.width() < Fraction(1, 2**100)
    assert d.hi <= Fraction(1, 2)


@given(x=fractions_st)
@settings(max_examples=200, deadline=None)
def test_distance_evenness(x):
    d1 = nearest_int_distance(TorusPoint.from_fraction(x))
    d2 = nearest_int_distance(TorusPoint.from_fraction(-x))
    d3 = nearest_int_distance(TorusPoint.from_fraction(1 - x))
    assert d1.lo == d2.lo == d3.lo
    assert Fraction(0) <= d1.lo and d1.hi <= Fraction(1, 2)


def test_interval_point_reduction_and_distance():
    iv = CertifiedInterval(Fraction(33, 8), Fraction(33, 8) + Fraction(1, 2**40))
    p = TorusPoint(interval=iv)
    got = p.interval()
    assert got.lo >= -1 and got.hi < 2
    d = nearest_int_distance(p)
    assert d.contains(Fraction(1, 8))
    wide = TorusPoint(interval=CertifiedInterval(Fraction(0), Fraction(3, 2)))
    assert nearest_int_distance(wide).hi <= Fraction(1, 2)


def test_dirichlet_examples(sqrt2):
    assert dirichlet_approx(TorusPoint.from_fraction(Fraction(1, 2)), 10) == (1, 2)
    assert dirichlet_approx(TorusPoint.from_fraction(0), 7) == (0, 1)
    a, q = dirichlet_approx(TorusPoint.from_exact(sqrt2), 12)
    assert (a, q) == (5, 12)
    # |sqrt2 - 17/12| <= 1/(12*13), i.e. the reduced phase vs 5/12
    diff = sqrt2.fractional_part().sub_fraction(Fraction(5, 12)).abs_value()
    assert diff.cmp_fraction(Fraction(1, 12 * 13)) < 0


def test_dirichlet_invariant_1000_random_thetas():
    gen = generator(2024, "dirichlet-invariant")
    for _ in range(1000):
        theta = random_dyadic(gen)
        for Q in (10, 100, 1000):
            a, q = dirichlet_approx(TorusPoint.from_fraction(theta), Q)
            assert 1 <= q <= Q
            assert abs(theta - Fraction(a, q)) <= Fraction(1, q * (Q + 1))


def test_dirichlet_on_quadratic_phases(sqrt2):
    gen = generator(7, "dirichlet-quad")
    for _ in range(40):
        r = random_dyadic(gen)
        t = shift_by_multiple(TorusPoint.from_fraction(r), 3, sqrt2)
        for Q in (10, 1000):
            a, q = dirichlet_approx(t, Q)
            diff = t.exact.sub_fraction(Fraction(a, q)).abs_value()
            assert diff.cmp_fraction(Fraction(1, q * (Q + 1))) <= 0


def test_phase_algebra_exactness(sqrt2):
    t = phase(Fraction(1, 3), 2, sqrt2)
    assert isinstance(t.exact, QuadraticIrrational)
    # (1/3 + 2 sqrt2) reduced mod 1
    back = shift_by_multiple(t, -2, sqrt2)
    assert isinstance(back.exact, Fraction)
    assert back.exact == Fraction(1, 3)
    doubled = scale_phase(t, -2)
    assert isinstance(doubled.exact, QuadraticIrrational)
    s = shift_fraction(t, Fraction(1, 6))
    assert exact_norm(s) is not None


def test_mixed_surd_shift_rejected(sqrt2):
    t = TorusPoint.from_exact(QuadraticIrrational(0, 1, 1, 3))
    with pytest.raises(ValueError):
        shift_by_multiple(t, 1, sqrt2)
