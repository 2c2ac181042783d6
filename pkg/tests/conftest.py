from fractions import Fraction

import pytest

from dcl.quadratic import QuadraticIrrational


@pytest.fixture
def sqrt2() -> QuadraticIrrational:
    return QuadraticIrrational(0, 1, 1, 2)


@pytest.fixture
def phi() -> QuadraticIrrational:
    return QuadraticIrrational(1, 1, 2, 5)


def mp_value(alpha: QuadraticIrrational, dps: int = 60):
    """Independent high-precision value of alpha via mpmath."""
    import mpmath

    with mpmath.workdps(dps):
        return (alpha.a + alpha.b * mpmath.sqrt(alpha.d)) / alpha.c


def trial_division_primes(lo: int, hi: int) -> list[int]:
    """Reference primality oracle, independent of the sieve."""
    out = []
    for n in range(max(lo, 2), hi + 1):
        f = 2
        is_p = n > 1
        while f * f <= n:
            if n % f == 0:
                is_p = False
                break
            f += 1
        if is_p:
            out.append(n)
    return out
