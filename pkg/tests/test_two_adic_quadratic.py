"""Square detection in completions of Q(sqrt d) above 2.

For rational x the answer has a closed form that only needs plain Q_2
square tests: x is a square in Q_2(sqrt d) iff x or x/d is a square in
Q_2.  That identity (plus exact global squares and a few algebraic
fixtures) is the reference; the implementation works through 2-adic
approximations and must agree everywhere.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grunwald.core_arith import (
    is_square_in_2adic_quadratic,
    is_square_in_q2,
    is_square_in_quadratic_field,
    two_adic_square_profile,
)
from grunwald.errors import ValidationError

SQUAREFREE = [-10, -7, -6, -5, -3, -2, -1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 21, 33, 41, 57, 73]


def brute_q2_square(x: Fraction) -> bool:
    """Hensel: a 2-adic unit is a square iff it is 1 mod 8."""
    assert x != 0
    v = 0
    while x.numerator % 2 == 0:
        x /= 2
        v += 1
    while x.denominator % 2 == 0:
        x *= 2
        v -= 1
    if v % 2:
        return False
    num = x.numerator * pow(x.denominator, -1, 8) % 8
    return num == 1


@given(st.fractions(min_value=-(10**5), max_value=10**5, max_denominator=10**4))
def test_q2_square_matches_hensel(x):
    if x == 0:
        return
    assert is_square_in_q2(x) == brute_q2_square(x)


@pytest.mark.parametrize("d", SQUAREFREE)
def test_rational_elements_closed_form(d):
    xs = [Fraction(n, den) for n in range(-24, 25) if n for den in (1, 2, 3, 8)]
    for x in xs:
        want = is_square_in_q2(x) or is_square_in_q2(x / d)
        assert is_square_in_2adic_quadratic(x, d) == want, (x, d)


@pytest.mark.parametrize("d", [17, 33, 41, 73, -7, -15])
def test_split_primes_give_two_coherent_places(d):
    # d = 1 mod 8: sqrt(d) lies in Q_2, the algebra splits into two copies
    for x in (Fraction(5), Fraction(-1), Fraction(2), Fraction(12), Fraction(9, 4)):
        profile = two_adic_square_profile(x, Fraction(0), d)
        assert len(profile) == 2
        assert profile[0] == profile[1] == is_square_in_q2(x)


@pytest.mark.parametrize("d", [-1, -2, 2, 3, 5, 6, 7, 11, 13, 21])
def test_nonsplit_gives_one_place(d):
    assert len(two_adic_square_profile(Fraction(3), Fraction(0), d)) == 1


def test_global_squares_are_local_squares():
    for d in SQUAREFREE:
        for a, b in [(3, 1), (1, 1), (2, 5), (7, 2), (0, 1), (5, 0)]:
            x0 = Fraction((a * a + b * b * d))
            x1 = Fraction(2 * a * b)
            # (a + b sqrt d)^2 expanded; skip the zero element
            if x0 == 0 and x1 == 0:
                continue
            assert is_square_in_quadratic_field(x0, x1, d)
            for ok in two_adic_square_profile(x0, x1, d):
                assert ok, (d, a, b)


def test_algebraic_fixtures():
    # -1 is a square in Q_2(i) and in Q_2(sqrt 7) = Q_2(i), not in Q_2(sqrt 3)
    assert is_square_in_2adic_quadratic(Fraction(-1), -1)
    assert is_square_in_2adic_quadratic(Fraction(-1), 7)
    assert not is_square_in_2adic_quadratic(Fraction(-1), 3)
    # sqrt(d) itself is a square only if the field has a 4th root of d
    assert not is_square_in_2adic_quadratic((Fraction(0), Fraction(1)), -1)  # i = zeta_4
    assert not is_square_in_2adic_quadratic((Fraction(0), Fraction(1)), 2)  # 2^(1/4) has degree 4
    # 2 + sqrt 2 and its negative: both nonsquares in Q_2(sqrt 2)
    assert not is_square_in_2adic_quadratic((Fraction(2), Fraction(1)), 2)
    assert not is_square_in_2adic_quadratic((Fraction(-2), Fraction(-1)), 2)
    # but (2 + sqrt 2)^2 = 6 + 4 sqrt 2 is one
    assert is_square_in_2adic_quadratic((Fraction(6), Fraction(4)), 2)


def test_multiplicative_consistency():
    # square class arithmetic: x square, y square => x*y square;
    # x square, y nonsquare => x*y nonsquare (per place)
    for d in (2, 3, -1, 5, -7, 17):
        elems = [
            (Fraction(1), Fraction(1)),
            (Fraction(3), Fraction(0)),
            (Fraction(2), Fraction(1)),
            (Fraction(0), Fraction(1)),
            (Fraction(-1), Fraction(2)),
        ]
        for a0, a1 in elems:
            sq0 = a0 * a0 + a1 * a1 * d
            sq1 = 2 * a0 * a1
            for b0, b1 in elems:
                p0 = sq0 * b0 + sq1 * b1 * d
                p1 = sq0 * b1 + sq1 * b0
                if (p0, p1) == (0, 0) or (b0, b1) == (0, 0):
                    continue
                got = two_adic_square_profile(p0, p1, d)
                want = two_adic_square_profile(b0, b1, d)
                assert got == want, (d, (a0, a1), (b0, b1))


def test_rejects_bad_d():
    with pytest.raises(ValidationError):
        is_square_in_2adic_quadratic(Fraction(3), 12)  # not squarefree
    with pytest.raises(ValidationError):
        is_square_in_2adic_quadratic(Fraction(3), 0)
    # d = 1 degenerates to Q itself and is allowed
    assert is_square_in_2adic_quadratic(Fraction(9), 1)
    assert not is_square_in_2adic_quadratic(Fraction(3), 1)


def test_exact_global_square_test():
    assert is_square_in_quadratic_field(Fraction(6), Fraction(4), 2)
    assert not is_square_in_quadratic_field(Fraction(2), Fraction(1), 2)
    assert is_square_in_quadratic_field(Fraction(-4), Fraction(0), -1)  # (2i)^2
    assert is_square_in_quadratic_field(Fraction(9), Fraction(0), 5)
    assert not is_square_in_quadratic_field(Fraction(3), Fraction(0), 5)
