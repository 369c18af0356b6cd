from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kqfunc.coeff import (
    BETA,
    HALF,
    ONE,
    ZERO,
    BetaPoly,
    BetaScalar,
    LaurentBetaPoly,
    binom_signed,
    is_in_q_beta,
    is_in_z_beta,
    is_laurent_integral,
    parse_scalar,
    scalar,
)
from strategies import beta_scalars, polynomial_scalars

b = BETA


def falling_binomial(n, k):
    num = 1
    for i in range(k):
        num *= n - i
    return Fraction(num, factorial(k))


def test_common_factor_cancels():
    assert (b ** 2 - 1) / (b - 1) == b + 1
    assert ((b ** 2 - 1) / (b - 1)).den == (1,)


def test_half_times_two():
    assert HALF * 2 == ONE


def test_half_beta_twice():
    assert b / 2 + b / 2 == b


def test_division_by_zero_is_distinct_error():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO
    with pytest.raises(ZeroDivisionError):
        BetaScalar(1, 0)


@pytest.mark.parametrize("value, expected", [
    (b ** 3 - 2 * b, True),
    (HALF, False),
    ((b ** 2 + b) / b, True),
    (b / 2, False),
    (ONE / b, False),
])
def test_is_in_z_beta(value, expected):
    assert is_in_z_beta(value) is expected


def test_ring_predicates_nest():
    assert is_in_q_beta(b / 2) and not is_in_z_beta(b / 2)
    assert is_laurent_integral(ONE / b ** 3) and not is_in_q_beta(ONE / b ** 3)
    assert not is_laurent_integral(ONE / (2 * b))
    assert not is_laurent_integral(ONE / (b + 1))


@pytest.mark.parametrize("n, k, expected", [(-1, 2, 1), (-3, 1, -3), (5, 0, 1), (-2, 3, -4), (4, 6, 0)])
def test_binom_signed_examples(n, k, expected):
    assert binom_signed(n, k) == expected


@given(st.integers(-12, 12), st.integers(0, 8))
def test_binom_signed_matches_falling_factorial(n, k):
    assert binom_signed(n, k) == falling_binomial(n, k)


@pytest.mark.parametrize("value, text", [
    (3 * b ** 2 - b + 1, "3*b^2 - b + 1"),
    ((b ** 2 + 1) / 2, "(b^2 + 1) / 2"),
    (-b / 2, "-b / 2"),
    (ONE / b, "1 / b"),
    (ONE / (2 * b), "1 / (2*b)"),
    (ZERO, "0"),
    (scalar(Fraction(-3, 4)), "-3 / 4"),
    ((b + 1) / (b - 1), "(b + 1) / (b - 1)"),
])
def test_canonical_text(value, text):
    assert value.to_text() == text
    assert parse_scalar(text) == value


def test_parse_accepts_laurent_monomials():
    assert parse_scalar("b^-2") == ONE / b ** 2
    assert parse_scalar("2*(b + 1)^2 / 4") == (b + 1) ** 2 / 2


def test_sign_normalization_puts_sign_on_numerator():
    x = BetaScalar(BetaScalar.from_poly([1]), BetaScalar.from_poly([0, -2]))
    assert x.den[-1] > 0
    assert x == -ONE / (2 * b)


def test_at_beta():
    assert ((b + 1) / (b - 1)).at_beta(3) == 2
    with pytest.raises(ZeroDivisionError):
        (ONE / b).at_beta(0)


def test_beta_poly_basic():
    p = BetaPoly({0: 1, 2: 3})
    assert p.coefficients == {0: 1, 2: 3}
    assert p.degree() == 2
    assert (p * p).coefficients == {0: 1, 2: 6, 4: 9}
    assert p(2) == 13


def test_laurent_round_trip():
    x = 3 * b ** 2 - ONE / b
    lp = LaurentBetaPoly.from_scalar(x)
    assert lp.coefficients == {2: 3, -1: -1}
    assert lp.to_scalar() == x
    assert not lp.is_polynomial()
    assert LaurentBetaPoly({-1: 1}) ** -2 == LaurentBetaPoly({2: 1})
    with pytest.raises(ValueError):
        LaurentBetaPoly.from_scalar(HALF)


# -- field axioms on random elements ---------------------------------------

@settings(max_examples=60, deadline=None)
@given(beta_scalars(), beta_scalars(), beta_scalars())
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x and x * y == y * x
    assert x - x == ZERO
    if x:
        assert x * x.inverse() == ONE


@settings(max_examples=60, deadline=None)
@given(beta_scalars())
def test_normalization_is_idempotent(x):
    again = BetaScalar(x)
    assert (again.num, again.den) == (x.num, x.den)
    assert parse_scalar(x.to_text()) == x
    assert hash(again) == hash(x)


@given(polynomial_scalars, polynomial_scalars)
def test_z_beta_is_a_ring(x, y):
    assert is_in_z_beta(x) and is_in_z_beta(y)
    assert is_in_z_beta(x * y) and is_in_z_beta(x + y)
