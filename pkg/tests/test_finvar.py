import pytest
from hypothesis import given, settings

from kqfunc.coeff import BETA, ONE, scalar
from kqfunc.finvar import (
    FactorError,
    FinitePoly,
    IntegralityError,
    check_dual_cancellation,
    check_kq_cancellation,
    complete_homogeneous,
    divide_out_linear,
    kq_cancellation_residual,
    linear_divisor,
    specialize,
)
from kqfunc.kqfam import _gq_numerator, p_beta_g, q_G, q_g
from kqfunc.psym import PSeries
from strategies import pseries

b = BETA


def x(i, nv, degree=None):
    return FinitePoly.var(i, nv, degree)


def test_specialize_examples():
    assert specialize(PSeries.p(2, 2), 2).same_terms(x(0, 2) ** 2 + x(1, 2) ** 2)
    assert specialize(PSeries(2, {(1, 1): 1}), 1).same_terms(x(0, 1) ** 2)
    assert specialize(q_g(1), 1).same_terms(x(0, 1).scale(2))


def test_specialize_keeps_degree_bound():
    f = specialize(q_G(1, 4), 1)
    assert f.degree == 4
    assert f.total_degree() == 4


@settings(max_examples=25, deadline=None)
@given(pseries(degree=4), pseries(degree=4))
def test_specialize_is_a_ring_homomorphism(u, v):
    lhs = specialize(u * v, 2)
    rhs = specialize(u, 2) * specialize(v, 2)
    assert lhs.same_terms(rhs)


def test_dual_cancellation_examples():
    assert check_dual_cancellation(specialize(p_beta_g(1), 3))
    assert not check_dual_cancellation(specialize(PSeries.p(2, 2), 3))
    assert check_dual_cancellation(FinitePoly.constant(scalar(7) + b, 3))


def test_kq_cancellation_examples():
    assert check_kq_cancellation(specialize(q_G(3, 6), 3), 6)
    assert not check_kq_cancellation(specialize(PSeries.p(2, 6), 3), 6)
    assert check_kq_cancellation(FinitePoly.constant(ONE, 3, 6), 6)
    res = kq_cancellation_residual(specialize(PSeries.p(2, 6), 3), 6)
    # t^2 + tbar^2 starts with 2 t^2
    assert res[(2, 0)] == 2


def test_cancellation_needs_two_variables():
    with pytest.raises(ValueError):
        check_dual_cancellation(FinitePoly.constant(ONE, 1))


def test_divide_out_linear_examples():
    z = x(0, 1)
    assert divide_out_linear(z + b, 0, "-beta").same_terms(FinitePoly.constant(ONE, 1))
    assert divide_out_linear(z * z - b * b, 0, "-beta").same_terms(z - b)
    with pytest.raises(FactorError):
        divide_out_linear(z + 1, 0, "-beta")
    two_bz = linear_divisor(1, 0, "-2/beta")
    assert divide_out_linear(two_bz * (z + 3), 0, "-2/beta").same_terms(z + 3)


def test_divide_out_linear_rejects_non_laurent_quotient():
    z = x(0, 1)
    with pytest.raises(IntegralityError):
        divide_out_linear((linear_divisor(1, 0, "-2/beta") * (z + 3)).scale(ONE / 3), 0, "-2/beta")


@pytest.mark.parametrize("N", [1, 2, 3])
def test_division_recomposes(N):
    num = _gq_numerator(N)
    q = divide_out_linear(num, N, "-beta")
    assert (q * linear_divisor(N + 1, N, "-beta")).same_terms(num)


def test_gq_numerator_one_variable_matches_closed_form():
    # (1 + x(z + b))(1 + b x) - (1 - x z) = (z + b)(2x + b x^2)
    num = _gq_numerator(1)
    xx, z = x(0, 2), x(1, 2)
    assert num.same_terms((z + b) * (xx.scale(2) + (xx * xx).scale(b)))


def test_complete_homogeneous():
    h2 = complete_homogeneous(2, 2)
    assert h2.same_terms(x(0, 2) ** 2 + x(0, 2) * x(1, 2) + x(1, 2) ** 2)


def test_finite_poly_json_round_trip():
    f = specialize(q_G(2, 4), 2)
    assert FinitePoly.from_json(f.to_json()) == f
