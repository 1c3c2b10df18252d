from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from kinlog.scalars import (
    EXACT,
    F64,
    DivisionByZero,
    FieldError,
    NegativeArgument,
    NotPerfectSquare,
    exact_sqrt,
    field_by_name,
    parse_scalar,
    pythagorean_velocity,
)

rationals = st.fractions(min_value=-100, max_value=100, max_denominator=50)


def test_basic_field_ops():
    assert EXACT.add(Fraction(1, 2), Fraction(1, 3)) == Fraction(5, 6)
    assert EXACT.cmp(Fraction(-2), Fraction(3)) == -1
    assert EXACT.mul(Fraction(2, 3), Fraction(3, 2)) == 1
    assert EXACT.inv(Fraction(4)) == Fraction(1, 4)


def test_inv_zero_is_explicit_error():
    with pytest.raises(DivisionByZero):
        EXACT.inv(Fraction(0))
    with pytest.raises(DivisionByZero):
        F64.inv(0.0)
    with pytest.raises(DivisionByZero):
        EXACT.div(Fraction(1), Fraction(0))


def test_sqrt_examples():
    assert EXACT.sqrt(Fraction(0)) == 0
    assert EXACT.sqrt(Fraction(16, 25)) == Fraction(4, 5)
    with pytest.raises(NotPerfectSquare):
        EXACT.sqrt(Fraction(2))
    with pytest.raises(NegativeArgument):
        EXACT.sqrt(Fraction(-1))
    with pytest.raises(NegativeArgument):
        F64.sqrt(-1.0)
    assert F64.sqrt(2.25) == 1.5


@given(rationals, rationals, rationals)
def test_field_laws_exact(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    if a != 0:
        assert a * EXACT.inv(a) == 1


@given(rationals, rationals)
def test_order_compatible(a, b):
    if a <= b:
        assert a + 1 <= b + 1
    if a >= 0 and b >= 0:
        assert a * b >= 0


def test_pythagorean_velocity_examples():
    pv = pythagorean_velocity(Fraction(0), 1)
    assert (pv.v, pv.gamma_inv) == (0, 1)
    pv = pythagorean_velocity(Fraction(1, 3), 1)
    assert (pv.v, pv.gamma_inv) == (Fraction(3, 5), Fraction(4, 5))
    pv = pythagorean_velocity(Fraction(1, 2), 3)
    assert (pv.v, pv.gamma_inv) == (Fraction(12, 5), Fraction(3, 5))
    with pytest.raises(FieldError):
        pythagorean_velocity(Fraction(3, 2), 1)


@given(st.fractions(min_value=0, max_value=1, max_denominator=40).filter(lambda t: t < 1))
def test_pythagorean_invariant(t):
    c = Fraction(2)
    pv = pythagorean_velocity(t, c)
    assert (pv.v / c) ** 2 + pv.gamma_inv**2 == 1
    assert 0 <= pv.v < c
    assert exact_sqrt(1 - pv.v**2 / c**2) == pv.gamma_inv


@given(rationals, rationals)
def test_backends_agree(a, b):
    fa, fb = float(a), float(b)
    assert abs(F64.add(fa, fb) - float(EXACT.add(a, b))) <= 1e-12 * max(1.0, abs(float(a + b)))
    assert abs(F64.mul(fa, fb) - float(EXACT.mul(a, b))) <= 1e-12 * max(1.0, abs(float(a * b)))
    if a != 0:
        assert abs(F64.inv(fa) - float(EXACT.inv(a))) <= 1e-12 * max(1.0, abs(float(1 / a)))


def test_parse_and_names():
    assert parse_scalar("3/5") == Fraction(3, 5)
    assert parse_scalar("0.25") == Fraction(1, 4)
    assert field_by_name("exact") is EXACT
    assert field_by_name("f64") is F64
    with pytest.raises(FieldError):
        field_by_name("f32")
