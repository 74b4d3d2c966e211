import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from asepdual.scalar_ring import (
    TAU,
    T,
    LaurentScalar,
    laurent_eval,
    parse_rational,
    rational_sqrt,
    scalar_pow,
    tau_power,
)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
laurents = st.dictionaries(st.integers(-6, 6), fractions, max_size=5).map(LaurentScalar)
positive_t = st.floats(min_value=0.3, max_value=3.0)


def test_spec_difference_example():
    assert TAU - TAU.inverse() == LaurentScalar({2: 1, -2: -1})
    assert str(TAU - TAU.inverse()) == "t^2 - t^-2"


def test_tau_times_inverse_is_one():
    assert TAU * TAU.inverse() == 1
    assert TAU ** -3 * TAU ** 3 == 1


def test_eval_tau_minus_one():
    assert laurent_eval(TAU - 1, 2.0) == 3.0


def test_eval_rejects_nonpositive():
    with pytest.raises(ValueError):
        laurent_eval(TAU, 0.0)
    with pytest.raises(ValueError):
        laurent_eval(TAU, -1.0)


def test_zero_terms_dropped():
    p = LaurentScalar({1: 1, 0: 0, -1: Fraction(0)})
    assert p.terms == {1: 1}
    assert (T - T).is_zero()
    assert str(T - T) == "0"


def test_constants_compare_with_rationals():
    assert LaurentScalar.constant(Fraction(1, 2)) == Fraction(1, 2)
    assert hash(LaurentScalar.constant(3)) == hash(3)


def test_string_form():
    assert str(LaurentScalar({4: Fraction(-1, 2), 0: Fraction(-1, 2)})) == "-1/2*t^4 - 1/2"
    assert str(tau_power(-1, 3)) == "3*t^-1"


def test_inverse_of_non_unit_fails():
    with pytest.raises(ArithmeticError):
        (TAU + 1).inverse()


def test_scalar_pow_dispatch():
    assert scalar_pow(TAU, -2) == LaurentScalar({-4: 1})
    assert scalar_pow(Fraction(2), -2) == Fraction(1, 4)
    assert scalar_pow(2.0, 3) == 8.0


def test_parse_and_sqrt():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("0.5") == Fraction(1, 2)
    with pytest.raises(ValueError):
        parse_rational("abc")
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_sqrt(Fraction(2)) is None


@given(laurents, laurents, laurents)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0
    assert a * 1 == a


@given(laurents, laurents, positive_t)
def test_evaluation_is_a_homomorphism(a, b, t0):
    scale = 1 + sum(abs(float(c)) * t0 ** e for e, c in a.items()) * (
        1 + sum(abs(float(c)) * t0 ** e for e, c in b.items()))
    assert math.isclose(laurent_eval(a * b, t0), laurent_eval(a, t0) * laurent_eval(b, t0),
                        rel_tol=1e-12, abs_tol=1e-12 * scale)
    assert math.isclose(laurent_eval(a + b, t0), laurent_eval(a, t0) + laurent_eval(b, t0),
                        rel_tol=1e-12, abs_tol=1e-12 * scale)


@given(st.integers(-8, 8), st.integers(-8, 8))
def test_monomial_powers(i, j):
    assert TAU ** i * TAU ** j == TAU ** (i + j)
