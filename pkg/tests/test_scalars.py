"""Exact Gaussian-rational scalar arithmetic and its text format."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncforms.scalars import I, ONE, ZERO, Scalar, format_scalar, parse_scalar

rationals = st.fractions(max_denominator=50)
scalars = st.builds(Scalar, rationals, rationals)


def test_constants():
    assert ZERO.is_zero()
    assert ONE * ONE == ONE
    assert I * I == Scalar(-1)


def test_immutability_and_hash():
    s = Scalar(1, 2)
    with pytest.raises(AttributeError):
        s.re = Fraction(3)
    assert hash(Scalar(1, 2)) == hash(Scalar(Fraction(1), Fraction(2)))


@pytest.mark.parametrize(
    "text, value",
    [
        ("3", Scalar(3)),
        ("-1/2", Scalar(Fraction(-1, 2))),
        ("1/2+3/4*i", Scalar(Fraction(1, 2), Fraction(3, 4))),
        ("2-i", Scalar(2, -1)),
        ("i", Scalar(0, 1)),
        ("-i", Scalar(0, -1)),
        ("0", ZERO),
    ],
)
def test_parse_scalar(text, value):
    assert parse_scalar(text) == value


@pytest.mark.parametrize("text", ["", "one", "1//2", "2i+3"])
def test_parse_scalar_rejects_garbage(text):
    with pytest.raises(ValueError):
        parse_scalar(text)


@given(scalars)
def test_format_parse_round_trip(s):
    assert parse_scalar(format_scalar(s)) == s


@given(scalars, scalars)
def test_field_axioms_binary(a, b):
    assert a + b == b + a
    assert a * b == b * a
    assert a - b == -(b - a)


@given(scalars, scalars, scalars)
def test_distributivity(a, b, c):
    assert a * (b + c) == a * b + a * c


@given(scalars)
def test_inverse(a):
    if a:
        assert a * a.inverse() == ONE
        assert (ONE / a) * a == ONE
    else:
        with pytest.raises(ZeroDivisionError):
            a.inverse()


@given(scalars)
def test_conjugation_norm(a):
    n = a * a.conjugate()
    assert n.im == 0 and n.re >= 0
