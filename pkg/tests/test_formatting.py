"""Tests for q-notation printing of scalars."""

from fractions import Fraction

import pytest

from iquantum.scalar import ONE, ZERO, const, q, qint, s
from iquantum.utils.formatting import LaurentTerm, format_power, format_scalar, format_terms


@pytest.mark.parametrize(
    ("x", "expected"),
    [
        (qint(3), "q^2 + 1 + q^-2"),
        (qint(2), "q + q^-1"),
        (s, "q^(1/2)"),
        (ZERO, "0"),
        (ONE, "1"),
        (q * -2, "-2*q"),
        (ONE / q, "q^-1"),
        (const(Fraction(1, 2)), "1/2"),
        (ONE / (q + ONE), "(1)/(q + 1)"),
    ],
)
def test_format_scalar(x: object, expected: str) -> None:
    """Scalars print as Laurent polynomials or as a quotient."""
    assert format_scalar(x) == expected  # type: ignore[arg-type]


@pytest.mark.parametrize(
    ("exponent", "expected"),
    [
        (Fraction(0), "1"),
        (Fraction(1), "q"),
        (Fraction(3), "q^3"),
        (Fraction(-1), "q^-1"),
        (Fraction(3, 2), "q^(3/2)"),
        (Fraction(-1, 2), "q^(-1/2)"),
    ],
)
def test_format_power(exponent: Fraction, expected: str) -> None:
    """Integer and half-integer exponents."""
    assert format_power(exponent) == expected


def test_format_terms() -> None:
    """Signs join terms; the empty sum is 0."""
    assert format_terms([]) == "0"
    terms = [LaurentTerm(Fraction(1), Fraction(-3)), LaurentTerm(Fraction(0), Fraction(1))]
    assert format_terms(terms) == "-3*q + 1"
    assert format_terms([LaurentTerm(Fraction(-2), Fraction(1, 2))]) == "1/2*q^-2"
