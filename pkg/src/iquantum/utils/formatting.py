"""Utilities for printing scalars in q-notation.

Scalars are printed as Laurent polynomials in q when the denominator is a
monomial ("q^2 + 2 + q^-2"), odd powers of s as half-integer exponents
("q^(1/2)"), and as "(num)/(den)" otherwise.
"""

from dataclasses import dataclass
from fractions import Fraction

from iquantum.scalar import QScalar


@dataclass(frozen=True)
class LaurentTerm:
    """A single term c * q^e of a printed scalar."""

    exponent: Fraction
    coeff: Fraction


def _poly_terms(poly: object, shift: int = 0, scale: Fraction = Fraction(1)) -> list[LaurentTerm]:
    """Turn a polynomial in s into terms in q.

    Args:
        poly: sympy PolyElement in s
        shift: Power of s divided out of every term
        scale: Rational factor divided out of every coefficient

    Returns:
        list[LaurentTerm]: Terms sorted by decreasing exponent
    """
    terms = [
        LaurentTerm(
            exponent=Fraction(monom[0] - shift, 2),
            coeff=Fraction(int(c.numerator), int(c.denominator)) / scale,
        )
        for monom, c in poly.terms()  # type: ignore[attr-defined]
        if c
    ]
    return sorted(terms, key=lambda t: t.exponent, reverse=True)


def format_power(exponent: Fraction) -> str:
    """Format q^e.

    Args:
        exponent: Exponent of q

    Returns:
        str: "1", "q", "q^3", "q^-1" or "q^(1/2)"
    """
    if exponent == 0:
        return "1"
    if exponent == 1:
        return "q"
    if exponent.denominator == 1:
        return f"q^{exponent.numerator}"
    return f"q^({exponent})"


def format_terms(terms: list[LaurentTerm]) -> str:
    """Join Laurent terms into a signed sum.

    Args:
        terms: Terms to print, highest exponent first

    Returns:
        str: The printed sum, "0" when empty
    """
    if not terms:
        return "0"
    pieces: list[str] = []
    for term in terms:
        sign = "-" if term.coeff < 0 else "+"
        magnitude = abs(term.coeff)
        power = format_power(term.exponent)
        if power == "1":
            body = str(magnitude)
        elif magnitude == 1:
            body = power
        else:
            body = f"{magnitude}*{power}"
        if not pieces:
            pieces.append(body if sign == "+" else f"-{body}")
        else:
            pieces.append(f" {sign} {body}")
    return "".join(pieces)


def format_scalar(x: QScalar) -> str:
    """Canonical string form of a scalar.

    Args:
        x: Scalar to print

    Returns:
        str: Laurent form in q when possible, "(num)/(den)" otherwise
    """
    denom_terms = x.denom.terms()
    if len(denom_terms) == 1:
        (monom, c) = denom_terms[0]
        scale = Fraction(int(c.numerator), int(c.denominator))
        return format_terms(_poly_terms(x.numer, shift=monom[0], scale=scale))
    numer = format_terms(_poly_terms(x.numer))
    denom = format_terms(_poly_terms(x.denom))
    return f"({numer})/({denom})"
