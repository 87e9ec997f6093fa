"""Exact scalars in the field Q(q^(1/2)).

Every coefficient in the package is a reduced rational function in a formal
symbol ``s`` with ``q = s**2``. Values are sympy ``FracElement`` objects: they are
immutable, hashable and compare exactly because sympy keeps them in lowest terms
with a sign-normalised denominator.

The module also provides the q-combinatorics ([n]_{q^a}, q-factorials and
q-binomials) and the bar map at q = 1.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from typing import TypeAlias

from sympy import QQ, Symbol
from sympy.core.sympify import SympifyError
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.fields import FracElement, field
from sympy.polys.polyerrors import CoercionFailed

logger = logging.getLogger(__name__)

# Error messages
ERR_QBINOM_RANGE = "q-binomial needs m >= n >= 0, got m={}, n={}"
ERR_QINT_BASE = "q-integer base exponent must be positive, got {}"
ERR_HALF_EXPONENT = "Exponent {} is not a multiple of 1/2"
ERR_NO_SQRT = "No square root of {} inside Q(q^(1/2))"
ERR_PARSE_SCALAR = "Cannot parse scalar {!r}: {}"

SYMBOL = Symbol("s", positive=True)
FIELD, s = field(SYMBOL, QQ)
DOMAIN = FIELD.to_domain()

QScalar: TypeAlias = FracElement
ScalarLike: TypeAlias = FracElement | int | Fraction

ZERO: QScalar = FIELD.zero
ONE: QScalar = FIELD.one
q: QScalar = s**2


def const(value: int | Fraction) -> QScalar:
    """Embed a rational number into the scalar field.

    Args:
        value (int | Fraction): Rational constant

    Returns:
        QScalar: The constant as a field element
    """
    value = Fraction(value)
    return ONE * QQ(value.numerator, value.denominator)


def as_scalar(value: ScalarLike) -> QScalar:
    """Coerce an int, Fraction or field element into a field element.

    Args:
        value (ScalarLike): Value to coerce

    Returns:
        QScalar: Field element equal to ``value``
    """
    if isinstance(value, FracElement):
        return value
    return const(value)


def qpow(exponent: int | Fraction) -> QScalar:
    """Return q**exponent for an integer or half-integer exponent.

    Args:
        exponent (int | Fraction): Exponent of q, a multiple of 1/2

    Returns:
        QScalar: The power of q
    """
    doubled = Fraction(exponent) * 2
    if doubled.denominator != 1:
        raise ValueError(ERR_HALF_EXPONENT.format(exponent))
    return s ** int(doubled)


@cache
def qint(n: int, a: int = 1) -> QScalar:
    """Quantum integer [n]_{q^a} = (q^{an} - q^{-an}) / (q^a - q^{-a}).

    Args:
        n (int): The integer being quantised
        a (int): Positive exponent of the base q^a

    Returns:
        QScalar: The quantum integer
    """
    if a < 1:
        raise ValueError(ERR_QINT_BASE.format(a))
    return (qpow(a * n) - qpow(-a * n)) / (qpow(a) - qpow(-a))


@cache
def qfactorial(n: int, a: int = 1) -> QScalar:
    """Quantum factorial [n]_{q^a}! with [0]! = 1.

    Args:
        n (int): Non-negative integer
        a (int): Positive exponent of the base q^a

    Returns:
        QScalar: The quantum factorial
    """
    result = ONE
    for m in range(1, n + 1):
        result *= qint(m, a)
    return result


@cache
def qbinom(m: int, n: int, a: int = 1) -> QScalar:
    """Quantum binomial coefficient {m brack n}_{q^a}.

    Args:
        m (int): Upper index
        n (int): Lower index, 0 <= n <= m
        a (int): Positive exponent of the base q^a

    Returns:
        QScalar: The q-binomial, a Laurent polynomial in q^a
    """
    if n < 0 or m < n:
        raise ValueError(ERR_QBINOM_RANGE.format(m, n))
    return qfactorial(m, a) / (qfactorial(m - n, a) * qfactorial(n, a))


@dataclass(frozen=True)
class LimitValue:
    """Image of a scalar under the bar map at q = 1.

    Attributes:
        value: The rational value, or None when the scalar has a pole at q = 1
    """

    value: Fraction | None

    @property
    def is_pole(self) -> bool:
        """bool: Whether the scalar is not regular at q = 1."""
        return self.value is None

    def __str__(self) -> str:
        return "pole" if self.value is None else str(self.value)


def _value_at_one(poly: object) -> Fraction:
    total = sum(poly.values(), QQ.zero)  # type: ignore[attr-defined]
    return Fraction(int(total.numerator), int(total.denominator))


def limit_at_one(x: QScalar) -> LimitValue:
    """Evaluate a scalar at s = 1 (equivalently q = 1).

    Args:
        x (QScalar): Scalar to specialise

    Returns:
        LimitValue: Exact rational value, or the pole marker when the reduced
            denominator vanishes at s = 1
    """
    denominator = _value_at_one(x.denom)
    if denominator == 0:
        return LimitValue(None)
    return LimitValue(_value_at_one(x.numer) / denominator)


def is_regular_at_one(x: QScalar) -> bool:
    """Check membership in the local ring of scalars regular at q = 1.

    Args:
        x (QScalar): Scalar to test

    Returns:
        bool: True when the bar map is defined on ``x``
    """
    return _value_at_one(x.denom) != 0


def monomial_power(x: QScalar) -> tuple[int, Fraction] | None:
    """Read a scalar of the form +-q^e.

    Args:
        x (QScalar): Scalar to inspect

    Returns:
        tuple[int, Fraction] | None: The sign and the exponent e (a multiple of
            1/2), or None when ``x`` is not a signed power of q
    """
    if not x:
        return None
    num_terms, den_terms = x.numer.terms(), x.denom.terms()
    if len(num_terms) != 1 or len(den_terms) != 1:
        return None
    (num_monom, num_coeff), (den_monom, den_coeff) = num_terms[0], den_terms[0]
    ratio = Fraction(int(num_coeff.numerator), int(num_coeff.denominator)) / Fraction(
        int(den_coeff.numerator), int(den_coeff.denominator)
    )
    if abs(ratio) != 1:
        return None
    return (1 if ratio > 0 else -1), Fraction(num_monom[0] - den_monom[0], 2)


def _poly_to_scalar(poly: object) -> QScalar:
    result = ZERO
    for monom, coeff in poly.terms():  # type: ignore[attr-defined]
        result += s ** monom[0] * coeff
    return result


def _rational_sqrt(value: Fraction) -> Fraction | None:
    if value < 0:
        return None
    num, den = math.isqrt(value.numerator), math.isqrt(value.denominator)
    if num * num != value.numerator or den * den != value.denominator:
        return None
    return Fraction(num, den)


def scalar_sqrt(x: ScalarLike) -> QScalar:
    """Exact square root inside Q(q^(1/2)).

    The root with positive value at q = 1 is returned when that value is
    nonzero and finite.

    Args:
        x (ScalarLike): Scalar whose square root is wanted

    Returns:
        QScalar: y with y * y == x
    """
    x = as_scalar(x)
    if not x:
        return ZERO
    # sqrt(n/d) = sqrt(n*d)/d keeps the radicand polynomial
    radicand = x.numer * x.denom
    coeff, factors = radicand.factor_list()
    root_coeff = _rational_sqrt(Fraction(int(coeff.numerator), int(coeff.denominator)))
    if root_coeff is None or any(mult % 2 for _, mult in factors):
        raise ValueError(ERR_NO_SQRT.format(x))
    root = const(root_coeff)
    for factor, mult in factors:
        root *= _poly_to_scalar(factor) ** (mult // 2)
    root /= _poly_to_scalar(x.denom)
    limit = limit_at_one(root)
    if limit.value is not None and limit.value < 0:
        root = -root
    return root


def parse_scalar(text: str) -> QScalar:
    """Parse a scalar string such as ``"q^-1"``, ``"-q^2"``, ``"1/2"`` or ``"s"``.

    ``s`` denotes q^(1/2); ``q^(1/2)`` is accepted as well.

    Args:
        text (str): Scalar expression in q and s

    Returns:
        QScalar: The parsed field element
    """
    transformations = (*standard_transformations, convert_xor)
    try:
        expr = parse_expr(text, local_dict={"q": SYMBOL**2, "s": SYMBOL}, transformations=transformations)
        return FIELD.from_expr(expr)
    except (SympifyError, SyntaxError, TypeError, ValueError, CoercionFailed) as e:
        raise ValueError(ERR_PARSE_SCALAR.format(text, e)) from e
