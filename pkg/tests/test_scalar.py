"""Tests for the scalar field Q(q^(1/2)) and its q-number helpers."""

from fractions import Fraction

import pytest

from iquantum.scalar import (
    ONE,
    ZERO,
    as_scalar,
    const,
    is_regular_at_one,
    limit_at_one,
    monomial_power,
    parse_scalar,
    q,
    qbinom,
    qfactorial,
    qint,
    qpow,
    s,
    scalar_sqrt,
)


def test_q_is_square_of_s() -> None:
    """q is s squared and qpow(1/2) is s."""
    assert q == s * s
    assert qpow(Fraction(1, 2)) == s
    assert qpow(-1) * q == ONE


def test_qpow_rejects_non_half_exponent() -> None:
    """Exponents that are not multiples of 1/2 raise ValueError."""
    with pytest.raises(ValueError, match="multiple of 1/2"):
        qpow(Fraction(1, 3))


@pytest.mark.parametrize(
    ("n", "expected"),
    [
        (0, ZERO),
        (1, ONE),
        (2, q + ONE / q),
        (3, q * q + ONE + ONE / (q * q)),
        (-2, -(q + ONE / q)),
    ],
)
def test_qint_values(n: int, expected: object) -> None:
    """[n] is the balanced quantum integer."""
    assert qint(n) == expected


def test_qint_base() -> None:
    """[2]_{q^2} = q^2 + q^-2 and non-positive bases are rejected."""
    assert qint(2, 2) == q * q + ONE / (q * q)
    with pytest.raises(ValueError, match="positive"):
        qint(2, 0)


def test_qfactorial_and_qbinom() -> None:
    """Factorials multiply quantum integers, binomials divide factorials."""
    assert qfactorial(0) == ONE
    assert qfactorial(3) == qint(2) * qint(3)
    assert qbinom(2, 1) == qint(2)
    assert qbinom(4, 2) == qint(4) * qint(3) / qint(2)
    assert qbinom(5, 0) == ONE


def test_qbinom_range() -> None:
    """m < n is outside the q-binomial's domain."""
    with pytest.raises(ValueError, match="m >= n"):
        qbinom(1, 2)


def test_const_and_as_scalar() -> None:
    """Rationals embed as constants, field elements pass through."""
    assert const(Fraction(1, 2)) * 2 == ONE
    assert as_scalar(3) == const(3)
    assert as_scalar(q) is q


@pytest.mark.parametrize(
    ("x", "expected"),
    [
        (qint(3), Fraction(3)),
        (qint(2) * qint(2), Fraction(4)),
        (s, Fraction(1)),
        ((q - ONE) / (q * q - ONE), Fraction(1, 2)),
    ],
)
def test_limit_at_one(x: object, expected: Fraction) -> None:
    """The bar map evaluates at q = 1 after cancellation."""
    assert limit_at_one(x).value == expected  # type: ignore[arg-type]


def test_limit_at_one_pole() -> None:
    """A denominator vanishing at q = 1 gives the pole marker."""
    value = limit_at_one(ONE / (q - ONE))
    assert value.is_pole
    assert str(value) == "pole"
    assert not is_regular_at_one(ONE / (q - ONE))
    assert is_regular_at_one(qint(4) / qint(2))


@pytest.mark.parametrize(
    ("x", "expected"),
    [
        (q, (1, Fraction(1))),
        (-q * q, (-1, Fraction(2))),
        (s, (1, Fraction(1, 2))),
        (ONE / q, (1, Fraction(-1))),
        (ONE, (1, Fraction(0))),
        (qint(2), None),
        (const(2), None),
        (ZERO, None),
    ],
)
def test_monomial_power(x: object, expected: tuple[int, Fraction] | None) -> None:
    """Only signed powers of q are read."""
    assert monomial_power(x) == expected  # type: ignore[arg-type]


@pytest.mark.parametrize("x", [q, qint(2) * qint(2), const(4), ONE / (q * q)])
def test_scalar_sqrt_squares_back(x: object) -> None:
    """The square root squares back to its argument."""
    root = scalar_sqrt(x)  # type: ignore[arg-type]
    assert root * root == x


def test_scalar_sqrt_positive_branch() -> None:
    """The root positive at q = 1 is chosen."""
    assert scalar_sqrt(qint(2) * qint(2)) == qint(2)
    assert scalar_sqrt(q) == s
    assert scalar_sqrt(ZERO) == ZERO


@pytest.mark.parametrize(("x", "expected"), [(4, const(2)), (0, ZERO), (Fraction(1, 9), const(Fraction(1, 3)))])
def test_scalar_sqrt_plain_numbers(x: int | Fraction, expected: object) -> None:
    """Plain ints and Fractions are coerced, including zero-sum radicands such as ZERO + 4."""
    assert scalar_sqrt(x) == expected
    assert scalar_sqrt(ZERO * q + 4) == const(2)


@pytest.mark.parametrize("x", [const(2), -ONE, qint(2)])
def test_scalar_sqrt_missing(x: object) -> None:
    """Scalars without a root in Q(q^(1/2)) raise ValueError."""
    with pytest.raises(ValueError, match="square root"):
        scalar_sqrt(x)  # type: ignore[arg-type]


@pytest.mark.parametrize(
    ("text", "expected"),
    [
        ("q^-1", ONE / q),
        ("s", s),
        ("q^(1/2)", s),
        ("-q^2 + 1/2", -q * q + const(Fraction(1, 2))),
        ("(q - q^-1)^2", (q - ONE / q) * (q - ONE / q)),
    ],
)
def test_parse_scalar(text: str, expected: object) -> None:
    """Scalar strings parse in q and s."""
    assert parse_scalar(text) == expected


def test_parse_scalar_rejects_unknown_symbol() -> None:
    """Symbols other than q and s are rejected."""
    with pytest.raises(ValueError, match="Cannot parse"):
        parse_scalar("x + 1")
