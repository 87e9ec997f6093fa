"""Tests for expression trees, mappers and the braid group action."""

from fractions import Fraction

import pytest

from iquantum.cartan import satake
from iquantum.freealg import (
    UNIT,
    ZERO_EXPR,
    E,
    F,
    Gen,
    K,
    KElem,
    Product,
    Scaled,
    Sum,
    add,
    antipode,
    collect_generators,
    k_inverse,
    k_name,
    kbracket,
    lusztig_T,
    mul,
    phi_reparam,
    qcomm,
    serre,
    serre_nested,
)
from iquantum.linalg import ExactMatrix
from iquantum.scalar import ONE, q
from iquantum.urep import ModuleRep, vector_rep
from iquantum.utils.shared import ContractError


@pytest.fixture(scope="module")
def sl2() -> ModuleRep:
    """Vector representation of U_q(sl2)."""
    return vector_rep(2)


@pytest.fixture(scope="module")
def sl3() -> ModuleRep:
    """Vector representation of U_q(sl3)."""
    return vector_rep(3)


def test_print_nested_bracket() -> None:
    """Nested q-commutators print in bracket notation."""
    b1, b2 = Gen("B", 1), Gen("B", 2)
    assert str(qcomm(b2, qcomm(b2, b1, 1), -1)) == "[B2,[B2,B1]_q]_q^-1"
    assert str(qcomm(b1, b2)) == "[B1,B2]"


def test_print_sums_and_scalars() -> None:
    """Negative terms print with a minus sign, scalars in parentheses."""
    assert str(E(1) - F(1)) == "E1 - F1"
    assert str(E(1) * q) == "(q)*E1"
    assert str(mul(E(1), F(2))) == "E1*F2"


def test_add_and_mul_flatten() -> None:
    """Nested sums and products are flattened, units and zeros dropped."""
    total = add(E(1), add(E(2), F(1)))
    assert isinstance(total, Sum)
    assert len(total.terms) == 3
    product = mul(E(1), mul(E(2), F(1)), UNIT)
    assert isinstance(product, Product)
    assert len(product.factors) == 3
    assert add() == ZERO_EXPR
    assert add(ZERO_EXPR, E(1)) == E(1)
    assert mul(UNIT, E(1)) == E(1)
    assert E(1) ** 0 == UNIT


def test_collect_generators() -> None:
    """Generator keys are collected, plain K elements as "K"."""
    expr = qcomm(E(1), mul(F(2), K(2, 1))) + Gen("B", 3)
    assert collect_generators(expr) == frozenset({"E1", "F2", "K", "B3"})


def test_k_inverse_labels() -> None:
    """Labels gain or lose the inverse suffix."""
    k = KElem((1, -1), "k1")
    inverse = k_inverse(k)
    assert inverse.alpha == (-1, 1)
    assert inverse.label == "k1^-1"
    assert k_inverse(inverse).label == "k1"


@pytest.mark.parametrize(
    ("alpha", "expected"),
    [((0, 0), "1"), ((1, 0), "K1"), ((0, -1), "K2^-1"), ((1, 1), "K(1,1)")],
)
def test_k_name(alpha: tuple[int, ...], expected: str) -> None:
    """K_alpha prints by its support."""
    assert k_name(alpha) == expected


def test_e_f_commutator(sl2: ModuleRep) -> None:
    """[E, F] = [K; 0] on the vector representation of sl2."""
    lhs = sl2.evaluate(qcomm(E(1), F(1)))
    rhs = sl2.evaluate(kbracket(K(1, 1)))
    assert lhs == rhs
    assert lhs == ExactMatrix.diag([ONE, -ONE])


@pytest.mark.parametrize(("i", "j"), [(1, 2), (2, 1)])
def test_serre_vanishes(sl3: ModuleRep, i: int, j: int) -> None:
    """Serre elements vanish in both forms."""
    assert sl3.evaluate(serre(i, j, E(i), E(j), sl3)).is_zero
    assert sl3.evaluate(serre_nested(i, j, F(i), F(j), sl3)).is_zero


def test_serre_same_vertex(sl3: ModuleRep) -> None:
    """The Serre element needs distinct vertices."""
    with pytest.raises(ContractError):
        serre(1, 1, E(1), E(1), sl3)


def test_lusztig_t_on_simple_root(sl3: ModuleRep) -> None:
    """T_1(E_1) = -F_1 K_1 and T_1 reflects K_alpha."""
    assert sl3.evaluate(lusztig_T(1, E(1), sl3)) == sl3.evaluate(-mul(F(1), K(2, 1)))
    assert sl3.evaluate(lusztig_T(1, K(2, 1), sl3)) == sl3.evaluate(K(2, 1, -1))


@pytest.mark.parametrize("x", [E(2), F(2), mul(E(1), E(2))])
def test_lusztig_t_inverse(sl3: ModuleRep, x: object) -> None:
    """T_1^-1 undoes T_1."""
    image = lusztig_T(1, x, sl3)  # type: ignore[arg-type]
    assert sl3.evaluate(lusztig_T(1, image, sl3, inverse=True)) == sl3.evaluate(x)  # type: ignore[arg-type]


def test_lusztig_t_rejects_b_generators(sl3: ModuleRep) -> None:
    """The braid action is defined on E, F and K only."""
    with pytest.raises(ContractError):
        lusztig_T(1, Gen("B", 1), sl3)


def test_antipode_of_e(sl2: ModuleRep) -> None:
    """S(E) = -K^-1 E."""
    assert sl2.evaluate(antipode(E(1), 1)) == sl2.evaluate(-mul(K(1, 1, -1), E(1)))


def test_unbound_generator(sl2: ModuleRep) -> None:
    """A generator without a matrix or a body cannot be evaluated."""
    with pytest.raises(ContractError):
        sl2.evaluate(Gen("B", 1))
    body = Gen("B", 1, add(F(1), E(1) * Fraction(1, 2)))
    assert sl2.evaluate(body) == ExactMatrix.from_rows([[0, Fraction(1, 2)], [1, 0]])


def test_phi_reparam_rescales_varsigma() -> None:
    """phi_{eta,zeta} multiplies varsigma by eta_i eta_τ(i) zeta_i and rescales B_i by eta_i^-1."""
    datum = satake("AI-2", 1)
    image, new_sigma = phi_reparam(Gen("B", 1), datum, {1: 1 / q}, {1: 2}, {1: 3})
    assert new_sigma == {1: 12 / q}
    assert isinstance(image, Scaled)
    assert image.coeff * 2 == ONE
