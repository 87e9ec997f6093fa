"""Expression trees over the generators of U_q(g) and its iquantum subalgebras.

Expressions are immutable trees built from named generators (E_i, F_i, B_i and
case aliases), lattice elements K_alpha, sums, products, scalar multiples,
divided powers and q-commutators. Nothing is normalised: an expression gets its
meaning from ``EvaluationMapper``, which turns it into a matrix on a module.

Mappers dispatch on the ``mapper_method`` attribute of a node. Algebra
(anti)homomorphisms such as Lusztig's T_i, the symmetries T^i_i, the
anti-automorphism S^i and the rescalings phi_{eta,zeta} are substitution mappers.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Any, ClassVar, Protocol, TypeAlias

from iquantum.scalar import ONE, QScalar, ScalarLike, as_scalar, qbinom, qfactorial, qint, qpow, scalar_sqrt
from iquantum.utils.formatting import format_scalar
from iquantum.utils.shared import ContractError, UnsupportedCaseError

if TYPE_CHECKING:
    from iquantum.cartan import SatakeDatum
    from iquantum.linalg import ExactMatrix

logger = logging.getLogger(__name__)

# Error messages
ERR_NO_MAPPER = "{} cannot handle {}"
ERR_UNBOUND = "No matrix bound to generator {}"
ERR_NOT_U_ELEMENT = "Lusztig's T_i acts on E/F/K expressions only, got {}"
ERR_NO_RELATION_TABLE = "Relation table unavailable for {} at ({}, {})"
ERR_NO_SYMMETRY = "Symmetry formulas unavailable for {} at vertex {}"
ERR_SAME_VERTEX = "Serre element needs i != j, got {}"
ERR_BAD_SIGMA = "varsigma violates its constraint at vertex {}: {} != {}"
ERR_MISSING_PARAM = "No {} given for vertex {}"

Params: TypeAlias = Mapping[int, QScalar]
Weight: TypeAlias = tuple[int, ...]


class CartanLike(Protocol):
    """Cartan data needed by Serre elements and Lusztig's T_i."""

    @property
    def rank(self) -> int: ...

    @property
    def vertices(self) -> tuple[int, ...]: ...

    def a(self, i: int, j: int) -> int: ...

    def di(self, i: int) -> int: ...

    def reflect(self, i: int, alpha: Sequence[int]) -> tuple[int, ...]: ...


def _wrap(value: Expr | ScalarLike) -> Expr:
    if isinstance(value, Expr):
        return value
    return Const(as_scalar(value))


class Expr:
    """Base class of expression nodes with the algebra operators."""

    mapper_method: ClassVar[str] = ""

    def __add__(self, other: Expr | ScalarLike) -> Expr:
        return add(self, _wrap(other))

    def __radd__(self, other: ScalarLike) -> Expr:
        return add(_wrap(other), self)

    def __sub__(self, other: Expr | ScalarLike) -> Expr:
        return add(self, Scaled(-ONE, _wrap(other)))

    def __rsub__(self, other: ScalarLike) -> Expr:
        return add(_wrap(other), Scaled(-ONE, self))

    def __neg__(self) -> Expr:
        return Scaled(-ONE, self)

    def __mul__(self, other: Expr | ScalarLike) -> Expr:
        if isinstance(other, Expr):
            return mul(self, other)
        return Scaled(as_scalar(other), self)

    def __rmul__(self, other: ScalarLike) -> Expr:
        return Scaled(as_scalar(other), self)

    def __pow__(self, n: int) -> Expr:
        if n == 0:
            return Const(ONE)
        return Product((self,) * n)

    def __str__(self) -> str:
        return PrintMapper()(self)


@dataclass(frozen=True, eq=True)
class Const(Expr):
    """A scalar multiple of the unit."""

    value: QScalar
    mapper_method: ClassVar[str] = "map_constant"


@dataclass(frozen=True, eq=True)
class Gen(Expr):
    """A named generator such as E1, F2 or B3.

    ``body`` optionally expresses the generator through other generators; the
    evaluation mapper falls back to it when the module binds no matrix to the name.
    """

    name: str
    index: int
    body: Expr | None = field(default=None, compare=False, repr=False)
    mapper_method: ClassVar[str] = "map_generator"

    @property
    def key(self) -> str:
        """str: Name used in evaluation contexts, e.g. "B2"."""
        return f"{self.name}{self.index}"


@dataclass(frozen=True, eq=True)
class KElem(Expr):
    """The group-like element K_alpha for alpha in root coordinates."""

    alpha: Weight
    label: str | None = field(default=None, compare=False)
    mapper_method: ClassVar[str] = "map_k"


@dataclass(frozen=True, eq=True)
class Sum(Expr):
    terms: tuple[Expr, ...]
    mapper_method: ClassVar[str] = "map_sum"


@dataclass(frozen=True, eq=True)
class Product(Expr):
    factors: tuple[Expr, ...]
    mapper_method: ClassVar[str] = "map_product"


@dataclass(frozen=True, eq=True)
class Scaled(Expr):
    coeff: QScalar
    expr: Expr
    mapper_method: ClassVar[str] = "map_scaled"


@dataclass(frozen=True, eq=True)
class DividedPower(Expr):
    """base^n / [n]_{q^d}!"""

    base: Expr
    n: int
    d: int = 1
    mapper_method: ClassVar[str] = "map_divided_power"


@dataclass(frozen=True, eq=True)
class Bracket(Expr):
    """The q-commutator [left, right]_{q^power} = left*right - q^power*right*left."""

    left: Expr
    right: Expr
    power: Fraction = Fraction(0)
    mapper_method: ClassVar[str] = "map_bracket"


ZERO_EXPR = Const(as_scalar(0))
UNIT = Const(ONE)


def add(*terms: Expr) -> Expr:
    """Sum of expressions, flattening nested sums and dropping zero constants."""
    flat: list[Expr] = []
    for term in terms:
        if isinstance(term, Sum):
            flat.extend(term.terms)
        elif not (isinstance(term, Const) and not term.value):
            flat.append(term)
    if not flat:
        return ZERO_EXPR
    return flat[0] if len(flat) == 1 else Sum(tuple(flat))


def mul(*factors: Expr) -> Expr:
    """Product of expressions, flattening nested products."""
    flat: list[Expr] = []
    for factor in factors:
        if isinstance(factor, Product):
            flat.extend(factor.factors)
        elif factor != UNIT:
            flat.append(factor)
    if not flat:
        return UNIT
    return flat[0] if len(flat) == 1 else Product(tuple(flat))


# mappers


class Mapper:
    """Dispatch on ``expr.mapper_method``."""

    def __call__(self, expr: Expr) -> Any:  # noqa: ANN401
        try:
            method = getattr(self, expr.mapper_method)
        except AttributeError as e:
            raise ContractError(ERR_NO_MAPPER.format(type(self).__name__, type(expr).__name__)) from e
        return method(expr)

    rec = __call__


class IdentityMapper(Mapper):
    """Rebuild the tree unchanged; subclasses override single node kinds."""

    def map_constant(self, expr: Const) -> Expr:
        return expr

    def map_generator(self, expr: Gen) -> Expr:
        return expr

    def map_k(self, expr: KElem) -> Expr:
        return expr

    def map_sum(self, expr: Sum) -> Expr:
        return add(*(self.rec(t) for t in expr.terms))

    def map_product(self, expr: Product) -> Expr:
        return mul(*(self.rec(f) for f in expr.factors))

    def map_scaled(self, expr: Scaled) -> Expr:
        return Scaled(expr.coeff, self.rec(expr.expr))

    def map_divided_power(self, expr: DividedPower) -> Expr:
        return DividedPower(self.rec(expr.base), expr.n, expr.d)

    def map_bracket(self, expr: Bracket) -> Expr:
        return Bracket(self.rec(expr.left), self.rec(expr.right), expr.power)


class SubstitutionMapper(IdentityMapper):
    """Algebra homomorphism given on generators.

    Args:
        images: Generator key -> image; unlisted generators are fixed
        k_image: Image of K_alpha; K_alpha is fixed when omitted
    """

    def __init__(
        self,
        images: Mapping[str, Expr],
        k_image: Callable[[KElem], Expr] | None = None,
    ) -> None:
        self.images = dict(images)
        self.k_image = k_image

    def map_generator(self, expr: Gen) -> Expr:
        return self.images.get(expr.key, expr)

    def map_k(self, expr: KElem) -> Expr:
        return expr if self.k_image is None else self.k_image(expr)


class AntiSubstitutionMapper(SubstitutionMapper):
    """Algebra anti-homomorphism given on generators: products are reversed."""

    def map_product(self, expr: Product) -> Expr:
        return mul(*(self.rec(f) for f in reversed(expr.factors)))

    def map_bracket(self, expr: Bracket) -> Expr:
        # phi(xy - c yx) = phi(y)phi(x) - c phi(x)phi(y)
        return Bracket(self.rec(expr.right), self.rec(expr.left), expr.power)


class GeneratorCollector(Mapper):
    """Keys of the generators occurring in an expression ("K" for plain K_alpha)."""

    def map_constant(self, expr: Const) -> frozenset[str]:  # noqa: ARG002
        return frozenset()

    def map_generator(self, expr: Gen) -> frozenset[str]:
        return frozenset({expr.key})

    def map_k(self, expr: KElem) -> frozenset[str]:
        return frozenset({expr.label.split("^")[0] if expr.label else "K"})

    def _union(self, children: Sequence[Expr]) -> frozenset[str]:
        result: frozenset[str] = frozenset()
        for child in children:
            result |= self.rec(child)
        return result

    def map_sum(self, expr: Sum) -> frozenset[str]:
        return self._union(expr.terms)

    def map_product(self, expr: Product) -> frozenset[str]:
        return self._union(expr.factors)

    def map_scaled(self, expr: Scaled) -> frozenset[str]:
        return self.rec(expr.expr)

    def map_divided_power(self, expr: DividedPower) -> frozenset[str]:
        return self.rec(expr.base)

    def map_bracket(self, expr: Bracket) -> frozenset[str]:
        return self._union((expr.left, expr.right))


def k_name(alpha: Weight) -> str:
    """Print K_alpha, using "K2^-1" style for multiples of a simple root."""
    support = [(i, c) for i, c in enumerate(alpha) if c]
    if not support:
        return "1"
    if len(support) == 1:
        i, c = support[0]
        return f"K{i + 1}" if c == 1 else f"K{i + 1}^{c}"
    return "K(" + ",".join(str(c) for c in alpha) + ")"


class PrintMapper(Mapper):
    """Bracket notation, e.g. "[B2,[B2,B1]_q]_q^-1"."""

    def map_constant(self, expr: Const) -> str:
        return format_scalar(expr.value)

    def map_generator(self, expr: Gen) -> str:
        return expr.key

    def map_k(self, expr: KElem) -> str:
        return expr.label or k_name(expr.alpha)

    def map_sum(self, expr: Sum) -> str:
        text = " + ".join(self.rec(t) for t in expr.terms)
        return text.replace("+ -", "- ")

    def _factor(self, expr: Expr) -> str:
        text = self.rec(expr)
        return f"({text})" if isinstance(expr, Sum | Scaled) else text

    def map_product(self, expr: Product) -> str:
        return "*".join(self._factor(f) for f in expr.factors)

    def map_scaled(self, expr: Scaled) -> str:
        inner = self._factor(expr.expr)
        if expr.coeff == ONE:
            return inner
        if expr.coeff == -ONE:
            return f"-{inner}"
        return f"({format_scalar(expr.coeff)})*{inner}"

    def map_divided_power(self, expr: DividedPower) -> str:
        return f"{self._factor(expr.base)}^({expr.n})"

    def map_bracket(self, expr: Bracket) -> str:
        body = f"[{self.rec(expr.left)},{self.rec(expr.right)}]"
        if expr.power == 0:
            return body
        if expr.power == 1:
            return f"{body}_q"
        return f"{body}_q^{expr.power}"


class EvaluationMapper(Mapper):
    """Homomorphism into matrices on a module.

    Args:
        context: Generator key -> matrix
        k_matrix: Matrix of K_alpha
        dim: Dimension of the module
    """

    def __init__(
        self,
        context: Mapping[str, ExactMatrix],
        k_matrix: Callable[[Weight], ExactMatrix],
        dim: int,
    ) -> None:
        from iquantum.linalg import ExactMatrix

        self.context = context
        self.k_matrix = k_matrix
        self.dim = dim
        self._identity = ExactMatrix.identity(dim)
        # keyed by id(); the tree is kept alive by the stored reference
        self._memo: dict[int, tuple[Expr, ExactMatrix]] = {}

    def __call__(self, expr: Expr) -> ExactMatrix:
        hit = self._memo.get(id(expr))
        if hit is not None and hit[0] is expr:
            return hit[1]
        value = super().__call__(expr)
        self._memo[id(expr)] = (expr, value)
        return value

    rec = __call__

    def map_constant(self, expr: Const) -> ExactMatrix:
        return self._identity * expr.value

    def map_generator(self, expr: Gen) -> ExactMatrix:
        matrix = self.context.get(expr.key)
        if matrix is not None:
            return matrix
        if expr.body is None:
            raise ContractError(ERR_UNBOUND.format(expr.key))
        return self.rec(expr.body)

    def map_k(self, expr: KElem) -> ExactMatrix:
        return self.k_matrix(expr.alpha)

    def map_sum(self, expr: Sum) -> ExactMatrix:
        total = self.rec(expr.terms[0])
        for term in expr.terms[1:]:
            total = total + self.rec(term)
        return total

    def map_product(self, expr: Product) -> ExactMatrix:
        result = self.rec(expr.factors[0])
        for factor in expr.factors[1:]:
            result = result @ self.rec(factor)
        return result

    def map_scaled(self, expr: Scaled) -> ExactMatrix:
        return self.rec(expr.expr) * expr.coeff

    def map_divided_power(self, expr: DividedPower) -> ExactMatrix:
        return (self.rec(expr.base) ** expr.n) * (ONE / qfactorial(expr.n, expr.d))

    def map_bracket(self, expr: Bracket) -> ExactMatrix:
        left, right = self.rec(expr.left), self.rec(expr.right)
        return left @ right - (right @ left) * qpow(expr.power)


def collect_generators(expr: Expr) -> frozenset[str]:
    """Generator keys occurring in ``expr``."""
    return GeneratorCollector()(expr)


# generators of U


def E(i: int) -> Gen:  # noqa: N802
    """E_i."""
    return Gen("E", i)


def F(i: int) -> Gen:  # noqa: N802
    """F_i."""
    return Gen("F", i)


def unit_root(rank: int, i: int, c: int = 1) -> Weight:
    """c * alpha_i in root coordinates."""
    return tuple(c if k == i - 1 else 0 for k in range(rank))


def K(rank: int, i: int, power: int = 1) -> KElem:  # noqa: N802
    """K_i^power."""
    return KElem(unit_root(rank, i, power))


def k_inverse(k: KElem) -> KElem:
    """K_{-alpha}, keeping a readable label."""
    label = k.label
    if label is not None:
        label = label.removesuffix("^-1") if label.endswith("^-1") else f"{label}^-1"
    return KElem(tuple(-c for c in k.alpha), label)


def kbracket(k: KElem, n: int | Fraction = 0, a: int | Fraction = 1) -> Expr:
    """[k;n]_{q^a} = (q^{an}k - q^{-an}k^-1) / (q^a - q^-a)."""
    body = add(Scaled(qpow(a * n), k), Scaled(-qpow(-a * n), k_inverse(k)))
    return Scaled(ONE / (qpow(a) - qpow(-a)), body)


def kcurly(k: KElem, n: int | Fraction = 0, a: int | Fraction = 1) -> Expr:
    """{k;n}_{q^a} = q^{an}k + q^{-an}k^-1."""
    return add(Scaled(qpow(a * n), k), Scaled(qpow(-a * n), k_inverse(k)))


def kround(k: KElem, n: int | Fraction = 0, a: int | Fraction = 1) -> Expr:
    """(k;n)_{q^a} = (q^{an}k - 1) / (q^a - 1)."""
    return Scaled(ONE / (qpow(a) - ONE), add(Scaled(qpow(a * n), k), Const(-ONE)))


def qcomm(x: Expr, y: Expr, b: int | Fraction = 0) -> Bracket:
    """[x,y]_{q^b} = xy - q^b yx."""
    return Bracket(x, y, Fraction(b))


def serre(i: int, j: int, x: Expr, y: Expr, datum: CartanLike) -> Expr:
    """Binomial Serre element S_{i,j}(x, y).

    Args:
        i: First vertex
        j: Second vertex, j != i
        x: Expression substituted for the i-th generator
        y: Expression substituted for the j-th generator
        datum: Supplies a_{i,j} and d_i

    Returns:
        Expr: sum_r (-1)^r [1-a, r]_{q_i} x^{1-a-r} y x^r
    """
    if i == j:
        raise ContractError(ERR_SAME_VERTEX.format(i))
    m = 1 - datum.a(i, j)
    d = datum.di(i)
    terms = []
    for r in range(m + 1):
        coeff = qbinom(m, r, d) * (-1) ** r
        terms.append(Scaled(coeff, mul(*([x] * (m - r)), y, *([x] * r))))
    return add(*terms)


def serre_nested(i: int, j: int, x: Expr, y: Expr, datum: CartanLike) -> Expr:
    """Serre element as nested q-commutators for a_{i,j} in {0, -1, -2}."""
    a, d = datum.a(i, j), datum.di(i)
    if a == 0:
        return qcomm(x, y)
    if a == -1:
        return qcomm(x, qcomm(x, y, d), -d)
    if a == -2:  # noqa: PLR2004
        return qcomm(x, qcomm(x, qcomm(x, y), 2 * d), -2 * d)
    return serre(i, j, x, y, datum)


# Lusztig's braid group action


def _check_u_element(x: Expr) -> None:
    for key in collect_generators(x):
        if not (key == "K" or key[0] in "EF"):
            raise ContractError(ERR_NOT_U_ELEMENT.format(key))


def _lusztig_images(i: int, datum: CartanLike, inverse: bool) -> dict[str, Expr]:
    rank, d = datum.rank, datum.di(i)
    ki, ki_inv = K(rank, i), K(rank, i, -1)
    images: dict[str, Expr] = {}
    for j in datum.vertices:
        if j == i:
            if inverse:
                images[f"E{i}"] = -mul(ki_inv, F(i))
                images[f"F{i}"] = -mul(E(i), ki)
            else:
                images[f"E{i}"] = -mul(F(i), ki)
                images[f"F{i}"] = -mul(ki_inv, E(i))
            continue
        m = -datum.a(i, j)
        e_terms, f_terms = [], []
        for r in range(m + 1):
            s_ = m - r
            e_r, e_s = DividedPower(E(i), r, d), DividedPower(E(i), s_, d)
            f_r, f_s = DividedPower(F(i), r, d), DividedPower(F(i), s_, d)
            sign = (-1) ** r
            if inverse:
                e_terms.append(Scaled(qpow(-d * r) * sign, mul(e_r, E(j), e_s)))
                f_terms.append(Scaled(qpow(d * r) * sign, mul(f_s, F(j), f_r)))
            else:
                e_terms.append(Scaled(qpow(-d * r) * sign, mul(e_s, E(j), e_r)))
                f_terms.append(Scaled(qpow(d * r) * sign, mul(f_r, F(j), f_s)))
        images[f"E{j}"] = E(j) if m == 0 else add(*e_terms)
        images[f"F{j}"] = F(j) if m == 0 else add(*f_terms)
    return images


def lusztig_T(i: int, x: Expr, datum: CartanLike, inverse: bool = False) -> Expr:  # noqa: N802
    """Lusztig's automorphism T''_{i,1} (or its inverse) applied to ``x``.

    Args:
        i: Vertex
        x: Expression in E, F and K only
        datum: Supplies the Cartan data
        inverse: Apply T_i^-1 instead

    Returns:
        Expr: The image, with divided powers left unexpanded
    """
    _check_u_element(x)

    def k_image(k: KElem) -> Expr:
        return KElem(datum.reflect(i, k.alpha))

    return SubstitutionMapper(_lusztig_images(i, datum, inverse), k_image)(x)


def t_w_bullet(x: Expr, datum: SatakeDatum, inverse: bool = False) -> Expr:
    """T_{w_•} = T_{i_1}...T_{i_p} along the stored reduced word, or its inverse."""
    word = datum.w_bullet
    for i in word if inverse else reversed(word):
        x = lusztig_T(i, x, datum, inverse=inverse)
    return x


# Hopf structure


def coproduct_terms(x: Gen | KElem, rank: int) -> list[tuple[Expr, Expr]]:
    """Delta of a generator of U as a list of simple tensors.

    Delta(E_i) = E_i (x) 1 + K_i (x) E_i, Delta(F_i) = F_i (x) K_i^-1 + 1 (x) F_i,
    Delta(K_alpha) = K_alpha (x) K_alpha.
    """
    if isinstance(x, KElem):
        return [(x, x)]
    i = x.index
    if x.name == "E":
        return [(x, UNIT), (K(rank, i), x)]
    if x.name == "F":
        return [(x, K(rank, i, -1)), (UNIT, x)]
    raise ContractError(ERR_NOT_U_ELEMENT.format(x.key))


def antipode(x: Expr, rank: int) -> Expr:
    """Antipode S(E) = -K^-1E, S(F) = -FK, S(K) = K^-1, extended anti-multiplicatively."""
    _check_u_element(x)
    images: dict[str, Expr] = {}
    for i in range(1, rank + 1):
        images[f"E{i}"] = -mul(K(rank, i, -1), E(i))
        images[f"F{i}"] = -mul(F(i), K(rank, i))
    return AntiSubstitutionMapper(images, k_inverse)(x)


# iquantum generators


def check_varsigma(datum: SatakeDatum, varsigma: Params) -> None:
    """Raise ContractError unless varsigma is defined on I_∘ and tau-compatible."""
    for i in datum.white:
        if i not in varsigma:
            raise ContractError(ERR_MISSING_PARAM.format("varsigma", i))
        t = datum.tau(i)
        if datum.h_w_tau(i) == 0 and varsigma[i] != varsigma[t]:
            raise ContractError(ERR_BAD_SIGMA.format(i, varsigma[i], varsigma[t]))


def k_generator(i: int, datum: SatakeDatum) -> KElem:
    """k_i = K_i K_{τ(i)}^-1 on I_∘ and K_i on I_•."""
    alpha = datum.simple_root(i)
    if i not in datum.black:
        alpha = tuple(a - b for a, b in zip(alpha, datum.simple_root(datum.tau(i)), strict=True))
    return KElem(alpha, f"k{i}")


def b_body(i: int, datum: SatakeDatum, varsigma: Params, kappa: Params | None = None) -> Expr:
    """F_i + ς_i T_{w_•}(E_{τ(i)}) K_i^-1 (+ κ_i K_i^-1), or F_i on I_•."""
    if i in datum.black:
        return F(i)
    ki_inv = K(datum.rank, i, -1)
    raising = t_w_bullet(E(datum.tau(i)), datum)
    body = add(F(i), Scaled(as_scalar(varsigma[i]), mul(raising, ki_inv)))
    if kappa and kappa.get(i):
        body = add(body, Scaled(as_scalar(kappa[i]), ki_inv))
    return body


def b_generator(i: int, datum: SatakeDatum, varsigma: Params, kappa: Params | None = None) -> Gen:
    """The generator B_i, carrying its expression through E, F and K as body.

    Args:
        i: Vertex
        datum: Satake datum
        varsigma: Parameters on I_∘
        kappa: Optional second parameter (nonstandard iquantum group)

    Returns:
        Gen: B_i
    """
    return Gen("B", i, body=b_body(i, datum, varsigma, kappa))


def b_generators(datum: SatakeDatum, varsigma: Params, kappa: Params | None = None) -> dict[int, Gen]:
    """B_i for every vertex."""
    check_varsigma(datum, varsigma)
    return {i: b_generator(i, datum, varsigma, kappa) for i in datum.vertices}


def _b(i: int) -> Gen:
    return Gen("B", i)


def kolb_C(i: int, j: int, datum: SatakeDatum, varsigma: Params) -> Expr:  # noqa: N802
    """Right-hand side C_{i,j} of S_{i,j}(B_i, B_j) = C_{i,j}.

    Available for quasi-split data (where the correction terms are k_i^-1) and
    for type AII.

    Args:
        i: Vertex
        j: Vertex, j != i
        datum: Satake datum
        varsigma: Parameters on I_∘

    Returns:
        Expr: C_{i,j} in B_i, B_j, k_i and, for AII, E_j, F_j, K_j
    """
    if i == j:
        raise ContractError(ERR_SAME_VERTEX.format(i))
    if i in datum.black:
        return ZERO_EXPR
    if datum.family == "AII":
        return _aii_C(i, j, datum, varsigma)
    if not datum.is_quasi_split:
        raise UnsupportedCaseError(ERR_NO_RELATION_TABLE.format(datum.family, i, j))
    a, d, t = datum.a(i, j), datum.di(i), datum.tau(i)
    qi = qpow(d)
    si = as_scalar(varsigma[i])
    ki = k_generator(i, datum)
    if a == 0:
        if t != j:
            return ZERO_EXPR
        return Scaled(-si, kbracket(ki, 0, d))
    if a == -1:
        terms: list[Expr] = []
        if t == i:
            terms.append(Scaled(qi * si, _b(j)))
        if t == j:
            s_t = as_scalar(varsigma[t])
            inner = add(Scaled(qi * s_t, ki), Scaled(si / qi**2, k_inverse(ki)))
            terms.append(Scaled(-qint(2, d), mul(inner, _b(i))))
        return add(*terms)
    if a == -2:  # noqa: PLR2004
        return Scaled(qi * qint(2, d) ** 2 * si, qcomm(_b(i), _b(j)))
    bi, bj = _b(i), _b(j)
    q2, q3, q4 = qint(2, d), qint(3, d), qint(4, d)
    return add(
        Scaled(-q2 * (q2 * q4 + qi**2 + qi**-2) * qi * si, mul(bi, bj, bi)),
        Scaled((q3**2 + 1) * qi * si, add(mul(bi, bi, bj), mul(bj, bi, bi))),
        Scaled(-(q3**2) * (qi * si) ** 2, bj),
    )


def _aii_C(i: int, j: int, datum: SatakeDatum, varsigma: Params) -> Expr:
    if datum.a(i, j) == 0 or j not in datum.black:
        return ZERO_EXPR
    # i is white (even) with black neighbours j and j'; the table is stated for
    # varsigma_i = q and the right-hand side is linear in varsigma_i
    other = 2 * i - j
    q = qpow(1)
    kj = K(datum.rank, j)
    rhs = add(
        mul(kcurly(kj, 1), E(other)),
        Scaled((q - ONE / q) ** 2, mul(_b(j), E(j), E(other))),
    )
    return Scaled(as_scalar(varsigma[i]) / q, rhs)


# symmetries of the iquantum group


def _w_i_root(i: int, datum: SatakeDatum, alpha: Weight) -> Weight:
    t = datum.tau(i)
    result = datum.reflect(i, alpha)
    if t != i:
        result = datum.reflect(t, result)
        if datum.a(i, t):
            result = datum.reflect(i, result)
    return result


def default_eta(datum: SatakeDatum, varsigma: Params) -> dict[int, QScalar]:
    """eta with eta_i = 1 below tau(i) and varsigma_i eta_i eta_{τ(i)} = -1."""
    eta: dict[int, QScalar] = {}
    for i in datum.vertices:
        t = datum.tau(i)
        if t == i or i < t:
            eta[i] = ONE
        else:
            eta[i] = -ONE / as_scalar(varsigma[t])
    return eta


def _itau_images(i: int, datum: SatakeDatum, varsigma: Params, eta: Params) -> dict[str, Expr]:
    family, rank = datum.family, datum.rank
    params = dict(datum.params)
    t = datum.tau(i)
    q = qpow(1)
    images: dict[str, Expr] = {}
    b = _b
    if datum.is_quasi_split and all(datum.tau(j) == j for j in datum.vertices):
        if any(abs(datum.a(i, j)) > 1 for j in datum.vertices if j != i):
            raise UnsupportedCaseError(ERR_NO_SYMMETRY.format(family, i))
        d = datum.di(i)
        try:
            root = scalar_sqrt(-(qpow(d) ** 2) * as_scalar(varsigma[i]))
        except ValueError as e:
            raise UnsupportedCaseError(ERR_NO_SYMMETRY.format(family, i)) from e
        for j in datum.vertices:
            if j != i and datum.a(i, j) == -1:
                images[f"B{j}"] = Scaled(ONE / root, qcomm(b(j), b(i), d))
        return images
    pair_case = (family == "AIII" and params.get("s") == params.get("r", 0) + 1) or family == "AIV"
    if pair_case:
        r = params["r"]
        if not 1 <= i <= r - 1:
            raise UnsupportedCaseError(ERR_NO_SYMMETRY.format(family, i))
        ki = k_generator(i, datum)
        e_i, e_t = as_scalar(eta[i]), as_scalar(eta[t])
        images[f"B{i}"] = Scaled(q * e_t / e_i, mul(k_inverse(ki), b(t)))
        images[f"B{t}"] = Scaled(e_i / (q * e_t), mul(b(i), ki))
        half = qpow(Fraction(1, 2))
        for j in datum.vertices:
            if j in {i, t}:
                continue
            if family == "AIV" and j == r:
                if i == r - 1:
                    nested = qcomm(b(r + 1), qcomm(b(r), b(r - 1), 1), -1)
                    images[f"B{j}"] = add(
                        Scaled(ONE / as_scalar(varsigma[r - 1]), nested), mul(b(r), ki)
                    )
                continue
            if abs(j - i) == 1:
                images[f"B{j}"] = Scaled(e_i / half, qcomm(b(j), b(i), 1))
            elif abs(datum.tau(j) - i) == 1:
                images[f"B{j}"] = Scaled(-half * e_t, qcomm(b(t), b(j), -1))
        return images
    if family in {"DIII-1", "DIII-2"}:
        n = rank
        if i == n - 1:
            ki = k_generator(i, datum)
            e_i, e_t = as_scalar(eta[n - 1]), as_scalar(eta[n])
            images[f"B{n - 1}"] = Scaled(q * e_t / e_i, mul(k_inverse(ki), b(n)))
            images[f"B{n}"] = Scaled(e_i / (q * e_t), mul(b(n - 1), ki))
            nested = qcomm(b(n), qcomm(b(n - 1), b(n - 2), 1), -1)
            images[f"B{n - 2}"] = add(
                Scaled(ONE / as_scalar(varsigma[n - 1]), nested), mul(b(n - 2), ki)
            )
            return images
        if 1 <= i <= n - 2:
            try:
                root = scalar_sqrt(-(q**2) * as_scalar(varsigma[i]))
            except ValueError as e:
                raise UnsupportedCaseError(ERR_NO_SYMMETRY.format(family, i)) from e
            for j in datum.vertices:
                if j != i and datum.a(i, j) == -1:
                    images[f"B{j}"] = Scaled(ONE / root, qcomm(b(j), b(i), 1))
            return images
    raise UnsupportedCaseError(ERR_NO_SYMMETRY.format(family, i))


def iT(  # noqa: N802
    i: int,
    x: Expr,
    datum: SatakeDatum,
    varsigma: Params,
    eta: Params | None = None,
) -> Expr:
    """The symmetry T^i_i of the iquantum group applied to ``x``.

    B-generators are substituted by the displayed formulas; K_alpha goes to
    K_{w(alpha)} with w = s_i, s_i s_{τ(i)} or s_i s_{τ(i)} s_i.

    Args:
        i: Vertex
        x: Expression in B_j and k_j
        datum: Quasi-split datum of type AI, AIII (s = r+1), AIV or DIII
        varsigma: Parameters on I_∘
        eta: Rescaling with varsigma_i eta_i eta_{τ(i)} = -1; a default is chosen

    Returns:
        Expr: The image
    """
    eta = dict(eta) if eta is not None else default_eta(datum, varsigma)
    images = _itau_images(i, datum, varsigma, eta)

    def k_image(k: KElem) -> Expr:
        return KElem(_w_i_root(i, datum, k.alpha))

    return SubstitutionMapper(images, k_image)(x)


def iT_word(  # noqa: N802
    word: Sequence[int],
    x: Expr,
    datum: SatakeDatum,
    varsigma: Params,
    eta: Params | None = None,
) -> Expr:
    """T^i_{i_1,...,i_l}(x) = T^i_{i_1}(...T^i_{i_l}(x))."""
    for i in reversed(word):
        x = iT(i, x, datum, varsigma, eta)
    return x


def simath_scalars(datum: SatakeDatum, varsigma: Params, eta: Params | None = None) -> dict[int, QScalar]:
    """Coefficients c_i with S^i(B_i) = c_i B_i K_{alpha_i - w_•(alpha_{τ(i)})}.

    c_i = -varsigma_i^-1 eta_{τ(i)}. Without an explicit eta, eta is fixed by
    c_i^2 = q^{4 d_i <h_i, rho_•> - (beta_i, alpha_i)}, the normalisation under
    which (S^i)^2(B_i) = q_i^{4<h_i, rho_•>} B_i.
    """
    scalars: dict[int, QScalar] = {}
    for i in datum.white:
        if eta is not None:
            scalars[i] = -as_scalar(eta[datum.tau(i)]) / as_scalar(varsigma[i])
            continue
        beta = _simath_shift(i, datum)
        exponent = 4 * datum.di(i) * datum.h_rho_bullet(i) - datum.inner(beta, datum.simple_root(i))
        scalars[i] = -qpow(Fraction(exponent) / 2)
    return scalars


def _simath_shift(i: int, datum: SatakeDatum) -> Weight:
    image = datum.apply_w_bullet(datum.simple_root(datum.tau(i)))
    return tuple(a - b for a, b in zip(datum.simple_root(i), image, strict=True))


def simath_images(
    datum: SatakeDatum,
    varsigma: Params,
    eta: Params | None = None,
    zeta: Params | None = None,
) -> AntiSubstitutionMapper:
    """The anti-automorphism S^i as a mapper on B, E/F (on I_•) and K expressions.

    Args:
        datum: Satake datum
        varsigma: Parameters on I_∘
        eta: Optional eta; see ``simath_scalars``
        zeta: Optional zeta with zeta_i zeta_{τ(i)} = 1, defaults to 1

    Returns:
        AntiSubstitutionMapper: Mapper applying S^i
    """
    rank = datum.rank
    scalars = simath_scalars(datum, varsigma, eta)
    images: dict[str, Expr] = {}
    for i in datum.black:
        images[f"E{i}"] = mul(K(rank, i, -2), E(i))
        images[f"F{i}"] = mul(F(i), K(rank, i, 2))
        images[f"B{i}"] = images[f"F{i}"]
    for i in datum.white:
        images[f"B{i}"] = Scaled(scalars[i], mul(_b(i), KElem(_simath_shift(i, datum))))
    zeta = dict(zeta or {})
    k_zeta = {k_generator(i, datum).alpha: as_scalar(zeta.get(i, ONE)) for i in datum.vertices}

    def k_image(k: KElem) -> Expr:
        inverse = k_inverse(k)
        factor = k_zeta.get(k.alpha, ONE)
        return inverse if factor == ONE else Scaled(factor, inverse)

    return AntiSubstitutionMapper(images, k_image)


def simath_image(
    x: Expr,
    datum: SatakeDatum,
    varsigma: Params,
    eta: Params | None = None,
    zeta: Params | None = None,
) -> Expr:
    """S^i(x), reversing products."""
    return simath_images(datum, varsigma, eta, zeta)(x)


def phi_reparam(
    x: Expr,
    datum: SatakeDatum,
    varsigma: Params,
    eta: Params,
    zeta: Params | None = None,
    kappa: Params | None = None,
) -> tuple[Expr, dict[int, QScalar]]:
    """The isomorphism phi_{eta,zeta} from Ui_varsigma to Ui_varsigma'.

    Sends E_i to eta_i E_i, B_i to eta_i^-1 B_i and k_i to zeta_i^-1 k_i, where
    varsigma'_i = varsigma_i eta_i eta_{τ(i)} zeta_i. The B_i in the image are
    the generators for varsigma'.

    Args:
        x: Expression in B_i, k_i and (on I_•) E_i, F_i
        datum: Satake datum
        varsigma: Source parameters
        eta: Rescaling of E_i
        zeta: Rescaling of k_i, defaults to 1
        kappa: Second parameter, rescaled along with B_i

    Returns:
        tuple[Expr, dict[int, QScalar]]: The image and varsigma'
    """
    zeta = dict(zeta or {})
    new_sigma = {
        i: as_scalar(varsigma[i]) * as_scalar(eta[i]) * as_scalar(eta[datum.tau(i)]) * as_scalar(zeta.get(i, ONE))
        for i in datum.white
    }
    new_kappa = {i: as_scalar(v) / as_scalar(eta[i]) for i, v in (kappa or {}).items()}
    images: dict[str, Expr] = {}
    for i in datum.vertices:
        e_i = as_scalar(eta[i])
        images[f"E{i}"] = Scaled(e_i, E(i))
        images[f"F{i}"] = Scaled(ONE / e_i, F(i))
        images[f"B{i}"] = Scaled(ONE / e_i, b_generator(i, datum, new_sigma, new_kappa))
    k_zeta = {k_generator(i, datum).alpha: as_scalar(zeta.get(i, ONE)) for i in datum.white}

    def k_image(k: KElem) -> Expr:
        factor = k_zeta.get(k.alpha)
        if factor is None or factor == ONE:
            return k
        return Scaled(ONE / factor, k)

    return SubstitutionMapper(images, k_image)(x), new_sigma
