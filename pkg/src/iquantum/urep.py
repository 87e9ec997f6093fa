"""Concrete finite-dimensional U_q(g)-modules.

Modules are given by exact matrices of E_i and F_i on a weight basis; K_alpha
acts diagonally and is computed from the stored weights. Tensor products follow
the coproduct in ``freealg``, constituents are split off from highest-weight
vectors, and classical limits evaluate every entry at q = 1.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

from iquantum.cartan import CartanMatrix, Root, cartan_matrix, character, reflect, symmetrizer
from iquantum.freealg import (
    E,
    EvaluationMapper,
    Expr,
    F,
    Gen,
    K,
    Weight,
    coproduct_terms,
    kbracket,
    kround,
    serre,
)
from iquantum.linalg import ExactMatrix, column_space_basis, coordinates, hstack, kernel, vstack
from iquantum.scalar import ONE, QScalar, limit_at_one, qint, qpow
from iquantum.utils.formatting import format_scalar
from iquantum.utils.shared import Check, ContractError, IQuantumError, NotIntegralError, UnsupportedCaseError

logger = logging.getLogger(__name__)

# Error messages
ERR_RANK_MISMATCH = "Cannot tensor {}{} with {}{}"
ERR_BAD_RANK = "Vector representation needs n >= {}, got {}"
ERR_UNKNOWN_LETTER = "Unknown tensor letter {!r}; use V, 1 or -"
ERR_NO_VECTOR_REP = "No vector representation is built for type {}"
ERR_NOT_SEMISIMPLE = "Constituents of {} span {} of {} dimensions"
ERR_NOT_WEIGHT_VECTOR = "Basis column {} is not a weight vector"
ERR_POLE = "Matrix {} is not K1-integral: entry {} = {} has a pole at q = 1"
ERR_EMPTY_WORD = "Tensor word must not be empty"


@dataclass(frozen=True, eq=False)
class ModuleRep:
    """A U_q(g)-module on a weight basis.

    Attributes:
        kind: Cartan type letter of g
        rank: Rank of g
        weights: Dynkin labels <h_i, wt> of each basis vector
        signs: Sign e_i of K_i on each basis vector, so K_i acts by e_i q_i^{<h_i, wt>}
        e: Matrices of E_1..E_rank
        f: Matrices of F_1..F_rank
        provenance: Tensor word and constituent label the module came from
    """

    kind: str
    rank: int
    weights: tuple[tuple[int, ...], ...]
    signs: tuple[tuple[int, ...], ...]
    e: tuple[ExactMatrix, ...]
    f: tuple[ExactMatrix, ...]
    provenance: str = ""

    @property
    def dim(self) -> int:
        """int: Dimension of the module."""
        return len(self.weights)

    @cached_property
    def cartan(self) -> CartanMatrix:
        """CartanMatrix: Cartan matrix of g."""
        return cartan_matrix(self.kind, self.rank)

    @cached_property
    def d(self) -> tuple[int, ...]:
        """tuple[int, ...]: Symmetrizer, indexed from 0."""
        return symmetrizer(self.cartan)

    @property
    def vertices(self) -> tuple[int, ...]:
        """tuple[int, ...]: (1, ..., rank)."""
        return tuple(range(1, self.rank + 1))

    def a(self, i: int, j: int) -> int:
        """Cartan entry a_{i,j} for 1-based labels."""
        return self.cartan[i - 1][j - 1]

    def di(self, i: int) -> int:
        """d_i for a 1-based label."""
        return self.d[i - 1]

    def reflect(self, i: int, alpha: Sequence[int]) -> Root:
        """s_i(alpha) for a 1-based label."""
        return reflect(self.cartan, i - 1, alpha)

    def k_eigenvalue(self, index: int, alpha: Weight) -> QScalar:
        """Eigenvalue of K_alpha on the basis vector ``index``."""
        value = ONE
        for i, c in enumerate(alpha):
            if c:
                sign = self.signs[index][i] ** (c % 2)
                value *= sign * qpow(self.d[i] * self.weights[index][i] * c)
        return value

    def k_matrix(self, alpha: Weight) -> ExactMatrix:
        """Diagonal matrix of K_alpha."""
        return ExactMatrix.diag([self.k_eigenvalue(b, alpha) for b in range(self.dim)])

    def context(self) -> dict[str, ExactMatrix]:
        """Generator key -> matrix, for ``EvaluationMapper``."""
        context: dict[str, ExactMatrix] = {}
        for i in self.vertices:
            context[f"E{i}"] = self.e[i - 1]
            context[f"F{i}"] = self.f[i - 1]
        return context

    def evaluate(self, expr: Expr, extra: Mapping[str, ExactMatrix] | None = None) -> ExactMatrix:
        """Matrix of an expression in E, F and K (plus any ``extra`` generators).

        Args:
            expr: Expression to evaluate
            extra: Further generator matrices, e.g. B_i

        Returns:
            ExactMatrix: The action of ``expr`` on the module
        """
        context = self.context()
        if extra:
            context.update(extra)
        return EvaluationMapper(context, self.k_matrix, self.dim)(expr)

    def manifest(self) -> dict[str, object]:
        """Ambient type, provenance and dimension for reports."""
        return {"type": f"{self.kind}{self.rank}", "provenance": self.provenance, "dim": self.dim}


def _from_moves(
    kind: str,
    rank: int,
    weights: Sequence[tuple[int, ...]],
    moves: Mapping[int, Sequence[tuple[int, int, QScalar | int]]],
    lowering: Mapping[int, Sequence[tuple[int, int, QScalar | int]]],
    provenance: str,
) -> ModuleRep:
    dim = len(weights)

    def build(table: Mapping[int, Sequence[tuple[int, int, QScalar | int]]], i: int) -> ExactMatrix:
        return ExactMatrix.from_dict((dim, dim), {(target, source): c for source, target, c in table.get(i, ())})

    e = tuple(build(moves, i) for i in range(1, rank + 1))
    f = tuple(build(lowering, i) for i in range(1, rank + 1))
    signs = tuple((1,) * rank for _ in range(dim))
    return ModuleRep(kind, rank, tuple(weights), signs, e, f, provenance)


def vector_rep(n: int) -> ModuleRep:
    """The n-dimensional vector representation of U_q(sl_n).

    E_i v_{i+1} = v_i, F_i v_i = v_{i+1} and K_i v_k = q^{δ_{k,i} - δ_{k,i+1}} v_k.

    Args:
        n: Size of the matrices, at least 2

    Returns:
        ModuleRep: The module of type A_{n-1}
    """
    if n < 2:  # noqa: PLR2004
        raise ContractError(ERR_BAD_RANK.format(2, n))
    rank = n - 1
    weights = [tuple(int(k == i) - int(k == i + 1) for i in range(rank)) for k in range(n)]
    raising = {i: [(i, i - 1, 1)] for i in range(1, n)}
    lowering = {i: [(i - 1, i, 1)] for i in range(1, n)}
    return _from_moves("A", rank, weights, raising, lowering, "V")


def vector_rep_b(n: int) -> ModuleRep:
    """The (2n+1)-dimensional vector representation of U_q(so_{2n+1}).

    Basis order v_1..v_n, v_0, v_-n..v_-1. The short root alpha_n moves
    v_-n -> v_0 -> v_n with coefficients 1 and [2].

    Args:
        n: Rank, at least 2

    Returns:
        ModuleRep: The module of type B_n
    """
    if n < 2:  # noqa: PLR2004
        raise ContractError(ERR_BAD_RANK.format(2, n))
    labels = [*range(1, n + 1), 0, *range(-n, 0)]
    index = {label: k for k, label in enumerate(labels)}

    def weight(label: int) -> tuple[int, ...]:
        sign, k = (1 if label > 0 else -1), abs(label)
        values = []
        for i in range(1, n):
            values.append(sign * (int(k == i) - int(k == i + 1)) if k else 0)
        values.append(sign * 2 * int(k == n) if k else 0)
        return tuple(values)

    raising: dict[int, list[tuple[int, int, QScalar | int]]] = {}
    lowering: dict[int, list[tuple[int, int, QScalar | int]]] = {}
    for i in range(1, n):
        raising[i] = [(index[i + 1], index[i], 1), (index[-i], index[-(i + 1)], 1)]
        lowering[i] = [(index[i], index[i + 1], 1), (index[-(i + 1)], index[-i], 1)]
    two = qint(2)
    raising[n] = [(index[-n], index[0], 1), (index[0], index[n], two)]
    lowering[n] = [(index[n], index[0], 1), (index[0], index[-n], two)]
    return _from_moves("B", n, [weight(label) for label in labels], raising, lowering, "V")


def vector_rep_d(n: int) -> ModuleRep:
    """The 2n-dimensional vector representation of U_q(so_{2n}).

    Basis order v_1..v_n, v_-n..v_-1; alpha_n = eps_{n-1} + eps_n.

    Args:
        n: Rank, at least 3

    Returns:
        ModuleRep: The module of type D_n
    """
    if n < 3:  # noqa: PLR2004
        raise ContractError(ERR_BAD_RANK.format(3, n))
    labels = [*range(1, n + 1), *range(-n, 0)]
    index = {label: k for k, label in enumerate(labels)}

    def weight(label: int) -> tuple[int, ...]:
        sign, k = (1 if label > 0 else -1), abs(label)
        values = [sign * (int(k == i) - int(k == i + 1)) for i in range(1, n)]
        values.append(sign * (int(k == n - 1) + int(k == n)))
        return tuple(values)

    raising: dict[int, list[tuple[int, int, QScalar | int]]] = {}
    lowering: dict[int, list[tuple[int, int, QScalar | int]]] = {}
    for i in range(1, n):
        raising[i] = [(index[i + 1], index[i], 1), (index[-i], index[-(i + 1)], 1)]
        lowering[i] = [(index[i], index[i + 1], 1), (index[-(i + 1)], index[-i], 1)]
    raising[n] = [(index[-n], index[n - 1], 1), (index[-(n - 1)], index[n], 1)]
    lowering[n] = [(index[n - 1], index[-n], 1), (index[n], index[-(n - 1)], 1)]
    return _from_moves("D", n, [weight(label) for label in labels], raising, lowering, "V")


def sign_rep(e: int, kind: str = "A", rank: int = 1) -> ModuleRep:
    """The one-dimensional module K_e: E_i = F_i = 0 and K_i = e."""
    zero = ExactMatrix.zeros(1, 1)
    return ModuleRep(
        kind,
        rank,
        ((0,) * rank,),
        ((e,) * rank,),
        (zero,) * rank,
        (zero,) * rank,
        "1" if e == 1 else "-",
    )


def trivial_rep(kind: str = "A", rank: int = 1) -> ModuleRep:
    """The trivial module K_+."""
    return sign_rep(1, kind, rank)


def _check_compatible(m: ModuleRep, n: ModuleRep) -> None:
    if (m.kind, m.rank) != (n.kind, n.rank):
        raise ContractError(ERR_RANK_MISMATCH.format(m.kind, m.rank, n.kind, n.rank))


def tensor(m: ModuleRep, n: ModuleRep) -> ModuleRep:
    """M (x) N with generators acting through the coproduct.

    Args:
        m: Left factor
        n: Right factor of the same type

    Returns:
        ModuleRep: The tensor product; basis index a * dim N + b for v_a (x) w_b
    """
    _check_compatible(m, n)

    def delta(gen: Gen) -> ExactMatrix:
        total = ExactMatrix.zeros(m.dim * n.dim, m.dim * n.dim)
        for left, right in coproduct_terms(gen, m.rank):
            total = total + m.evaluate(left).kron(n.evaluate(right))
        return total

    weights = tuple(
        tuple(x + y for x, y in zip(wm, wn, strict=True)) for wm in m.weights for wn in n.weights
    )
    signs = tuple(tuple(x * y for x, y in zip(sm, sn, strict=True)) for sm in m.signs for sn in n.signs)
    e = tuple(delta(E(i)) for i in m.vertices)
    f = tuple(delta(F(i)) for i in m.vertices)
    return ModuleRep(m.kind, m.rank, weights, signs, e, f, f"{m.provenance}{n.provenance}")


def tensor_power(m: ModuleRep, n: int) -> ModuleRep:
    """M^{(x) n}, with the trivial module for n = 0."""
    if n == 0:
        return trivial_rep(m.kind, m.rank)
    result = m
    for _ in range(n - 1):
        result = tensor(result, m)
    return result


_VECTOR_BUILDERS: dict[str, Callable[[int], ModuleRep]] = {
    "A": lambda rank: vector_rep(rank + 1),
    "B": vector_rep_b,
    "D": vector_rep_d,
}


def module_from_word(word: str, kind: str = "A", rank: int = 1) -> ModuleRep:
    """Tensor product spelled by a word such as "VVV" or "V-".

    Letters: ``V`` the vector representation, ``1`` the trivial module and
    ``-`` the sign module K_-.

    Args:
        word: Tensor word, leftmost factor first
        kind: Cartan type of g
        rank: Rank of g

    Returns:
        ModuleRep: The tensor product
    """
    if not word:
        raise ContractError(ERR_EMPTY_WORD)
    factors: list[ModuleRep] = []
    for letter in word:
        if letter == "V":
            if kind not in _VECTOR_BUILDERS:
                raise UnsupportedCaseError(ERR_NO_VECTOR_REP.format(kind))
            factors.append(_VECTOR_BUILDERS[kind](rank))
        elif letter == "1":
            factors.append(trivial_rep(kind, rank))
        elif letter == "-":
            factors.append(sign_rep(-1, kind, rank))
        else:
            raise ContractError(ERR_UNKNOWN_LETTER.format(letter))
    result = factors[0]
    for factor in factors[1:]:
        result = tensor(result, factor)
    return result


# highest weights and constituents


@dataclass(frozen=True)
class HighestWeightVector:
    """A vector killed by every E_i, with its weight."""

    vector: ExactMatrix
    weight: tuple[int, ...]
    signs: tuple[int, ...]


def _weight_groups(m: ModuleRep) -> dict[tuple[tuple[int, ...], tuple[int, ...]], list[int]]:
    groups: dict[tuple[tuple[int, ...], tuple[int, ...]], list[int]] = {}
    for b in range(m.dim):
        groups.setdefault((m.weights[b], m.signs[b]), []).append(b)
    return groups


def highest_weight_vectors(m: ModuleRep) -> list[HighestWeightVector]:
    """Basis of the joint kernel of the E_i, weight space by weight space.

    Weights come in decreasing lexicographic order of their labels; vectors of
    equal weight follow the pivot order of the kernel elimination.

    Args:
        m: Module on a weight basis

    Returns:
        list[HighestWeightVector]: Highest-weight vectors
    """
    groups = _weight_groups(m)
    result: list[HighestWeightVector] = []
    for (weight, signs) in sorted(groups, key=lambda key: (key[0], key[1]), reverse=True):
        columns = groups[weight, signs]
        stacked = vstack([e.extract(range(m.dim), columns) for e in m.e])
        null = kernel(stacked)
        for k in range(null.cols):
            entries = {(columns[row], 0): value for (row, _), value in null.column(k).entries().items()}
            result.append(HighestWeightVector(ExactMatrix.from_dict((m.dim, 1), entries), weight, signs))
    return result


def _column_weight(m: ModuleRep, column: ExactMatrix, position: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    keys = {(m.weights[row], m.signs[row]) for (row, _) in column.entries()}
    if len(keys) != 1:
        raise ContractError(ERR_NOT_WEIGHT_VECTOR.format(position))
    return keys.pop()


def submodule(m: ModuleRep, basis: ExactMatrix, provenance: str | None = None) -> ModuleRep:
    """Restrict M to the invariant subspace spanned by weight-vector columns.

    Args:
        m: Ambient module
        basis: dim M x d matrix of independent weight vectors spanning a submodule
        provenance: Label of the submodule

    Returns:
        ModuleRep: The submodule in the given basis
    """
    keys = [_column_weight(m, basis.column(k), k) for k in range(basis.cols)]
    e = tuple(coordinates(basis, x @ basis) for x in m.e)
    f = tuple(coordinates(basis, y @ basis) for y in m.f)
    return ModuleRep(
        m.kind,
        m.rank,
        tuple(w for w, _ in keys),
        tuple(s_ for _, s_ in keys),
        e,
        f,
        provenance if provenance is not None else m.provenance,
    )


def generated_subspace(m: ModuleRep, vector: ExactMatrix) -> ExactMatrix:
    """Span of all F-monomials applied to ``vector``, by breadth-first closure.

    Args:
        m: Module
        vector: Starting column

    Returns:
        ExactMatrix: Independent columns spanning the generated subspace
    """
    span = vector
    layer = [vector]
    while layer:
        candidates = [y @ v for v in layer for y in m.f]
        candidates = [c for c in candidates if not c.is_zero]
        if not candidates:
            break
        extended = column_space_basis(hstack([span, *candidates], rows=m.dim))
        layer = [extended.column(k) for k in range(span.cols, extended.cols)]
        span = extended
    return span


def constituents(m: ModuleRep) -> list[ModuleRep]:
    """Split a semisimple module into the submodules generated by its highest-weight vectors.

    Args:
        m: A tensor product of vector and sign modules

    Returns:
        list[ModuleRep]: Constituents labelled "word[labels]"
    """
    parts: list[ModuleRep] = []
    bases: list[ExactMatrix] = []
    for hw in highest_weight_vectors(m):
        basis = generated_subspace(m, hw.vector)
        label = ",".join(str(x) for x in hw.weight)
        sign = "" if all(x == 1 for x in hw.signs) else "-"
        parts.append(submodule(m, basis, f"{m.provenance}[{sign}{label}]"))
        bases.append(basis)
    total = sum(p.dim for p in parts)
    spanned = hstack(bases, rows=m.dim).rank() if bases else 0
    if total != m.dim or spanned != m.dim:
        raise IQuantumError(ERR_NOT_SEMISIMPLE.format(m.provenance, spanned, m.dim))
    logger.debug("%s splits into dimensions %s", m.provenance, [p.dim for p in parts])
    return parts


def weight_multiset(m: ModuleRep) -> Counter[tuple[int, ...]]:
    """Multiplicity of each weight (Dynkin labels) in M."""
    return Counter(m.weights)


def character_matches(m: ModuleRep, highest: Sequence[int]) -> bool:
    """Whether the weights of M are those of the irreducible module of highest weight ``highest``."""
    expected = character(m.cartan, tuple(highest))
    return +weight_multiset(m) == +expected


# relation suite


def _relation_checks(m: ModuleRep) -> list[Check]:
    checks: list[Check] = []
    zero = ExactMatrix.zeros(m.dim, m.dim)

    def k_conj(i: int, j: int, raising: bool) -> Check:
        gen = m.e[j - 1] if raising else m.f[j - 1]
        power = m.di(i) * m.a(i, j) * (1 if raising else -1)
        name = "E" if raising else "F"

        def compute() -> ExactMatrix:
            ki = m.k_matrix(K(m.rank, i).alpha)
            return ki @ gen @ ki.inverse() - gen * qpow(power)

        sign = "" if raising else "-"
        return Check(f"K{i}{name}{j}", f"K_i{name}_jK_i^-1 = q_i^{sign}a_ij {name}_j", compute)

    def e_f(i: int, j: int) -> Check:
        def compute() -> ExactMatrix:
            lhs = m.e[i - 1] @ m.f[j - 1] - m.f[j - 1] @ m.e[i - 1]
            return lhs - (m.evaluate(kbracket(K(m.rank, i), 0, m.di(i))) if i == j else zero)

        return Check(f"[E{i},F{j}]", "[E_i,F_j] = δ_ij [K_i;0]_{q_i}", compute)

    def serre_check(i: int, j: int, raising: bool) -> Check:
        name = "E" if raising else "F"
        gen = E if raising else F

        def compute() -> ExactMatrix:
            return m.evaluate(serre(i, j, gen(i), gen(j), m))

        return Check(f"S{i}{j}({name})", f"S_ij({name}_i,{name}_j) = 0", compute)

    for i in m.vertices:
        for j in m.vertices:
            checks.append(k_conj(i, j, raising=True))
            checks.append(k_conj(i, j, raising=False))
            checks.append(e_f(i, j))
    for i in m.vertices:
        for j in m.vertices:
            if i != j:
                checks.append(serre_check(i, j, raising=True))
                checks.append(serre_check(i, j, raising=False))
    return checks


def verify_quantum_relations(m: ModuleRep) -> list[Check]:
    """Defining relations of U_q(g) on M as named checks.

    Args:
        m: Module

    Returns:
        list[Check]: K-conjugation, [E_i, F_j] and Serre relations
    """
    return _relation_checks(m)


# classical limit


@dataclass(frozen=True)
class ClassicalRep:
    """A U(g)-module over Q obtained at q = 1."""

    kind: str
    rank: int
    e: tuple[ExactMatrix, ...]
    f: tuple[ExactMatrix, ...]
    h: tuple[ExactMatrix, ...]
    extras: Mapping[str, ExactMatrix] = field(default_factory=dict)

    @cached_property
    def cartan(self) -> CartanMatrix:
        """CartanMatrix: Cartan matrix of g."""
        return cartan_matrix(self.kind, self.rank)


def limit_matrix(name: str, matrix: ExactMatrix) -> ExactMatrix:
    """Entry-wise value at q = 1.

    Args:
        name: Matrix name used in the error message
        matrix: Matrix with entries regular at q = 1

    Returns:
        ExactMatrix: Rational matrix
    """
    entries = {}
    for key, value in matrix.entries().items():
        limit = limit_at_one(value)
        if limit.value is None:
            raise NotIntegralError(ERR_POLE.format(name, key, format_scalar(value)))
        entries[key] = limit.value
    return ExactMatrix.from_dict(matrix.shape, entries)


def classical_limit(m: ModuleRep, extra: Mapping[str, ExactMatrix] | None = None) -> ClassicalRep:
    """Specialise a module (and extra operators) at q = 1.

    h_i is the limit of (K_i;0)_{q_i} = (K_i - 1)/(q_i - 1).

    Args:
        m: Module whose matrices are regular at q = 1
        extra: Named operators to specialise alongside, e.g. B_i

    Returns:
        ClassicalRep: The classical module
    """
    e = tuple(limit_matrix(f"E{i}", m.e[i - 1]) for i in m.vertices)
    f = tuple(limit_matrix(f"F{i}", m.f[i - 1]) for i in m.vertices)
    h = tuple(limit_matrix(f"(K{i};0)", m.evaluate(kround(K(m.rank, i), 0, m.di(i)))) for i in m.vertices)
    extras = {name: limit_matrix(name, matrix) for name, matrix in (extra or {}).items()}
    return ClassicalRep(m.kind, m.rank, e, f, h, extras)


def verify_classical_relations(c: ClassicalRep) -> list[Check]:
    """Relations of U(g) over Q: [h, e], [h, f], [e, f] and Serre.

    Args:
        c: Classical module

    Returns:
        list[Check]: Named checks
    """
    checks: list[Check] = []
    n = c.rank
    dim = c.e[0].rows
    zero = ExactMatrix.zeros(dim, dim)

    def bracket(x: ExactMatrix, y: ExactMatrix) -> ExactMatrix:
        return x @ y - y @ x

    def add_check(check_id: str, anchor: str, compute: Callable[[], ExactMatrix]) -> None:
        checks.append(Check(check_id, anchor, compute))

    for i in range(n):
        for j in range(n):
            a = c.cartan[i][j]
            hi, ej, fj = c.h[i], c.e[j], c.f[j]
            add_check(
                f"[h{i + 1},e{j + 1}]", "[h_i,e_j] = a_ij e_j", lambda hi=hi, ej=ej, a=a: bracket(hi, ej) - ej * a
            )
            add_check(
                f"[h{i + 1},f{j + 1}]", "[h_i,f_j] = -a_ij f_j", lambda hi=hi, fj=fj, a=a: bracket(hi, fj) + fj * a
            )
            expected = c.h[i] if i == j else zero
            add_check(
                f"[e{i + 1},f{j + 1}]",
                "[e_i,f_j] = δ_ij h_i",
                lambda ei=c.e[i], fj=fj, expected=expected: bracket(ei, fj) - expected,
            )
            if i != j:
                for name, gens in (("e", c.e), ("f", c.f)):
                    m = 1 - a

                    def serre_value(x: ExactMatrix = gens[i], y: ExactMatrix = gens[j], m: int = m) -> ExactMatrix:
                        total = zero
                        for r in range(m + 1):
                            total = total + (x ** (m - r) @ y @ x**r) * ((-1) ** r * math.comb(m, r))
                        return total

                    check_id = f"ad({name}{i + 1})^{m}({name}{j + 1})"
                    add_check(check_id, f"ad({name}_i)^(1-a_ij)({name}_j) = 0", serre_value)
    return checks
