"""Highest weight theory for the case studies AI, AII, AIII and BI.

A ``CaseStudy`` fixes a Satake datum, a varsigma preset and, as recipes, the
raising set 𝒳, the lowering set 𝒴 and the Cartan part 𝒲, together with the
relation tables that certify them on a module. Recipes are evaluated on a
``CaseWorkspace`` that wraps one ``IThetaAction`` and caches weight
components, l_j and named elements such as t_i.

On top of that, highest weight records are read off the joint kernel of 𝒳,
classified by the ladder eigenvalues and compared with a branching oracle
computed at q = 1.
"""

from __future__ import annotations

import logging
import threading
from collections import Counter
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field, replace
from functools import partial
from fractions import Fraction
from typing import Any, TypeAlias

from iquantum.cartan import (
    CartanMatrix,
    SatakeDatum,
    block_cartan,
    cartan_matrix,
    character,
    is_dominant,
    satake,
    weyl_dimension,
)
from iquantum.freealg import (
    E,
    F,
    Expr,
    Gen,
    KElem,
    SubstitutionMapper,
    EvaluationMapper,
    add,
    collect_generators,
    default_eta,
    iT_word,
    k_generator,
    k_inverse,
    kbracket,
    kcurly,
    kolb_C,
    mul,
    qcomm,
    serre,
)
from iquantum.iqrep import (
    XPM,
    CaseDecomposition,
    IThetaAction,
    case_decompose,
    curly,
    dual_module,
    iqg_action,
    l_value,
    ladder_candidates,
    marked_preset,
    square,
    uniform_preset,
    xpm,
)
from iquantum.linalg import (
    ExactMatrix,
    column_space_basis,
    coordinates,
    hstack,
    kernel,
    simultaneous_eigenbasis,
    vstack,
)
from iquantum.scalar import (
    ONE,
    QScalar,
    const,
    is_regular_at_one,
    limit_at_one,
    monomial_power,
    q,
    qint,
    qpow,
)
from iquantum.urep import ModuleRep, constituents, limit_matrix, module_from_word
from iquantum.utils.formatting import format_scalar
from iquantum.utils.shared import (
    FAIL,
    PASS,
    Check,
    ConfigError,
    ContractError,
    Report,
    UnsupportedCaseError,
    run_checks,
)

logger = logging.getLogger(__name__)

# Error messages
ERR_UNKNOWN_CASE = "Unknown case {!r}; known: {}"
ERR_CASE_RANK = "Case {} needs {} <= r <= {}, got {}"
ERR_NO_CLASSIFICATION = "Case {} has no classification of highest weights"
ERR_UNRESOLVED = "Commuting family does not resolve the highest weight space of {} ({} of {} dimensions)"
ERR_NOT_EIGEN = "Vector is not an eigenvector of {}"
ERR_CONSTITUENT = "Constituent {} out of range; {} has {} constituents"
ERR_ORACLE = "Classical weights of {} do not decompose into characters: {}"

MAX_RANK = 3
LADDER_DEPTH = 3

Recipe: TypeAlias = Callable[["CaseWorkspace"], ExactMatrix]
SplitBuild: TypeAlias = Callable[["XPM", "XPM", ExactMatrix, ExactMatrix], ExactMatrix]
Coweight: TypeAlias = dict[str, Fraction]
Labels: TypeAlias = tuple[Fraction, ...]

QM = q - ONE / q


@dataclass(eq=False)
class CaseWorkspace:
    """One module seen through a case study, with cached operators.

    Attributes:
        action: The iquantum group acting on the module
        symbols: Named elements (t_i, f'_i, ...) by key, evaluated on first use
    """

    action: IThetaAction
    symbols: Mapping[str, Gen] = field(default_factory=dict)
    _splits: dict[int, CaseDecomposition] = field(default_factory=dict, init=False, repr=False)
    _memo: dict[str, ExactMatrix] = field(default_factory=dict, init=False, repr=False)
    _lock: threading.RLock = field(default_factory=threading.RLock, init=False, repr=False)

    @property
    def dim(self) -> int:
        """int: Dimension of the module."""
        return self.action.dim

    def memo(self, key: str, build: Callable[[], ExactMatrix]) -> ExactMatrix:
        """Return the cached matrix under ``key``, building it once."""
        with self._lock:
            cached = self._memo.get(key)
            if cached is None:
                cached = build()
                self._memo[key] = cached
        return cached

    def split(self, i: int) -> CaseDecomposition:
        """Weight decomposition of B_i, computed once per vertex."""
        with self._lock:
            found = self._splits.get(i)
            if found is None:
                found = case_decompose(self.action, i)
                self._splits[i] = found
        return found

    def comp(self, i: int, label: str) -> ExactMatrix:
        """The weight component B_{i,label}."""
        for component in self.split(i).components:
            if component.label == label:
                return component.matrix
        raise ContractError(f"B{i} has no component {label!r}")

    def ell(self, j: int) -> ExactMatrix:
        """l_j."""
        return self.action.ell(j)

    def b(self, i: int) -> ExactMatrix:
        """B_i."""
        return self.action.b(i)

    def symbol(self, key: str) -> ExactMatrix:
        """Matrix of a named element."""
        return self.memo(key, lambda: self.evaluate(self.symbols[key].body))  # type: ignore[arg-type]

    def evaluate(self, expr: Expr) -> ExactMatrix:
        """Matrix of an expression in B, K, black E/F and the named elements."""
        context = dict(self.action.gens)
        for key in collect_generators(expr):
            if key in self.symbols:
                context[key] = self.symbol(key)
        return EvaluationMapper(context, self.action.k_source, self.dim)(expr)


@dataclass(frozen=True)
class Operator:
    """A named operator given by a recipe."""

    name: str
    recipe: Recipe


@dataclass(frozen=True)
class LadderGenerator:
    """A member of the commuting family read off highest weight vectors.

    Eigenvalues are sign * q^{d x} for kind "k" and [x]_{q^d} for kind "l"
    (after dividing by sqrt(q_j varsigma_j) when ``vertex`` is set); x is the
    coordinate ``coord`` of the highest weight.
    """

    name: str
    recipe: Recipe
    kind: str
    coord: str
    d: int = 1
    vertex: int | None = None

    def scale(self, ws: CaseWorkspace) -> QScalar:
        """Common factor of the eigenvalues."""
        return ws.action.scale(self.vertex) if self.vertex is not None else ONE


@dataclass(frozen=True)
class SimpleTriple:
    """(X_i, Y_i, Ω_i) with [X_i, Y_i] = [Ω_i;0] modulo ``modulo``."""

    name: str
    x: Recipe
    y: Recipe
    omega: Recipe
    modulo: tuple[Recipe, ...] = ()


@dataclass(frozen=True)
class Relation:
    """An identity checked on a module.

    ``test`` is "zero" for residual = 0 and "regular" for residual / (q - 1)
    regular at q = 1. With ``modulo`` the residual is restricted to the joint
    kernel of those operators.
    """

    rel_id: str
    anchor: str
    residual: Recipe
    modulo: tuple[Recipe, ...] = ()
    test: str = "zero"

    def check(self, ws: CaseWorkspace) -> Check:
        """Bind the relation to a workspace."""

        def compute() -> ExactMatrix | bool:
            residual = self.residual(ws)
            if self.modulo:
                residual = residual @ joint_kernel([m(ws) for m in self.modulo], ws.dim)
            if self.test == "regular":
                return all(is_regular_at_one(v / (q - ONE)) for v in residual.entries().values())
            return residual

        return Check(self.rel_id, self.anchor, compute)


@dataclass(frozen=True)
class CaseStudy:
    """Everything the highest weight theory of one case needs."""

    tag: str
    r: int
    datum: SatakeDatum
    varsigma: dict[int, QScalar]
    raising: tuple[Operator, ...]
    lowering: tuple[Operator, ...]
    cartan_part: tuple[Operator, ...]
    ladder: tuple[LadderGenerator, ...]
    coweights: tuple[Coweight, ...]
    roots: tuple[Coweight, ...]
    k_cartan: CartanMatrix | None
    relations: tuple[Relation, ...] = ()
    lemmas: tuple[Relation, ...] = ()
    simple: tuple[SimpleTriple, ...] = ()
    symbols: tuple[Gen, ...] = ()
    default_word: str = "V"

    def workspace(self, action: IThetaAction) -> CaseWorkspace:
        """Wrap an action of this case's iquantum group."""
        return CaseWorkspace(action, {g.key: g for g in self.symbols})

    def manifest(self) -> dict[str, Any]:
        """Case description for reports."""
        return {
            "case": self.tag,
            "r": self.r,
            "datum": self.datum.describe(),
            "varsigma": {i: format_scalar(v) for i, v in sorted(self.varsigma.items())},
            "raising": [op.name for op in self.raising],
            "lowering": [op.name for op in self.lowering],
            "cartan_part": [op.name for op in self.cartan_part],
            "ladder": [g.name for g in self.ladder],
            "k_cartan": [list(row) for row in self.k_cartan] if self.k_cartan else None,
        }


@dataclass
class HWRecord:
    """A highest weight vector with its eigenvalues and classification.

    Attributes:
        vector: The vector, a column of the module basis
        w_eigs: Eigenvalue of every member of 𝒲
        family: Normalised eigenvalue of every ladder generator
        coords: Highest weight coordinates read from ``family``
        signs: Sign of every k-kind or l-kind eigenvalue
        labels: <w_i, λ> for the coweights of 𝔨
        verdict: PASS, FAIL or "UNCLASSIFIED"
        reason: Why the record failed
        k_dim: Dimension of the 𝔨-module with these labels
    """

    vector: ExactMatrix
    w_eigs: dict[str, QScalar | None]
    family: dict[str, QScalar]
    coords: dict[str, Fraction] = field(default_factory=dict)
    signs: dict[str, int] = field(default_factory=dict)
    labels: Labels | None = None
    verdict: str = "UNCLASSIFIED"
    reason: str = ""
    k_dim: int | None = None

    def to_dict(self, key: str = "verdict") -> dict[str, Any]:
        """JSON-ready record; ``key`` names the verdict field."""
        return {
            "vector": [format_scalar(self.vector[i, 0]) for i in range(self.vector.rows)],
            "w_eigs": {k: format_scalar(v) if v is not None else None for k, v in self.w_eigs.items()},
            "limits": {k: str(limit_at_one(v)) if v is not None else None for k, v in self.w_eigs.items()},
            "family": {k: format_scalar(v) for k, v in self.family.items()},
            "coords": {k: str(v) for k, v in self.coords.items()},
            "labels": [str(x) for x in self.labels] if self.labels is not None else None,
            key: self.verdict,
            "reason": self.reason,
            "k_dim": self.k_dim,
        }


# small combinators


def _bracket(x: ExactMatrix, y: ExactMatrix, power: int | Fraction = 0) -> ExactMatrix:
    return x @ y - (y @ x) * qpow(power)


def _expr(expr: Expr) -> Recipe:
    return lambda ws: ws.evaluate(expr)


def _comp(i: int, label: str) -> Recipe:
    return lambda ws: ws.comp(i, label)


def _curled(recipe: Recipe, j: int, d: int = 1) -> Recipe:
    return lambda ws: recipe(ws) @ curly(ws.ell(j), 0, d)


def _ell_word(*factors: tuple[int, int]) -> Recipe:
    """Product of l_j^p over (j, p)."""

    def build(ws: CaseWorkspace) -> ExactMatrix:
        result = ExactMatrix.identity(ws.dim)
        for j, p in factors:
            result = result @ ws.ell(j) ** p
        return result

    return build


def _comm(x: Recipe, y: Recipe, power: int | Fraction = 0) -> Recipe:
    return lambda ws: _bracket(x(ws), y(ws), power)


def _total(*recipes: Recipe) -> Recipe:
    def build(ws: CaseWorkspace) -> ExactMatrix:
        result = recipes[0](ws)
        for recipe in recipes[1:]:
            result = result + recipe(ws)
        return result

    return build


def _minus(a: Recipe, b: Recipe) -> Recipe:
    return lambda ws: a(ws) - b(ws)


def _expr_relation(rel_id: str, anchor: str, lhs: Expr, rhs: Expr | None = None) -> Relation:
    body = lhs if rhs is None else lhs - rhs
    return Relation(rel_id, anchor, _expr(body))


def joint_kernel(ops: Sequence[ExactMatrix], dim: int) -> ExactMatrix:
    """Basis of the common kernel; the whole space for an empty family."""
    if not ops:
        return ExactMatrix.identity(dim)
    return kernel(vstack(list(ops), cols=dim))


def stable_subspace(basis: ExactMatrix, family: Sequence[ExactMatrix]) -> ExactMatrix:
    """Largest subspace of span(basis) preserved by every member of ``family``.

    Args:
        basis: Independent columns
        family: Square operators on the ambient space

    Returns:
        ExactMatrix: Independent columns spanning the stable subspace
    """
    current = basis
    while current.cols:
        before = current.cols
        for m in family:
            if not current.cols:
                break
            null = kernel(hstack([m @ current, -current]))
            current = column_space_basis(current @ null.extract(range(current.cols), range(null.cols)))
        if current.cols == before:
            break
    return current


def _ladder_relations(triple: SimpleTriple, depth: int = LADDER_DEPTH) -> list[Relation]:
    relations = []
    for n in range(1, depth + 1):

        def residual(ws: CaseWorkspace, n: int = n) -> ExactMatrix:
            x, y = triple.x(ws), triple.y(ws)
            rhs = (y ** (n - 1) @ square(triple.omega(ws), -n + 1)) * qint(n) + y**n @ x
            return x @ y**n - rhs

        relations.append(
            Relation(
                f"{triple.name}:ladder{n}",
                "X Y^n = [n] Y^(n-1) [Ω;-n+1] + Y^n X",
                residual,
                triple.modulo,
            )
        )
    return relations


def _pairing(coweights: Sequence[Coweight], roots: Sequence[Coweight]) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(
        tuple(sum((w.get(c, Fraction(0)) * v for c, v in gamma.items()), Fraction(0)) for gamma in roots)
        for w in coweights
    )


def _check_rank(tag: str, r: int, low: int) -> None:
    if not low <= r <= MAX_RANK:
        raise ConfigError(ERR_CASE_RANK.format(tag, low, MAX_RANK, r))


# AI


_SIGNS = ("+", "-")


def _ai_case(tag: str, r: int) -> CaseStudy:
    odd = tag == "AI-odd"
    _check_rank(tag, r, 1 if odd else 2)
    datum = satake("AI-1" if odd else "AI-2", r)
    varsigma = marked_preset(datum)
    inner = range(1, r)  # A3 vertices 2i with i < r

    raising = [Operator(f"B{2 * i},{lab}", _comp(2 * i, lab)) for i in inner for lab in ("++", "+-")]
    lowering = [Operator(f"B{2 * i},{lab}", _comp(2 * i, lab)) for i in inner for lab in ("-+", "--")]
    if odd:
        raising.append(Operator(f"B{2 * r},+", _comp(2 * r, "+")))
        lowering.append(Operator(f"B{2 * r},-", _comp(2 * r, "-")))
    cartan_part = [Operator(f"B{2 * j - 1}", _generator(2 * j - 1)) for j in range(1, r + 1)]
    ladder = [
        LadderGenerator(f"B{2 * j - 1}", _generator(2 * j - 1), "l", f"b{2 * j - 1}", 1, 2 * j - 1)
        for j in range(1, r + 1)
    ]

    simple = []
    coweights: list[Coweight] = []
    roots: list[Coweight] = []
    for i in range(1, r + 1):
        if i < r:
            simple.append(
                SimpleTriple(
                    f"triple{i}",
                    _curled(_comp(2 * i, "+-"), 2 * i - 1),
                    _curled(_comp(2 * i, "-+"), 2 * i + 1),
                    _ell_word((2 * i - 1, 1), (2 * i + 1, -1)),
                    (_comp(2 * i, "++"),),
                )
            )
            step = {f"b{2 * i - 1}": Fraction(1), f"b{2 * i + 1}": Fraction(-1)}
            coweights.append(step)
            roots.append(dict(step))
        elif odd:
            simple.append(
                SimpleTriple(
                    f"triple{r}",
                    _curled(_comp(2 * r, "+"), 2 * r - 1),
                    _curled(_comp(2 * r, "-"), 2 * r - 1),
                    _ell_word((2 * r - 1, 2)),
                )
            )
            coweights.append({f"b{2 * r - 1}": Fraction(2)})
            roots.append({f"b{2 * r - 1}": Fraction(1)})
        else:
            simple.append(
                SimpleTriple(
                    f"triple{r}",
                    _curled(_comp(2 * r - 2, "++"), 2 * r - 3),
                    _curled(_comp(2 * r - 2, "--"), 2 * r - 1),
                    _ell_word((2 * r - 3, 1), (2 * r - 1, 1)),
                    (_comp(2 * r - 2, "+-"),),
                )
            )
            both = {f"b{2 * r - 3}": Fraction(1), f"b{2 * r - 1}": Fraction(1)}
            coweights.append(both)
            roots.append(dict(both))

    if odd:
        k_cartan = ((2,),) if r == 1 else cartan_matrix("B", r)
    else:
        a1 = cartan_matrix("A", 1)
        k_cartan = block_cartan(a1, a1) if r == 2 else cartan_matrix("D", r)  # noqa: PLR2004

    relations = _ai_relations(r, odd)
    for triple in simple:
        relations.extend(_ladder_relations(triple))
    return CaseStudy(
        tag,
        r,
        datum,
        varsigma,
        tuple(raising),
        tuple(lowering),
        tuple(cartan_part),
        tuple(ladder),
        tuple(coweights),
        tuple(roots),
        k_cartan,
        tuple(relations),
        simple=tuple(simple),
    )


def _generator(i: int) -> Recipe:
    return lambda ws: ws.b(i)


def _ai_relations(r: int, odd: bool) -> list[Relation]:
    rels: list[Relation] = []

    def c(i: int, lab: str) -> Recipe:
        return _comp(2 * i, lab)

    def zero(rel_id: str, anchor: str, *pairs: tuple[Recipe, Recipe]) -> None:
        rels.append(Relation(rel_id, anchor, _total(*(_comm(x, y) for x, y in pairs))))

    top = 2 * r
    if odd and r >= 2:  # noqa: PLR2004
        for e1 in _SIGNS:
            for e2 in _SIGNS:
                zero(
                    f"[B{top - 2},{e1}{e2},B{top},{e2}]",
                    "[B_{2r-2,e1e2},B_{2r,e2}] = 0",
                    (c(r - 1, e1 + e2), c(r, e2)),
                )
            zero(
                f"[B{top - 2},{e1}+,B{top},-]+[B{top - 2},{e1}-,B{top},+]",
                "[B_{2r-2,e+},B_{2r,-}] + [B_{2r-2,e-},B_{2r,+}] = 0",
                (c(r - 1, e1 + "+"), c(r, "-")),
                (c(r - 1, e1 + "-"), c(r, "+")),
            )
    for i in range(1, r - 1):
        for e1 in _SIGNS:
            for e2 in _SIGNS:
                if odd:
                    for e3 in _SIGNS:
                        zero(
                            f"[B{2 * i},{e1}{e2},B{top},{e3}]",
                            "[B_{2i,e1e2},B_{2r,e3}] = 0",
                            (c(i, e1 + e2), c(r, e3)),
                        )
                for e3 in _SIGNS:
                    zero(
                        f"[B{2 * i},{e1}{e2},B{2 * i + 2},{e2}{e3}]",
                        "[B_{2i,e1e2},B_{2i+2,e2e3}] = 0",
                        (c(i, e1 + e2), c(i + 1, e2 + e3)),
                    )
            for e2 in _SIGNS:
                zero(
                    f"[B{2 * i},{e1}+,B{2 * i + 2},-{e2}]+[B{2 * i},{e1}-,B{2 * i + 2},+{e2}]",
                    "[B_{2i,e+},B_{2i+2,-e'}] + [B_{2i,e-},B_{2i+2,+e'}] = 0",
                    (c(i, e1 + "+"), c(i + 1, "-" + e2)),
                    (c(i, e1 + "-"), c(i + 1, "+" + e2)),
                )
    labels = [a + b for a in _SIGNS for b in _SIGNS]
    for i in range(1, r):
        for j in range(i + 2, r):
            for la in labels:
                for lb in labels:
                    zero(
                        f"[B{2 * i},{la},B{2 * j},{lb}]",
                        "[B_{2i,e1e2},B_{2j,e3e4}] = 0 for |i-j| > 1",
                        (c(i, la), c(j, lb)),
                    )

    for i in range(1, r):
        lo, hi = 2 * i - 1, 2 * i + 1

        def cc(lab: str, j: int, i: int = i) -> Recipe:
            return _curled(c(i, lab), j)

        for e in _SIGNS:
            zero(
                f"[B{2 * i},+{e}{{l{lo}}},B{2 * i},-{e}{{l{lo}}}]",
                "[B_{2i,+e}{l;0},B_{2i,-e}{l;0}] = 0",
                (cc("+" + e, lo), cc("-" + e, lo)),
            )
            zero(
                f"[B{2 * i},{e}+{{l{hi}}},B{2 * i},{e}-{{l{hi}}}]",
                "[B_{2i,e+}{l;0},B_{2i,e-}{l;0}] = 0",
                (cc(e + "+", hi), cc(e + "-", hi)),
            )
        rels.append(
            Relation(
                f"B{2 * i}:pairs|l{lo}",
                "[B_{++}{l;0},B_{--}{l;0}] + [B_{+-}{l;0},B_{-+}{l;0}] = [l^2;0] at the lower neighbour",
                _minus(
                    _total(_comm(cc("++", lo), cc("--", lo)), _comm(cc("+-", lo), cc("-+", lo))),
                    lambda ws, lo=lo: square(ws.ell(lo) ** 2),
                ),
            )
        )
        rels.append(
            Relation(
                f"B{2 * i}:pairs|l{hi}",
                "[B_{++}{l;0},B_{--}{l;0}] + [B_{-+}{l;0},B_{+-}{l;0}] = [l^2;0] at the upper neighbour",
                _minus(
                    _total(_comm(cc("++", hi), cc("--", hi)), _comm(cc("-+", hi), cc("+-", hi))),
                    lambda ws, hi=hi: square(ws.ell(hi) ** 2),
                ),
            )
        )

        def mixed(ws: CaseWorkspace, i: int = i, lo: int = lo, hi: int = hi, inverse: bool = True) -> ExactMatrix:
            first, second = ("+-", "-+") if inverse else ("++", "--")
            outer, inner = ("--", "++") if inverse else ("-+", "+-")
            omega = ws.ell(lo) @ ws.ell(hi) ** (-1 if inverse else 1)
            lhs = _bracket(ws.comp(2 * i, first) @ curly(ws.ell(lo)), ws.comp(2 * i, second) @ curly(ws.ell(hi)))
            rhs = square(omega) + ws.comp(2 * i, outer) @ square(omega) @ ws.comp(2 * i, inner) * QM**2
            return lhs - rhs

        rels.append(
            Relation(
                f"B{2 * i}:mixed-",
                "[B_{+-}{l_lo;0},B_{-+}{l_hi;0}] = [l_lo l_hi^-1;0] + (q-q^-1)^2 B_{--}[l_lo l_hi^-1;0]B_{++}",
                mixed,
            )
        )
        rels.append(
            Relation(
                f"B{2 * i}:mixed+",
                "[B_{++}{l_lo;0},B_{--}{l_hi;0}] = [l_lo l_hi;0] + (q-q^-1)^2 B_{-+}[l_lo l_hi;0]B_{+-}",
                lambda ws, mixed=mixed: mixed(ws, inverse=False),
            )
        )
    if odd:
        lo = top - 1
        rels.append(
            Relation(
                f"[B{top},+{{l{lo}}},B{top},-{{l{lo}}}]",
                "[B_{2r,+}{l;0},B_{2r,-}{l;0}] = [l^2;0]",
                _minus(
                    _comm(_curled(c(r, "+"), lo), _curled(c(r, "-"), lo)),
                    lambda ws: square(ws.ell(lo) ** 2),
                ),
            )
        )
    return rels


# AII


def _kk(rank: int, *powers: tuple[int, int]) -> KElem:
    alpha = [0] * rank
    for i, p in powers:
        alpha[i - 1] += p
    return KElem(tuple(alpha))


def _aii_case(r: int) -> CaseStudy:
    _check_rank("AII", r, 2)
    datum = satake("AII", r)
    rank = datum.rank
    varsigma = uniform_preset(datum, q)
    qi = ONE / q

    def b(k: int) -> Gen:
        return Gen("B", k)

    def b_prime(k: int) -> Gen:
        return Gen("Bp", k)

    symbols = tuple(
        Gen("Bp", 2 * i, body=qcomm(F(2 * i - 1), qcomm(F(2 * i + 1), b(2 * i), 1), 1) * qi) for i in range(1, r)
    )

    def element(k: int, raising: bool) -> tuple[str, Expr]:
        if k % 2:
            use_e = (k % 4 == 1) == raising
            return (f"E{k}", E(k)) if use_e else (f"F{k}", F(k))
        use_prime = (k % 4 == 2) == raising  # noqa: PLR2004
        return (f"B'{k}", b_prime(k)) if use_prime else (f"B{k}", b(k))

    raising = tuple(Operator(n, _expr(x)) for n, x in (element(k, True) for k in range(1, rank + 1)))
    lowering = tuple(Operator(n, _expr(x)) for n, x in (element(k, False) for k in range(1, rank + 1)))
    raising_recipes = tuple(op.recipe for op in raising)

    cartan_part: list[Operator] = [Operator("[K1;0]", _expr(kbracket(_kk(rank, (1, 1)))))]
    simple = [SimpleTriple("triple1", _expr(E(1)), _expr(F(1)), _expr(_kk(rank, (1, 1))))]
    coweights: list[Coweight] = [{"h1": Fraction(1)}]
    roots: list[Coweight] = [{"h1": Fraction(2)}]
    for i in range(2, r + 1):
        sign = -1 if i % 2 == 0 else 1
        omega = _kk(rank, (2 * i - 3, sign), (2 * i - 1, sign))
        cartan_part.append(Operator(f"[K{2 * i - 3}^{sign}K{2 * i - 1}^{sign};0]", _expr(kbracket(omega))))
        x, y = (b_prime(2 * i - 2), b(2 * i - 2)) if sign < 0 else (b(2 * i - 2), b_prime(2 * i - 2))
        simple.append(SimpleTriple(f"triple{i}", _expr(x), _expr(y), _expr(omega), raising_recipes))
        pair = {f"h{2 * i - 3}": Fraction(sign), f"h{2 * i - 1}": Fraction(sign)}
        coweights.append(pair)
        roots.append(dict(pair))

    ladder = tuple(
        LadderGenerator(f"K{2 * k - 1}", _expr(_kk(rank, (2 * k - 1, 1))), "k", f"h{2 * k - 1}")
        for k in range(1, r + 1)
    )
    c_matrix = cartan_matrix("C", r)
    k_cartan = tuple(tuple(row[::-1]) for row in reversed(c_matrix))

    relations = _aii_relations(r, rank)
    for triple in simple:
        relations.extend(_ladder_relations(triple))
    return CaseStudy(
        "AII",
        r,
        datum,
        varsigma,
        raising,
        lowering,
        tuple(cartan_part),
        ladder,
        tuple(coweights),
        tuple(roots),
        k_cartan,
        tuple(relations),
        simple=tuple(simple),
        symbols=symbols,
    )


def _aii_relations(r: int, rank: int) -> list[Relation]:
    rels: list[Relation] = []
    qi = ONE / q

    def b(k: int) -> Gen:
        return Gen("B", k)

    def bp(k: int) -> Gen:
        return Gen("Bp", k)

    def kk(*powers: tuple[int, int]) -> KElem:
        return _kk(rank, *powers)

    def rel(rel_id: str, anchor: str, lhs: Expr, rhs: Expr | None = None) -> None:
        rels.append(_expr_relation(rel_id, anchor, lhs, rhs))

    odd = range(1, r + 1)
    even = range(1, r)
    for i in odd:
        for j in odd:
            e_i, f_j = E(2 * i - 1), F(2 * j - 1)
            if i == j:
                k_odd = kk((2 * i - 1, 1))
                rel(f"[E{2 * i - 1},F{2 * i - 1}]", "[E_i,F_i] = [K_i;0]", qcomm(e_i, f_j), kbracket(k_odd))
            else:
                rel(f"[E{2 * i - 1},F{2 * j - 1}]", "[E_i,F_j] = 0", qcomm(e_i, f_j))
            if i < j:
                rel(f"[E{2 * i - 1},E{2 * j - 1}]", "[E_i,E_j] = 0", qcomm(e_i, E(2 * j - 1)))
                rel(f"[F{2 * i - 1},F{2 * j - 1}]", "[F_i,F_j] = 0", qcomm(F(2 * i - 1), f_j))
        for j in even:
            rel(f"[E{2 * i - 1},B{2 * j}]", "[E_{2i-1},B_{2j}] = 0", qcomm(E(2 * i - 1), b(2 * j)))
            if j not in {i, i - 1}:
                rel(f"[E{2 * i - 1},B'{2 * j}]", "[E_{2i-1},B'_{2j}] = 0", qcomm(E(2 * i - 1), bp(2 * j)))
                rel(f"[F{2 * i - 1},B{2 * j}]", "[F_{2i-1},B_{2j}] = 0", qcomm(F(2 * i - 1), b(2 * j)))
                rel(f"[F{2 * i - 1},B'{2 * j}]", "[F_{2i-1},B'_{2j}] = 0", qcomm(F(2 * i - 1), bp(2 * j)))
    for i in even:
        lo, hi = 2 * i - 1, 2 * i + 1
        for near, far in ((hi, lo), (lo, hi)):
            rel(
                f"[E{near},B'{2 * i}]",
                "[E_{2i±1},B'_{2i}] = q^-1 [F_{2i∓1},B_{2i}]_q K_{2i±1}^-1",
                qcomm(E(near), bp(2 * i)),
                mul(qcomm(F(far), b(2 * i), 1), kk((near, -1))) * qi,
            )
            rel(
                f"[F{near},B{2 * i}]_q",
                "[F_{2i±1},B_{2i}]_q = q[E_{2i∓1},B'_{2i}K_{2i∓1}] + (q-q^-1)B'_{2i}K_{2i∓1}E_{2i∓1}",
                qcomm(F(near), b(2 * i), 1),
                qcomm(E(far), mul(bp(2 * i), kk((far, 1)))) * q + mul(bp(2 * i), kk((far, 1)), E(far)) * QM,
            )
            rel(f"[F{near},B'{2 * i}]_q^-1", "[F_{2i±1},B'_{2i}]_{q^-1} = 0", qcomm(F(near), bp(2 * i), -1))
        b_lo, b_hi = qcomm(F(lo), b(2 * i), 1), qcomm(F(hi), b(2 * i), 1)
        rel(
            f"[B'{2 * i},B{2 * i}]",
            "[B'_{2i},B_{2i}] = [K_lo^-1 K_hi^-1;0] - (q-q^-1)(...)",
            qcomm(bp(2 * i), b(2 * i)),
            kbracket(kk((lo, -1), (hi, -1)))
            - add(
                mul(E(hi), kk((lo, 1)), F(hi)) * q,
                mul(F(lo), kk((hi, 1)), E(lo)) * qi,
                mul(b_lo, b_hi) * qi,
                mul(F(lo), E(hi), E(lo), F(hi)) * QM**2,
            ) * QM,
        )
        rel(
            f"[B{2 * i},B'{2 * i}]",
            "[B_{2i},B'_{2i}] = [K_lo K_hi;0] + (q-q^-1)(...)",
            qcomm(b(2 * i), bp(2 * i)),
            kbracket(kk((lo, 1), (hi, 1)))
            + add(
                mul(F(hi), kk((lo, 1)), E(hi)) * qi,
                mul(E(lo), kk((hi, 1)), F(lo)) * q,
                mul(b_hi, b_lo) * qi,
                mul(E(lo), F(hi), F(lo), E(hi)) * QM**2,
            ) * QM,
        )
        for j in even:
            if i < j:
                rel(f"[B{2 * i},B{2 * j}]", "[B_{2i},B_{2j}] = 0", qcomm(b(2 * i), b(2 * j)))
                rel(f"[B'{2 * i},B'{2 * j}]", "[B'_{2i},B'_{2j}] = 0", qcomm(bp(2 * i), bp(2 * j)))
            if abs(i - j) > 1:
                rel(f"[B{2 * i},B'{2 * j}]", "[B_{2i},B'_{2j}] = 0 for |i-j| > 1", qcomm(b(2 * i), bp(2 * j)))
    return rels


# AIII: the split pair (s = r + 1) and the even case AIV


@dataclass(frozen=True)
class _PairAlgebra:
    """Expressions of one AIII/AIV datum: f_i, e_i, k_i, t_i and their relatives."""

    datum: SatakeDatum
    varsigma: dict[int, QScalar]
    r: int
    split: bool

    def f(self, i: int) -> Gen:
        return Gen("B", i)

    def e(self, i: int) -> Gen:
        return Gen("B", self.datum.rank + 1 - i)

    def k(self, i: int) -> KElem:
        return k_generator(i, self.datum)

    def eta(self) -> dict[int, QScalar]:
        """eta with T_i(f_r) = [f_r,f_i]_q and T_i(e_r) = [e_i,e_r]_{q^-1} for i = r - 1.

        eta_i = q^(1/2) and eta_{τ(i)} = -q^(-1/2) / varsigma_i for i < r.
        """
        eta = default_eta(self.datum, self.varsigma)
        half = qpow(Fraction(1, 2))
        for i in range(1, self.r):
            eta[i] = half
            eta[self.datum.tau(i)] = -ONE / (half * self.varsigma[i])
        return eta

    def T(self, word: Sequence[int], x: Expr) -> Expr:  # noqa: N802
        return iT_word(tuple(word), x, self.datum, self.varsigma, self.eta())

    def t_body(self, i: int) -> Expr:
        r = self.r
        if self.split:
            top = qcomm(self.e(r), self.f(r), 1) - kbracket(self.k(r))
        else:
            top = Gen("B", r)
        return self.T(range(i, r), top)

    def e_prime_body(self, i: int) -> Expr:
        # [e_i, t_{i+1}]_{q^-1} for the split pair, [t_{i+1}, e_i]_q otherwise
        if self.split:
            return qcomm(self.e(i), self.t_body(i + 1), -1)
        return qcomm(self.t_body(i + 1), self.e(i), 1)

    def f_prime_body(self, i: int) -> Expr:
        return qcomm(self.t_body(i + 1), self.f(i), 1)


def _sym(name: str, index: int) -> Gen:
    return Gen(name, index)


def _pair_case(tag: str, r: int) -> CaseStudy:
    split = tag == "AIII-split"
    _check_rank(tag, r, 1 if split else 2)
    if split:
        datum = satake("AIII", r, r + 1)
        varsigma = {i: (q if i == r + 1 else ONE) for i in datum.white}
    else:
        datum = satake("AIV", r)
        varsigma = {i: (ONE / q if i == r else ONE) for i in datum.white}
    alg = _PairAlgebra(datum, varsigma, r, split)

    symbols: list[Gen] = [Gen("t", i, body=alg.t_body(i)) for i in range(1, r + 1)]
    for i in range(1, r):
        symbols.append(Gen("fp", i, body=alg.f_prime_body(i)))
        symbols.append(Gen("ep", i, body=alg.e_prime_body(i)))
    t, fp, ep = partial(_sym, "t"), partial(_sym, "fp"), partial(_sym, "ep")

    raising: list[Operator] = []
    lowering: list[Operator] = []
    if split:
        raising.append(Operator(f"e{r}", _expr(alg.e(r))))
        lowering.append(Operator(f"f{r}", _expr(alg.f(r))))
    for i in range(1, r):
        raising += [Operator(f"e{i}", _expr(alg.e(i))), Operator(f"e'{i}", _expr(ep(i)))]
        lowering += [Operator(f"f{i}", _expr(alg.f(i))), Operator(f"f'{i}", _expr(fp(i)))]

    k_range = range(1, r + 1) if split else range(1, r)
    ladder = [LadderGenerator(f"k{j}", _expr(alg.k(j)), "k", f"k{j}") for j in k_range]
    ladder += [LadderGenerator(f"t{i}", _expr(t(i)), "l", f"t{i}") for i in range(1, r + 1)]
    cartan_part = tuple(Operator(g.name, g.recipe) for g in ladder)

    def root(i: int, sign: int) -> Coweight:
        gamma = {f"k{j}": Fraction(datum.a(j, i) - datum.a(datum.tau(j), i)) for j in k_range}
        gamma[f"t{i}"] = Fraction(sign)
        if i < r:
            gamma[f"t{i + 1}"] = Fraction(-sign)
        return gamma

    def coweight(i: int, sign: int) -> Coweight:
        w = {f"k{i}": Fraction(1, 2), f"t{i}": Fraction(sign, 2)}
        if i < r:
            w[f"t{i + 1}"] = Fraction(-sign, 2)
        return w

    order = [(i, 1) for i in range(1, r)] + ([(r, 1)] if split else []) + [(i, -1) for i in range(1, r)]
    coweights = tuple(coweight(i, s) for i, s in order)
    roots = tuple(root(i, s) for i, s in order)
    if split:
        k_cartan = ((2,),) if r == 1 else block_cartan(cartan_matrix("A", r), cartan_matrix("A", r - 1))
    else:
        k_cartan = block_cartan(cartan_matrix("A", r - 1), cartan_matrix("A", r - 1))

    relations = _split_relations(alg) if split else _even_relations(alg)
    lemmas = _pair_lemmas(alg)
    return CaseStudy(
        tag,
        r,
        datum,
        varsigma,
        tuple(raising),
        tuple(lowering),
        cartan_part,
        tuple(ladder),
        coweights,
        roots,
        k_cartan,
        tuple(relations),
        tuple(lemmas),
        symbols=tuple(symbols),
    )


def _sl2_ladders(alg: _PairAlgebra, i: int) -> list[Relation]:
    e, f, k = alg.e(i), alg.f(i), alg.k(i)
    return [
        _expr_relation(
            f"e{i}f{i}^{n}",
            "e_i f_i^n = [n] f_i^(n-1) [k_i;-n+1] + f_i^n e_i",
            mul(e, f**n),
            mul(f ** (n - 1), kbracket(k, -n + 1)) * qint(n) + mul(f**n, e),
        )
        for n in range(1, LADDER_DEPTH + 1)
    ]


def _split_relations(alg: _PairAlgebra) -> list[Relation]:
    r = alg.r
    e, f, k = alg.e, alg.f, alg.k
    t, fp, ep = partial(_sym, "t"), partial(_sym, "fp"), partial(_sym, "ep")
    qi = ONE / q
    kr = k(r)
    rels: list[Relation] = []

    def rel(rel_id: str, anchor: str, lhs: Expr, rhs: Expr | None = None) -> None:
        rels.append(_expr_relation(rel_id, anchor, lhs, rhs))

    rel("[e_r,f_r]_q", "[e_r,f_r]_q = t_r + [k_r;0]", qcomm(e(r), f(r), 1), t(r) + kbracket(kr))
    rel("[t_r,f_r]_q^-1", "[t_r,f_r]_{q^-1} = -f_r k_r", qcomm(t(r), f(r), -1), -mul(f(r), kr))
    rel("[e_r,t_r]_q^-1", "[e_r,t_r]_{q^-1} = -k_r e_r", qcomm(e(r), t(r), -1), -mul(kr, e(r)))
    rel(
        "serre:f_r",
        "f_r^2 e_r - [2] f_r e_r f_r + e_r f_r^2 = -[2] f_r {k_r;-1}",
        mul(f(r), f(r), e(r)) - mul(f(r), e(r), f(r)) * qint(2) + mul(e(r), f(r), f(r)),
        mul(f(r), kcurly(kr, -1)) * (-qint(2)),
    )
    rel(
        "serre:e_r",
        "e_r^2 f_r - [2] e_r f_r e_r + f_r e_r^2 = -[2] {k_r;-1} e_r",
        mul(e(r), e(r), f(r)) - mul(e(r), f(r), e(r)) * qint(2) + mul(f(r), e(r), e(r)),
        mul(kcurly(kr, -1), e(r)) * (-qint(2)),
    )
    for n in range(1, LADDER_DEPTH + 1):
        rel(
            f"e_r f_r^{n}",
            "e_r f_r^n = [n] f_r^(n-1) (t_r + [k_r;-2n+2]) + q^n f_r^n e_r",
            mul(e(r), f(r) ** n),
            mul(f(r) ** (n - 1), t(r) + kbracket(kr, -2 * n + 2)) * qint(n) + mul(f(r) ** n, e(r)) * qpow(n),
        )
    for i in range(1, r):
        rels.extend(_sl2_ladders(alg, i))
    if r < 2:  # noqa: PLR2004
        return rels

    p = r - 1
    kp = k(p)
    f_pr = alg.T((p,), f(r))
    e_pr = alg.T((p,), e(r))
    rel("[e_r,f_p]", "[e_r,f_{r-1}] = 0", qcomm(e(r), f(p)))
    rel("[e_r,t_p]", "[e_r,t_{r-1}] = -(q-q^-1) f'_{r-1} e_{r-1,r}", qcomm(e(r), t(p)), mul(fp(p), e_pr) * (-QM))
    rel("[e_r,f'_p]_q^-1", "[e_r,f'_{r-1}]_{q^-1} = 0", qcomm(e(r), fp(p), -1))
    rel("[e_p,f_r]", "[e_{r-1},f_r] = 0", qcomm(e(p), f(r)))
    rel("[t_p,f_r]", "[t_{r-1},f_r] = -(q-q^-1) f_{r-1,r} k_r e_{r-1}", qcomm(t(p), f(r)), mul(f_pr, kr, e(p)) * (-QM))
    rel(
        "[e'_p,f_r]_q^-1",
        "[e'_{r-1},f_r]_{q^-1} = -(q-q^-1) f_r k_r e_{r-1}",
        qcomm(ep(p), f(r), -1),
        mul(f(r), kr, e(p)) * (-QM),
    )
    rel("[e_p,t_r]_q^-1", "[e_{r-1},t_r]_{q^-1} = e'_{r-1}", qcomm(e(p), t(r), -1), ep(p))
    rel(
        "[e'_p,t_r]_q",
        "[e'_{r-1},t_r]_q = e_{r-1} - q^-1(q-q^-1) f_r k_r [e_{r-1},e_r]_q",
        qcomm(ep(p), t(r), 1),
        e(p) - mul(f(r), kr, qcomm(e(p), e(r), 1)) * (qi * QM),
    )
    rel("[t_r,f_p]_q", "[t_r,f_{r-1}]_q = f'_{r-1}", qcomm(t(r), f(p), 1), fp(p))
    rel(
        "[t_r,f'_p]_q^-1",
        "[t_r,f'_{r-1}]_{q^-1} = f_{r-1} - q^-1(q-q^-1) f_{r-1,r} k_r e_r",
        qcomm(t(r), fp(p), -1),
        f(p) - mul(f_pr, kr, e(r)) * (qi * QM),
    )
    rel("[e_p,f_p]", "[e_{r-1},f_{r-1}] = [k_{r-1};0]", qcomm(e(p), f(p)), kbracket(kp))
    rel("[e_p,t_p]_q", "[e_{r-1},t_{r-1}]_q = -k_{r-1} e'_{r-1}", qcomm(e(p), t(p), 1), -mul(kp, ep(p)))
    rel(
        "[e_p,f'_p]_q^-1",
        "[e_{r-1},f'_{r-1}]_{q^-1} = t_{r-1} - k_{r-1} t_r",
        qcomm(e(p), fp(p), -1),
        t(p) - mul(kp, t(r)),
    )
    kp_inv = k_inverse(kp)
    rel(
        "[e'_p,f_p]_q",
        "[e'_{r-1},f_{r-1}]_q = t_{r-1} - k_{r-1}^-1 t_r",
        qcomm(ep(p), f(p), 1),
        t(p) - mul(kp_inv, t(r)),
    )
    rel("[t_p,f_p]_q^-1", "[t_{r-1},f_{r-1}]_{q^-1} = -f'_{r-1} k_{r-1}^-1", qcomm(t(p), f(p), -1), -mul(fp(p), kp_inv))
    rel(
        "[e'_p,f'_p]",
        "[e'_{r-1},f'_{r-1}] = [k_{r-1};0] + (q-q^-1)(f_r k_{r-1} k_r e_r - f_{r-1,r} k_r e_{r-1,r})",
        qcomm(ep(p), fp(p)),
        kbracket(kp) + (mul(f(r), kp, kr, e(r)) - mul(f_pr, kr, e_pr)) * QM,
    )
    rel(
        "[e'_p,t_p]_q^-1",
        "[e'_{r-1},t_{r-1}]_{q^-1} = -k_{r-1}^-1 e_{r-1}"
        " - (q-q^-1)(-f_r k_{r-1} k_r e_{r-1,r} + (q-q^-1) f_{r-1,r} k_r e_{r-1,r} e_{r-1})",
        qcomm(ep(p), t(p), -1),
        -mul(kp_inv, e(p)) - (-mul(f(r), kp, kr, e_pr) + mul(f_pr, kr, e_pr, e(p)) * QM) * QM,
    )
    rel(
        "[t_p,f'_p]_q",
        "[t_{r-1},f'_{r-1}]_q = -f_{r-1} k_{r-1} + (q-q^-1) f_{r-1,r} k_{r-1} k_r e_r",
        qcomm(t(p), fp(p), 1),
        -mul(f(p), kp) + mul(f_pr, kp, kr, e(r)) * QM,
    )
    rel(
        "[t_r,t_p]",
        "[t_r,t_{r-1}] = (q-q^-1)(f_{r-1} e_{r-1} - f'_{r-1} e'_{r-1} - q^-1(q-q^-1) f_{r-1,r} k_r e_r e_{r-1})",
        qcomm(t(r), t(p)),
        (mul(f(p), e(p)) - mul(fp(p), ep(p)) - mul(f_pr, kr, e(r), e(p)) * (qi * QM)) * QM,
    )
    return rels


def _even_relations(alg: _PairAlgebra) -> list[Relation]:
    r = alg.r
    e, f, k = alg.e, alg.f, alg.k
    tr = Gen("B", r)
    p = r - 1
    qi = ONE / q
    rels: list[Relation] = []

    def rel(rel_id: str, anchor: str, lhs: Expr, rhs: Expr | None = None) -> None:
        rels.append(_expr_relation(rel_id, anchor, lhs, rhs))

    for i in range(1, r):
        rel(f"k{i}t_r", "k_i t_r = t_r k_i", qcomm(k(i), tr))
        if i != p:
            rel(f"[f{i},t_r]", "[f_i,t_r] = 0", qcomm(f(i), tr))
            rel(f"[e{i},t_r]", "[e_i,t_r] = 0", qcomm(e(i), tr))
        for j in range(1, r):
            rhs = kbracket(k(i)) if i == j else None
            rel(f"[e{i},f{j}]", "e_i f_j - f_j e_i = δ_ij [k_i;0]", qcomm(e(i), f(j)), rhs)
        rels.extend(_sl2_ladders(alg, i))
    for name, x in (("f", f(p)), ("e", e(p))):
        rel(
            f"serre:{name}_p,t_r",
            "x^2 t_r - [2] x t_r x + t_r x^2 = 0 for x = f_{r-1}, e_{r-1}",
            mul(x, x, tr) - mul(x, tr, x) * qint(2) + mul(tr, x, x),
        )
        rel(
            f"serre:t_r,{name}_p",
            "t_r^2 x - [2] t_r x t_r + x t_r^2 = x for x = f_{r-1}, e_{r-1}",
            mul(tr, tr, x) - mul(tr, x, tr) * qint(2) + mul(x, tr, tr),
            x,
        )

    def parts(ws: CaseWorkspace) -> tuple[XPM, XPM, ExactMatrix, ExactMatrix]:
        b_r, l_r = ws.b(r), ws.ell(r)
        e_split = xpm(ws.evaluate(e(p)), b_r, 1, ws.action.bound, l_r)
        f_split = xpm(ws.evaluate(f(p)), b_r, 1, ws.action.bound, l_r)
        return e_split, f_split, l_r, ws.evaluate(k(p))

    def split_relation(rel_id: str, anchor: str, build: SplitBuild) -> None:
        rels.append(Relation(rel_id, anchor, lambda ws: build(*parts(ws))))

    split_relation("[e+,f+]", "[e_+,f_+] = 0", lambda es, fs, lm, km: _bracket(es.plus, fs.plus))
    split_relation("[e-,f-]", "[e_-,f_-] = 0", lambda es, fs, lm, km: _bracket(es.minus, fs.minus))
    split_relation(
        "[e+,f-]+[e-,f+]",
        "[e_+,f_-] + [e_-,f_+] = [k_{r-1};0]",
        lambda es, fs, lm, km: _bracket(es.plus, fs.minus) + _bracket(es.minus, fs.plus) - square(km),
    )
    split_relation(
        "[e+{l},e-{l}]",
        "[e_+{l;0},e_-{l;0}] = 0",
        lambda es, fs, lm, km: _bracket(es.plus @ curly(lm), es.minus @ curly(lm)),
    )
    split_relation(
        "[f+{l},f-{l}]",
        "[f_+{l;0},f_-{l;0}] = 0",
        lambda es, fs, lm, km: _bracket(fs.plus @ curly(lm), fs.minus @ curly(lm)),
    )
    t_p = _sym("t", p)
    rel(
        "t_p:nested",
        "t_{r-1} = [e_{r-1},[t_r,f_{r-1}]_q]_{q^-1} + k_{r-1} t_r",
        t_p,
        qcomm(e(p), qcomm(tr, f(p), 1), -1) + mul(k(p), tr),
    )

    def t_split(es: XPM, fs: XPM, lm: ExactMatrix, km: ExactMatrix, ws: CaseWorkspace) -> ExactMatrix:
        rhs = km @ ws.b(r) + _bracket(es.minus, fs.plus) @ lm.inverse() - _bracket(es.plus, fs.minus) @ lm
        return ws.symbol(f"t{p}") - rhs

    rels.append(
        Relation(
            "t_p:split",
            "t_{r-1} = k_{r-1} t_r + [e_-,f_+] l^-1 - [e_+,f_-] l",
            lambda ws: t_split(*parts(ws), ws),
        )
    )
    for sign in (1, -1):

        def cross(ws: CaseWorkspace, sign: int = sign) -> ExactMatrix:
            es, fs, lm, km = parts(ws)
            lhs = _bracket(es.plus, fs.minus) if sign > 0 else _bracket(es.minus, fs.plus)
            return lhs @ curly(lm) - square(km @ lm**sign) + ws.symbol(f"t{p}") * sign

        tag = "+-" if sign > 0 else "-+"
        anchor = "[e_±,f_∓]{l;0} = [k_{r-1} l^{±1};0] ∓ t_{r-1}"
        rels.append(Relation(f"[e{tag[0]},f{tag[1]}]{{l}}", anchor, cross))
    rel(
        "[t_r,t_p]",
        "[t_r,t_{r-1}] = q^-1(q-q^-1)(q f_{r-1} e_{r-1} + [t_r,f_{r-1}]_q [t_r,e_{r-1}]_q)",
        qcomm(tr, t_p),
        (mul(f(p), e(p)) * q + mul(qcomm(tr, f(p), 1), qcomm(tr, e(p), 1))) * (qi * QM),
    )
    return rels


def _pair_lemmas(alg: _PairAlgebra) -> list[Relation]:
    r = alg.r
    lemmas: list[Relation] = []
    for i in range(1, r):
        for j in range(1, r + 1):
            if j == i:
                continue
            image = alg.T((i,), alg.t_body(j))
            target = _sym("t", i if j == i + 1 else j)
            lemmas.append(
                _expr_relation(f"T{i}(t{j})", "T_i(t_j) = t_i if j = i+1, t_j otherwise", image, target)
            )
    for i in range(1, r + 1):
        for j in range(1, r):
            if j + 1 < i or i < j:
                lemmas.append(_expr_relation(f"[e{j},t{i}]", "[e_j,t_i] = 0", qcomm(alg.e(j), _sym("t", i))))
                lemmas.append(_expr_relation(f"[t{i},f{j}]", "[t_i,f_j] = 0", qcomm(_sym("t", i), alg.f(j))))
    for i in range(1, r + 1):
        for j in range(i + 1, r + 1):
            if alg.split:
                last = j - 1
                e_chain = alg.T(range(i, last), alg.e(last))
                ep_chain = alg.T(range(i, last), alg.e_prime_body(last))
            else:
                e_chain = alg.T(range(i, r - 1), alg.e(r - 1))
                ep_chain = qcomm(Gen("B", r), e_chain, 1)
            commutator = _expr(qcomm(_sym("t", j), _sym("t", i)))
            kernel_ops = (_expr(e_chain), _expr(ep_chain))
            lemmas.append(
                Relation(
                    f"[t{j},t{i}]|ker",
                    "[t_j,t_i] vanishes on the joint kernel of its ideal generators",
                    commutator,
                    kernel_ops,
                )
            )
            lemmas.append(
                Relation(f"[t{j},t{i}]/(q-1)", "[t_j,t_i] / (q-1) is regular at q = 1", commutator, test="regular")
            )
    return lemmas


# BI


def _bi_case(r: int) -> CaseStudy:
    _check_rank("BI-conj", r, 1)
    datum = satake("BI-1", r)
    varsigma = marked_preset(datum)
    top = 2 * r

    def b(k: int) -> Gen:
        return Gen("B", k)

    def t_body(i: int) -> Expr:
        body: Expr = qcomm(b(top), qcomm(b(top), b(top - 1), 2), -2)
        for m in range(r - 1, i - 1, -1):
            body = _bi_tau(m, datum)(body)
        return body

    symbols = tuple(Gen("t", 2 * i - 1, body=t_body(i)) for i in range(1, r + 1))

    def t_of(i: int) -> Recipe:
        return lambda ws: ws.symbol(f"t{2 * i - 1}")

    def primed(i: int, lab: str) -> Recipe:
        power = datum.di(2 * i)
        if lab.startswith("+"):
            return lambda ws: _bracket(ws.comp(2 * i, lab), ws.symbol(f"t{2 * i + 1}"), -power)
        return lambda ws: _bracket(ws.symbol(f"t{2 * i + 1}"), ws.comp(2 * i, lab), power)

    raising: list[Operator] = []
    lowering: list[Operator] = []
    for i in range(1, r):
        raising += [Operator(f"B{2 * i},{lab}", _comp(2 * i, lab)) for lab in ("++", "+-")]
        raising += [Operator(f"B'{2 * i},{lab}", primed(i, lab)) for lab in ("++", "+-")]
        lowering += [Operator(f"B{2 * i},{lab}", _comp(2 * i, lab)) for lab in ("-+", "--")]
        lowering += [Operator(f"B'{2 * i},{lab}", primed(i, lab)) for lab in ("-+", "--")]
    raising.append(Operator(f"B{top},+", _comp(top, "+")))
    lowering.append(Operator(f"B{top},-", _comp(top, "-")))
    cartan_part = [Operator(f"B{2 * i - 1}", _generator(2 * i - 1)) for i in range(1, r + 1)]
    cartan_part += [Operator(f"t{2 * i - 1}", t_of(i)) for i in range(1, r + 1)]
    ladder = tuple(
        LadderGenerator(f"B{2 * i - 1}", _generator(2 * i - 1), "l", f"b{2 * i - 1}", datum.di(2 * i - 1), 2 * i - 1)
        for i in range(1, r + 1)
    )
    return CaseStudy(
        "BI-conj",
        r,
        datum,
        varsigma,
        tuple(raising),
        tuple(lowering),
        tuple(cartan_part),
        ladder,
        (),
        (),
        None,
        tuple(_bi_relations(r, datum, varsigma)),
        symbols=symbols,
    )


def _bi_tau(i: int, datum: SatakeDatum) -> SubstitutionMapper:
    """The automorphism τ_i (1 <= i < r) of the BI iquantum group on B-expressions."""
    power = datum.di(2 * i)
    scale = -qpow(-power)

    def b(k: int) -> Gen:
        return Gen("B", k)

    images: dict[str, Expr] = {
        f"B{2 * i + 2}": qcomm(b(2 * i + 2), qcomm(b(2 * i + 1), b(2 * i), power), power) * scale,
        f"B{2 * i + 1}": b(2 * i - 1),
        f"B{2 * i - 1}": b(2 * i + 1),
        f"B{2 * i}": qcomm(b(2 * i - 1), qcomm(b(2 * i + 1), b(2 * i), power), power) * scale,
    }
    if i >= 2:  # noqa: PLR2004
        images[f"B{2 * i - 2}"] = qcomm(b(2 * i - 2), qcomm(b(2 * i - 1), b(2 * i), power), power) * scale
    return SubstitutionMapper(images)


def _bi_relations(r: int, datum: SatakeDatum, varsigma: dict[int, QScalar]) -> list[Relation]:
    top = 2 * r
    rels: list[Relation] = []

    def t_top(ws: CaseWorkspace) -> ExactMatrix:
        return ws.symbol(f"t{top - 1}")

    def curled(ws: CaseWorkspace, lab: str) -> ExactMatrix:
        return ws.comp(top, lab) @ curly(ws.ell(top - 1), 0, datum.di(top - 1))

    rels.append(
        Relation(
            f"[B{top},+{{l}},B{top},-{{l}}]",
            "[B_{2r,+}{l;0},B_{2r,-}{l;0}] = t_{2r-1}{l;0}",
            lambda ws: _bracket(curled(ws, "+"), curled(ws, "-"))
            - t_top(ws) @ curly(ws.ell(top - 1), 0, datum.di(top - 1)),
        )
    )
    rels.append(
        Relation(
            f"[t{top - 1},B{top}]",
            "[t_{2r-1},B_{2r}] = [2]_q^2 [B_{2r-1},B_{2r}]",
            lambda ws: _bracket(t_top(ws), ws.b(top)) - _bracket(ws.b(top - 1), ws.b(top)) * qint(2) ** 2,
        )
    )
    for sign, lab in ((1, "+"), (-1, "-")):
        rels.append(
            Relation(
                f"[t{top - 1},B{top},{lab}]",
                "[t_{2r-1},B_{2r,±}] = ±[2]_q B_{2r,±}{l_{2r-1};±1}_q",
                lambda ws, sign=sign, lab=lab: _bracket(t_top(ws), ws.comp(top, lab))
                - ws.comp(top, lab) @ curly(ws.ell(top - 1), sign, 1) * (qint(2) * sign),
            )
        )
    for i in range(1, r):
        tau = _bi_tau(i, datum)
        for k in datum.vertices:
            for m in datum.vertices:
                if k == m or not datum.a(k, m):
                    continue
                image = serre(k, m, tau(Gen("B", k)), tau(Gen("B", m)), datum) - tau(kolb_C(k, m, datum, varsigma))
                rels.append(_expr_relation(f"tau{i}:S({k},{m})", "τ_i preserves S_{k,l}(B_k,B_l) = C_{k,l}", image))
    for i in range(1, r - 1):
        left, right = _bi_tau(i, datum), _bi_tau(i + 1, datum)
        for k in datum.vertices:
            x = Gen("B", k)
            lhs = left(right(left(x)))
            rhs = right(left(right(x)))
            anchor = "τ_i τ_{i+1} τ_i = τ_{i+1} τ_i τ_{i+1}"
            rels.append(_expr_relation(f"braid({i},{i + 1}):B{k}", anchor, lhs, rhs))
    return rels


# registry

CASES: dict[str, Callable[[int], CaseStudy]] = {
    "AI-odd": lambda r: _ai_case("AI-odd", r),
    "AI-even": lambda r: _ai_case("AI-even", r),
    "AII": _aii_case,
    "AIII-split": lambda r: _pair_case("AIII-split", r),
    "AIII-even": lambda r: _pair_case("AIII-even", r),
    "BI-conj": _bi_case,
}


def build_case(tag: str, r: int) -> CaseStudy:
    """Build the case study ``tag`` at rank parameter ``r``.

    Args:
        tag: One of ``CASES``
        r: Rank parameter, at most ``MAX_RANK``

    Returns:
        CaseStudy: Operators, relation tables and the 𝔨 Cartan data
    """
    builder = CASES.get(tag)
    if builder is None:
        raise ConfigError(ERR_UNKNOWN_CASE.format(tag, ", ".join(CASES)))
    case = builder(r)
    logger.debug("Built case %s at r=%d: |X|=%d, %d relations", tag, r, len(case.raising), len(case.relations))
    return case


def case_module(
    case: CaseStudy | SatakeDatum,
    word: str | None = None,
    constituent: int | None = None,
) -> ModuleRep:
    """The U_q(g)-module a case (or a bare Satake datum) is studied on.

    Args:
        case: Case study, or a datum of the ambient type
        word: Tensor word, by default ``case.default_word`` ("V" for a datum)
        constituent: Index of an irreducible constituent of the tensor product

    Returns:
        ModuleRep: The module or the chosen constituent
    """
    if isinstance(case, CaseStudy):
        datum, default = case.datum, case.default_word
    else:
        datum, default = case, "V"
    module = module_from_word(word or default, datum.kind, datum.rank)
    if constituent is None:
        return module
    parts = constituents(module)
    if not 0 <= constituent < len(parts):
        raise ConfigError(ERR_CONSTITUENT.format(constituent, module.provenance, len(parts)))
    return parts[constituent]


def case_action(case: CaseStudy, module: ModuleRep, bound: int | None = None) -> CaseWorkspace:
    """Restrict ``module`` to the iquantum group of ``case``."""
    return case.workspace(iqg_action(module, case.datum, case.varsigma, bound=bound))


def _workspace(case: CaseStudy, a: IThetaAction | CaseWorkspace) -> CaseWorkspace:
    return a if isinstance(a, CaseWorkspace) else case.workspace(a)


# relation audits


def verify_case_relations(case: CaseStudy, a: IThetaAction | CaseWorkspace) -> list[Check]:
    """Relation table, ladder identities and the 𝔨 Cartan pairing of a case.

    Args:
        case: Case study
        a: Action (or workspace) of the case's iquantum group

    Returns:
        list[Check]: Lazily evaluated checks
    """
    ws = _workspace(case, a)
    checks = [rel.check(ws) for rel in case.relations]

    def commuting() -> bool:
        family = [g.recipe(ws) for g in case.ladder]
        return all(_bracket(x, y).is_zero for n, x in enumerate(family) for y in family[n + 1 :])

    checks.append(Check("ladder:commute", "the ladder family pairwise commutes", commuting))
    if case.k_cartan is not None:
        cartan = case.k_cartan

        def pairing() -> bool:
            return _pairing(case.coweights, case.roots) == tuple(tuple(Fraction(x) for x in row) for row in cartan)

        checks.append(Check("pairing", "(<w_i, γ_j>) is the Cartan matrix of 𝔨", pairing))
    return checks


def commuting_lemmas(case: CaseStudy, a: IThetaAction | CaseWorkspace) -> list[Check]:
    """Symmetry images of t_j, vanishing commutators and the t_j, t_i commutator."""
    ws = _workspace(case, a)
    return [lemma.check(ws) for lemma in case.lemmas]


# highest weight records


def _eigenvalue(m: ExactMatrix, v: ExactMatrix) -> QScalar | None:
    image = m @ v
    for (row, _), value in v.entries().items():
        candidate = image[row, 0] / value
        return candidate if image == v * candidate else None
    return None


def _candidates(gen: LadderGenerator, bound: int) -> list[QScalar]:
    if gen.kind == "k":
        top = 2 * gen.d * bound
        return [sign * qpow(n) for n in sorted(range(-top, top + 1), key=abs) for sign in (ONE, -ONE)]
    return list(ladder_candidates(2 * bound, gen.d))


def highest_weight_records(case: CaseStudy, a: IThetaAction | CaseWorkspace) -> list[HWRecord]:
    """Highest weight vectors of a module: the joint kernel of 𝒳, resolved by the ladder family.

    The kernel is first cut down to its largest subspace stable under the
    ladder family, then split into joint eigenvectors.

    Args:
        case: Case study
        a: Action (or workspace) on the module

    Returns:
        list[HWRecord]: One unclassified record per joint eigenvector
    """
    ws = _workspace(case, a)
    if ws.dim == 0:
        return []
    basis = joint_kernel([op.recipe(ws) for op in case.raising], ws.dim)
    family = [g.recipe(ws) for g in case.ladder]
    basis = stable_subspace(basis, family)
    if not basis.cols:
        logger.info("%s: no highest weight vectors in %s", case.tag, ws.action.label)
        return []
    restricted = [coordinates(basis, m @ basis) for m in family]
    scales = [g.scale(ws) for g in case.ladder]
    candidate_sets = [
        [c * s for c in _candidates(g, ws.action.bound)] for g, s in zip(case.ladder, scales, strict=True)
    ]
    resolution = simultaneous_eigenbasis(restricted, candidate_sets, basis.cols)
    if not resolution.complete:
        found = sum(b.dim for b in resolution.blocks)
        raise ContractError(ERR_UNRESOLVED.format(ws.action.label, found, basis.cols))
    w_mats = [(op.name, op.recipe(ws)) for op in case.cartan_part]
    records = []
    for block in resolution.blocks:
        values = {g.name: v / s for g, v, s in zip(case.ladder, block.values, scales, strict=True)}
        for column in (basis @ block.basis).columns():
            w_eigs = {name: _eigenvalue(m, column) for name, m in w_mats}
            records.append(HWRecord(column, w_eigs, dict(values)))
    logger.info("%s: %d highest weight vectors in %s", case.tag, len(records), ws.action.label)
    return records


def _read(gen: LadderGenerator, value: QScalar) -> tuple[int, Fraction] | None:
    if gen.kind == "l":
        try:
            value = l_value(value, gen.d)
        except ValueError:
            return None
    found = monomial_power(value)
    if found is None:
        return None
    sign, exponent = found
    return sign, exponent / gen.d


def classify(record: HWRecord, case: CaseStudy) -> HWRecord:
    """Read the highest weight of a record and decide whether it is dominant integral.

    Args:
        record: Record from ``highest_weight_records``
        case: Case study with a 𝔨 Cartan matrix

    Returns:
        HWRecord: Copy with coordinates, labels, verdict and 𝔨-dimension filled in
    """
    if case.k_cartan is None:
        raise UnsupportedCaseError(ERR_NO_CLASSIFICATION.format(case.tag))
    coords: dict[str, Fraction] = {}
    signs: dict[str, int] = {}
    for gen in case.ladder:
        value = record.family.get(gen.name)
        found = _read(gen, value) if value is not None else None
        if found is None:
            shown = format_scalar(value) if value is not None else "missing"
            return replace(record, verdict=FAIL, reason=f"{gen.name} eigenvalue {shown} is not of ladder form")
        signs[gen.coord], coords[gen.coord] = found
    labels = tuple(sum((w.get(c, Fraction(0)) * x for c, x in coords.items()), Fraction(0)) for w in case.coweights)
    result = replace(record, coords=coords, signs=signs, labels=labels)
    if any(sign < 0 for sign in signs.values()):
        return replace(result, verdict=FAIL, reason="negative sign in the ladder eigenvalues")
    if not is_dominant(labels):
        return replace(result, verdict=FAIL, reason="labels are not dominant integral")
    return replace(result, verdict=PASS, k_dim=kdim_oracle(case, labels))


def kdim_oracle(case: CaseStudy, labels: Sequence[int | Fraction]) -> int:
    """Dimension of the irreducible 𝔨-module with the given labels (Weyl's formula)."""
    if case.k_cartan is None:
        raise UnsupportedCaseError(ERR_NO_CLASSIFICATION.format(case.tag))
    return weyl_dimension(case.k_cartan, [int(x) for x in labels])


# classical oracle


def classical_labels(case: CaseStudy, a: IThetaAction | CaseWorkspace) -> Counter[Labels]:
    """Multiset of 𝔨-weights (as labels) of the module at q = 1.

    Args:
        case: Case study with coweights
        a: Action (or workspace) on the module

    Returns:
        Counter[Labels]: Labels <w_i, λ> of every weight with multiplicity
    """
    ws = _workspace(case, a)
    identity = ExactMatrix.identity(ws.dim)
    mats = []
    for gen in case.ladder:
        m = gen.recipe(ws)
        m = (m - identity) * (ONE / (qpow(gen.d) - ONE)) if gen.kind == "k" else m * (ONE / gen.scale(ws))
        mats.append(limit_matrix(gen.name, m))
    top = 4 * ws.action.bound
    candidates = [const(Fraction(n, 2)) for n in sorted(range(-top, top + 1), key=abs)]
    resolution = simultaneous_eigenbasis(mats, [candidates] * len(mats), ws.dim)
    if not resolution.complete:
        found = sum(b.dim for b in resolution.blocks)
        raise ContractError(ERR_UNRESOLVED.format(f"{ws.action.label} at q = 1", found, ws.dim))
    weights: Counter[Labels] = Counter()
    for block in resolution.blocks:
        coords = {g.coord: limit_at_one(v).value or Fraction(0) for g, v in zip(case.ladder, block.values, strict=True)}
        labels = tuple(sum((w.get(c, Fraction(0)) * x for c, x in coords.items()), Fraction(0)) for w in case.coweights)
        weights[labels] += block.dim
    return weights


def branching_oracle(cartan: CartanMatrix, weights: Counter[Labels]) -> Counter[tuple[int, ...]]:
    """Peel irreducible characters off a weight multiset, highest first.

    Args:
        cartan: Cartan matrix of 𝔨
        weights: Weight labels with multiplicity

    Returns:
        Counter[tuple[int, ...]]: Highest weights with multiplicity
    """
    n = len(cartan)
    if any(Fraction(x).denominator != 1 for w in weights for x in w):
        raise ContractError(ERR_ORACLE.format("module", "non-integral labels"))
    remaining: Counter[tuple[int, ...]] = Counter({tuple(int(x) for x in w): c for w, c in weights.items() if c})
    result: Counter[tuple[int, ...]] = Counter()
    while remaining:

        def maximal(mu: tuple[int, ...]) -> bool:
            return all(tuple(mu[i] + cartan[i][j] for i in range(n)) not in remaining for j in range(n))

        top = next((mu for mu in sorted(remaining, reverse=True) if maximal(mu)), None)
        if top is None or not is_dominant(top):
            raise ContractError(ERR_ORACLE.format("module", f"no dominant maximal weight among {sorted(remaining)}"))
        mult = remaining[top]
        for weight, count in character(cartan, top).items():
            remaining[weight] -= count * mult
            if remaining[weight] < 0:
                raise ContractError(ERR_ORACLE.format("module", f"weight {weight} overdrawn"))
        remaining = +remaining
        result[top] += mult
    return result


def branch_report(
    case: CaseStudy,
    module: ModuleRep,
    bound: int | None = None,
    workers: int = 1,
    quiet: bool = False,
) -> Report:
    """Classify the highest weight vectors of a module and check complete reducibility.

    Args:
        case: Case study with a 𝔨 Cartan matrix
        module: U_q(g)-module of the case's type
        bound: Eigenvalue search bound
        workers: Worker threads for the checks
        quiet: Disable progress bars

    Returns:
        Report: Records, the dimension count and the branching oracle comparison
    """
    cartan = case.k_cartan
    if cartan is None:
        raise UnsupportedCaseError(ERR_NO_CLASSIFICATION.format(case.tag))
    ws = case_action(case, module, bound)
    records = [classify(rec, case) for rec in highest_weight_records(case, ws)]

    def verdicts() -> bool:
        return all(rec.verdict == PASS for rec in records)

    def dimensions() -> bool:
        return sum(rec.k_dim or 0 for rec in records) == ws.dim

    def oracle() -> bool:
        expected = branching_oracle(cartan, classical_labels(case, ws))
        found = Counter(tuple(int(x) for x in rec.labels or ()) for rec in records)
        return expected == found

    checks = [
        Check("records:verdicts", "every highest weight is dominant integral", verdicts),
        Check("records:dimension", "sum of 𝔨-dimensions equals dim M", dimensions),
        Check("records:oracle", "highest weights match the branching at q = 1", oracle),
    ]
    report = Report(
        f"branch_{case.tag}_r{case.r}_{_slug(module.provenance)}",
        "branch",
        {**case.manifest(), **ws.action.manifest()},
        records=[rec.to_dict() for rec in records],
    )
    report.extend(run_checks(checks, f"branch {case.tag}", workers, quiet))
    report.notes.append(f"{len(records)} highest weight vectors; dim M = {ws.dim}")
    return report


def _slug(text: str) -> str:
    return "".join(ch if ch.isalnum() else "_" for ch in text).strip("_") or "module"


# duality


def _dominant(labels: Sequence[int], cartan: CartanMatrix) -> tuple[int, ...]:
    v = list(labels)
    while True:
        i = next((k for k, x in enumerate(v) if x < 0), None)
        if i is None:
            return tuple(v)
        shift = v[i]
        v = [v[j] - shift * cartan[j][i] for j in range(len(v))]


def duality_audit(case: CaseStudy, a: IThetaAction | CaseWorkspace) -> list[Check]:
    """Highest weights of the dual module are the dominant conjugates of -μ.

    Args:
        case: Case study with a 𝔨 Cartan matrix
        a: Action (or workspace) on the module

    Returns:
        list[Check]: Verdicts on the dual and the multiset comparison
    """
    ws = _workspace(case, a)
    if case.k_cartan is None:
        raise UnsupportedCaseError(ERR_NO_CLASSIFICATION.format(case.tag))
    cartan = case.k_cartan
    state: dict[str, list[HWRecord]] = {}

    def records() -> tuple[list[HWRecord], list[HWRecord]]:
        if not state:
            state["module"] = [classify(rec, case) for rec in highest_weight_records(case, ws)]
            dual = case.workspace(dual_module(ws.action))
            state["dual"] = [classify(rec, case) for rec in highest_weight_records(case, dual)]
        return state["module"], state["dual"]

    def dual_verdicts() -> bool:
        return all(rec.verdict == PASS for rec in records()[1])

    def dual_labels() -> bool:
        module, dual = records()
        expected = Counter(_dominant([-int(x) for x in rec.labels or ()], cartan) for rec in module)
        found = Counter(tuple(int(x) for x in rec.labels or ()) for rec in dual)
        return expected == found

    return [
        Check("dual:verdicts", "highest weights of M* are dominant integral", dual_verdicts),
        Check("dual:labels", "highest weights of M* are the dominant conjugates of -μ", dual_labels),
    ]


# BI


def bi_conjecture_check(
    r: int,
    word: str | None = None,
    bound: int | None = None,
    workers: int = 1,
    quiet: bool = False,
) -> Report:
    """The BI relation table and the joint kernel of 𝒳 on a type B module.

    Records carry the ladder eigenvalues with status "unclassified": no
    classification theorem is available for this case.

    Args:
        r: Rank parameter
        word: Tensor word of the module, by default the case's
        bound: Eigenvalue search bound
        workers: Worker threads for the checks
        quiet: Disable progress bars

    Returns:
        Report: Relation checks, records and kernel dimensions as notes
    """
    case = build_case("BI-conj", r)
    module = case_module(case, word)
    ws = case_action(case, module, bound)
    manifest = {**case.manifest(), **ws.action.manifest()}
    report = Report(f"bi_conj_r{r}_{_slug(module.provenance)}", "bi-conjecture", manifest)
    report.extend(run_checks(verify_case_relations(case, ws), "BI relations", workers, quiet))
    kernel_dim = joint_kernel([op.recipe(ws) for op in case.raising], ws.dim).cols
    records = highest_weight_records(case, ws)
    report.records = [rec.to_dict(key="status") for rec in records]
    report.notes.append(f"joint kernel of X has dimension {kernel_dim}; {len(records)} joint eigenvectors")
    report.notes.append("T^i symmetries are unavailable at this varsigma; τ_i are checked directly")
    return report


conjecture46_check = bi_conjecture_check
