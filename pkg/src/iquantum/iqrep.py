"""The iquantum group acting on concrete modules.

An ``IThetaAction`` carries the matrices of B_i (and of E_i, F_i on black
vertices) on a module together with a source for K_alpha. On top of it this
module builds the presentation checks, the coideal identity, the spectral
operators l_j, the (X, W, q^a) splitting and its local diagram cases, the
weight decomposition for the commuting family and dual modules.
"""

from __future__ import annotations

import logging
import threading
from collections import Counter
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from iquantum.cartan import SatakeDatum, TWeight, combine, theta_lattice
from iquantum.freealg import (
    E,
    EvaluationMapper,
    Expr,
    F,
    Gen,
    K,
    KElem,
    Params,
    Weight,
    b_body,
    check_varsigma,
    iT_word,
    k_generator,
    kbracket,
    kolb_C,
    serre,
    simath_images,
)
from iquantum.linalg import (
    ExactMatrix,
    coordinates,
    kernel,
    simultaneous_eigenbasis,
    spectral_function,
    spectral_resolve,
    vstack,
)
from iquantum.scalar import ONE, ZERO, LimitValue, QScalar, as_scalar, limit_at_one, qint, qpow, scalar_sqrt
from iquantum.urep import ModuleRep, tensor
from iquantum.utils.formatting import format_scalar
from iquantum.utils.shared import Check, ConfigError, ContractError, UnsupportedCaseError

logger = logging.getLogger(__name__)

# Error messages
ERR_TYPE_MISMATCH = "Datum {} needs a module of type {}{}, got {}{}"
ERR_NOT_MARKED = "Vertex {} is not in I_otimes of {}"
ERR_NO_SCALE = "No square root of q_j varsigma_j = {} in Q(q^(1/2)) for vertex {}"
ERR_NOT_CLASSICAL = "Module is not a classical weight module over Q(q^(1/2)): {} of {} dimensions resolved for {}"
ERR_GENERAL_ONE = "[W,[W,X]_q^a]_q^-a != X: {}"
ERR_MARKED_NORMALISATION = "Case decomposition needs varsigma_{} = q_{}^-1, got {}"
ERR_LOCAL_CASE = "Local diagram at vertex {} with marked neighbours {} is not covered"
ERR_BLACK_VERTEX = "Vertex {} is black; B_{} = F_{} has no weight splitting"
ERR_NO_INTERTWINER = "No invertible intertwiner between {} and {}"
ERR_DIM_MISMATCH = "Modules have dimensions {} and {}"

INTERTWINER_TRIES = 8

Part = tuple[str, ExactMatrix, dict[int, int | Fraction]]


def marked_preset(datum: SatakeDatum) -> dict[int, QScalar]:
    """varsigma_i = q_i^-1 on I_∘, the normalisation of the local splittings."""
    return {i: qpow(-datum.di(i)) for i in datum.white}


def uniform_preset(datum: SatakeDatum, value: QScalar) -> dict[int, QScalar]:
    """The same varsigma on every white vertex."""
    return dict.fromkeys(datum.white, value)


def braid_preset(datum: SatakeDatum) -> dict[int, QScalar]:
    """varsigma_i = -q_i^-2, so that sqrt(-q_i^2 varsigma_i) = 1 in the symmetry formulas."""
    return {i: -qpow(-2 * datum.di(i)) for i in datum.white}


def qnumber(m: int | Fraction, d: int | Fraction = 1) -> QScalar:
    """[m]_{q^d} for integral or half-integral m."""
    return (qpow(d * m) - qpow(-d * m)) / (qpow(d) - qpow(-d))


def _half_steps(bound: int) -> list[Fraction]:
    values = {Fraction(k, 2) for k in range(-2 * bound, 2 * bound + 1)}
    return sorted(values, key=lambda m: (abs(m), m.denominator, -m))


def ladder_candidates(bound: int, d: int | Fraction = 1, scale: QScalar = ONE) -> dict[QScalar, Fraction]:
    """Candidate eigenvalues scale * [m]_{q^d}, mapped back to m.

    Integers come before half-integers of the same size.

    Args:
        bound: Largest |m|
        d: Exponent of the base q^d
        scale: Common factor, sqrt(q_j varsigma_j) for B_j

    Returns:
        dict[QScalar, Fraction]: Eigenvalue -> m, in search order
    """
    return {scale * qnumber(m, d): m for m in _half_steps(bound)}


def l_value(a: QScalar, d: int | Fraction = 1) -> QScalar:
    """Root l of a = [l;0]_{q^d} whose value at q = 1 is positive."""
    gap = qpow(d) - qpow(-d)
    return (gap * a + scalar_sqrt(gap * gap * a * a + 4)) / 2


def lambda_pm(c: QScalar) -> tuple[QScalar, QScalar]:
    """The pair ([2]c ± sqrt((q-q^-1)^2 c^2 + 4)) / 2 of B-eigenvalues on a module tensored with V."""
    gap = qpow(1) - qpow(-1)
    root = scalar_sqrt(gap * gap * c * c + 4)
    return (qint(2) * c + root) / 2, (qint(2) * c - root) / 2


def predicted_b_spectrum(n: int) -> Counter[QScalar]:
    """Multiset of B-eigenvalues on V^{(x)n} for sl_2 with varsigma = q^-1.

    Starts from the trivial module, whose only eigenvalue is 0, and applies
    ``lambda_pm`` once per tensor factor.
    """
    spectrum: Counter[QScalar] = Counter({ZERO: 1})
    for _ in range(n):
        step: Counter[QScalar] = Counter()
        for value, mult in spectrum.items():
            for image in lambda_pm(value):
                step[image] += mult
        spectrum = step
    return spectrum


@dataclass(eq=False)
class IThetaAction:
    """Matrices of the iquantum group generators on one module.

    Attributes:
        datum: Satake datum
        varsigma: Parameters on I_∘
        dim: Dimension of the module
        gens: "B{i}" for every vertex, plus "E{i}"/"F{i}" for black vertices
        k_source: Matrix of K_alpha for the alpha that occur
        kappa: Second parameter, empty for the standard iquantum group
        label: Provenance for reports
        base: The U-module this action was restricted from, if any
        bound: Largest |m| tried for [m]-type eigenvalues
    """

    datum: SatakeDatum
    varsigma: dict[int, QScalar]
    dim: int
    gens: dict[str, ExactMatrix]
    k_source: Callable[[Weight], ExactMatrix]
    kappa: dict[int, QScalar] = field(default_factory=dict)
    label: str = ""
    base: ModuleRep | None = None
    bound: int = 4
    _ell: dict[int, ExactMatrix] = field(default_factory=dict, init=False, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False)

    def evaluate(self, expr: Expr) -> ExactMatrix:
        """Matrix of an expression in B, k and black E/F generators."""
        return EvaluationMapper(self.gens, self.k_source, self.dim)(expr)

    def b(self, i: int) -> ExactMatrix:
        """Matrix of B_i."""
        return self.gens[f"B{i}"]

    def k(self, i: int) -> ExactMatrix:
        """Matrix of k_i."""
        return self.k_source(k_generator(i, self.datum).alpha)

    def scale(self, j: int) -> QScalar:
        """sqrt(q_j varsigma_j), the factor in front of [m]_{q_j} in the B_j-spectrum."""
        value = qpow(self.datum.di(j)) * self.varsigma[j]
        try:
            return scalar_sqrt(value)
        except ValueError as e:
            raise ContractError(ERR_NO_SCALE.format(format_scalar(value), j)) from e

    def ell(self, j: int) -> ExactMatrix:
        """l_j with B_j = sqrt(q_j varsigma_j) [l_j;0]_{q_j}, computed once per vertex."""
        with self._lock:
            cached = self._ell.get(j)
            if cached is None:
                cached = ell(self, j)
                self._ell[j] = cached
        return cached

    def restrict(self, basis: ExactMatrix, label: str | None = None) -> IThetaAction:
        """The action on an invariant subspace spanned by the columns of ``basis``.

        Args:
            basis: Independent columns spanning a submodule
            label: Provenance of the submodule

        Returns:
            IThetaAction: Action in the coordinates of ``basis``
        """
        gens = {name: coordinates(basis, m @ basis) for name, m in self.gens.items()}
        source = self.k_source

        def k_source(alpha: Weight) -> ExactMatrix:
            return coordinates(basis, source(alpha) @ basis)

        return IThetaAction(
            self.datum,
            dict(self.varsigma),
            basis.cols,
            gens,
            k_source,
            dict(self.kappa),
            label if label is not None else self.label,
            None,
            self.bound,
        )

    def manifest(self) -> dict[str, object]:
        """Datum, parameters and dimension for reports."""
        return {
            "datum": self.datum.describe(),
            "varsigma": {i: format_scalar(v) for i, v in sorted(self.varsigma.items())},
            "kappa": {i: format_scalar(v) for i, v in sorted(self.kappa.items())},
            "module": self.label,
            "dim": self.dim,
        }


def default_bound(m: ModuleRep) -> int:
    """Largest sum of |labels| over the weights of M, plus 2."""
    return max((sum(abs(x) for x in w) for w in m.weights), default=0) + 2


def iqg_action(
    m: ModuleRep,
    datum: SatakeDatum,
    varsigma: Params,
    kappa: Params | None = None,
    bound: int | None = None,
) -> IThetaAction:
    """Restrict a U_q(g)-module to the iquantum group of ``datum``.

    Args:
        m: Module of the ambient type
        datum: Satake datum of the same type and rank
        varsigma: Parameters on I_∘
        kappa: Optional second parameter
        bound: Eigenvalue search bound, by default from the weights of M

    Returns:
        IThetaAction: B_i and black E_i, F_i as matrices on M
    """
    if (m.kind, m.rank) != (datum.kind, datum.rank):
        raise ContractError(ERR_TYPE_MISMATCH.format(datum.family, datum.kind, datum.rank, m.kind, m.rank))
    sigma = {i: as_scalar(v) for i, v in varsigma.items()}
    try:
        check_varsigma(datum, sigma)
    except ContractError as e:
        raise ConfigError(str(e)) from e
    kappa_values = {i: as_scalar(v) for i, v in (kappa or {}).items() if v}
    gens: dict[str, ExactMatrix] = {}
    for i in datum.vertices:
        gens[f"B{i}"] = m.evaluate(b_body(i, datum, sigma, kappa_values))
        if i in datum.black:
            gens[f"E{i}"] = m.e[i - 1]
            gens[f"F{i}"] = m.f[i - 1]
    logger.debug("Restricted %s (dim %d) to %s", m.provenance, m.dim, datum.family)
    return IThetaAction(
        datum,
        sigma,
        m.dim,
        gens,
        m.k_matrix,
        kappa_values,
        m.provenance,
        m,
        bound if bound is not None else default_bound(m),
    )


# spectral operators


def ell_operator(w: ExactMatrix, d: int | Fraction, bound: int, scale: QScalar = ONE) -> ExactMatrix:
    """The operator l with w = scale * [l;0]_{q^d}, by spectral calculus.

    Args:
        w: Semisimple operator with eigenvalues scale * [m]_{q^d}
        d: Exponent of the base q^d
        bound: Largest |m| tried
        scale: Common factor of the eigenvalues

    Returns:
        ExactMatrix: l, acting by q^{dm} on the scale * [m]_{q^d}-eigenspace
    """
    table = ladder_candidates(bound, d, scale)
    resolution = spectral_resolve(w, table)
    if not resolution.complete:
        found = sum(b.dim for b in resolution.blocks)
        raise ContractError(ERR_NOT_CLASSICAL.format(found, resolution.dim, "l"))
    return spectral_function(resolution, lambda value: qpow(d * table[value]))


def ell(a: IThetaAction, j: int) -> ExactMatrix:
    """l_j on the module of ``a``; use ``IThetaAction.ell`` for the cached value.

    Args:
        a: The action
        j: Vertex in I_⊗

    Returns:
        ExactMatrix: l_j
    """
    if j not in a.datum.marked:
        raise ContractError(ERR_NOT_MARKED.format(j, a.datum.family))
    return ell_operator(a.b(j), a.datum.di(j), a.bound, a.scale(j))


def curly(l_matrix: ExactMatrix, n: int | Fraction = 0, d: int | Fraction = 1) -> ExactMatrix:
    """{l;n}_{q^d} = q^{dn} l + q^{-dn} l^-1."""
    return l_matrix * qpow(d * n) + l_matrix.inverse() * qpow(-d * n)


def square(l_matrix: ExactMatrix, n: int | Fraction = 0, d: int | Fraction = 1) -> ExactMatrix:
    """[l;n]_{q^d} = (q^{dn} l - q^{-dn} l^-1) / (q^d - q^-d)."""
    body = l_matrix * qpow(d * n) - l_matrix.inverse() * qpow(-d * n)
    return body * (ONE / (qpow(d) - qpow(-d)))


def ell_checks(a: IThetaAction, depth: int = 2) -> list[Check]:
    """Identities satisfied by each l_j.

    B_j = sqrt(q_j varsigma_j)[l_j;0], the closed form of l_j^-1 and
    invertibility of {l_j;n} for |n| <= depth.
    """
    checks: list[Check] = []
    for j in sorted(a.datum.marked):
        d = a.datum.di(j)

        def b_form(j: int = j, d: int = d) -> ExactMatrix:
            return square(a.ell(j), 0, d) * a.scale(j) - a.b(j)

        def inverse_form(j: int = j, d: int = d) -> ExactMatrix:
            # l^-1 = (-(q_j - q_j^-1) B_j / scale + (l + l^-1)) / 2
            lj = a.ell(j)
            gap = qpow(d) - qpow(-d)
            rhs = (a.b(j) * (-gap / a.scale(j)) + curly(lj, 0, d)) * (ONE / 2)
            return lj.inverse() - rhs

        def invertible(j: int = j, d: int = d) -> bool:
            lj = a.ell(j)
            return all(curly(lj, n, d).rank() == a.dim for n in range(-depth, depth + 1))

        checks.append(Check(f"B{j}=[l{j};0]", "B_j = [l_j;0]_{q_j}", b_form))
        checks.append(Check(f"l{j}^-1", "l_j^-1 = (-(q_j-q_j^-1)B_j + sqrt(...))/2", inverse_form))
        checks.append(Check(f"{{l{j};n}} invertible", "{l_j;n}_{q_j} is invertible", invertible))
    return checks


@dataclass(frozen=True)
class XPM:
    """The splitting X = X_+ + X_- along the spectrum of W.

    Attributes:
        x: The operator X
        w: The operator W
        d: Exponent a of the base q^a
        plus: X_+
        minus: X_-
        ell: l(W)
        wx: [W,X]_{q^a}
    """

    x: ExactMatrix
    w: ExactMatrix
    d: int | Fraction
    plus: ExactMatrix
    minus: ExactMatrix
    ell: ExactMatrix
    wx: ExactMatrix

    def checks(self, tag: str) -> list[Check]:
        """The identities every splitting satisfies, labelled by ``tag``."""
        d, lm = self.d, self.ell
        c0 = curly(lm, 0, d)

        def total() -> ExactMatrix:
            return self.plus + self.minus - self.x

        def difference() -> ExactMatrix:
            return self.plus @ lm.inverse() - self.minus @ lm - self.wx

        def shift(sign: int) -> Callable[[], ExactMatrix]:
            part = self.plus if sign > 0 else self.minus
            return lambda: lm @ part - part @ lm * qpow(sign * d)

        def general2() -> ExactMatrix:
            lhs = (self.plus @ c0) @ (self.minus @ c0) - (self.minus @ c0) @ (self.plus @ c0)
            inner = self.wx @ self.x - self.x @ self.wx * qpow(-d)
            return lhs - inner @ c0

        def general3() -> ExactMatrix:
            return square(lm, 0, d) - self.w

        return [
            Check(f"{tag}:X++X-", "X_+ + X_- = X", total),
            Check(f"{tag}:X+l^-1-X-l", "X_+l^-1 - X_-l = [W,X]_{q^a}", difference),
            Check(f"{tag}:lX+", "lX_+ = q^a X_+ l", shift(1)),
            Check(f"{tag}:lX-", "lX_- = q^-a X_- l", shift(-1)),
            Check(f"{tag}:general2", "[X_+{l;0},X_-{l;0}] = [[W,X]_{q^a},X]_{q^-a}{l;0}", general2),
            Check(f"{tag}:general3", "W = [l;0]_{q^a}", general3),
        ]


def xpm(
    x: ExactMatrix,
    w: ExactMatrix,
    d: int | Fraction,
    bound: int,
    ell_matrix: ExactMatrix | None = None,
) -> XPM:
    """Split X into q^{±a}-eigencomponents for conjugation by l(W).

    Args:
        x: Operator X with [W,[W,X]_{q^a}]_{q^-a} = X
        w: Semisimple operator W with eigenvalues [m]_{q^a}
        d: The exponent a
        bound: Largest |m| tried in the spectrum of W
        ell_matrix: l(W) when already known

    Returns:
        XPM: X_+, X_- and the data they were built from
    """
    wx = w @ x - x @ w * qpow(d)
    residual = w @ wx - wx @ w * qpow(-d) - x
    if not residual.is_zero:
        raise ContractError(ERR_GENERAL_ONE.format(residual.witness()))
    lm = ell_matrix if ell_matrix is not None else ell_operator(w, d, bound)
    inverse = lm.inverse()
    c0_inv = curly(lm, 0, d).inverse()
    plus = (x @ lm + wx) @ c0_inv
    minus = (x @ inverse - wx) @ c0_inv
    return XPM(x, w, d, plus, minus, lm, wx)


# local splittings of B_i


@dataclass(frozen=True)
class WeightComponent:
    """One weight component of B_i.

    Attributes:
        label: Sign string such as "+-" or "0+"
        matrix: The component
        weight: (𝔱')*-weight
        shifts: j -> c with l_j C = q^c C l_j
    """

    label: str
    matrix: ExactMatrix
    weight: TWeight
    shifts: dict[int, int | Fraction]


@dataclass
class CaseDecomposition:
    """Weight decomposition of B_i with the identities that certify it."""

    vertex: int
    case: str
    neighbours: tuple[int, ...]
    components: list[WeightComponent]
    checks: list[Check]

    def records(self) -> list[dict[str, object]]:
        """Component table for reports."""
        return [
            {
                "vertex": self.vertex,
                "case": self.case,
                "component": f"B{self.vertex},{c.label}" if c.label else f"B{self.vertex}",
                "weight": {k: str(v) for k, v in c.weight.items() if v},
                "nnz": c.matrix.nnz,
            }
            for c in self.components
        ]


def _local_case(datum: SatakeDatum, i: int) -> tuple[str, tuple[int, ...]]:
    if i in datum.marked:
        return "A1", ()
    neighbours = tuple(j for j in sorted(datum.marked) if j != i and datum.a(j, i))
    if not neighbours:
        return "A1", ()
    if len(neighbours) == 1:
        j = neighbours[0]
        if datum.a(j, i) != -1:
            raise UnsupportedCaseError(ERR_LOCAL_CASE.format(i, neighbours))
        name = {-1: "A2", -2: "B2", -3: "G2"}.get(datum.a(i, j))
        if name is None:
            raise UnsupportedCaseError(ERR_LOCAL_CASE.format(i, neighbours))
        return name, neighbours
    if len(neighbours) == 2:  # noqa: PLR2004
        entries = sorted(datum.a(j, i) for j in neighbours)
        if entries == [-1, -1]:
            return "A3", neighbours
        if entries == [-2, -1]:
            j2 = next(j for j in neighbours if datum.a(j, i) == -2)  # noqa: PLR2004
            j1 = next(j for j in neighbours if j != j2)
            return "B3", (j1, j2)
    if len(neighbours) == 3 and all(datum.a(j, i) == -1 for j in neighbours):  # noqa: PLR2004
        return "D4", neighbours
    raise UnsupportedCaseError(ERR_LOCAL_CASE.format(i, neighbours))


def case_decompose(a: IThetaAction, i: int) -> CaseDecomposition:
    """Split B_i into weight components for the commuting family l_j, j ∈ I_⊗.

    Args:
        a: Action with varsigma_j = q_j^-1 on the marked neighbours of i
        i: White vertex

    Returns:
        CaseDecomposition: Components summing to B_i, with their checks
    """
    datum = a.datum
    if i in datum.black:
        raise ContractError(ERR_BLACK_VERTEX.format(i, i, i))
    case, neighbours = _local_case(datum, i)
    for j in neighbours:
        if a.varsigma[j] != qpow(-datum.di(j)):
            raise ContractError(ERR_MARKED_NORMALISATION.format(j, j, format_scalar(a.varsigma[j])))
    lattice = theta_lattice(datum)
    base = combine((-1, lattice.beta(i)))
    bi = a.b(i)
    checks: list[Check] = []

    def split(parts: list[Part], j: int, prefix: bool = False) -> list[Part]:
        d = datum.di(j)
        result = []
        for label, matrix, shifts in parts:
            pieces = xpm(matrix, a.b(j), d, a.bound, a.ell(j))
            checks.extend(pieces.checks(f"B{i},{label or '*'}|l{j}"))
            result.append((f"+{label}" if prefix else f"{label}+", pieces.plus, {**shifts, j: d}))
            result.append((f"-{label}" if prefix else f"{label}-", pieces.minus, {**shifts, j: -d}))
        return result

    parts: list[Part] = [("", bi, {})]
    if case in {"A2", "B2", "G2", "A3", "D4"}:
        for j in neighbours:
            parts = split(parts, j)
    elif case == "B3":
        j1, j2 = neighbours
        parts = _b3_middle(a, i, j2, checks)
        parts = split(parts, j1, prefix=True)

    components: list[WeightComponent] = []
    for label, matrix, shifts in parts:
        terms: list[tuple[int | Fraction, TWeight]] = [(1, base)]
        for j, c in shifts.items():
            terms.append((Fraction(c) / datum.di(j), lattice.b_dual(j)))
        components.append(WeightComponent(label, matrix, combine(*terms), shifts))

    def total() -> ExactMatrix:
        result = bi * ZERO
        for c in components:
            result = result + c.matrix
        return result - bi

    checks.append(Check(f"B{i}:sum", "B_i is the sum of its weight components", total))
    for comp in components:
        for j in sorted(datum.marked):
            power = comp.shifts.get(j, 0)

            def commute(comp: WeightComponent = comp, j: int = j, power: int | Fraction = power) -> ExactMatrix:
                lj = a.ell(j)
                return lj @ comp.matrix - comp.matrix @ lj * qpow(power)

            checks.append(Check(f"l{j}B{i},{comp.label}", "l_j B_{i,e} = q_j^{±1} B_{i,e} l_j", commute))
    logger.debug("B%d splits as %s into %d components", i, case, len(components))
    return CaseDecomposition(i, case, neighbours, components, checks)


def _b3_middle(
    a: IThetaAction,
    i: int,
    j2: int,
    checks: list[Check],
) -> list[Part]:
    # split by the short marked neighbour j2: B_i = B_+ + B_0 + B_-
    datum = a.datum
    d = datum.di(j2)
    bj, bi = a.b(j2), a.b(i)
    lm = a.ell(j2)
    x = bj @ bi - bi @ bj
    w = bj * (ONE / qint(2, d))
    pieces = xpm(x, w, 2 * d, a.bound, lm)
    checks.extend(pieces.checks(f"[B{j2},B{i}]|l{j2}"))
    plus = pieces.plus @ curly(lm, 1, d).inverse()
    minus = -(pieces.minus @ curly(lm, -1, d).inverse())
    middle = bi - plus - minus

    def middle_commutes() -> ExactMatrix:
        return bj @ middle - middle @ bj

    checks.append(Check(f"[B{j2},B{i},0]", "[B_{j_2},B_0] = 0", middle_commutes))
    return [("+", plus, {j2: 2 * d}), ("0", middle, {j2: 0}), ("-", minus, {j2: -2 * d})]


# relations


def verify_presentation(a: IThetaAction) -> list[Check]:
    """The defining relations of the iquantum group as matrix identities.

    K-conjugation of B_j and black E_j, F_j; the U_q relations among black
    generators; [E_i, B_j] = δ_ij [K_i;0] for black i; and
    S_ij(B_i, B_j) = C_ij wherever C_ij is available.

    Args:
        a: The action to check

    Returns:
        list[Check]: One check per relation
    """
    datum = a.datum
    rank = datum.rank
    checks: list[Check] = []
    alphas: dict[Weight, str] = {}
    for i in datum.vertices:
        k = k_generator(i, datum)
        if any(k.alpha) and k.alpha not in alphas and tuple(-c for c in k.alpha) not in alphas:
            alphas[k.alpha] = f"k{i}"

    def conj(alpha: Weight, name: str, gen: str, j: int, sign: int) -> Check:
        def compute() -> ExactMatrix:
            kk = a.k_source(alpha)
            x = a.gens[gen]
            return kk @ x - x @ kk * qpow(sign * datum.inner(alpha, datum.simple_root(j)))

        return Check(f"{name}{gen}", "K_alpha B_j K_alpha^-1 = q^-(alpha,alpha_j) B_j", compute)

    for alpha, name in alphas.items():
        for j in datum.vertices:
            checks.append(conj(alpha, name, f"B{j}", j, -1))
            if j in datum.black:
                checks.append(conj(alpha, name, f"E{j}", j, 1))

    black = sorted(datum.black)
    zero = ExactMatrix.zeros(a.dim, a.dim)
    for i in black:
        for j in datum.vertices:

            def e_b(i: int = i, j: int = j) -> ExactMatrix:
                rhs = a.evaluate(kbracket(K(rank, i), 0, datum.di(i))) if i == j else zero
                return a.gens[f"E{i}"] @ a.b(j) - a.b(j) @ a.gens[f"E{i}"] - rhs

            checks.append(Check(f"[E{i},B{j}]", "[E_i,B_j] = δ_ij[K_i;0] for i in I_•", e_b))
        for j in black:
            if i != j and datum.a(i, j):

                def e_serre(i: int = i, j: int = j) -> ExactMatrix:
                    return a.evaluate(serre(i, j, E(i), E(j), datum))

                def f_serre(i: int = i, j: int = j) -> ExactMatrix:
                    return a.evaluate(serre(i, j, F(i), F(j), datum))

                checks.append(Check(f"S{i}{j}(E)", "S_ij(E_i,E_j) = 0", e_serre))
                checks.append(Check(f"S{i}{j}(F)", "S_ij(F_i,F_j) = 0", f_serre))

    for i in datum.vertices:
        for j in datum.vertices:
            if i == j or (i in datum.black and j in datum.black):
                continue
            try:
                rhs = kolb_C(i, j, datum, a.varsigma)
            except UnsupportedCaseError as e:
                logger.warning("Skipping S_%d%d: %s", i, j, e)
                continue

            def b_serre(i: int = i, j: int = j, rhs: Expr = rhs) -> ExactMatrix:
                return a.evaluate(serre(i, j, Gen("B", i), Gen("B", j), datum)) - a.evaluate(rhs)

            checks.append(Check(f"S{i}{j}(B)", "S_ij(B_i,B_j) = C_ij", b_serre))
    return checks


def coproduct_check(
    m: ModuleRep,
    n: ModuleRep,
    datum: SatakeDatum,
    varsigma: Params,
    kappa: Params | None = None,
) -> list[Check]:
    """Delta(B_i) on M (x) N against its closed forms.

    For white i orthogonal to I_•:
    Delta(B_i) = B_i (x) K_i^-1 + 1 (x) F_i + varsigma_i k_τ(i) (x) E_τ(i) K_i^-1,
    and for τ(i) = i also Delta(B_i) = B_i (x) K_i^-1 + 1 (x) (B_i - kappa_i K_i^-1).

    Args:
        m: Left factor
        n: Right factor
        datum: Satake datum
        varsigma: Parameters on I_∘
        kappa: Optional second parameter

    Returns:
        list[Check]: One or two checks per eligible vertex
    """
    product = iqg_action(tensor(m, n), datum, varsigma, kappa)
    left = iqg_action(m, datum, varsigma, kappa)
    right = iqg_action(n, datum, varsigma, kappa)
    rank = datum.rank
    sigma = product.varsigma
    kap = product.kappa
    checks: list[Check] = []
    for i in datum.white:
        if any(datum.a(i, j) for j in datum.black):
            continue
        t = datum.tau(i)
        k_inv_n = n.evaluate(K(rank, i, -1))

        def three_term(i: int = i, t: int = t, k_inv_n: ExactMatrix = k_inv_n) -> ExactMatrix:
            rhs = left.b(i).kron(k_inv_n)
            rhs = rhs + ExactMatrix.identity(m.dim).kron(n.f[i - 1])
            raising = n.e[t - 1] @ k_inv_n
            rhs = rhs + m.k_matrix(k_generator(t, datum).alpha).kron(raising) * sigma[i]
            return product.b(i) - rhs

        anchor = "Delta(B_i) = B_i(x)K_i^-1 + 1(x)F_i + ς_i k_τi(x)E_τiK_i^-1"
        checks.append(Check(f"Delta(B{i})", anchor, three_term))
        if t == i:

            def two_term(i: int = i, k_inv_n: ExactMatrix = k_inv_n) -> ExactMatrix:
                second = right.b(i) - k_inv_n * kap.get(i, ZERO)
                rhs = left.b(i).kron(k_inv_n) + ExactMatrix.identity(m.dim).kron(second)
                return product.b(i) - rhs

            checks.append(Check(f"Delta(B{i}):2", "Delta(B_i) = B_i(x)K_i^-1 + 1(x)(B_i - κ_iK_i^-1)", two_term))
    return checks


def braid_checks(a: IThetaAction, eta: Params | None = None) -> list[Check]:
    """Braid relations of the symmetries T^i_i on every B_k.

    Args:
        a: Action whose datum admits the symmetry formulas
        eta: Optional eta, see ``freealg.default_eta``

    Returns:
        list[Check]: Commuting relations for orthogonal τ-orbits and length-three
            relations for adjacent vertices of the same kind (both τ-fixed or both not)
    """
    datum = a.datum
    supported = []
    for i in datum.white:
        try:
            iT_word((i,), Gen("B", i), datum, a.varsigma, eta)
        except UnsupportedCaseError:
            continue
        supported.append(i)
    checks: list[Check] = []
    for pos, i in enumerate(supported):
        for j in supported[pos + 1 :]:
            orbit_i, orbit_j = {i, datum.tau(i)}, {j, datum.tau(j)}
            if all(datum.a(x, y) == 0 for x in orbit_i for y in orbit_j):
                left, right, kind = (i, j), (j, i), "T_iT_j = T_jT_i"
            elif datum.a(i, j) == -1 and len(orbit_i) == len(orbit_j):
                left, right, kind = (i, j, i), (j, i, j), "T_iT_jT_i = T_jT_iT_j"
            else:
                continue
            for k in datum.vertices:

                def compute(left: tuple[int, ...] = left, right: tuple[int, ...] = right, k: int = k) -> ExactMatrix:
                    b = Gen("B", k)
                    lhs = iT_word(left, b, datum, a.varsigma, eta)
                    rhs = iT_word(right, b, datum, a.varsigma, eta)
                    return a.evaluate(lhs) - a.evaluate(rhs)

                word = "".join(map(str, left))
                checks.append(Check(f"T{word}(B{k})", kind, compute))
    return checks


def simath_square_checks(a: IThetaAction, eta: Params | None = None) -> list[Check]:
    """(S^i)^2(B_i) = q_i^{4<h_i, rho_•>} B_i on every white vertex."""
    datum = a.datum
    mapper = simath_images(datum, a.varsigma, eta)
    checks: list[Check] = []
    for i in datum.white:

        def compute(i: int = i) -> ExactMatrix:
            twice = mapper(mapper(Gen("B", i)))
            factor = qpow(4 * datum.di(i) * datum.h_rho_bullet(i))
            return a.evaluate(twice) - a.b(i) * factor

        checks.append(Check(f"S^2(B{i})", "(S^i)^2(B_i) = q_i^{4<h_i,rho_•>} B_i", compute))
    return checks


# weights of the commuting family


@dataclass(frozen=True)
class WeightBlock:
    """A joint eigenspace of the commuting family.

    Attributes:
        values: Eigenvalues, in the order of ``WeightDecomposition.names``
        basis: Columns spanning the block
        limits: Values at q = 1
        label: The (𝔱')*-label, None when some limit is a pole
    """

    values: tuple[QScalar, ...]
    basis: ExactMatrix
    limits: tuple[LimitValue, ...]
    label: tuple[Fraction, ...] | None

    @property
    def dim(self) -> int:
        """int: Dimension of the block."""
        return self.basis.cols


@dataclass
class WeightDecomposition:
    """Joint eigenspaces of (k_i;0)_{q_i}, i not in I_⊗, and B_j, j ∈ I_⊗."""

    names: tuple[str, ...]
    blocks: list[WeightBlock]
    dim: int
    classical: bool

    def by_label(self) -> dict[tuple[Fraction, ...], int]:
        """Dimension of M_lambda, merging blocks with equal classical labels."""
        result: dict[tuple[Fraction, ...], int] = {}
        for block in self.blocks:
            if block.label is not None:
                result[block.label] = result.get(block.label, 0) + block.dim
        return result

    def records(self) -> list[dict[str, object]]:
        """Both granularities, one row per eigenvalue tuple."""
        return [
            {
                "values": dict(zip(self.names, map(format_scalar, b.values), strict=True)),
                "limits": dict(zip(self.names, map(str, b.limits), strict=True)),
                "dim": b.dim,
            }
            for b in self.blocks
        ]


def _k_candidates(datum: SatakeDatum, bound: int) -> list[QScalar]:
    top = 2 * max(datum.d) * bound
    exponents = sorted(range(-top, top + 1), key=lambda n: (abs(n), -n))
    return [sign * qpow(n) for n in exponents for sign in (ONE, -ONE)]


def tprime_weights(a: IThetaAction) -> WeightDecomposition:
    """Simultaneous eigenspaces of the Cartan part of the iquantum group.

    Args:
        a: The action

    Returns:
        WeightDecomposition: Blocks with eigenvalue tuples, limits and labels
    """
    datum = a.datum
    names: list[str] = []
    family: list[ExactMatrix] = []
    candidate_sets: list[Iterable[QScalar]] = []
    k_exponents: list[int | None] = []
    for i in datum.vertices:
        if i in datum.marked or not any(k_generator(i, datum).alpha):
            continue
        names.append(f"(k{i};0)")
        family.append(a.k(i))
        candidate_sets.append(_k_candidates(datum, a.bound))
        k_exponents.append(datum.di(i))
    for j in sorted(datum.marked):
        names.append(f"B{j}")
        family.append(a.b(j))
        candidate_sets.append(ladder_candidates(a.bound, datum.di(j), a.scale(j)))
        k_exponents.append(None)
    resolution = simultaneous_eigenbasis(family, candidate_sets, a.dim)
    if not resolution.complete:
        found = sum(b.dim for b in resolution.blocks)
        raise ContractError(ERR_NOT_CLASSICAL.format(found, a.dim, a.label))
    blocks: list[WeightBlock] = []
    classical = True
    for block in resolution.blocks:
        values = []
        for value, d in zip(block.values, k_exponents, strict=True):
            values.append(value if d is None else (value - ONE) / (qpow(d) - ONE))
        limits = tuple(limit_at_one(v) for v in values)
        k_limits = [limit_at_one(v) for v, d in zip(block.values, k_exponents, strict=True) if d is not None]
        ok = not any(x.is_pole for x in limits) and all(x.value == 1 for x in k_limits)
        classical = classical and ok
        label = tuple(x.value for x in limits) if ok else None  # type: ignore[misc]
        blocks.append(WeightBlock(tuple(values), block.basis, limits, label))
    logger.info("%s: %d weight blocks, classical=%s", a.label or datum.family, len(blocks), classical)
    return WeightDecomposition(tuple(names), blocks, a.dim, classical)


# duals


def dual_module(a: IThetaAction, eta: Params | None = None, zeta: Params | None = None) -> IThetaAction:
    """M^∨ with x acting by the transpose of S^i(x).

    Args:
        a: Action on M
        eta: Optional eta for S^i
        zeta: Optional zeta for S^i

    Returns:
        IThetaAction: The dual action in the dual basis
    """
    mapper = simath_images(a.datum, a.varsigma, eta, zeta)
    gens: dict[str, ExactMatrix] = {}
    for key in a.gens:
        name, index = key[0], int(key[1:])
        gens[key] = a.evaluate(mapper(Gen(name, index))).transpose()

    def k_source(alpha: Weight) -> ExactMatrix:
        return a.evaluate(mapper(KElem(alpha))).transpose()

    return IThetaAction(
        a.datum,
        dict(a.varsigma),
        a.dim,
        gens,
        k_source,
        dict(a.kappa),
        f"({a.label})^",
        None,
        a.bound,
    )


def _intertwiner_operators(a: IThetaAction) -> list[tuple[str, Callable[[IThetaAction], ExactMatrix]]]:
    ops: list[tuple[str, Callable[[IThetaAction], ExactMatrix]]] = [
        (key, lambda x, key=key: x.gens[key]) for key in sorted(a.gens)
    ]
    for i in a.datum.vertices:
        alpha = k_generator(i, a.datum).alpha
        if any(alpha):
            ops.append((f"k{i}", lambda x, alpha=alpha: x.k_source(alpha)))
    return ops


def intertwiner(source: IThetaAction, target: IThetaAction) -> ExactMatrix:
    """An invertible P with P X_source = X_target P for every generator.

    Args:
        source: Action on M
        target: Action on N of the same dimension

    Returns:
        ExactMatrix: The change of basis
    """
    n = source.dim
    if target.dim != n:
        raise ContractError(ERR_DIM_MISMATCH.format(n, target.dim))
    identity = ExactMatrix.identity(n)
    # vec(P X) = (X^T (x) 1) vec(P) and vec(Y P) = (1 (x) Y) vec(P), column-major
    blocks = [
        op(source).transpose().kron(identity) - identity.kron(op(target)) for _, op in _intertwiner_operators(source)
    ]
    solutions = kernel(vstack(blocks, cols=n * n))

    def unvec(column: ExactMatrix) -> ExactMatrix:
        return ExactMatrix.from_dict((n, n), {(r % n, r // n): v for (r, _), v in column.entries().items()})

    found = invertible_combination([unvec(solutions.column(k)) for k in range(solutions.cols)])
    if found is None:
        raise ContractError(ERR_NO_INTERTWINER.format(source.label, target.label))
    return found


def invertible_combination(candidates: Sequence[ExactMatrix], tries: int = INTERTWINER_TRIES) -> ExactMatrix | None:
    """An invertible element of the span of ``candidates``, if one is found.

    Each candidate is tried alone, then the combinations sum_k x^k P_k for
    x = 2, 3, ... up to ``tries`` values of x.

    Args:
        candidates: Square matrices of one size
        tries: Number of values of x

    Returns:
        ExactMatrix | None: The first invertible matrix met, or None
    """
    if not candidates:
        return None
    n = candidates[0].rows
    for p in candidates:
        if p.rank() == n:
            return p
    for x in range(2, tries + 2):
        combined = candidates[0]
        for power, extra in enumerate(candidates[1:], start=1):
            combined = combined + extra * x**power
        if combined.rank() == n:
            return combined
    return None


def double_dual_checks(a: IThetaAction, eta: Params | None = None, zeta: Params | None = None) -> list[Check]:
    """(M^∨)^∨ ≅ M through an explicit intertwiner, and M^∨ satisfies the presentation."""
    dual = dual_module(a, eta, zeta)
    twice = dual_module(dual, eta, zeta)
    checks = [
        Check(f"dual:{c.check_id}", c.anchor, c.compute) for c in verify_presentation(dual)
    ]

    def iso() -> bool:
        p = intertwiner(twice, a)
        return all(p @ op(twice) == op(a) @ p for _, op in _intertwiner_operators(a))

    checks.append(Check("(M^)^~M", "(M^∨)^∨ ≅ M", iso))
    return checks
