"""Exact sparse linear algebra over Q(q^(1/2)).

``ExactMatrix`` wraps a sparse sympy ``DomainMatrix`` over the scalar field.
On top of it this module provides kernels, subspace intersection and coordinates,
candidate-driven spectral resolution, spectral functional calculus and joint
eigenspace refinement of commuting families.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property

from sympy.polys.matrices import DomainMatrix

from iquantum.scalar import DOMAIN, ONE, ZERO, QScalar, ScalarLike, as_scalar
from iquantum.utils.formatting import format_scalar
from iquantum.utils.shared import ContractError

logger = logging.getLogger(__name__)

DENSE_LIMIT = 64

# Error messages
ERR_SHAPE = "Shape mismatch: {} vs {}"
ERR_NOT_SQUARE = "Matrix must be square, got {}"
ERR_INCOMPLETE = "Spectral resolution is incomplete ({} of {} dimensions found)"
ERR_NONCOMMUTING = "Family members {} and {} do not commute"
ERR_NOT_IN_SPAN = "Vectors do not lie in the span of the given basis"
ERR_CANDIDATE_COUNT = "Got {} candidate sets for {} matrices"


class ExactMatrix:
    """Immutable sparse matrix with entries in Q(q^(1/2)).

    No stored entry is zero and the shape is fixed at construction.
    """

    def __init__(self, dm: DomainMatrix) -> None:
        self._dm = dm.to_sparse()

    # construction

    @classmethod
    def from_dict(cls, shape: tuple[int, int], entries: Mapping[tuple[int, int], ScalarLike]) -> ExactMatrix:
        """Build a matrix from a {(row, col): value} map; zero values are dropped.

        Args:
            shape (tuple[int, int]): (rows, cols)
            entries (Mapping[tuple[int, int], ScalarLike]): Nonzero entries

        Returns:
            ExactMatrix: The matrix
        """
        dod: dict[int, dict[int, QScalar]] = {}
        for (i, j), value in entries.items():
            scalar = as_scalar(value)
            if scalar:
                dod.setdefault(i, {})[j] = scalar
        return cls(DomainMatrix.from_dod(dod, shape, DOMAIN))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[ScalarLike]]) -> ExactMatrix:
        """Build a matrix from a list of rows.

        Args:
            rows (Sequence[Sequence[ScalarLike]]): Row-major entries

        Returns:
            ExactMatrix: The matrix
        """
        n_cols = len(rows[0]) if rows else 0
        entries = {(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row)}
        return cls.from_dict((len(rows), n_cols), entries)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> ExactMatrix:
        """Zero matrix of the given shape."""
        return cls(DomainMatrix.zeros((rows, cols), DOMAIN))

    @classmethod
    def identity(cls, n: int) -> ExactMatrix:
        """n x n identity."""
        return cls(DomainMatrix.eye(n, DOMAIN))

    @classmethod
    def diag(cls, values: Sequence[ScalarLike]) -> ExactMatrix:
        """Diagonal matrix with the given entries."""
        n = len(values)
        return cls.from_dict((n, n), {(i, i): v for i, v in enumerate(values)})

    # structure

    @property
    def shape(self) -> tuple[int, int]:
        """tuple[int, int]: (rows, cols)."""
        return self._dm.shape

    @property
    def rows(self) -> int:
        """int: Number of rows."""
        return self._dm.shape[0]

    @property
    def cols(self) -> int:
        """int: Number of columns."""
        return self._dm.shape[1]

    @property
    def domain_matrix(self) -> DomainMatrix:
        """DomainMatrix: The underlying sparse sympy matrix."""
        return self._dm

    @cached_property
    def dod(self) -> dict[int, dict[int, QScalar]]:
        """dict[int, dict[int, QScalar]]: Nonzero entries as row -> col -> value."""
        return self._dm.to_dod()

    def entries(self) -> dict[tuple[int, int], QScalar]:
        """Nonzero entries keyed by (row, col).

        Returns:
            dict[tuple[int, int], QScalar]: The entries
        """
        return {(i, j): v for i, row in self.dod.items() for j, v in row.items()}

    def __getitem__(self, key: tuple[int, int]) -> QScalar:
        i, j = key
        return self.dod.get(i, {}).get(j, ZERO)

    @property
    def nnz(self) -> int:
        """int: Number of stored entries."""
        return sum(len(row) for row in self.dod.values())

    @property
    def is_zero(self) -> bool:
        """bool: Whether every entry vanishes."""
        return not self.dod

    def is_diagonal(self) -> bool:
        """bool: Whether all nonzero entries sit on the diagonal."""
        return all(i == j for i, row in self.dod.items() for j in row)

    def diagonal(self) -> list[QScalar]:
        """Diagonal entries.

        Returns:
            list[QScalar]: The entries (i, i)
        """
        return [self[i, i] for i in range(min(self.shape))]

    # arithmetic

    def _check_shape(self, other: ExactMatrix) -> None:
        if self.shape != other.shape:
            raise ContractError(ERR_SHAPE.format(self.shape, other.shape))

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        self._check_shape(other)
        return ExactMatrix(self._dm.add(other._dm))

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        self._check_shape(other)
        return ExactMatrix(self._dm.sub(other._dm))

    def __neg__(self) -> ExactMatrix:
        return ExactMatrix(self._dm.neg())

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        if self.cols != other.rows:
            raise ContractError(ERR_SHAPE.format(self.shape, other.shape))
        return ExactMatrix(self._dm.matmul(other._dm))

    def __mul__(self, scalar: ScalarLike) -> ExactMatrix:
        return ExactMatrix(self._dm.scalarmul(as_scalar(scalar)))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> ExactMatrix:
        if self.rows != self.cols:
            raise ContractError(ERR_NOT_SQUARE.format(self.shape))
        base = self if exponent >= 0 else self.inverse()
        result = ExactMatrix.identity(self.rows)
        for _ in range(abs(exponent)):
            result = result @ base
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and (self - other).is_zero

    __hash__ = None  # type: ignore[assignment]

    def transpose(self) -> ExactMatrix:
        """Matrix transpose."""
        return ExactMatrix(self._dm.transpose())

    @property
    def T(self) -> ExactMatrix:  # noqa: N802
        """ExactMatrix: Matrix transpose."""
        return self.transpose()

    def inverse(self) -> ExactMatrix:
        """Matrix inverse; raises sympy's error when singular."""
        if self.rows != self.cols:
            raise ContractError(ERR_NOT_SQUARE.format(self.shape))
        if self.is_diagonal():
            return ExactMatrix.diag([1 / v for v in self.diagonal()])
        return ExactMatrix(self._dm.to_dense().inv())

    def kron(self, other: ExactMatrix) -> ExactMatrix:
        """Kronecker product, rows of ``self`` outermost.

        Args:
            other (ExactMatrix): Right factor

        Returns:
            ExactMatrix: self (x) other
        """
        rows, cols = other.shape
        entries: dict[tuple[int, int], QScalar] = {}
        for (i, j), a in self.entries().items():
            for (k, l), b in other.entries().items():
                entries[i * rows + k, j * cols + l] = a * b
        return ExactMatrix.from_dict((self.rows * rows, self.cols * cols), entries)

    def extract(self, rows: Sequence[int], cols: Sequence[int]) -> ExactMatrix:
        """Submatrix on the given row and column indices."""
        return ExactMatrix(self._dm.extract(list(rows), list(cols)))

    def column(self, j: int) -> ExactMatrix:
        """The j-th column as an n x 1 matrix."""
        return self.extract(range(self.rows), [j])

    def columns(self) -> list[ExactMatrix]:
        """All columns as n x 1 matrices."""
        return [self.column(j) for j in range(self.cols)]

    def rref(self) -> tuple[ExactMatrix, tuple[int, ...]]:
        """Reduced row echelon form and pivot columns.

        Small matrices are eliminated densely.

        Returns:
            tuple[ExactMatrix, tuple[int, ...]]: (rref, pivots)
        """
        method = "GJ_dense" if self.cols < DENSE_LIMIT else "GJ"
        reduced, pivots = self._dm.rref(method=method)
        return ExactMatrix(reduced), tuple(pivots)

    def rank(self) -> int:
        """Rank of the matrix."""
        if self.is_zero:
            return 0
        return len(self.rref()[1])

    def map_entries(self, func: Callable[[QScalar], ScalarLike]) -> ExactMatrix:
        """Apply ``func`` to every nonzero entry."""
        return ExactMatrix.from_dict(self.shape, {k: func(v) for k, v in self.entries().items()})

    # reporting

    def witness(self) -> str:
        """Describe the nonzero entry of largest degree, ties broken by (row, col).

        Returns:
            str: "(row, col) = value", or "0" for the zero matrix
        """
        if self.is_zero:
            return "0"

        def degree(item: tuple[tuple[int, int], QScalar]) -> tuple[int, int, int]:
            (i, j), v = item
            return (-(v.numer.degree() + v.denom.degree()), i, j)

        (i, j), value = min(self.entries().items(), key=degree)
        return f"({i}, {j}) = {format_scalar(value)}"

    def dump(self) -> str:
        """Coordinate dump: header "rows cols nnz" then "row col scalar" lines.

        Returns:
            str: The dump text
        """
        lines = [f"{self.rows} {self.cols} {self.nnz}"]
        lines.extend(f"{i} {j} {format_scalar(v)}" for (i, j), v in sorted(self.entries().items()))
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return f"ExactMatrix(shape={self.shape}, nnz={self.nnz})"


def hstack(blocks: Sequence[ExactMatrix], rows: int | None = None) -> ExactMatrix:
    """Place matrices side by side.

    Args:
        blocks: Matrices with equal row counts
        rows: Row count to use when ``blocks`` is empty

    Returns:
        ExactMatrix: The stacked matrix
    """
    if not blocks:
        return ExactMatrix.zeros(rows or 0, 0)
    first, *rest = blocks
    return ExactMatrix(first.domain_matrix.hstack(*(b.domain_matrix for b in rest)))


def vstack(blocks: Sequence[ExactMatrix], cols: int | None = None) -> ExactMatrix:
    """Stack matrices vertically.

    Args:
        blocks: Matrices with equal column counts
        cols: Column count to use when ``blocks`` is empty

    Returns:
        ExactMatrix: The stacked matrix
    """
    if not blocks:
        return ExactMatrix.zeros(0, cols or 0)
    first, *rest = blocks
    return ExactMatrix(first.domain_matrix.vstack(*(b.domain_matrix for b in rest)))


def commutator(a: ExactMatrix, b: ExactMatrix, scalar: ScalarLike = 1) -> ExactMatrix:
    """Twisted commutator ab - c ba."""
    return a @ b - (b @ a) * scalar


def kernel(m: ExactMatrix) -> ExactMatrix:
    """Basis of the null space, one basis vector per column.

    The vector for free column f has 1 in position f and is supported on f and
    the pivot columns.

    Args:
        m: Matrix whose kernel is wanted

    Returns:
        ExactMatrix: n x (n - rank) matrix of basis columns
    """
    n = m.cols
    if m.is_zero:
        return ExactMatrix.identity(n)
    reduced, pivots = m.rref()
    pivot_set = set(pivots)
    free = [j for j in range(n) if j not in pivot_set]
    dod = reduced.dod
    entries: dict[tuple[int, int], QScalar] = {}
    for k, f in enumerate(free):
        entries[f, k] = ONE
        for row, p in enumerate(pivots):
            value = dod.get(row, {}).get(f)
            if value:
                entries[p, k] = -value
    return ExactMatrix.from_dict((n, len(free)), entries)


def column_space_basis(m: ExactMatrix) -> ExactMatrix:
    """Independent columns of ``m`` spanning its column space.

    Args:
        m: Matrix whose columns span a subspace

    Returns:
        ExactMatrix: The pivot columns of ``m``
    """
    if m.cols == 0 or m.is_zero:
        return ExactMatrix.zeros(m.rows, 0)
    _, pivots = m.rref()
    return m.extract(range(m.rows), pivots)


def intersect_columns(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Basis of span(a) ∩ span(b) for matrices with independent columns.

    Args:
        a: First basis (columns)
        b: Second basis (columns)

    Returns:
        ExactMatrix: Basis of the intersection as columns
    """
    if a.cols == 0 or b.cols == 0:
        return ExactMatrix.zeros(a.rows, 0)
    null = kernel(hstack([a, -b]))
    return column_space_basis(a @ null.extract(range(a.cols), range(null.cols)))


def coordinates(basis: ExactMatrix, vectors: ExactMatrix, check: bool = True) -> ExactMatrix:
    """Solve basis @ c = vectors for vectors lying in the column span of ``basis``.

    Args:
        basis: n x d matrix with independent columns
        vectors: n x m matrix with columns in span(basis)
        check: Verify the solution exactly

    Returns:
        ExactMatrix: d x m coordinate matrix
    """
    if basis.cols == 0:
        return ExactMatrix.zeros(0, vectors.cols)
    _, independent_rows = basis.transpose().rref()
    square = basis.extract(independent_rows, range(basis.cols))
    coords = square.inverse() @ vectors.extract(independent_rows, range(vectors.cols))
    if check and basis @ coords != vectors:
        raise ContractError(ERR_NOT_IN_SPAN)
    return coords


@dataclass(frozen=True)
class EigenBlock:
    """Eigenvalue together with a basis (columns) of its eigenspace."""

    value: QScalar
    basis: ExactMatrix

    @property
    def dim(self) -> int:
        """int: Dimension of the eigenspace."""
        return self.basis.cols


@dataclass(frozen=True)
class SpectralResolution:
    """Eigenspaces found among a candidate list."""

    blocks: tuple[EigenBlock, ...]
    dim: int

    @property
    def complete(self) -> bool:
        """bool: Whether the eigenspaces fill the whole space."""
        return sum(b.dim for b in self.blocks) == self.dim

    @property
    def eigenvalues(self) -> list[QScalar]:
        """list[QScalar]: The eigenvalues found."""
        return [b.value for b in self.blocks]

    def multiset(self) -> dict[QScalar, int]:
        """Eigenvalue -> multiplicity."""
        return {b.value: b.dim for b in self.blocks}


def _unique(values: Iterable[QScalar]) -> list[QScalar]:
    seen: dict[QScalar, None] = {}
    for v in values:
        seen.setdefault(as_scalar(v), None)
    return list(seen)


def spectral_resolve(m: ExactMatrix, candidates: Iterable[ScalarLike]) -> SpectralResolution:
    """Eigenspaces of ``m`` for the candidate eigenvalues.

    Scanning stops once the blocks fill the space; empty blocks are dropped.

    Args:
        m: Square matrix
        candidates: Candidate eigenvalues, tried in order

    Returns:
        SpectralResolution: Nonempty blocks and the dimension of the space
    """
    if m.rows != m.cols:
        raise ContractError(ERR_NOT_SQUARE.format(m.shape))
    n = m.rows
    identity = ExactMatrix.identity(n)
    blocks: list[EigenBlock] = []
    found = 0
    for value in _unique(candidates):
        if found == n:
            break
        space = kernel(m - identity * value)
        if space.cols:
            blocks.append(EigenBlock(value, space))
            found += space.cols
    if found < n:
        logger.debug("Spectral resolution found %d of %d dimensions", found, n)
    return SpectralResolution(tuple(blocks), n)


def spectral_function(resolution: SpectralResolution, func: Callable[[QScalar], QScalar]) -> ExactMatrix:
    """The operator acting by func(λ) on each λ-eigenspace.

    Args:
        resolution: A complete spectral resolution
        func: Eigenvalue map

    Returns:
        ExactMatrix: P diag(func(λ)) P^-1
    """
    if not resolution.complete:
        found = sum(b.dim for b in resolution.blocks)
        raise ContractError(ERR_INCOMPLETE.format(found, resolution.dim))
    if resolution.dim == 0:
        return ExactMatrix.zeros(0, 0)
    change = hstack([b.basis for b in resolution.blocks])
    values = [func(b.value) for b in resolution.blocks for _ in range(b.dim)]
    return change @ ExactMatrix.diag(values) @ change.inverse()


@dataclass(frozen=True)
class JointBlock:
    """Joint eigenspace of a commuting family, labelled by its eigenvalue tuple."""

    values: tuple[QScalar, ...]
    basis: ExactMatrix

    @property
    def dim(self) -> int:
        """int: Dimension of the joint eigenspace."""
        return self.basis.cols


@dataclass(frozen=True)
class JointResolution:
    """Common refinement of eigenspaces of a commuting family."""

    blocks: tuple[JointBlock, ...]
    dim: int

    @property
    def complete(self) -> bool:
        """bool: Whether the joint blocks fill the whole space."""
        return sum(b.dim for b in self.blocks) == self.dim


def refine_blocks(
    blocks: Sequence[JointBlock],
    m: ExactMatrix,
    candidates: Iterable[ScalarLike],
) -> list[JointBlock]:
    """Split each block into eigenspaces of ``m`` restricted to it.

    ``m`` must preserve every block. Parts of a block not covered by the
    candidates are dropped.

    Args:
        blocks: Blocks to refine
        m: Operator preserving the blocks
        candidates: Candidate eigenvalues of ``m``

    Returns:
        list[JointBlock]: The refined blocks
    """
    values = _unique(candidates)
    refined: list[JointBlock] = []
    for block in blocks:
        image = m @ block.basis
        covered = 0
        for value in values:
            if covered == block.dim:
                break
            coeffs = kernel(image - block.basis * value)
            if coeffs.cols:
                refined.append(JointBlock((*block.values, value), block.basis @ coeffs))
                covered += coeffs.cols
    return refined


def check_commuting(family: Sequence[ExactMatrix]) -> None:
    """Raise ContractError unless all members pairwise commute.

    Args:
        family: Square matrices of equal size
    """
    for a in range(len(family)):
        for b in range(a + 1, len(family)):
            if not commutator(family[a], family[b]).is_zero:
                raise ContractError(ERR_NONCOMMUTING.format(a, b))


def simultaneous_eigenbasis(
    family: Sequence[ExactMatrix],
    candidate_sets: Sequence[Iterable[ScalarLike]],
    dim: int | None = None,
) -> JointResolution:
    """Joint eigenspaces of a commuting family.

    Args:
        family: Pairwise commuting square matrices
        candidate_sets: Candidate eigenvalues, one iterable per member
        dim: Dimension of the space, needed only for an empty family

    Returns:
        JointResolution: Blocks labelled by eigenvalue tuples
    """
    if len(family) != len(candidate_sets):
        raise ContractError(ERR_CANDIDATE_COUNT.format(len(candidate_sets), len(family)))
    check_commuting(family)
    n = family[0].rows if family else (dim or 0)
    blocks = [JointBlock((), ExactMatrix.identity(n))] if n else []
    for m, candidates in zip(family, candidate_sets, strict=True):
        blocks = refine_blocks(blocks, m, candidates)
    return JointResolution(tuple(blocks), n)
