"""Tests for exact sparse matrices and eigenspace helpers."""

import pytest

from iquantum.linalg import (
    ExactMatrix,
    column_space_basis,
    commutator,
    coordinates,
    hstack,
    intersect_columns,
    kernel,
    simultaneous_eigenbasis,
    spectral_function,
    spectral_resolve,
    vstack,
)
from iquantum.scalar import ONE, ZERO, q, qint
from iquantum.utils.shared import ContractError


@pytest.fixture
def swap() -> ExactMatrix:
    """The 2 x 2 swap matrix."""
    return ExactMatrix.from_rows([[0, 1], [1, 0]])


def test_from_rows_drops_zeros() -> None:
    """Zero entries are not stored."""
    m = ExactMatrix.from_rows([[1, 0, 0], [0, q, 0]])
    assert m.shape == (2, 3)
    assert m.nnz == 2
    assert m[1, 1] == q
    assert m[0, 2] == ZERO


def test_arithmetic(swap: ExactMatrix) -> None:
    """Products, scalar multiples and powers."""
    identity = ExactMatrix.identity(2)
    assert swap @ swap == identity
    assert swap**2 == identity
    assert swap ** (-1) == swap
    assert (swap * q - swap * q).is_zero
    assert swap + identity - swap == identity
    assert ExactMatrix.diag([q, ONE]) ** 3 == ExactMatrix.diag([q * q * q, ONE])


def test_inverse() -> None:
    """Dense and diagonal inverses."""
    m = ExactMatrix.from_rows([[1, q], [0, 1]])
    assert m @ m.inverse() == ExactMatrix.identity(2)
    d = ExactMatrix.diag([q, qint(2)])
    assert d.inverse() == ExactMatrix.diag([ONE / q, ONE / qint(2)])


def test_non_square_power() -> None:
    """Powers need a square matrix."""
    with pytest.raises(ContractError):
        ExactMatrix.zeros(2, 3) ** 2


def test_transpose_and_kron() -> None:
    """Kronecker products put the left factor outermost."""
    a = ExactMatrix.from_rows([[0, 1], [0, 0]])
    b = ExactMatrix.diag([q, ONE])
    k = a.kron(b)
    assert k.shape == (4, 4)
    assert k.entries() == {(0, 2): q, (1, 3): ONE}
    assert a.T == ExactMatrix.from_rows([[0, 0], [1, 0]])


def test_stacking_and_extract() -> None:
    """Blocks stack in both directions."""
    a = ExactMatrix.identity(2)
    wide = hstack([a, a * 2])
    tall = vstack([a, a * 2])
    assert wide.shape == (2, 4)
    assert tall.shape == (4, 2)
    assert wide.extract([0, 1], [2, 3]) == a * 2
    assert tall.column(1) == ExactMatrix.from_rows([[0], [1], [0], [2]])


def test_commutator(swap: ExactMatrix) -> None:
    """ab - c ba."""
    d = ExactMatrix.diag([ONE, -ONE])
    assert commutator(swap, swap).is_zero
    assert commutator(d, swap, -1).is_zero
    assert commutator(d, swap) == ExactMatrix.from_rows([[0, 2], [-2, 0]])


def test_kernel_and_rank() -> None:
    """Kernel columns are annihilated and complete the rank."""
    m = ExactMatrix.from_rows([[1, q, 0], [0, 0, 1]])
    null = kernel(m)
    assert null.shape == (3, 1)
    assert (m @ null).is_zero
    assert m.rank() == 2
    assert kernel(ExactMatrix.zeros(2, 2)) == ExactMatrix.identity(2)


def test_column_space_and_intersection() -> None:
    """Pivot columns and intersections of spans."""
    m = ExactMatrix.from_rows([[1, 2, 0], [0, 0, 1], [0, 0, 0]])
    assert column_space_basis(m).cols == 2
    a = ExactMatrix.from_rows([[1, 0], [0, 1], [0, 0]])
    b = ExactMatrix.from_rows([[0, 0], [1, 0], [0, 1]])
    meet = intersect_columns(a, b)
    assert meet.cols == 1
    assert meet.entries().keys() == {(1, 0)}


def test_coordinates() -> None:
    """Coordinates reproduce vectors in the span, others are rejected."""
    basis = ExactMatrix.from_rows([[1, 0], [1, 1], [0, q]])
    vectors = basis @ ExactMatrix.from_rows([[2], [ONE / q]])
    assert coordinates(basis, vectors) == ExactMatrix.from_rows([[2], [ONE / q]])
    with pytest.raises(ContractError):
        coordinates(basis, ExactMatrix.from_rows([[0], [0], [1]]))


def test_witness_and_dump() -> None:
    """The witness names the entry of largest degree."""
    m = ExactMatrix.from_dict((2, 2), {(0, 0): ONE, (1, 1): q})
    assert m.witness() == "(1, 1) = q"
    assert ExactMatrix.zeros(2, 2).witness() == "0"
    assert m.dump() == "2 2 2\n0 0 1\n1 1 q\n"


def test_spectral_resolve(swap: ExactMatrix) -> None:
    """The swap has eigenvalues 1 and -1 with multiplicity one."""
    resolution = spectral_resolve(swap, [ONE, -ONE, q])
    assert resolution.complete
    assert resolution.multiset() == {ONE: 1, -ONE: 1}


def test_spectral_resolve_incomplete(swap: ExactMatrix) -> None:
    """Missing candidates leave the resolution incomplete."""
    resolution = spectral_resolve(swap, [ONE])
    assert not resolution.complete
    with pytest.raises(ContractError):
        spectral_function(resolution, lambda x: x)


def test_spectral_function(swap: ExactMatrix) -> None:
    """Squaring the eigenvalues of an involution gives the identity."""
    resolution = spectral_resolve(swap, [ONE, -ONE])
    assert spectral_function(resolution, lambda x: x * x) == ExactMatrix.identity(2)
    assert spectral_function(resolution, lambda x: x) == swap


def test_simultaneous_eigenbasis(swap: ExactMatrix) -> None:
    """Commuting families split into joint eigenspaces."""
    family = [swap, ExactMatrix.identity(2) * q]
    resolution = simultaneous_eigenbasis(family, [[ONE, -ONE], [q]])
    assert resolution.complete
    assert sorted(str(b.values[0]) for b in resolution.blocks) == sorted([str(ONE), str(-ONE)])
    assert all(b.values[1] == q for b in resolution.blocks)


def test_simultaneous_eigenbasis_rejects_noncommuting(swap: ExactMatrix) -> None:
    """Non-commuting families are outside the contract."""
    with pytest.raises(ContractError):
        simultaneous_eigenbasis([swap, ExactMatrix.diag([ONE, -ONE])], [[ONE, -ONE], [ONE, -ONE]])
