"""Tests for root data and the marked Satake diagram table."""

from collections import Counter
from fractions import Fraction

import pytest

from iquantum.cartan import (
    FAMILIES,
    cartan_matrix,
    character,
    combine,
    family_uses_s,
    is_dominant,
    longest_word,
    positive_roots,
    satake,
    symmetrizer,
    table,
    theta_lattice,
    validate_datum,
    weyl_dimension,
)
from iquantum.utils.shared import ConfigError


def test_cartan_matrix_b2() -> None:
    """B2 has the long root first."""
    assert [list(row) for row in cartan_matrix("B", 2)] == [[2, -1], [-2, 2]]


@pytest.mark.parametrize(("kind", "n"), [("B", 1), ("D", 2), ("E", 5), ("G", 3), ("X", 2)])
def test_cartan_matrix_rejects(kind: str, n: int) -> None:
    """Invalid types and ranks are configuration errors."""
    with pytest.raises(ConfigError):
        cartan_matrix(kind, n)


@pytest.mark.parametrize(
    ("kind", "n", "expected"),
    [("A", 3, (1, 1, 1)), ("B", 2, (2, 1)), ("C", 3, (1, 1, 2))],
)
def test_symmetrizer(kind: str, n: int, expected: tuple[int, ...]) -> None:
    """d_i a_ij = d_j a_ji with coprime entries."""
    assert symmetrizer(cartan_matrix(kind, n)) == expected


@pytest.mark.parametrize(
    ("kind", "n", "count"),
    [("A", 2, 3), ("A", 3, 6), ("B", 2, 4), ("G", 2, 6), ("D", 4, 12)],
)
def test_positive_root_counts(kind: str, n: int, count: int) -> None:
    """Positive root counts of small types."""
    assert len(positive_roots(cartan_matrix(kind, n))) == count


@pytest.mark.parametrize(
    ("kind", "n", "labels", "dim"),
    [
        ("A", 2, (1, 1), 8),
        ("A", 2, (1, 0), 3),
        ("B", 2, (0, 1), 4),
        ("B", 2, (1, 0), 5),
        ("A", 1, (4,), 5),
    ],
)
def test_weyl_dimension(kind: str, n: int, labels: tuple[int, ...], dim: int) -> None:
    """Weyl's dimension formula on small highest weights."""
    assert weyl_dimension(cartan_matrix(kind, n), labels) == dim


def test_character_of_sl3_vector() -> None:
    """The vector representation of sl3 has three weights of multiplicity one."""
    assert character(cartan_matrix("A", 2), (1, 0)) == Counter({(1, 0): 1, (-1, 1): 1, (0, -1): 1})


def test_character_size_matches_dimension() -> None:
    """Characters sum to the Weyl dimension."""
    cartan = cartan_matrix("A", 2)
    assert sum(character(cartan, (1, 1)).values()) == 8


@pytest.mark.parametrize(
    ("labels", "expected"),
    [((0, 2), True), ((1, -1), False), ((Fraction(1, 2),), False)],
)
def test_is_dominant(labels: tuple[int | Fraction, ...], expected: bool) -> None:
    """Dominant integral means non-negative integers."""
    assert is_dominant(labels) is expected


def test_longest_word_lengths() -> None:
    """The longest element of A2 has length 3."""
    cartan = cartan_matrix("A", 3)
    assert len(longest_word(cartan, [0, 1])) == 3
    assert longest_word(cartan, [2]) == (2,)
    assert longest_word(cartan, []) == ()


def test_satake_ai() -> None:
    """AI families mark the odd vertices."""
    datum = satake("AI-1", 1)
    assert (datum.kind, datum.rank, datum.marked) == ("A", 2, frozenset({1}))
    assert datum.is_quasi_split
    datum = satake("AI-2", 2)
    assert (datum.rank, datum.marked) == (3, frozenset({1, 3}))


def test_satake_aii() -> None:
    """AII blackens the odd vertices, each fixed by tau."""
    datum = satake("AII", 2)
    assert datum.black == frozenset({1, 3})
    assert all(datum.tau(i) == i for i in datum.vertices)
    assert not datum.is_quasi_split


def test_satake_aiii_swaps_ends() -> None:
    """AIII(1, 3) swaps the end vertices around a black middle."""
    datum = satake("AIII", 1, 3)
    assert datum.describe()["type"] == "A3"
    assert datum.tau(1) == 3
    assert datum.black == frozenset({2})
    assert family_uses_s("AIII")
    assert not family_uses_s("AI-1")


def test_satake_eiii_has_no_marked_vertex() -> None:
    """EIII has no white tau-fixed vertex to mark."""
    assert satake("EIII").marked == frozenset()


@pytest.mark.parametrize(
    ("family", "r", "s"),
    [("AII", 1, None), ("AIII", 2, 2), ("CI", 1, None), ("NOPE", 1, None)],
)
def test_satake_rejects(family: str, r: int, s: int | None) -> None:
    """Out-of-range parameters and unknown families raise ConfigError."""
    with pytest.raises(ConfigError):
        satake(family, r, s)


def test_table_entries_are_valid() -> None:
    """Every enumerated entry passes validation."""
    data = table(1, 1)
    assert all(validate_datum(d) == [] for d in data)
    families = {d.family for d in data}
    assert {"AI-1", "AIII", "EIII", "G"} <= families
    assert families <= set(FAMILIES)


def test_theta_lattice_aiii() -> None:
    """Q^theta of AIII(1, 3) is spanned by alpha_1 - alpha_3 and alpha_2."""
    lattice = theta_lattice(satake("AIII", 1, 3))
    assert lattice.basis == ((1, 0, -1), (0, 1, 0))


def test_theta_lattice_split_sl3() -> None:
    """For AI-1 at r = 1 only the marked functional survives."""
    lattice = theta_lattice(satake("AI-1", 1))
    assert lattice.basis == ()
    assert lattice.beta(2) == {"b1": Fraction(0)}
    assert lattice.b_dual(1) == {"b1": Fraction(1)}


def test_combine() -> None:
    """Linear combinations of weights."""
    result = combine((2, {"a": Fraction(1)}), (-1, {"a": Fraction(1), "b": Fraction(3)}))
    assert result == {"a": Fraction(1), "b": Fraction(-3)}
