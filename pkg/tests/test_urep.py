"""Tests for U_q(g)-modules: tensor products, constituents and the classical limit."""

from collections import Counter

import pytest

from iquantum.linalg import ExactMatrix
from iquantum.scalar import ONE, q
from iquantum.urep import (
    ModuleRep,
    character_matches,
    classical_limit,
    constituents,
    highest_weight_vectors,
    limit_matrix,
    module_from_word,
    sign_rep,
    tensor,
    tensor_power,
    trivial_rep,
    vector_rep,
    vector_rep_b,
    vector_rep_d,
    verify_classical_relations,
    verify_quantum_relations,
    weight_multiset,
)
from iquantum.utils.shared import ContractError, NotIntegralError, UnsupportedCaseError, evaluate_check


def _all_pass(checks: list) -> bool:
    return all(evaluate_check(c).passed for c in checks)


@pytest.mark.parametrize(
    "module",
    [vector_rep(2), vector_rep(3), vector_rep_b(2), vector_rep_d(3), module_from_word("VV", "A", 1)],
    ids=["sl2", "sl3", "so5", "so6", "sl2-VV"],
)
def test_quantum_relations_hold(module: ModuleRep) -> None:
    """The defining relations of U_q(g) hold on the built modules."""
    assert _all_pass(verify_quantum_relations(module))


def test_vector_rep_shapes() -> None:
    """Dimensions and ranks of the vector representations."""
    assert (vector_rep(3).dim, vector_rep(3).rank) == (3, 2)
    assert (vector_rep_b(2).dim, vector_rep_b(2).kind) == (5, "B")
    assert (vector_rep_d(3).dim, vector_rep_d(3).kind) == (6, "D")
    with pytest.raises(ContractError):
        vector_rep(1)


def test_sign_and_trivial() -> None:
    """One-dimensional modules act by a sign on K."""
    minus = sign_rep(-1)
    assert minus.dim == 1
    assert minus.k_matrix((1,)) == ExactMatrix.diag([-ONE])
    assert trivial_rep().k_matrix((1,)) == ExactMatrix.identity(1)
    assert tensor_power(vector_rep(2), 0).dim == 1


def test_tensor_weights() -> None:
    """Weights add in a tensor product."""
    vv = tensor(vector_rep(2), vector_rep(2))
    assert vv.dim == 4
    assert vv.provenance == "VV"
    assert weight_multiset(vv) == Counter({(2,): 1, (0,): 2, (-2,): 1})


def test_tensor_rank_mismatch() -> None:
    """Modules of different types cannot be tensored."""
    with pytest.raises(ContractError):
        tensor(vector_rep(2), vector_rep(3))


def test_highest_weight_vectors_of_vv() -> None:
    """V (x) V of sl2 has highest weights 2 and 0."""
    vv = module_from_word("VV", "A", 1)
    assert [hw.weight for hw in highest_weight_vectors(vv)] == [(2,), (0,)]


def test_constituents_of_vv() -> None:
    """V (x) V of sl2 splits into dimensions 3 and 1."""
    parts = constituents(module_from_word("VV", "A", 1))
    assert [p.dim for p in parts] == [3, 1]
    assert [p.provenance for p in parts] == ["VV[2]", "VV[0]"]
    assert character_matches(parts[0], (2,))
    assert _all_pass(verify_quantum_relations(parts[0]))


def test_character_matches() -> None:
    """Irreducible modules match their character, reducible ones do not."""
    assert character_matches(vector_rep(3), (1, 0))
    assert not character_matches(module_from_word("VV", "A", 1), (2,))


@pytest.mark.parametrize(("word", "error"), [("", ContractError), ("VX", ContractError)])
def test_module_from_word_errors(word: str, error: type[Exception]) -> None:
    """Empty words and unknown letters are rejected."""
    with pytest.raises(error):
        module_from_word(word, "A", 1)


def test_module_from_word_unsupported_type() -> None:
    """No vector representation is built for type C."""
    with pytest.raises(UnsupportedCaseError):
        module_from_word("V", "C", 2)


def test_module_from_word_sign_letters() -> None:
    """The letters 1 and - give one-dimensional factors."""
    module = module_from_word("V-", "A", 1)
    assert module.dim == 2
    assert module.signs == ((-1,), (-1,))


def test_classical_limit_of_sl2() -> None:
    """h is the limit of (K - 1)/(q - 1)."""
    classical = classical_limit(vector_rep(2))
    assert classical.h[0] == ExactMatrix.diag([ONE, -ONE])
    assert classical.e[0] == ExactMatrix.from_rows([[0, 1], [0, 0]])
    assert _all_pass(verify_classical_relations(classical))


def test_classical_limit_extras() -> None:
    """Extra operators are specialised alongside."""
    extra = {"B1": ExactMatrix.from_rows([[0, q], [ONE / q, 0]])}
    classical = classical_limit(vector_rep(2), extra)
    assert classical.extras["B1"] == ExactMatrix.from_rows([[0, 1], [1, 0]])


@pytest.mark.parametrize("word", ["V", "VV"])
def test_classical_relations_sl3(word: str) -> None:
    """U(sl3) relations hold at q = 1."""
    assert _all_pass(verify_classical_relations(classical_limit(module_from_word(word, "A", 2))))


def test_limit_matrix_pole() -> None:
    """Entries with a pole at q = 1 raise NotIntegralError."""
    with pytest.raises(NotIntegralError, match="pole"):
        limit_matrix("X", ExactMatrix.diag([ONE / (q - ONE)]))
