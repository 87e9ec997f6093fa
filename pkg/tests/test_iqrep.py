"""Tests for iquantum group actions, their spectra and local splittings."""

from dataclasses import replace
from fractions import Fraction

import pytest

from iquantum.cartan import SatakeDatum, satake
from iquantum.hwt import case_module
from iquantum.iqrep import (
    IThetaAction,
    braid_checks,
    braid_preset,
    case_decompose,
    coproduct_check,
    double_dual_checks,
    ell_checks,
    intertwiner,
    invertible_combination,
    iqg_action,
    l_value,
    ladder_candidates,
    lambda_pm,
    marked_preset,
    predicted_b_spectrum,
    qnumber,
    simath_square_checks,
    tprime_weights,
    uniform_preset,
    verify_presentation,
    xpm,
)
from iquantum.linalg import ExactMatrix, kernel
from iquantum.scalar import ONE, ZERO, q, qint, s
from iquantum.urep import module_from_word, vector_rep
from iquantum.utils.shared import ConfigError, ContractError, evaluate_check


def _all_pass(checks: list) -> bool:
    return all(evaluate_check(c).passed for c in checks)


@pytest.fixture(scope="module")
def sl2_datum() -> SatakeDatum:
    """The split datum of sl2."""
    return satake("AI-2", 1)


@pytest.fixture(scope="module")
def sl3_datum() -> SatakeDatum:
    """The split datum of sl3, vertex 1 marked."""
    return satake("AI-1", 1)


@pytest.fixture(scope="module")
def sl2_v(sl2_datum: SatakeDatum) -> IThetaAction:
    """B_1 on the vector representation of sl2 with varsigma = q^-1."""
    return iqg_action(vector_rep(2), sl2_datum, marked_preset(sl2_datum))


@pytest.fixture(scope="module")
def sl3_v(sl3_datum: SatakeDatum) -> IThetaAction:
    """The split iquantum group of sl3 on its vector representation."""
    return iqg_action(vector_rep(3), sl3_datum, marked_preset(sl3_datum))


def test_presets(sl2_datum: SatakeDatum) -> None:
    """Parameter presets on the white vertices."""
    assert marked_preset(sl2_datum) == {1: ONE / q}
    assert braid_preset(sl2_datum) == {1: -ONE / (q * q)}
    assert uniform_preset(sl2_datum, q) == {1: q}


def test_qnumber_half_integral() -> None:
    """[1/2] = 1 / (q^(1/2) + q^(-1/2))."""
    assert qnumber(Fraction(1, 2)) == ONE / (s + ONE / s)
    assert qnumber(2) == qint(2)


def test_ladder_candidate_order() -> None:
    """Integers come before half-integers of the same size, positive first."""
    order = list(ladder_candidates(1).values())
    assert order == [Fraction(0), Fraction(1, 2), Fraction(-1, 2), Fraction(1), Fraction(-1)]


@pytest.mark.parametrize(("a", "expected"), [(ONE, q), (-ONE, ONE / q), (ZERO, ONE), (qint(2), q * q)])
def test_l_value(a: object, expected: object) -> None:
    """l solves a = [l;0] with l positive at q = 1."""
    assert l_value(a) == expected  # type: ignore[arg-type]


def test_lambda_pm() -> None:
    """Tensoring with V splits the eigenvalue c into a pair."""
    assert lambda_pm(ZERO) == (ONE, -ONE)
    assert lambda_pm(ONE) == (qint(2), ZERO)


@pytest.mark.parametrize(
    ("n", "expected"),
    [
        (1, {ONE: 1, -ONE: 1}),
        (2, {qint(2): 1, ZERO: 2, -qint(2): 1}),
    ],
)
def test_predicted_b_spectrum(n: int, expected: dict) -> None:
    """Spectra of B on tensor powers of V."""
    spectrum = predicted_b_spectrum(n)
    assert sum(spectrum.values()) == 2**n
    for value, mult in expected.items():
        assert spectrum[value] == mult


def test_b_on_sl2_vector(sl2_v: IThetaAction) -> None:
    """B_1 swaps the two basis vectors when varsigma = q^-1."""
    assert sl2_v.b(1) == ExactMatrix.from_rows([[0, 1], [1, 0]])
    assert sl2_v.scale(1) == ONE
    assert sl2_v.ell(1) @ sl2_v.ell(1).inverse() == ExactMatrix.identity(2)


def test_b_spectrum_on_vv(sl2_datum: SatakeDatum) -> None:
    """Eigenvalue multiplicities on V (x) V follow the tensor rule."""
    a = iqg_action(module_from_word("VV", "A", 1), sl2_datum, marked_preset(sl2_datum))
    identity = ExactMatrix.identity(4)
    for value, mult in predicted_b_spectrum(2).items():
        assert kernel(a.b(1) - identity * value).cols == mult


def test_ell_checks(sl2_v: IThetaAction, sl3_v: IThetaAction) -> None:
    """B_j = [l_j;0] and the l_j identities hold."""
    assert _all_pass(ell_checks(sl2_v))
    assert _all_pass(ell_checks(sl3_v))


def test_ell_requires_marked_vertex(sl3_v: IThetaAction) -> None:
    """l_j is defined on marked vertices only."""
    with pytest.raises(ContractError):
        sl3_v.ell(2)


def test_iqg_action_errors(sl2_datum: SatakeDatum, sl3_datum: SatakeDatum) -> None:
    """Type mismatches and missing parameters are rejected."""
    with pytest.raises(ContractError):
        iqg_action(vector_rep(2), sl3_datum, marked_preset(sl3_datum))
    with pytest.raises(ConfigError):
        iqg_action(vector_rep(2), sl2_datum, {})


def test_presentation_sl3(sl3_v: IThetaAction) -> None:
    """The iSerre relations hold on the vector representation of sl3."""
    checks = verify_presentation(sl3_v)
    assert [c.check_id for c in checks] == ["S12(B)", "S21(B)"]
    assert _all_pass(checks)


@pytest.mark.parametrize("kappa", [None, {1: ONE}])
def test_coproduct_sl2(sl2_datum: SatakeDatum, kappa: dict | None) -> None:
    """Delta(B_1) on V (x) V matches both closed forms."""
    checks = coproduct_check(vector_rep(2), vector_rep(2), sl2_datum, marked_preset(sl2_datum), kappa)
    assert len(checks) == 2
    assert _all_pass(checks)


def test_coproduct_sl3(sl3_datum: SatakeDatum) -> None:
    """Delta(B_i) on V (x) V for the split sl3 datum."""
    assert _all_pass(coproduct_check(vector_rep(3), vector_rep(3), sl3_datum, marked_preset(sl3_datum)))


def test_xpm_splitting(sl3_v: IThetaAction) -> None:
    """B_2 splits along the spectrum of B_1."""
    pieces = xpm(sl3_v.b(2), sl3_v.b(1), 1, sl3_v.bound)
    assert pieces.plus + pieces.minus == sl3_v.b(2)
    assert _all_pass(pieces.checks("B2|l1"))


def test_xpm_rejects_bad_pair() -> None:
    """X must satisfy [W,[W,X]_q^a]_q^-a = X."""
    identity = ExactMatrix.identity(2)
    with pytest.raises(ContractError):
        xpm(identity, identity, 1, 2)


def test_case_decompose_sl3(sl3_v: IThetaAction) -> None:
    """B_2 has two weight components for the marked neighbour 1."""
    split = case_decompose(sl3_v, 2)
    assert split.case == "A2"
    assert [c.label for c in split.components] == ["+", "-"]
    assert _all_pass(split.checks)


def test_case_decompose_needs_normalised_varsigma(sl3_datum: SatakeDatum) -> None:
    """The splitting needs varsigma_j = q_j^-1 on marked neighbours."""
    a = iqg_action(vector_rep(3), sl3_datum, uniform_preset(sl3_datum, q))
    with pytest.raises(ContractError):
        case_decompose(a, 2)


def test_tprime_weights_sl2(sl2_v: IThetaAction) -> None:
    """The weights of V are +1 and -1."""
    weights = tprime_weights(sl2_v)
    assert weights.classical
    assert weights.names == ("B1",)
    assert weights.by_label() == {(Fraction(1),): 1, (Fraction(-1),): 1}
    assert len(weights.records()) == 2


def test_restrict_to_full_space(sl3_v: IThetaAction) -> None:
    """Restricting along the identity keeps every matrix."""
    same = sl3_v.restrict(ExactMatrix.identity(3), "copy")
    assert same.label == "copy"
    assert same.b(1) == sl3_v.b(1)
    assert same.b(2) == sl3_v.b(2)


def test_double_dual_sl2(sl2_v: IThetaAction) -> None:
    """The double dual of V is isomorphic to V."""
    checks = double_dual_checks(sl2_v)
    assert checks[-1].check_id == "(M^)^~M"
    assert _all_pass(checks)


def test_intertwiner_commutes(sl3_v: IThetaAction) -> None:
    """The self-intertwiner of V is invertible and commutes with every B_i."""
    p = intertwiner(sl3_v, sl3_v)
    assert p.rank() == 3
    for key, b in sl3_v.gens.items():
        assert p @ b == b @ p, key


def test_invertible_combination_skips_singular_sums() -> None:
    """Singular kernel vectors whose 1, 2, 3 sum is singular still give an invertible element."""
    candidates = [
        ExactMatrix.from_rows([[1, 0], [0, 0]]),
        ExactMatrix.from_rows([[0, 0], [0, 3]]),
        ExactMatrix.from_rows([[0, 0], [1, -2]]),
    ]
    assert (candidates[0] + candidates[1] * 2 + candidates[2] * 3).rank() == 1
    found = invertible_combination(candidates)
    assert found is not None
    assert found.rank() == 2


def test_invertible_combination_none() -> None:
    """A span of singular matrices gives None."""
    candidates = [ExactMatrix.from_rows([[1, 0], [0, 0]]), ExactMatrix.from_rows([[0, 1], [0, 0]])]
    assert invertible_combination(candidates) is None
    assert invertible_combination([]) is None


def test_braid_laws_split() -> None:
    """T^i_1 T^i_2 T^i_1 = T^i_2 T^i_1 T^i_2 and the commuting laws on V."""
    datum = satake("AI-2", 2)
    a = iqg_action(case_module(datum), datum, braid_preset(datum))
    checks = braid_checks(a)
    assert _all_pass(checks)
    assert {c.check_id for c in checks} >= {"T121(B1)", "T121(B3)", "T13(B2)"}


def test_braid_laws_skip_mixed_pairs() -> None:
    """On DIII only pairs with orthogonal orbits are audited, and they commute."""
    datum = satake("DIII-1", 4)
    a = iqg_action(case_module(datum), datum, braid_preset(datum))
    checks = braid_checks(a)
    assert checks
    assert not any(c.check_id.startswith(("T676", "T767")) for c in checks)
    assert all(c.anchor == "T_iT_j = T_jT_i" for c in checks)
    assert _all_pass(checks)


@pytest.mark.parametrize("fixture", ["sl2_v", "sl3_v"])
def test_simath_square(fixture: str, request: pytest.FixtureRequest) -> None:
    """(S^i)^2 fixes B_i when I_• is empty."""
    a = request.getfixturevalue(fixture)
    checks = simath_square_checks(a)
    assert len(checks) == len(a.datum.white)
    assert _all_pass(checks)


def test_presentation_detects_corrupted_matrix(sl3_v: IThetaAction) -> None:
    """A single changed entry of B_2 shows up as a failed relation with a witness."""
    bump = ExactMatrix.from_dict((3, 3), {(2, 0): ONE})
    broken = replace(sl3_v, gens={**sl3_v.gens, "B2": sl3_v.gens["B2"] + bump})
    results = [evaluate_check(c) for c in verify_presentation(broken)]
    failed = [r for r in results if not r.passed]
    assert failed
    assert all(r.witness not in {None, "0"} for r in failed)
