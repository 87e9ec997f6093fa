"""Tests for the case studies and the classification of highest weight records."""

from dataclasses import replace
from fractions import Fraction

import pytest

from iquantum import hwt
from iquantum.cartan import satake
from iquantum.iqrep import verify_presentation
from iquantum.linalg import ExactMatrix
from iquantum.scalar import ONE, const
from iquantum.utils.shared import FAIL, PASS, ConfigError, evaluate_check


@pytest.fixture(scope="module")
def ai_odd() -> hwt.CaseStudy:
    """The AI case on sl3, k = so3."""
    return hwt.build_case("AI-odd", 1)


@pytest.fixture(scope="module")
def ai_odd_v(ai_odd: hwt.CaseStudy) -> hwt.CaseWorkspace:
    """The AI case on the vector representation of sl3."""
    return hwt.case_action(ai_odd, hwt.case_module(ai_odd))


def _classified(case: hwt.CaseStudy, ws: hwt.CaseWorkspace) -> list[hwt.HWRecord]:
    return [hwt.classify(rec, case) for rec in hwt.highest_weight_records(case, ws)]


@pytest.mark.parametrize(("tag", "r"), [("NOPE", 1), ("AII", 1), ("AI-odd", 4), ("AI-even", 1)])
def test_build_case_rejects(tag: str, r: int) -> None:
    """Unknown tags and ranks outside the case's range are configuration errors."""
    with pytest.raises(ConfigError):
        hwt.build_case(tag, r)


def test_case_manifest(ai_odd: hwt.CaseStudy) -> None:
    """The manifest names the operator sets and the Cartan matrix of k."""
    manifest = ai_odd.manifest()
    assert manifest["case"] == "AI-odd"
    assert manifest["raising"] == ["B2,+"]
    assert manifest["ladder"] == ["B1"]
    assert manifest["k_cartan"] == [[2]]


def test_case_module_defaults(ai_odd: hwt.CaseStudy) -> None:
    """Cases and bare data both default to the vector representation."""
    assert hwt.case_module(ai_odd).dim == 3
    assert hwt.case_module(satake("AI-2", 1)).dim == 2
    assert hwt.case_module(ai_odd, "VV", 0).dim == 6


def test_case_module_constituent_out_of_range(ai_odd: hwt.CaseStudy) -> None:
    """Constituent indices are checked against the decomposition."""
    with pytest.raises(ConfigError, match="out of range"):
        hwt.case_module(ai_odd, "VV", 5)


def test_joint_kernel_and_stable_subspace() -> None:
    """The empty family keeps the whole space; unstable directions are dropped."""
    assert hwt.joint_kernel([], 3) == ExactMatrix.identity(3)
    raising = ExactMatrix.from_rows([[0, 1], [0, 0]])
    e1 = ExactMatrix.from_rows([[1], [0]])
    e2 = ExactMatrix.from_rows([[0], [1]])
    assert hwt.stable_subspace(e1, [raising]).cols == 1
    assert hwt.stable_subspace(e2, [raising]).cols == 0


def test_ai_relations_on_vector(ai_odd: hwt.CaseStudy, ai_odd_v: hwt.CaseWorkspace) -> None:
    """The AI relation table holds on V."""
    results = [evaluate_check(c) for c in hwt.verify_case_relations(ai_odd, ai_odd_v)]
    assert [r.check_id for r in results if not r.passed] == []


def test_ai_vector_is_spin_one(ai_odd: hwt.CaseStudy, ai_odd_v: hwt.CaseWorkspace) -> None:
    """V of sl3 restricts to the three-dimensional so3-module."""
    records = _classified(ai_odd, ai_odd_v)
    assert len(records) == 1
    record = records[0]
    assert record.verdict == PASS
    assert record.coords == {"b1": Fraction(1)}
    assert record.labels == (Fraction(2),)
    assert record.k_dim == 3
    assert record.to_dict()["verdict"] == PASS


def test_ai_adjoint_splits(ai_odd: hwt.CaseStudy) -> None:
    """The adjoint representation of sl3 restricts to so3-modules of dimensions 3 and 5."""
    module = hwt.case_module(ai_odd, "VVV", 1)
    assert module.dim == 8
    records = _classified(ai_odd, hwt.case_action(ai_odd, module))
    assert all(rec.verdict == PASS for rec in records)
    assert sorted(rec.k_dim or 0 for rec in records) == [3, 5]


def test_aii_vector() -> None:
    """V of sl4 restricts to the four-dimensional sp4-module."""
    case = hwt.build_case("AII", 2)
    records = _classified(case, hwt.case_action(case, hwt.case_module(case)))
    assert len(records) == 1
    assert records[0].verdict == PASS
    assert records[0].labels == (Fraction(0), Fraction(1))
    assert records[0].k_dim == 4


@pytest.mark.parametrize(
    ("value", "reason"),
    [
        (const(3), "not of ladder form"),
        (-ONE, "not dominant"),
    ],
)
def test_classify_failures(ai_odd: hwt.CaseStudy, value: object, reason: str) -> None:
    """Eigenvalues off the ladder or with negative labels fail."""
    record = hwt.HWRecord(ExactMatrix.zeros(3, 1), {}, {"B1": value})  # type: ignore[dict-item]
    result = hwt.classify(record, ai_odd)
    assert result.verdict == FAIL
    assert reason in result.reason


def test_record_status_key(ai_odd: hwt.CaseStudy) -> None:
    """Records can name their verdict field."""
    record = hwt.HWRecord(ExactMatrix.zeros(3, 1), {"B1": None}, {"B1": ONE})
    data = record.to_dict(key="status")
    assert data["status"] == "UNCLASSIFIED"
    assert "verdict" not in data
    assert data["w_eigs"] == {"B1": None}


def test_kdim_oracle(ai_odd: hwt.CaseStudy) -> None:
    """Weyl's formula on the Cartan matrix of k."""
    assert hwt.kdim_oracle(ai_odd, (2,)) == 3
    assert hwt.kdim_oracle(hwt.build_case("AI-even", 2), (1, 1)) == 4


def test_branch_report_ai(ai_odd: hwt.CaseStudy) -> None:
    """Complete reducibility and the branching oracle on V."""
    report = hwt.branch_report(ai_odd, hwt.case_module(ai_odd), quiet=True)
    assert report.passed
    assert [c.check_id for c in report.checks] == ["records:verdicts", "records:dimension", "records:oracle"]
    assert len(report.records) == 1


RELATION_CASES = [
    ("AI-odd", 1),
    ("AI-even", 2),
    ("AII", 2),
    ("AIII-split", 1),
    ("AIII-split", 2),
    ("AIII-even", 2),
]


@pytest.fixture(scope="module", params=RELATION_CASES, ids=[f"{tag}-r{r}" for tag, r in RELATION_CASES])
def case_on_v(request: pytest.FixtureRequest) -> tuple[hwt.CaseStudy, hwt.CaseWorkspace]:
    """Every case study on its default module."""
    case = hwt.build_case(*request.param)
    return case, hwt.case_action(case, hwt.case_module(case))


def _failures(checks: list) -> list[str]:
    return [f"{r.check_id}: {r.witness}" for r in map(evaluate_check, checks) if not r.passed]


def test_case_relation_tables(case_on_v: tuple[hwt.CaseStudy, hwt.CaseWorkspace]) -> None:
    """Relation tables, ladder identities and pairing matrices hold exactly."""
    case, ws = case_on_v
    assert _failures(hwt.verify_case_relations(case, ws)) == []


def test_case_lemmas(case_on_v: tuple[hwt.CaseStudy, hwt.CaseWorkspace]) -> None:
    """Symmetry images of t_j and the commutator lemmas hold."""
    case, ws = case_on_v
    assert _failures(hwt.commuting_lemmas(case, ws)) == []


def test_split_pair_mixed_relations() -> None:
    """The relations through f_{r-1,r} and e_{r-1,r} carry no stray half powers of q."""
    case = hwt.build_case("AIII-split", 2)
    ws = hwt.case_action(case, hwt.case_module(case))
    results = {r.check_id: r for r in map(evaluate_check, hwt.verify_case_relations(case, ws))}
    assert results["[e_r,t_p]"].passed
    assert results["[t_p,f_r]"].passed


def test_symmetry_moves_t_down() -> None:
    """T_1(t_2) = t_1 on the split pair of rank two."""
    case = hwt.build_case("AIII-split", 2)
    ws = hwt.case_action(case, hwt.case_module(case))
    results = {r.check_id: r for r in map(evaluate_check, hwt.commuting_lemmas(case, ws))}
    assert results["T1(t2)"].passed


def test_branch_with_zero_ladder_eigenvalue(ai_odd: hwt.CaseStudy) -> None:
    """V (x) V of sl3 has an so3-invariant; its zero eigenvalue is classified."""
    report = hwt.branch_report(ai_odd, hwt.case_module(ai_odd, "VV"), quiet=True)
    assert report.passed
    assert sorted(rec["k_dim"] for rec in report.records) == [1, 3, 5]


def test_duality_audit(ai_odd: hwt.CaseStudy, ai_odd_v: hwt.CaseWorkspace) -> None:
    """The dual of V restricts to the same so3-module."""
    assert _failures(hwt.duality_audit(ai_odd, ai_odd_v)) == []


def test_bi_conjecture_rank_one() -> None:
    """The BI relation table holds on the vector representation of so5."""
    report = hwt.bi_conjecture_check(1, quiet=True)
    assert report.checks
    assert report.passed
    assert report.notes[0].startswith("joint kernel of X has dimension")
    assert all(rec["status"] == "UNCLASSIFIED" for rec in report.records)


def test_corrupted_matrix_fails(ai_odd: hwt.CaseStudy, ai_odd_v: hwt.CaseWorkspace) -> None:
    """Changing one entry of B_1 breaks the presentation and the case relations."""
    a = ai_odd_v.action
    bump = ExactMatrix.from_dict((a.dim, a.dim), {(0, 0): ONE})
    broken = replace(a, gens={**a.gens, "B1": a.gens["B1"] + bump})
    for checks in (verify_presentation(broken), hwt.verify_case_relations(ai_odd, ai_odd.workspace(broken))):
        failed = [r for r in map(evaluate_check, checks) if r.status == FAIL]
        assert failed
        assert any(r.witness not in {None, "0"} for r in failed)
