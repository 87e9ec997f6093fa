"""Tests for the check runner, reports and run configuration."""

import csv
import json
from pathlib import Path

import pytest

from iquantum.linalg import ExactMatrix
from iquantum.scalar import ONE, q
from iquantum.utils.shared import (
    ERROR,
    FAIL,
    PASS,
    Check,
    CheckResult,
    ConfigError,
    ContractError,
    Report,
    RunConfig,
    evaluate_check,
    load_config,
    run_checks,
    sanitize_for_json,
    serialize_report,
    write_report,
)


def _raise_contract() -> bool:
    raise ContractError("outside the precondition")


def _raise_runtime() -> bool:
    raise RuntimeError("boom")


@pytest.mark.parametrize(
    ("compute", "status"),
    [
        (lambda: True, PASS),
        (lambda: False, FAIL),
        (lambda: ExactMatrix.zeros(2, 2), PASS),
        (lambda: ExactMatrix.identity(2), FAIL),
        (_raise_contract, ERROR),
        (_raise_runtime, ERROR),
    ],
)
def test_evaluate_check_status(compute: object, status: str) -> None:
    """Booleans, residual matrices and exceptions map to a status."""
    result = evaluate_check(Check("id", "anchor", compute))  # type: ignore[arg-type]
    assert result.status == status
    assert result.check_id == "id"


def test_evaluate_check_witness() -> None:
    """A nonzero residual records a witness entry."""
    residual = ExactMatrix.from_dict((2, 2), {(1, 0): q - ONE})
    result = evaluate_check(Check("id", "anchor", lambda: residual))
    assert result.status == FAIL
    assert result.witness is not None
    assert result.witness.startswith("(1, 0)")


@pytest.mark.parametrize("workers", [1, 3])
def test_run_checks_keeps_order(workers: int) -> None:
    """Results come back in input order for any worker count."""
    checks = [Check(f"c{n}", "", lambda n=n: n % 2 == 0) for n in range(6)]
    results = run_checks(checks, "test", workers=workers, quiet=True)
    assert [r.check_id for r in results] == [f"c{n}" for n in range(6)]
    assert [r.passed for r in results] == [True, False, True, False, True, False]


def test_run_checks_rejects_bad_workers() -> None:
    """Worker counts below one are a configuration error."""
    with pytest.raises(ConfigError, match="workers"):
        run_checks([], "test", workers=0, quiet=True)


def test_report_passed_and_summary() -> None:
    """A report passes only when checks and record verdicts pass."""
    report = Report("demo", "verify-relations")
    report.extend([CheckResult("a", "", PASS), CheckResult("b", "", PASS)])
    assert report.passed
    report.records.append({"verdict": FAIL})
    assert not report.passed
    report.records[0]["verdict"] = PASS
    report.extend([CheckResult("c", "", ERROR, "boom")])
    assert not report.passed
    assert report.summary() == {PASS: 2, FAIL: 0, ERROR: 1, "records": 1}


def test_records_without_verdict_do_not_fail() -> None:
    """Records carrying a status field instead of a verdict are informational."""
    report = Report("demo", "branch", records=[{"status": FAIL}])
    assert report.passed


def test_sanitize_for_json() -> None:
    """Keys become strings and unknown values their string form."""
    data = {1: (q, None, [True, 2.5])}
    assert sanitize_for_json(data) == {"1": [str(q), None, [True, 2.5]]}


def test_serialize_report() -> None:
    """Reports serialize with a schema version and a summary."""
    report = Report("demo", "table", {"case": "AI-odd"}, [CheckResult("a", "x", PASS)])
    data = json.loads(serialize_report(report))
    assert data["schema_version"] == "1.0"
    assert data["passed"] is True
    assert data["summary"]["PASS"] == 1
    assert data["checks"][0] == {"check_id": "a", "anchor": "x", "status": PASS, "witness": None}


def test_serialize_report_handles_error(monkeypatch: pytest.MonkeyPatch) -> None:
    """A serialization failure falls back to a minimal document."""
    calls = []
    original = json.dumps

    def flaky_dumps(obj: object, **kwargs: object) -> str:
        calls.append(obj)
        if len(calls) == 1:
            raise TypeError("not serializable")
        return original(obj, **kwargs)  # type: ignore[arg-type]

    monkeypatch.setattr(json, "dumps", flaky_dumps)
    data = json.loads(serialize_report(Report("demo", "table")))
    assert data == {"schema_version": "1.0", "name": "demo", "error": "serialization failed"}


def test_write_report(tmp_path: Path) -> None:
    """JSON and CSV files are written next to each other."""
    report = Report("demo", "table", checks=[CheckResult("a", "x", FAIL, "(0, 0) = 1")])
    json_path, csv_path = write_report(report, tmp_path / "out")
    assert json_path == tmp_path / "out" / "demo.json"
    assert json.loads(json_path.read_text())["passed"] is False
    with csv_path.open() as handle:
        rows = list(csv.DictReader(handle))
    assert rows == [{"check_id": "a", "anchor": "x", "status": FAIL, "witness": "(0, 0) = 1"}]


def test_run_config_updated() -> None:
    """Overrides apply unless they are None."""
    config = RunConfig().updated({"case": "AII", "r": 2, "bound": None})
    assert (config.case, config.r, config.bound) == ("AII", 2, None)
    assert config.output_dir == "reports"


def test_run_config_rejects_unknown_keys() -> None:
    """Unknown keys are a configuration error."""
    with pytest.raises(ConfigError, match="colour"):
        RunConfig().updated({"colour": "blue"})


@pytest.mark.parametrize(
    "overrides",
    [
        {"r": "two"},
        {"workers": "2"},
        {"quiet": "yes"},
        {"r": True},
        {"params": ["varsigma"]},
        {"params": {"varsigma": {"1": 0.5}}},
        {"tensor": 3},
    ],
)
def test_run_config_rejects_wrong_types(overrides: dict) -> None:
    """Values must match the field types."""
    with pytest.raises(ConfigError, match="expects"):
        RunConfig().updated(overrides)


def test_run_config_accepts_optional_fields() -> None:
    """Optional fields take their declared type."""
    config = RunConfig().updated({"s": 3, "tensor": "VV", "params": {"varsigma": {"1": "q^-1"}}, "quiet": True})
    assert (config.s, config.tensor, config.quiet) == (3, "VV", True)


def test_load_config(tmp_path: Path) -> None:
    """A JSON object is merged into the defaults."""
    assert load_config(None) == RunConfig()
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"case": "AIII-split", "r": 2, "workers": 2}))
    config = load_config(path)
    assert (config.case, config.r, config.workers) == ("AIII-split", 2, 2)


@pytest.mark.parametrize("content", ["{not json", "[1, 2]", '{"unknown": 1}'])
def test_load_config_errors(tmp_path: Path, content: str) -> None:
    """Malformed files raise ConfigError."""
    path = tmp_path / "run.json"
    path.write_text(content)
    with pytest.raises(ConfigError):
        load_config(path)


def test_load_config_missing_file(tmp_path: Path) -> None:
    """A missing file is a configuration error."""
    with pytest.raises(ConfigError, match="Cannot read"):
        load_config(tmp_path / "absent.json")
