"""Tests for the command line entry point."""

import json
from pathlib import Path

import pytest

from iquantum import hwt
from iquantum.__main__ import (
    EXIT_CONFIG,
    EXIT_FAIL,
    EXIT_OK,
    SUBCOMMANDS,
    build_parser,
    main,
    parse_lambda,
    parse_params,
)
from iquantum.cartan import satake
from iquantum.scalar import qpow
from iquantum.utils.shared import ConfigError


def _run(tmp_path: Path, *args: str) -> int:
    return main([*args, "--output-dir", str(tmp_path), "--quiet"])


def test_parser_lists_subcommands() -> None:
    """Every audit is a subcommand; the BI audit answers to both of its names."""
    assert SUBCOMMANDS["conjecture46"] is SUBCOMMANDS["bi-conjecture"]
    assert hwt.conjecture46_check is hwt.bi_conjecture_check
    assert build_parser().parse_args(["conjecture46"]).subcommand == "conjecture46"
    args = build_parser().parse_args(["bi-conjecture", "--r", "2"])
    assert args.subcommand == "bi-conjecture"
    assert args.r == 2


def test_parse_params() -> None:
    """Vertex keys become integers and values exact scalars."""
    parsed = parse_params({"varsigma": {"1": "q^-1"}})
    assert parsed == {"varsigma": {1: qpow(-1)}}


@pytest.mark.parametrize(
    "raw",
    [
        {"sigma": {"1": "q"}},
        {"varsigma": {"one": "q"}},
        {"varsigma": {"1": "x + 1"}},
    ],
)
def test_parse_params_errors(raw: dict[str, dict[str, str]]) -> None:
    """Unknown families, vertices and scalars are configuration errors."""
    with pytest.raises(ConfigError):
        parse_params(raw)


def test_parse_lambda() -> None:
    """Labels are read as integers; 'adjoint' gives the highest root."""
    datum = satake("AI-1", 1)
    assert parse_lambda("2,0", datum) == (2, 0)
    assert parse_lambda("adjoint", datum) == (1, 1)


@pytest.mark.parametrize("text", ["a,b", "1", "1,2,3"])
def test_parse_lambda_errors(text: str) -> None:
    """Malformed labels and wrong lengths are configuration errors."""
    with pytest.raises(ConfigError):
        parse_lambda(text, satake("AI-1", 1))


def test_table_writes_report(tmp_path: Path) -> None:
    """The table subcommand writes the Satake table."""
    assert _run(tmp_path, "table") in {EXIT_OK, EXIT_FAIL}
    data = json.loads((tmp_path / "satake_table.json").read_text())
    assert data["subcommand"] == "table"
    assert data["records"]


def test_verify_relations_case_suite(tmp_path: Path) -> None:
    """The AI relation table on V passes and both report files are written."""
    assert _run(tmp_path, "verify-relations", "--case", "AI-odd", "--r", "1", "--suite", "case") == EXIT_OK
    assert len(list(tmp_path.glob("relations_AI-odd_r1_*.json"))) == 1
    assert len(list(tmp_path.glob("relations_AI-odd_r1_*.csv"))) == 1


@pytest.mark.parametrize(
    "args",
    [
        ["branch", "--case", "AI-1"],
        ["verify-relations", "--suite", "everything"],
        ["branch", "--case", "AI-odd", "--r", "7"],
        ["branch", "--tensor", "VV", "--constituent", "9"],
    ],
)
def test_configuration_errors(tmp_path: Path, args: list[str]) -> None:
    """Bad cases, suites, ranks and constituents exit with the configuration code."""
    assert _run(tmp_path, *args) == EXIT_CONFIG


def test_malformed_config_file(tmp_path: Path) -> None:
    """An unreadable config file exits with the configuration code."""
    config = tmp_path / "config.json"
    config.write_text("{not json")
    assert _run(tmp_path, "table", "--config", str(config)) == EXIT_CONFIG


def test_branch_adjoint(tmp_path: Path) -> None:
    """The adjoint of sl3 branches to so3-modules of dimensions 3 and 5."""
    assert _run(tmp_path, "branch", "--case", "AI-odd", "--r", "1", "--lambda", "adjoint") == EXIT_OK
    (path,) = tmp_path.glob("branch_AI-odd_r1_*.json")
    records = json.loads(path.read_text())["records"]
    assert sorted(rec["k_dim"] for rec in records) == [3, 5]


@pytest.mark.parametrize("content", [{"r": "two"}, {"workers": "2"}, {"params": ["varsigma"]}])
def test_config_file_with_wrong_types(tmp_path: Path, content: dict) -> None:
    """Config values of the wrong type exit with the configuration code."""
    config = tmp_path / "config.json"
    config.write_text(json.dumps(content))
    assert _run(tmp_path, "table", "--config", str(config)) == EXIT_CONFIG


def test_verify_relations_aii_on_vv(tmp_path: Path) -> None:
    """The full relation audit of AII at r = 2 passes on V (x) V."""
    assert _run(tmp_path, "verify-relations", "--case", "AII", "--r", "2", "--tensor", "VV") == EXIT_OK
    (path,) = tmp_path.glob("relations_AII_r2_*.json")
    data = json.loads(path.read_text())
    assert data["passed"]
    assert data["summary"]["FAIL"] == 0
