"""Shared utilities: errors, run configuration, check runners and report files.

This module is used by every audit. It holds the exception hierarchy, the
``RunConfig`` loaded from JSON, the loop that evaluates named checks with a
progress bar, and the JSON/CSV writers for reports.
"""

from __future__ import annotations

import csv
import json
import logging
import types
from collections.abc import Callable, Iterable, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Protocol, Union, get_args, get_origin, get_type_hints

from tqdm import tqdm

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1.0"

PASS = "PASS"
FAIL = "FAIL"
ERROR = "ERROR"

# Error messages
ERR_UNKNOWN_CONFIG_KEYS = "Unknown configuration keys: {}"
ERR_CONFIG_NOT_OBJECT = "Configuration file must contain a JSON object"
ERR_CONFIG_READ = "Cannot read configuration file {}: {}"
ERR_BAD_WORKERS = "workers must be a positive integer, got {}"
ERR_CONFIG_TYPE = "Configuration key {!r} expects {}, got {!r}"


class IQuantumError(Exception):
    """Base class for all errors raised by iquantum."""


class ConfigError(IQuantumError, ValueError):
    """Invalid run configuration, unknown case tag or invalid rank."""


class ContractError(IQuantumError, ValueError):
    """An operation was called outside its precondition."""


class UnsupportedCaseError(IQuantumError, NotImplementedError):
    """No formula or relation table is available for the requested case."""


class NotIntegralError(IQuantumError, ArithmeticError):
    """A scalar required to be regular at q = 1 has a pole there."""


class Residual(Protocol):
    """Anything a check may return besides a bool (an ExactMatrix in practice)."""

    @property
    def is_zero(self) -> bool:
        """bool: Whether the residual vanishes."""
        ...

    def witness(self) -> str:
        """Describe one nonzero entry."""
        ...


@dataclass
class CheckResult:
    """Outcome of one named identity check."""

    check_id: str
    anchor: str
    status: str
    witness: str | None = None

    @property
    def passed(self) -> bool:
        """bool: Whether the check passed."""
        return self.status == PASS


@dataclass(frozen=True)
class Check:
    """A named identity whose residual is computed lazily."""

    check_id: str
    anchor: str
    compute: Callable[[], Residual | bool]


def evaluate_check(check: Check) -> CheckResult:
    """Evaluate a single check.

    A residual that is exactly zero (or ``True``) passes. Exceptions are logged
    and recorded as ERROR so that the remaining checks still run.

    Args:
        check: The check to evaluate

    Returns:
        CheckResult: PASS, FAIL with a witness, or ERROR with the message
    """
    try:
        value = check.compute()
    except IQuantumError as e:
        logger.warning("Check %s could not be evaluated: %s", check.check_id, e)
        return CheckResult(check.check_id, check.anchor, ERROR, str(e))
    except Exception as e:
        logger.exception("Check %s raised", check.check_id)
        return CheckResult(check.check_id, check.anchor, ERROR, repr(e))
    if isinstance(value, bool):
        return CheckResult(check.check_id, check.anchor, PASS if value else FAIL)
    if value.is_zero:
        return CheckResult(check.check_id, check.anchor, PASS)
    return CheckResult(check.check_id, check.anchor, FAIL, value.witness())


def run_checks(
    checks: Sequence[Check],
    desc: str,
    workers: int = 1,
    quiet: bool = False,
) -> list[CheckResult]:
    """Evaluate checks in order, optionally on a thread pool.

    Args:
        checks: Checks to evaluate
        desc: Progress bar label
        workers: Number of worker threads; 1 evaluates inline
        quiet: Disable the progress bar

    Returns:
        list[CheckResult]: Results in the order of ``checks``
    """
    if workers < 1:
        raise ConfigError(ERR_BAD_WORKERS.format(workers))
    results: list[CheckResult] = []
    with tqdm(total=len(checks), desc=desc, disable=quiet) as pbar:
        if workers == 1:
            for check in checks:
                results.append(evaluate_check(check))
                pbar.update(1)
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                for result in pool.map(evaluate_check, checks):
                    results.append(result)
                    pbar.update(1)
    failed = sum(not r.passed for r in results)
    logger.info("%s: %d/%d checks passed", desc, len(results) - failed, len(results))
    return results


@dataclass
class Report:
    """A machine-readable audit report."""

    name: str
    subcommand: str
    config: dict[str, Any] = field(default_factory=dict)
    checks: list[CheckResult] = field(default_factory=list)
    records: list[dict[str, Any]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """bool: True when every check passed and no record carries a failing verdict."""
        return all(c.passed for c in self.checks) and all(r.get("verdict", PASS) == PASS for r in self.records)

    def extend(self, results: Iterable[CheckResult]) -> None:
        """Append check results.

        Args:
            results: Results to append
        """
        self.checks.extend(results)

    def summary(self) -> dict[str, int]:
        """Count results by status.

        Returns:
            dict[str, int]: Status -> count, plus the record count
        """
        counts = {PASS: 0, FAIL: 0, ERROR: 0}
        for check in self.checks:
            counts[check.status] = counts.get(check.status, 0) + 1
        counts["records"] = len(self.records)
        return counts

    def to_dict(self) -> dict[str, Any]:
        """Build the JSON document for this report.

        Returns:
            dict[str, Any]: Report data with schema version and summary
        """
        return {
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "subcommand": self.subcommand,
            "config": self.config,
            "passed": self.passed,
            "summary": self.summary(),
            "checks": [asdict(c) for c in self.checks],
            "records": self.records,
            "notes": self.notes,
        }


def sanitize_for_json(data: Any) -> Any:  # noqa: ANN401
    """Recursively replace values json cannot encode with their string form.

    Args:
        data: Value to sanitize

    Returns:
        Any: JSON-encodable structure
    """
    if isinstance(data, Mapping):
        return {str(k): sanitize_for_json(v) for k, v in data.items()}
    if isinstance(data, list | tuple):
        return [sanitize_for_json(v) for v in data]
    if data is None or isinstance(data, str | int | float | bool):
        return data
    return str(data)


def serialize_report(report: Report) -> str:
    """Serialize a report to JSON with fallback handling.

    Args:
        report: Report to serialize

    Returns:
        str: JSON string representation of the report
    """
    try:
        return json.dumps(sanitize_for_json(report.to_dict()), indent=2)
    except (TypeError, ValueError):
        logger.exception("Error serializing report %s", report.name)
        return json.dumps({"schema_version": SCHEMA_VERSION, "name": report.name, "error": "serialization failed"})


def write_report(report: Report, output_dir: Path) -> tuple[Path, Path]:
    """Write ``<name>.json`` and a ``<name>.csv`` summary of the checks.

    Args:
        report: Report to write
        output_dir: Directory receiving the files

    Returns:
        tuple[Path, Path]: Paths of the JSON and CSV files
    """
    output_dir.mkdir(parents=True, exist_ok=True)
    json_path = output_dir / f"{report.name}.json"
    json_path.write_text(serialize_report(report))

    csv_path = output_dir / f"{report.name}.csv"
    columns = [f.name for f in fields(CheckResult)]
    with csv_path.open("w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=columns)
        writer.writeheader()
        for check in report.checks:
            writer.writerow(asdict(check))
    logger.info("Wrote %s and %s", json_path, csv_path)
    return json_path, csv_path


@dataclass
class RunConfig:
    """Configuration of one CLI run; JSON keys match the field names."""

    case: str = "AI-odd"
    r: int = 1
    s: int | None = None
    tensor: str | None = None
    constituent: int | None = None
    suite: str = "all"
    params: dict[str, dict[str, str]] = field(default_factory=dict)
    bound: int | None = None
    output_dir: str = "reports"
    workers: int = 1
    quiet: bool = False
    matrix_dump: bool = False

    def updated(self, overrides: Mapping[str, Any]) -> RunConfig:
        """Return a copy with non-None overrides applied.

        Args:
            overrides: Field values taking precedence, typically CLI flags

        Returns:
            RunConfig: The merged configuration
        """
        data = asdict(self)
        unknown = set(overrides) - set(data)
        if unknown:
            raise ConfigError(ERR_UNKNOWN_CONFIG_KEYS.format(", ".join(sorted(unknown))))
        hints = get_type_hints(RunConfig)
        for key, value in overrides.items():
            if value is not None and not _matches(value, hints[key]):
                raise ConfigError(ERR_CONFIG_TYPE.format(key, hints[key], value))
        data.update({k: v for k, v in overrides.items() if v is not None})
        return RunConfig(**data)


def _matches(value: object, hint: Any) -> bool:  # noqa: ANN401
    origin = get_origin(hint)
    if origin in {Union, types.UnionType}:
        return any(_matches(value, arg) for arg in get_args(hint))
    if origin is dict:
        key_type, value_type = get_args(hint)
        return isinstance(value, dict) and all(
            _matches(k, key_type) and _matches(v, value_type) for k, v in value.items()
        )
    if hint is type(None):
        return value is None
    if hint is int:
        return isinstance(value, int) and not isinstance(value, bool)
    return isinstance(value, hint)


def load_config(path: Path | None) -> RunConfig:
    """Load a RunConfig from a JSON file; ``None`` gives the defaults.

    Args:
        path: JSON file with a single object

    Returns:
        RunConfig: Parsed configuration
    """
    if path is None:
        return RunConfig()
    try:
        raw = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(ERR_CONFIG_READ.format(path, e)) from e
    if not isinstance(raw, dict):
        raise ConfigError(ERR_CONFIG_NOT_OBJECT)
    return RunConfig().updated(raw)
