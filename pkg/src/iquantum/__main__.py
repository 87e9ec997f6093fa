"""Command line entry point for the iquantum audits."""

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from dataclasses import replace
from pathlib import Path

# Add the src directory to sys.path when run as a script
src_dir = Path(__file__).parent.parent
sys.path.insert(0, str(src_dir))

logger = logging.getLogger(__name__)

from iquantum import hwt
from iquantum.cartan import SatakeDatum, pairing, positive_roots, satake, table, validate_datum
from iquantum.iqrep import (
    IThetaAction,
    case_decompose,
    double_dual_checks,
    iqg_action,
    marked_preset,
    tprime_weights,
    verify_presentation,
)
from iquantum.scalar import QScalar, parse_scalar
from iquantum.urep import ModuleRep, classical_limit, constituents, highest_weight_vectors, verify_classical_relations
from iquantum.utils.shared import (
    PASS,
    Check,
    CheckResult,
    ConfigError,
    IQuantumError,
    Report,
    RunConfig,
    load_config,
    run_checks,
    write_report,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_ERROR = 3

SUITES = ("all", "presentation", "case", "lemmas")
PARAM_NAMES = ("varsigma", "kappa", "eta", "zeta")
MAX_WORD = 4

# Error messages
ERR_UNKNOWN_PARAM = "Unknown parameter family {!r}; expected one of {}"
ERR_PARAM_VERTEX = "Parameter {}[{!r}]: vertex must be an integer"
ERR_PARAM_VALUE = "Parameter {}[{}]: {}"
ERR_BAD_LAMBDA = "Cannot read highest weight {!r}: expected comma separated integers or 'adjoint'"
ERR_NO_LAMBDA = "No constituent with highest weight {} in tensor words up to length {}"
ERR_LAMBDA_RANK = "Highest weight {} has {} labels; the case has rank {}"
ERR_UNKNOWN_SUITE = "Unknown suite {!r}; expected one of {}"
ERR_NEEDS_CASE = "Subcommand {} needs a case study, one of: {}"


def parse_params(raw: dict[str, dict[str, str]]) -> dict[str, dict[int, QScalar]]:
    """Parse ``{"varsigma": {"1": "q^-1"}}`` style overrides.

    Args:
        raw: Family -> vertex -> scalar string

    Returns:
        dict[str, dict[int, QScalar]]: Parsed overrides
    """
    parsed: dict[str, dict[int, QScalar]] = {}
    for family, values in raw.items():
        if family not in PARAM_NAMES:
            raise ConfigError(ERR_UNKNOWN_PARAM.format(family, ", ".join(PARAM_NAMES)))
        parsed[family] = {}
        for vertex, text in values.items():
            try:
                index = int(vertex)
            except ValueError as e:
                raise ConfigError(ERR_PARAM_VERTEX.format(family, vertex)) from e
            try:
                parsed[family][index] = parse_scalar(str(text))
            except ValueError as e:
                raise ConfigError(ERR_PARAM_VALUE.format(family, index, e)) from e
    return parsed


def parse_lambda(text: str, datum: SatakeDatum) -> tuple[int, ...]:
    """Dynkin labels from ``"1,1"``, or the highest root for ``"adjoint"``."""
    if text == "adjoint":
        highest = positive_roots(datum.cartan)[-1]
        return tuple(int(pairing(datum.cartan, i, highest)) for i in range(datum.rank))
    try:
        labels = tuple(int(x) for x in text.split(","))
    except ValueError as e:
        raise ConfigError(ERR_BAD_LAMBDA.format(text)) from e
    if len(labels) != datum.rank:
        raise ConfigError(ERR_LAMBDA_RANK.format(text, len(labels), datum.rank))
    return labels


def module_with_highest_weight(
    case: hwt.CaseStudy | SatakeDatum,
    labels: tuple[int, ...],
    word: str | None,
) -> ModuleRep:
    """First constituent of highest weight ``labels`` in ``word`` or in V, VV, ... .

    Args:
        case: Case study or datum fixing the ambient type
        labels: Dynkin labels of the wanted highest weight
        word: Tensor word to search; None tries powers of V

    Returns:
        ModuleRep: The irreducible constituent
    """
    words = [word] if word else ["V" * n for n in range(1, MAX_WORD + 1)]
    for candidate in words:
        for part in constituents(hwt.case_module(case, candidate)):
            top = highest_weight_vectors(part)[0]
            if top.weight == labels and all(x == 1 for x in top.signs):
                logger.info("Using %s (dim %d) for highest weight %s", part.provenance, part.dim, labels)
                return part
    raise ConfigError(ERR_NO_LAMBDA.format(labels, MAX_WORD if word is None else len(word)))


class Runner:
    """Resolves a RunConfig into data, modules and actions, then runs one subcommand."""

    def __init__(self, config: RunConfig, highest: str | None = None) -> None:
        if config.suite not in SUITES:
            raise ConfigError(ERR_UNKNOWN_SUITE.format(config.suite, ", ".join(SUITES)))
        self.config = config
        self.highest = highest
        self.params = parse_params(config.params)
        self.case = self._case()

    def _case(self) -> hwt.CaseStudy | None:
        if self.config.case not in hwt.CASES:
            return None
        case = hwt.build_case(self.config.case, self.config.r)
        if "varsigma" in self.params:
            case = replace(case, varsigma={**case.varsigma, **self.params["varsigma"]})
        return case

    def require_case(self, subcommand: str) -> hwt.CaseStudy:
        """The case study, or a ConfigError when ``--case`` names a bare Satake family."""
        if self.case is None:
            raise ConfigError(ERR_NEEDS_CASE.format(subcommand, ", ".join(hwt.CASES)))
        return self.case

    @property
    def datum(self) -> SatakeDatum:
        """SatakeDatum: The case's datum, or the table entry named by ``--case``."""
        if self.case is not None:
            return self.case.datum
        return satake(self.config.case, self.config.r, self.config.s)

    def varsigma(self) -> dict[int, QScalar]:
        """Case preset, or q_i^-1 on I_∘ for a bare datum, with overrides applied."""
        base = dict(self.case.varsigma) if self.case is not None else marked_preset(self.datum)
        return {**base, **self.params.get("varsigma", {})}

    def module(self) -> ModuleRep:
        """Module named by ``--tensor``, ``--constituent`` and ``--lambda``."""
        case = self.case if self.case is not None else self.datum
        if self.highest is not None:
            return module_with_highest_weight(case, parse_lambda(self.highest, self.datum), self.config.tensor)
        return hwt.case_module(case, self.config.tensor, self.config.constituent)

    def action(self, varsigma: dict[int, QScalar] | None = None) -> IThetaAction:
        """Restriction of the module to the iquantum group of the datum."""
        return iqg_action(
            self.module(),
            self.datum,
            varsigma if varsigma is not None else self.varsigma(),
            self.params.get("kappa"),
            self.config.bound,
        )

    def checks(self, checks: Sequence[Check], desc: str) -> list[CheckResult]:
        """Run checks with the configured worker count and progress setting."""
        return run_checks(checks, desc, self.config.workers, self.config.quiet)

    def report(self, name: str, subcommand: str, action: IThetaAction | None = None) -> Report:
        """Empty report carrying the run configuration."""
        config: dict[str, object] = {"case": self.config.case, "r": self.config.r, "suite": self.config.suite}
        if self.case is not None:
            config.update(self.case.manifest())
        if action is not None:
            config.update(action.manifest())
        return Report(name, subcommand, config)

    # subcommands

    def verify_relations(self) -> Report:
        """Defining relations of the iquantum group, then the case tables and lemmas."""
        suite = self.config.suite
        if self.case is None:
            a = self.action()
            report = self.report(f"relations_{_slug(self.config.case)}_{_slug(a.label)}", "verify-relations", a)
            report.extend(self.checks(verify_presentation(a), "presentation"))
            return report
        ws = hwt.case_action(self.case, self.module(), self.config.bound)
        a = ws.action
        report = self.report(f"relations_{self.case.tag}_r{self.case.r}_{_slug(a.label)}", "verify-relations", a)
        if suite in {"all", "presentation"}:
            report.extend(self.checks(verify_presentation(a), "presentation"))
        if suite in {"all", "case"}:
            report.extend(self.checks(hwt.verify_case_relations(self.case, ws), f"{self.case.tag} relations"))
        if suite in {"all", "lemmas"}:
            report.extend(self.checks(hwt.commuting_lemmas(self.case, ws), f"{self.case.tag} lemmas"))
        self._dump(report.name, a)
        return report

    def decompose(self) -> Report:
        """Weight components of every B_i on a marked-normalised action, and the 𝔱' weights."""
        datum = self.datum
        a = self.action(marked_preset(datum))
        report = self.report(f"decompose_{_slug(datum.family)}_{_slug(a.label)}", "decompose", a)
        checks: list[Check] = []
        for i in datum.white:
            try:
                split = case_decompose(a, i)
            except IQuantumError as e:
                logger.warning("Skipping B%d: %s", i, e)
                report.notes.append(f"B{i}: {e}")
                continue
            checks.extend(split.checks)
            report.records.extend(split.records())
        report.extend(self.checks(checks, "decompose"))
        weights = tprime_weights(a)
        report.records.extend({"weight_block": rec} for rec in weights.records())
        report.notes.append(f"{len(weights.blocks)} weight blocks; classical={weights.classical}")
        by_label = weights.by_label()
        report.notes.extend(f"M{list(map(str, label))}: dim {dim}" for label, dim in sorted(by_label.items()))
        self._dump(report.name, a)
        return report

    def branch(self) -> Report:
        """Classified highest weight vectors with the dimension and oracle checks."""
        case = self.require_case("branch")
        return hwt.branch_report(case, self.module(), self.config.bound, self.config.workers, self.config.quiet)

    def classify(self) -> Report:
        """Highest weight records and their verdicts only."""
        case = self.require_case("classify")
        ws = hwt.case_action(case, self.module(), self.config.bound)
        records = [hwt.classify(rec, case) for rec in hwt.highest_weight_records(case, ws)]
        report = self.report(f"classify_{case.tag}_r{case.r}_{_slug(ws.action.label)}", "classify", ws.action)
        report.records = [rec.to_dict() for rec in records]
        checks = [
            Check(f"record:{n}", "highest weight is dominant integral", lambda rec=rec: rec.verdict == PASS)
            for n, rec in enumerate(records)
        ]
        report.extend(self.checks(checks, f"classify {case.tag}"))
        return report

    def dual(self) -> Report:
        """The dual module: presentation, double dual and (for case studies) highest weights."""
        a = self.action()
        report = self.report(f"dual_{_slug(self.config.case)}_{_slug(a.label)}", "dual", a)
        checks = double_dual_checks(a, self.params.get("eta"), self.params.get("zeta"))
        if self.case is not None and self.case.k_cartan is not None:
            checks.extend(hwt.duality_audit(self.case, a))
        report.extend(self.checks(checks, "dual"))
        return report

    def limit(self) -> Report:
        """The U(g)-relations of the module and of the B_i at q = 1."""
        a = self.action()
        if a.base is None:
            raise ConfigError(ERR_NEEDS_CASE.format("limit", "a restricted module"))
        extra = {key: m for key, m in a.gens.items() if key.startswith("B")}
        c = classical_limit(a.base, extra)
        report = self.report(f"limit_{_slug(self.config.case)}_{_slug(a.label)}", "limit", a)
        report.extend(self.checks(verify_classical_relations(c), "classical relations"))
        report.notes.extend(f"{name} at q = 1 has {m.nnz} nonzero entries" for name, m in sorted(c.extras.items()))
        return report

    def bi_conjecture(self) -> Report:
        """The BI relation table and ladder eigenvectors."""
        return hwt.bi_conjecture_check(
            self.config.r,
            self.config.tensor,
            self.config.bound,
            self.config.workers,
            self.config.quiet,
        )

    def table(self) -> Report:
        """Every Satake datum of the table with its validation verdict."""
        max_r = max(self.config.r, 3)
        report = Report("satake_table", "table", {"max_r": max_r})
        for datum in table(max_r):
            problems = validate_datum(datum)
            report.records.append({**datum.describe(), "verdict": PASS if not problems else "FAIL"})
            report.notes.extend(f"{datum.family}: {p}" for p in problems)
        logger.info("Satake table: %d data", len(report.records))
        return report

    def _dump(self, name: str, a: IThetaAction) -> None:
        if not self.config.matrix_dump:
            return
        target = Path(self.config.output_dir) / f"{name}_matrices"
        target.mkdir(parents=True, exist_ok=True)
        for key, matrix in sorted(a.gens.items()):
            (target / f"{key}.txt").write_text(matrix.dump())
        logger.info("Dumped %d matrices to %s", len(a.gens), target)


def _slug(text: str) -> str:
    return "".join(ch if ch.isalnum() else "_" for ch in text).strip("_") or "module"


SUBCOMMANDS: dict[str, Callable[[Runner], Report]] = {
    "verify-relations": Runner.verify_relations,
    "decompose": Runner.decompose,
    "branch": Runner.branch,
    "classify": Runner.classify,
    "dual": Runner.dual,
    "limit": Runner.limit,
    "conjecture46": Runner.bi_conjecture,
    "bi-conjecture": Runner.bi_conjecture,
    "table": Runner.table,
}


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per audit."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON file with RunConfig fields; flags override it")
    common.add_argument("--case", help="Case study (AI-odd, AI-even, AII, AIII-split, AIII-even, BI-conj) or family")
    common.add_argument("--r", type=int, help="Rank parameter r")
    common.add_argument("--s", type=int, help="Second rank parameter for two-parameter families")
    common.add_argument("--tensor", help="Tensor word such as V, VV or V-")
    common.add_argument("--constituent", type=int, help="Index of an irreducible constituent of the tensor word")
    common.add_argument("--lambda", dest="highest", help="Highest weight '1,1' or 'adjoint'")
    common.add_argument("--suite", help="Relation suite: " + ", ".join(SUITES))
    common.add_argument("--bound", type=int, help="Largest |m| tried for ladder eigenvalues")
    common.add_argument("--workers", type=int, help="Worker threads for independent checks")
    common.add_argument("--output-dir", help="Directory to write report files")
    common.add_argument("--quiet", action="store_true", default=None, help="Disable progress bars")
    common.add_argument("--matrix-dump", action="store_true", default=None, help="Write generator matrices")
    common.add_argument("--verbose", action="store_true", help="Debug logging")

    parser = argparse.ArgumentParser(prog="iquantum", description="Exact audits of iquantum group modules")
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    for name, handler in SUBCOMMANDS.items():
        subparsers.add_parser(name, parents=[common], help=(handler.__doc__ or "").splitlines()[0])
    return parser


def _overrides(args: argparse.Namespace) -> dict[str, object]:
    return {
        "case": args.case,
        "r": args.r,
        "s": args.s,
        "tensor": args.tensor,
        "constituent": args.constituent,
        "suite": args.suite,
        "bound": args.bound,
        "workers": args.workers,
        "output_dir": args.output_dir,
        "quiet": args.quiet,
        "matrix_dump": args.matrix_dump,
    }


def main(argv: Sequence[str] | None = None) -> int:
    """Main entry point.

    Returns:
        int: 0 when every check passed, 1 on a failed check, 2 on a configuration
            error and 3 on any other error
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO)

    try:
        config = load_config(args.config).updated(_overrides(args))
        report = SUBCOMMANDS[args.subcommand](Runner(config, args.highest))
        write_report(report, Path(config.output_dir))
    except ConfigError as e:
        logger.error("Configuration error: %s", e)  # noqa: TRY400
        return EXIT_CONFIG
    except Exception:
        logger.exception("%s failed", args.subcommand)
        return EXIT_ERROR

    summary = report.summary()
    if report.passed:
        logger.info("%s: all %d checks passed", report.name, len(report.checks))
        return EXIT_OK
    failed = [c for c in report.checks if not c.passed]
    logger.error("%s: %d of %d checks did not pass", report.name, len(failed), len(report.checks))
    for check in failed:
        logger.error("  %s [%s] %s", check.check_id, check.status, check.witness or "")
    logger.info("Summary: %s", summary)
    return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
