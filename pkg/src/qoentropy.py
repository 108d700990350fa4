"""
Command-line entry point for observational-entropy reports and verification sweeps.

Subcommands:

1. ``report``: evaluate every entropy of a scenario file
2. ``example``: write a named example scenario to a file
3. ``verify``: run a seeded property sweep over random instances

Exit status is 0 on success, 1 when a contracted property fails and 2 on
invalid input. Every step is also available programmatically through
:func:`run_report`, :func:`generate_example` and :func:`verify`.
"""
import argparse
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.core.errors import InvalidParameters, ParseError, QOEntropyError, ValidationError
from src.core.oentropy import EntropyReport, build_entropy_report
from src.reporting.json_reporter import JSONReporter
from src.reporting.report_config import ReportConfig
from src.reporting.text_reporter import TextReporter
from src.scenarios.example_generators import EXAMPLE_KINDS, generate_example
from src.scenarios.random_instances import REGIMES
from src.scenarios.scenario import Scenario
from src.scenarios.scenario_parser import load_scenario, save_scenario
from src.utils.logger import setup_logging
from src.verification.verifier import verify
from src.verification.verify_config import VerifyConfig

# Version information
__version__ = "0.1.0"

EXIT_OK = 0
EXIT_PROPERTY_FAILURE = 1
EXIT_INPUT_ERROR = 2

DEFAULT_COUNTEREXAMPLE_DIR = "counterexamples"

logger = logging.getLogger(__name__)


def run_report(scenario: Scenario) -> EntropyReport:
    """Compute the entropy report of a scenario.

    Raises:
        QOEntropyError: Any computation error, re-raised with the scenario name.
    """
    try:
        return build_entropy_report(scenario.rho, scenario.povm, scenario.gamma, scenario.tol)
    except ValidationError as e:
        raise ValidationError(e.invariant, e.residual, f"in scenario '{scenario.name}'") from e
    except QOEntropyError as e:
        raise e.__class__(f"Scenario '{scenario.name}': {e}") from e


def parse_dims(text: str) -> List[Tuple[int, int]]:
    """Parse ``"d:m,d:m,..."``.

    Raises:
        InvalidParameters: If an item is not a pair of integers.
    """
    pairs = []
    for item in text.split(","):
        parts = item.strip().split(":")
        try:
            d, m = (int(p) for p in parts)
        except ValueError:
            raise InvalidParameters(f"Dimension pair must look like d:m, got '{item}'") from None
        pairs.append((d, m))
    return pairs


def parse_example_params(tokens: Sequence[str]) -> Dict[str, Any]:
    """Parse ``key=value`` tokens; values become int, float, complex or str, first that fits."""
    params = {}
    for token in tokens:
        key, sep, raw = token.partition("=")
        if not sep or not key:
            raise InvalidParameters(f"Example parameter must look like key=value, got '{token}'")
        value: Any = raw
        for cast in (int, float, complex):
            try:
                value = cast(raw)
                break
            except ValueError:
                continue
        params[key.replace("-", "_")] = value
    return params


def create_verify_config_from_args(args) -> VerifyConfig:
    options: Dict[str, Any] = {"workers": args.workers}
    if args.seed is not None:
        options["seed"] = args.seed
    if args.trials is not None:
        options["trials"] = args.trials
    if args.dims is not None:
        options["dims"] = parse_dims(args.dims)
    if args.regime is not None:
        options["regimes"] = [r.strip() for r in args.regime.split(",")]
    if args.counterexample_dir is not None:
        options["counterexample_dir"] = args.counterexample_dir
    if args.postprocessings is not None:
        options["postprocessings"] = args.postprocessings
    return VerifyConfig(**options)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qoentropy",
        description="Observational entropy with quantum reference priors",
    )
    parser.add_argument("--version", action="version", version=f"qoentropy {__version__}")
    parser.add_argument("--log-file", type=str, default=None,
                        help="Write log messages to this file instead of stderr")
    parser.add_argument("--verbose", action="store_true", help="Log debug messages")
    subparsers = parser.add_subparsers(dest="command", required=True)

    report = subparsers.add_parser("report", help="Evaluate all entropies of a scenario file")
    report.add_argument("--input", required=True, help="Scenario JSON file")
    report.add_argument("--bits", action="store_true", help="Display entropies in bits (stored values stay in nats)")
    report.add_argument("--json", action="store_true", help="Print the structured report instead of a table")
    report.add_argument("--out", type=str, default=None, help="Also write the structured report to this file")
    report.add_argument("--precision", type=int, default=10, help="Significant digits in the table (default: 10)")

    example = subparsers.add_parser("example", help="Write a named example scenario")
    example.add_argument("kind", choices=sorted(EXAMPLE_KINDS), help="Example to generate")
    example.add_argument("params", nargs="*", metavar="key=value",
                         help="Generator parameters, e.g. d=4 beta=1 omega=1")
    example.add_argument("--out", required=True, help="Scenario file to write")

    sweep = subparsers.add_parser("verify", help="Run a seeded verification sweep")
    sweep.add_argument("--seed", type=int, default=None, help="Master seed (default: 42)")
    sweep.add_argument("--trials", type=int, default=None, help="Trials per regime and dimension pair (default: 50)")
    sweep.add_argument("--dims", type=str, default=None, help="Comma-separated d:m pairs (default: 3:2,4:4)")
    sweep.add_argument("--regime", type=str, default=None,
                       help=f"Comma-separated subset of {', '.join(REGIMES)} (default: all)")
    sweep.add_argument("--workers", type=int, default=1, help="Worker processes (default: 1)")
    sweep.add_argument("--postprocessings", type=int, default=None,
                       help="Random coarse-grainings per trial for monotonicity checks (default: 3)")
    sweep.add_argument("--counterexample-dir", type=str, default=DEFAULT_COUNTEREXAMPLE_DIR,
                       help="Directory for scenario dumps of failing trials, written only on failure "
                            f"(default: {DEFAULT_COUNTEREXAMPLE_DIR})")
    sweep.add_argument("--out", type=str, default=None, help="Write the structured summary to this file")
    return parser


def _cmd_report(args) -> int:
    scenario = load_scenario(args.input)
    report = run_report(scenario)
    config = ReportConfig(bits=args.bits, precision=args.precision)
    json_reporter = JSONReporter(config)
    if args.json:
        print(json_reporter.render_report(report, scenario.name), end="")
    else:
        print(TextReporter(config).render_report(report, scenario.name), end="")
    if args.out:
        json_reporter.write(json_reporter.render_report(report, scenario.name), args.out)
        print(f"Report saved to {args.out}")
    return EXIT_OK


def _cmd_example(args) -> int:
    scenario = generate_example(args.kind, **parse_example_params(args.params))
    save_scenario(scenario, args.out)
    print(f"Scenario '{scenario.name}' saved to {args.out}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    summary = verify(create_verify_config_from_args(args))
    print(TextReporter().render_summary(summary), end="")
    if args.out:
        reporter = JSONReporter()
        reporter.write(reporter.render_summary(summary), args.out)
        print(f"Summary saved to {args.out}")
    return EXIT_OK if summary.passed else EXIT_PROPERTY_FAILURE


COMMANDS = {"report": _cmd_report, "example": _cmd_example, "verify": _cmd_verify}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run a subcommand and return the exit status."""
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else (logging.INFO if args.log_file else logging.WARNING)
    setup_logging(args.log_file, level)
    try:
        return COMMANDS[args.command](args)
    except (ParseError, ValidationError) as e:
        print(f"Invalid input: {e}", file=sys.stderr)
    except QOEntropyError as e:
        print(f"Error: {e}", file=sys.stderr)
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
    logger.error(f"Command '{args.command}' failed")
    return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
