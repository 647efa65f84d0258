"""
Command-line entry point

    ergograph <command> --input FILE [options]

Exit codes: 0 success, 1 input or usage error, 2 failed verdict. Errors are
written as one JSON line on standard error.
"""

import argparse
import sys
from pathlib import Path
from typing import List, NoReturn, Optional, Sequence

from src.cli_report.io import dumps_report, render_text, to_jsonable, write_text
from src.cli_report.models import AnalysisRequest, Command, OutputFormat
from src.cli_report.runner import run
from src.config.settings import get_settings
from src.utils.exceptions import ErgographError, InputError, MissingOption
from src.utils.logger import get_logger, setup_logger

logger = get_logger("cli")

# Flags copied into AnalysisRequest.options, by argparse dest.
OPTION_FLAGS = (
    "tol",
    "n_max",
    "V",
    "h",
    "mu",
    "vectors",
    "C",
    "method",
    "delta",
    "b",
    "theta",
    "m_max",
    "start",
    "length",
    "count",
    "replicates",
    "n_grid",
    "N_grid",
)


class _ArgumentParser(argparse.ArgumentParser):
    """argparse that raises instead of exiting with its own status 2"""

    def error(self, message: str) -> NoReturn:
        raise InputError(f"Usage error: {message}", usage=self.format_usage().strip())


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="ergograph",
        description="Spectral gaps, drift conditions and Lyapunov synthesis for finite chains",
    )
    parser.add_argument("command", help="One of: " + ", ".join(c.value for c in Command))
    parser.add_argument("--input", type=Path, help="Chain spec file (JSON)")

    analysis = parser.add_argument_group("analysis")
    analysis.add_argument("--tol", type=float, help="Tolerance override for the command")
    analysis.add_argument("--n-max", dest="n_max", type=int, help="Largest power or lag")
    analysis.add_argument("--seed", type=int, help="Master seed (ERGOGRAPH_SEED overrides)")
    analysis.add_argument("--V", dest="V", help="Weight: list, comma list, rule or file")
    analysis.add_argument("--h", dest="h", help="Observable: list, comma list, rule or file")
    analysis.add_argument("--mu", dest="mu", help="Initial law: list, uniform, point:<i> or file")
    analysis.add_argument("--vectors", help="JSON file with V, h and mu entries")
    analysis.add_argument("--C", dest="C", help="State set as comma-separated indices")
    analysis.add_argument("--method", help="delta_2 method: eigen, contraction, gelfand or all")
    analysis.add_argument("--delta", type=float, help="Drift rate to check instead of the best")
    analysis.add_argument("--b", dest="b", type=float, help="Drift constant to check")
    analysis.add_argument("--theta", type=float, help="Exponential rate for synthesis")
    analysis.add_argument("--m-max", dest="m_max", type=int, help="Minorization horizon")
    analysis.add_argument("--start", type=int, help="Start state for simulation")
    analysis.add_argument("--length", type=int, help="Simulated path length")
    analysis.add_argument("--count", type=int, help="Monte Carlo samples")
    analysis.add_argument("--replicates", type=int, help="Partial-sum replicates")
    analysis.add_argument("--n-grid", dest="n_grid", help="Partial-sum lengths, comma list")
    analysis.add_argument("--N-grid", dest="N_grid", help="Truncation levels, comma list")

    output = parser.add_argument_group("output")
    output.add_argument("--output", type=Path, help="Write the JSON report here")
    output.add_argument("--csv", type=Path, help="Write curve data here")
    output.add_argument(
        "--format",
        choices=[f.value for f in OutputFormat],
        default=OutputFormat.JSON.value,
        help="Standard output format when --output is not given",
    )
    output.add_argument("--quiet", action="store_true", help="Nothing on standard output")
    return parser


def build_request(args: argparse.Namespace) -> AnalysisRequest:
    """
    Raises:
        UnknownCommand: If the command is not recognized
        MissingOption: If --input is absent
    """
    command = Command.parse(args.command)
    if args.input is None:
        raise MissingOption("--input is required", command=command.value, option="--input")
    settings = get_settings()
    if settings.seed is not None:
        seed = settings.seed
    elif args.seed is not None:
        seed = args.seed
    else:
        seed = settings.default_seed
    return AnalysisRequest(
        command=command,
        input_path=args.input,
        options={name: getattr(args, name) for name in OPTION_FLAGS},
        seed=seed,
        output=args.output,
        csv=args.csv,
        format=OutputFormat(args.format),
        quiet=args.quiet,
    )


def _report_error(error: ErgographError) -> int:
    logger.error(error.message, extra={"error": error.code, "context": to_jsonable(error.context)})
    return error.exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    settings = get_settings()
    setup_logger(log_level=settings.log_level, log_file=settings.log_file)

    arguments: List[str] = list(sys.argv[1:] if argv is None else argv)
    try:
        request = build_request(build_parser().parse_args(arguments))
        report, exit_code = run(request)
    except ErgographError as e:
        return _report_error(e)
    except Exception as e:
        logger.error(f"Unexpected error: {e}", extra={"error": type(e).__name__}, exc_info=True)
        return 1

    document = dumps_report(report)
    if request.output is not None:
        write_text(document, request.output)
        if not request.quiet:
            sys.stdout.write(render_text(report))
    elif not request.quiet:
        text = render_text(report) if request.format is OutputFormat.TEXT else document
        sys.stdout.write(text)
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
