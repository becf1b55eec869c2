"""Command-line entry point.

Exit status: 0 when every check passes, 1 on a failed check, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import commands
from .checks import encode
from .exceptions import FunctionalViolation, InstanceError, OracleBoundExceeded, PreconditionError
from .hahn_jordan import DEFAULT_ORACLE_BOUND
from .instance import load_instance

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the certificate as JSON")
    common.add_argument("--timing", action="store_true", help="record wall-clock time in the certificate")

    parser = argparse.ArgumentParser(prog="rieszlab", description="Exact Riesz-space decompositions with certificates.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", parents=[common], help="Hahn-Jordan decomposition of a charge")
    p.add_argument("file")
    p.add_argument("--theta", type=_rational, help="sandwich constant, > 1 (default from the instance)")
    p.add_argument("--oracle", action="store_true", help="also run the exhaustive checks")
    p.add_argument("--oracle-bound", type=_positive, default=DEFAULT_ORACLE_BOUND,
                   help="largest atom count for exhaustive checks (default %(default)s)")

    for name, text in (("represent", "representer of a strong functional"),
                       ("invert", "canonical partial inverse of the density vector")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("file")
        p.add_argument("--depth", type=_positive, help="dyadic depth (default from the instance)")
        p.add_argument("--report", metavar="DIR", help="write a CSV and PNG convergence report to DIR")

    p = sub.add_parser("verify", parents=[common], help="run every applicable check")
    p.add_argument("file")
    p.add_argument("--oracle-bound", type=_positive, default=DEFAULT_ORACLE_BOUND)

    p = sub.add_parser("selftest", parents=[common], help="randomized campaign over all suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=_positive, default=100)
    return parser


def _error(args, kind: str, message: str, **extra) -> int:
    if getattr(args, "json", False):
        print(json.dumps({"error": {"type": kind, "message": message, **encode(extra)}}, indent=2))
    else:
        print(f"error: {kind}: {message}", file=sys.stderr)
        for key, value in extra.items():
            print(f"  {key}: {json.dumps(encode(value))}", file=sys.stderr)
    return EXIT_INPUT


def _run(args) -> dict:
    if args.command == "selftest":
        return commands.run_self_test(args.seed, args.trials, args.timing)
    inst = load_instance(args.file)
    if args.command == "decompose":
        return commands.run_decompose(inst, args.theta, args.oracle or None, args.oracle_bound, args.timing)
    if args.command == "verify":
        return commands.run_verify(inst, args.oracle_bound, args.timing)
    depth = args.depth or inst.options.depth
    if args.command == "represent":
        cert = commands.run_represent(inst, depth, args.timing)
        rows = commands.represent_convergence if args.report else None
        title = "dyadic representer"
    else:
        cert = commands.run_invert(inst, depth, args.timing)
        rows = commands.invert_convergence if args.report else None
        title = "spectral partial inverse"
    if rows:
        from .plotting import write_convergence

        csv_path, png_path = write_convergence(args.report, args.command, rows(inst, depth), title)
        cert["report"] = [str(csv_path), str(png_path)]
    return cert


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cert = _run(args)
    except InstanceError as exc:
        return _error(args, "InstanceError", str(exc), pointer=exc.pointer)
    except FunctionalViolation as exc:
        return _error(args, type(exc).__name__, str(exc), witness=exc.witness)
    except (OracleBoundExceeded, PreconditionError) as exc:
        return _error(args, type(exc).__name__, str(exc))
    except OSError as exc:
        return _error(args, "OSError", str(exc))
    sys.stdout.write(commands.render_json(cert) if args.json else commands.render_text(cert))
    if "report" in cert and not args.json:
        for path in cert["report"]:
            sys.stdout.write(f"report\t{path}\n")
    return EXIT_PASS if cert["passed"] else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
