"""Command line: ``magiclim verify|fixture|demo``.

Exit status is 0 when every check matches its expectation, 1 when some
check has an unexpected outcome and 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys

from .report import emit_report
from .scenario import FIXTURES, ScenarioError, demo_paper_block, fixture, load_scenario, parse_scenario_text, run_data

EXIT_OK, EXIT_UNEXPECTED, EXIT_INPUT = 0, 1, 2


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return v


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=("exact", "float"), help="arithmetic (default: scenario, then $MAGICLIM_MODE, then exact)")
    p.add_argument("--tol", type=_positive_float, help="float-mode tolerance (default 1e-9)")
    p.add_argument("--format", choices=("text", "json"), default="text", dest="fmt")
    p.add_argument("--jobs", type=_positive_int, default=1, help="run scenario sections in parallel worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="magiclim", description="Verify projective-limit, Hopf and magic-unitary constructions.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a scenario file ('-' reads stdin)")
    v.add_argument("scenario")
    _run_options(v)

    f = sub.add_parser("fixture", help="print a built-in scenario as JSON")
    f.add_argument("name", help=f"one of {', '.join(FIXTURES)}, optionally with ':n'")

    d = sub.add_parser("demo", help="run a built-in pipeline end to end")
    d.add_argument("pipeline", choices=("paper-block",))
    d.add_argument("--m", type=_positive_int, default=3, help="number of diagonal projections")
    d.add_argument("--K", type=_positive_int, default=None, help="truncation size (default m + 1)")
    d.add_argument("--gadgets", action="store_true", help="append the gadget blocks that make the algebra a factor")
    _run_options(d)
    return parser


def _emit(data: dict, args) -> int:
    report = run_data(data, mode=args.mode, tol=args.tol, jobs=args.jobs)
    print(emit_report(report, args.fmt))
    return EXIT_UNEXPECTED if report.unexpected else EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "fixture":
            print(json.dumps(fixture(args.name), indent=2, ensure_ascii=False))
            return EXIT_OK
        if args.command == "verify":
            data = parse_scenario_text(sys.stdin.read()) if args.scenario == "-" else load_scenario(args.scenario)
            return _emit(data, args)
        k = args.K if args.K is not None else args.m + 1
        return _emit(demo_paper_block(args.m, k, args.gadgets), args)
    except ScenarioError as exc:
        print(f"magiclim: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
