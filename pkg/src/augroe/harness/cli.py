"""Command line entry point: run, convergence, list-cases, validate."""

from __future__ import annotations

import argparse
import logging
import sys

from ..errors import ConfigurationError, NumericalFailure
from ..linalg import SingularMatrix
from .cases import CASES, get_case
from .config import load_config
from .runner import SCHEMES, RunConfig, convergence_study, exceeded_limits, format_convergence, run_case

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_THRESHOLD = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigurationError(message)


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="augroe", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run one case on one grid")
    run.add_argument("--config", help="file with [case] and [run] sections")
    run.add_argument("--case")
    run.add_argument("--scheme", choices=SCHEMES)
    grid = run.add_mutually_exclusive_group()
    grid.add_argument("--dx", type=float)
    grid.add_argument("--cells", type=int)
    run.add_argument("--cfl", type=float)
    stop = run.add_mutually_exclusive_group()
    stop.add_argument("--steps", type=int)
    stop.add_argument("--t-end", type=float, dest="t_end")
    stop.add_argument("--residual", type=float)
    run.add_argument("--eps-safety", type=float, dest="eps_safety")
    run.add_argument("--out")
    run.add_argument("--assert", action="store_true", dest="check", help="exit 3 if the case limits fail")

    conv = sub.add_parser("convergence", help="error table over several grids")
    conv.add_argument("--case", required=True)
    conv.add_argument("--scheme", choices=SCHEMES, default="augmented-fluctuation")
    conv.add_argument("--dx", type=_floats, required=True)
    conv.add_argument("--reference", help="reference name, e.g. exact or equilibrium")
    conv.add_argument("--eps-safety", type=float, dest="eps_safety")
    conv.add_argument("--out")

    sub.add_parser("list-cases", help="show the benchmark registry")
    sub.add_parser("validate", help="run the property suites")
    return p


def _run(args) -> int:
    case_kw, run_kw = load_config(args.config) if args.config else ({}, {})
    for key in ("scheme", "dx", "cells", "cfl", "steps", "t_end", "residual", "eps_safety", "out"):
        value = getattr(args, key)
        if value is not None:
            run_kw[key] = value
    # a termination or grid flag on the command line replaces the file's choice
    if any(getattr(args, k) is not None for k in ("steps", "t_end", "residual")):
        for k in ("steps", "t_end", "residual"):
            if getattr(args, k) is None:
                run_kw.pop(k, None)
    if args.dx is not None:
        run_kw.pop("cells", None)
    if args.cells is not None:
        run_kw.pop("dx", None)
    case_id = args.case or case_kw.get("id")
    if not case_id:
        raise ConfigurationError("no case given (use --case or a [case] id)")
    case = get_case(case_id)
    _, report = run_case(case, RunConfig(**run_kw))
    print("\n".join(report.lines()))
    if args.check:
        bad = exceeded_limits(case, report)
        for line in bad:
            print(f"limit exceeded: {line}")
        if bad:
            return EXIT_THRESHOLD
    return EXIT_OK


def _convergence(args) -> int:
    case = get_case(args.case)
    rows = convergence_study(
        case, args.scheme, args.dx, reference=args.reference, out=args.out, eps_safety=args.eps_safety
    )
    print("\n".join(format_convergence(case, rows)))
    return EXIT_OK


def _list_cases() -> int:
    width = max(len(c) for c in CASES)
    for c in CASES.values():
        stop = f"{c.steps} steps" if c.steps else f"t = {c.t_end}"
        grids = ", ".join(f"{g:g}" for g in c.grids)
        print(f"{c.id:<{width}}  {c.description}  [{c.reference}; dx {grids}; {stop}]")
    return EXIT_OK


def _validate() -> int:
    from .validate import run_all

    results = run_all()
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_THRESHOLD


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
        if args.command == "run":
            return _run(args)
        if args.command == "convergence":
            return _convergence(args)
        if args.command == "list-cases":
            return _list_cases()
        return _validate()
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalFailure, SingularMatrix) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
