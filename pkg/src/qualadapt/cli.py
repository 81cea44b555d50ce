"""Command-line front end.

Exit status: 0 success, 2 parse or usage error, 3 precondition violation,
4 search budget or enumeration limit exhausted.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .adaptation import AdaptationError, adapt, problem_from_files
from .algebra import ALGEBRAS
from .revision import RevisionError, SearchBudgetExceeded, revise
from .solver import ScenarioLimitExceeded, algebraic_closure, enumerate_scenarios, is_consistent
from .textformat import ParseError, format_qcn, format_scenario, parse_qcn

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_BUDGET = 4


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read(path: str, algebra: str | None):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise _Fail(EXIT_PARSE, f"{path}: {exc.strerror}") from None
    try:
        return parse_qcn(text, algebra)
    except ParseError as exc:
        raise _Fail(EXIT_PARSE, f"{path}: {exc}") from None


def _scenario_blocks(scenarios, out) -> None:
    for k, s in enumerate(scenarios, 1):
        out.write(f"\nscenario {k}\n")
        out.write(format_scenario(s) + "\n")


def cmd_check(args, out) -> int:
    q = _read(args.file, args.algebra)
    out.write("consistent\n" if is_consistent(q) else "inconsistent\n")
    return EXIT_OK


def cmd_close(args, out) -> int:
    q = _read(args.file, args.algebra)
    report = algebraic_closure(q)
    if report.contradictory:
        u, v = report.closed.conflict
        out.write(f"inconsistent: empty label between {u} and {v}\n")
        return EXIT_OK
    out.write(format_qcn(report.closed))
    return EXIT_OK


def cmd_scenarios(args, out) -> int:
    q = _read(args.file, args.algebra)
    count = 0
    try:
        for s in enumerate_scenarios(q, only_consistent=args.consistent, limit=args.limit):
            count += 1
            out.write(f"\nscenario {count}\n" if count > 1 else f"scenario {count}\n")
            out.write(format_scenario(s) + "\n")
    except ScenarioLimitExceeded as exc:
        raise _Fail(EXIT_BUDGET, f"truncated: {exc}") from None
    if count == 0:
        out.write("no scenarios\n")
    return EXIT_OK


def _report(distance, scenarios, show_all: bool, out) -> None:
    out.write(f"distance: {distance}\n")
    out.write(f"scenarios: {len(scenarios)}\n")
    _scenario_blocks(scenarios if show_all else scenarios[:1], out)


def cmd_revise(args, out) -> int:
    psi = _read(args.psi, args.algebra)
    mu = _read(args.mu, args.algebra)
    try:
        result = revise(psi, mu, max_nodes=args.max_nodes)
    except RevisionError as exc:
        raise _Fail(EXIT_PRECONDITION, str(exc)) from None
    _report(result.distance, result.scenarios, args.all, out)
    return EXIT_OK


def cmd_adapt(args, out) -> int:
    try:
        problem = problem_from_files(args.source, args.target, args.dk, args.subst, args.algebra)
    except ParseError as exc:
        raise _Fail(EXIT_PARSE, str(exc)) from None
    except OSError as exc:
        raise _Fail(EXIT_PARSE, f"{exc.filename}: {exc.strerror}") from None
    except AdaptationError as exc:
        raise _Fail(EXIT_PRECONDITION, str(exc)) from None
    except ValueError as exc:
        raise _Fail(EXIT_PARSE, f"--subst: {exc}") from None
    try:
        case = adapt(problem, max_nodes=args.max_nodes, validate=False)
    except (AdaptationError, RevisionError) as exc:
        raise _Fail(EXIT_PRECONDITION, str(exc)) from None
    _report(case.distance, case.scenarios, args.all, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qualadapt",
        description="Qualitative constraint networks: consistency, revision and case adaptation.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def algebra_opt(p):
        p.add_argument("--algebra", choices=ALGEBRAS,
                       help="require the input files to declare this algebra")

    p = sub.add_parser("check", help="decide consistency of a network")
    p.add_argument("file")
    algebra_opt(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("close", help="print the algebraic closure of a network")
    p.add_argument("file")
    algebra_opt(p)
    p.set_defaults(func=cmd_close)

    p = sub.add_parser("scenarios", help="list the scenarios of a network")
    p.add_argument("file")
    p.add_argument("--consistent", action="store_true", help="only consistent scenarios")
    p.add_argument("--limit", type=int, help="fail (exit 4) past this many scenarios")
    algebra_opt(p)
    p.set_defaults(func=cmd_scenarios)

    def search_opts(p):
        algebra_opt(p)
        p.add_argument("--all", action="store_true",
                       help="print every minimal scenario, not only the first")
        p.add_argument("--max-nodes", type=int, help="node expansion budget (exit 4 when hit)")

    p = sub.add_parser("revise", help="revise PSI by MU")
    p.add_argument("--psi", required=True)
    p.add_argument("--mu", required=True)
    search_opts(p)
    p.set_defaults(func=cmd_revise)

    p = sub.add_parser("adapt", help="adapt a source case to a target case")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--dk", required=True, help="domain knowledge network")
    p.add_argument("--subst", required=True, help='e.g. "mushroom->carrot,a->b"')
    search_opts(p)
    p.set_defaults(func=cmd_adapt)
    return parser


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except _Fail as exc:
        err.write(f"error: {exc}\n")
        return exc.code
    except SearchBudgetExceeded as exc:
        err.write(f"error: {exc}\n")
        return EXIT_BUDGET


def main() -> None:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    sys.exit(run())
