"""Command line entry point: ``qsurf verify | normal-form | spectrum``."""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__
from .algebra import RewriteBudgetExceeded, format_element, normal_form
from .parser import ALGEBRAS, ParseError, parse_expression, presentation_for
from .reps import KINDS, build_rep, represent, spectrum
from .rings import EXACT, FloatRing
from .suites import SUITES, SuiteConfig, _parse_c, emit, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_REP_ALGEBRA = {
    "sphere_plus": "sphere",
    "sphere_minus": "sphere",
    "sphere_theta": "sphere",
    "disc_infinite": "disc",
    "disc_theta": "disc",
    "rp2_infinite": "rp2",
    "rp2_theta": "rp2",
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="qsurf", description="Normal forms and representation checks for quantum surfaces.")
    ap.add_argument("--version", action="version", version=f"qsurf {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=SUITES + ("all",), default=None)
    v.add_argument("--q", type=float, default=None)
    v.add_argument("--c", type=str, default=None, help="number or 'inf'")
    v.add_argument("--dim", type=int, default=None)
    v.add_argument("--tol", type=float, default=None)
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--report", default=None, help="write the report to this path")
    v.add_argument("--format", choices=("json", "text"), default="text")

    n = sub.add_parser("normal-form", help="normalize an expression")
    n.add_argument("expr")
    n.add_argument("--algebra", choices=ALGEBRAS, default="equator")
    n.add_argument("--q", type=float, default=None, help="evaluate numerically at this q")
    n.add_argument("--c", type=str, default=None, help="sphere parameter (number or 'inf')")

    s = sub.add_parser("spectrum", help="eigenvalues of a self-adjoint expression in a representation")
    s.add_argument("expr")
    s.add_argument("--rep", choices=KINDS, required=True)
    s.add_argument("--dim", type=int, default=64)
    s.add_argument("--q", type=float, default=0.5)
    s.add_argument("--c", type=str, default="inf")
    s.add_argument("--theta", type=float, default=0.0)
    return ap


def _cmd_verify(args, out) -> int:
    flags = {"q": args.q, "c": args.c, "dim": args.dim, "tol": args.tol, "seed": args.seed, "suite": args.suite}
    try:
        cfg = SuiteConfig.from_sources(flags)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    report = run_suite(cfg)
    data = emit(report, args.format)
    if args.report:
        with open(args.report, "wb") as fh:
            fh.write(data)
        out.write(f"report written to {args.report}: {'PASS' if report.passed else 'FAIL'}\n")
    else:
        out.write(data.decode("utf-8"))
    return EXIT_PASS if report.passed else EXIT_FAIL


def _cmd_normal_form(args, out) -> int:
    c = None if args.c is None else _parse_c(args.c)
    if c is not None and c < 0:
        raise _UsageError("c must be >= 0")
    if args.q is not None:
        if not 0 < args.q < 1:
            raise _UsageError("q must lie in (0, 1)")
        if args.algebra == "sphere" and c is None:
            raise _UsageError("a numeric q needs a numeric --c for the sphere")
        ring = FloatRing(args.q, math.inf if c is None else c)
    else:
        ring = EXACT
    p = presentation_for(args.algebra, ring, c)
    a = parse_expression(args.expr, p)
    out.write(format_element(normal_form(a, p)) + "\n")
    return EXIT_PASS


def _cmd_spectrum(args, out) -> int:
    c = _parse_c(args.c)
    try:
        r = build_rep(args.rep, args.q, args.dim if not args.rep.endswith("_theta") else 1, c, args.theta)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    p = presentation_for(_REP_ALGEBRA[args.rep], EXACT, c if args.rep.startswith("sphere") else None)
    a = parse_expression(args.expr, p)
    m = represent(a, r)
    try:
        values = spectrum(m)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    np.savetxt(out, values, fmt="%.17g")
    return EXIT_PASS


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        handler = {"verify": _cmd_verify, "normal-form": _cmd_normal_form, "spectrum": _cmd_spectrum}
        return handler[args.command](args, out)
    except _UsageError as exc:
        sys.stderr.write(f"qsurf: error: {exc}\n")
        return EXIT_USAGE
    except (ParseError, KeyError, TypeError, ValueError, RewriteBudgetExceeded) as exc:
        sys.stderr.write(f"qsurf: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
