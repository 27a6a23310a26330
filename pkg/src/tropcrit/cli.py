"""Command-line front end.

    tropcrit crit --order 3 instance.json
    tropcrit trop --point 1/2,0 instance.json
    tropcrit toric divisor.json
    tropcrit delzant simplex3.json
    tropcrit mutate --order 2 exchange.json
    tropcrit selfcheck

Exit codes: 0 success, 1 unreadable or invalid input, 2 Newton polytope not
complete, 3 a solver tolerance or certificate failed.  Diagnostics go to
standard error; set TROPCRIT_LOG=debug (or info, warning) for progress logs.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import reports
from .errors import (
    InvariantViolation,
    MaxIterExceeded,
    NotComplete,
    ParseError,
    StalledProgress,
    TropCritError,
)
from .instances import load
from .ratgeom import vec
from .selfcheck import run_selfcheck

EXIT_OK, EXIT_PARSE, EXIT_NOT_COMPLETE, EXIT_SOLVER = 0, 1, 2, 3

# which instance kinds each subcommand accepts
ACCEPTS = {
    "crit": ("laurent", "toric", "delzant", "mutation"),
    "trop": ("laurent", "toric", "delzant", "mutation"),
    "toric": ("toric",),
    "delzant": ("delzant",),
    "mutate": ("mutation",),
}


def _parse_point(text: str) -> tuple:
    try:
        return vec(x.strip() for x in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad point {text!r}: {exc}") from None


def _parse_order(text: str):
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad order {text!r}: expected p/q") from None
    if q <= 0:
        raise argparse.ArgumentTypeError("order must be positive")
    return q


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized probes")
    common.add_argument("--certify", action="store_true", help="re-run and embed all self-checks")
    common.add_argument("--jobs", type=int, default=1, help="solve several files in parallel")

    p = argparse.ArgumentParser(prog="tropcrit", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("crit", "positive critical point as truncated Puiseux series"),
        ("trop", "tropical critical point, maximum and membership tests"),
        ("toric", "balanced divisor analysis from rays and coefficients"),
        ("delzant", "canonical torus of a moment polytope"),
        ("mutate", "pullback under a cluster exchange and invariance check"),
    ):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("files", nargs="+", help="JSON instance files")
        if name in ("crit", "mutate"):
            sp.add_argument("--order", type=_parse_order, default=None, help="truncation order p/q")
            sp.add_argument("--tol", type=float, default=None, help="solver tolerance")
        if name == "trop":
            sp.add_argument("--point", type=_parse_point, action="append", default=[],
                            help="comma-separated rational point to test for membership")
    sub.add_parser("selfcheck", parents=[common], help="run built-in worked examples and invariants")
    return p


def _error(command, exc, code, path=None) -> tuple[int, dict]:
    rep = {"command": command, "error": {"type": type(exc).__name__, "message": str(exc)}}
    if path is not None:
        rep["file"] = path
    return code, rep


def run_file(command: str, path: str, opts: dict) -> tuple[int, dict]:
    """Solve one instance file; returns (exit code, report)."""
    try:
        inst = load(path)
        if inst.kind not in ACCEPTS[command]:
            raise ParseError(f"'{command}' does not accept instances of kind '{inst.kind}'")
        if command == "crit":
            rep = reports.crit_report(inst, opts.get("order"), opts.get("tol"), opts.get("seed"),
                                      opts.get("certify", False))
        elif command == "trop":
            rep = reports.trop_report(inst, opts.get("point", ()), opts.get("certify", False))
        elif command == "toric":
            rep = reports.toric_report(inst, opts.get("certify", False))
        elif command == "delzant":
            rep = reports.delzant_report(inst, opts.get("seed"), opts.get("certify", False))
        else:
            rep = reports.mutate_report(inst, opts.get("order"), opts.get("tol"), opts.get("certify", False))
    except ParseError as exc:
        return _error(command, exc, EXIT_PARSE, path)
    except NotComplete as exc:
        return _error(command, exc, EXIT_NOT_COMPLETE, path)
    except (StalledProgress, MaxIterExceeded, InvariantViolation) as exc:
        return _error(command, exc, EXIT_SOLVER, path)
    except TropCritError as exc:
        # remaining domain errors describe unusable input (non-primitive rays, empty polytopes, ...)
        return _error(command, exc, EXIT_PARSE, path)
    code = EXIT_OK if reports.certificates_passed(rep) else EXIT_SOLVER
    return code, rep


def _run_job(args):
    return run_file(*args)


def _setup_logging():
    level = os.environ.get("TROPCRIT_LOG", "").strip().upper()
    if not level:
        return
    if level.isdigit():
        lvl = int(level)
    else:
        lvl = getattr(logging, level, None)
        if not isinstance(lvl, int):
            lvl = logging.INFO
    logging.basicConfig(level=lvl, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def _emit(reps: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        body = reps[0] if len(reps) == 1 else reps
        out.write(json.dumps(body, indent=2, sort_keys=True) + "\n")
        return
    for k, rep in enumerate(reps):
        if len(reps) > 1:
            out.write(f"== {rep.get('file', k)}\n")
        out.write(reports.text_summary(rep) + "\n")


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    _setup_logging()

    if args.command == "selfcheck":
        rows = run_selfcheck(seed=args.seed or 0)
        passed = all(r["passed"] for r in rows)
        if args.format == "json":
            out.write(json.dumps({"command": "selfcheck", "checks": rows, "passed": passed},
                                 indent=2, sort_keys=True) + "\n")
        else:
            for r in rows:
                out.write(f"[{'PASS' if r['passed'] else 'FAIL'}] {r['check']}: {r['detail']}\n")
        return EXIT_OK if passed else EXIT_SOLVER

    opts = {k: getattr(args, k, None) for k in ("order", "tol", "seed", "point")}
    opts["certify"] = args.certify
    jobs = [(args.command, path, opts) for path in args.files]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_job, jobs))
    else:
        results = [_run_job(j) for j in jobs]
    for code, rep in results:
        if code != EXIT_OK:
            what = rep.get("error", {}).get("message", "a certificate failed")
            print(f"tropcrit {args.command}: {rep.get('file', '')}: {what}", file=sys.stderr)
    _emit([rep for _, rep in results], args.format, out)
    codes = [c for c, _ in results if c != EXIT_OK]
    return max(codes) if codes else EXIT_OK


def main() -> None:
    sys.exit(run())
