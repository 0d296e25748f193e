"""pstneps command-line interface.

Usage:
    pstneps build SPEC.json
    pstneps transition SPEC.json --time 1/2
    pstneps analyze SPEC.json [--times 1/4 1/2] [--tol 1e-9]
    pstneps certify SPEC.json [--times ...]
    pstneps examples

Times are fractions ``p/q`` meaning ``p*pi/q``.  Exit codes: 0 success,
1 invalid input, 2 discrepancy or failed assertion, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .analyzer import EngineError, analyze
from .angle import RationalAngle, default_grid
from .linalg import ANALYTIC_TOL, ORACLE_TOL, DTYPE, conj_transpose, max_norm_diff
from .neps import (
    SIZE_CAP_ENV,
    NepsSpec,
    SizeCapError,
    SpecError,
    check_size,
    degree,
    neps_adjacency,
    size_cap,
    validate_spec,
)
from .oracle import SeriesDivergenceError, certify
from .reproduce import TranscriptionError, run_all
from .spectral import PathMismatchError, neps_spectrum, transition

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_DISCREPANCY = 2
EXIT_RESOURCE = 3

DEFAULT_ORACLE_BUDGET = 1024


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def load_spec(path: str) -> NepsSpec:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_INVALID) from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}", EXIT_INVALID) from None
    try:
        return validate_spec(raw)
    except SpecError as exc:
        raise CliError(f"{path}: {exc}", EXIT_INVALID) from None


def save_spec(spec: NepsSpec, path: str | Path) -> None:
    Path(path).write_text(json.dumps(spec.to_dict(), indent=1) + "\n")


def matrix_to_json(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(rows) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=DTYPE)


def parse_times(values: list[str] | None) -> list[RationalAngle] | None:
    if not values:
        return None
    out = []
    for v in values:
        for piece in v.split(","):
            if piece.strip():
                try:
                    out.append(RationalAngle.parse(piece))
                except ValueError as exc:
                    raise CliError(str(exc), EXIT_INVALID) from None
    return out


def _document(command: str, body: dict, timings: dict | None) -> dict:
    doc = {"tool": "pstneps", "version": __version__, "command": command}
    doc.update(body)
    if timings is not None:
        doc["timings"] = timings
    return doc


def _emit(doc: dict, output: str | None) -> None:
    text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_build(args) -> int:
    spec = load_spec(args.spec)
    t0 = time.perf_counter()
    adj = neps_adjacency(spec)
    spectrum = neps_spectrum(spec)
    body = {
        "spec": spec.to_dict(),
        "n_vertices": spec.n_vertices,
        "degree": degree(spec),
        "adjacency": [[int(round(x.real)) for x in row] for row in adj],
        "spectrum": [{"eigenvalue": lam, "multiplicity": k} for lam, k in spectrum.items()],
        "eigenvalues": [lam for lam, k in spectrum.items() for _ in range(k)],
    }
    _emit(_document("build", body, _timings(args, t0)), args.output)
    return EXIT_OK


def _timings(args, t0: float) -> dict | None:
    return None if args.no_timings else {"seconds": round(time.perf_counter() - t0, 6)}


def cmd_transition(args) -> int:
    spec = load_spec(args.spec)
    if args.raw_time is not None:
        t, label = float(args.raw_time), float(args.raw_time)
    else:
        t = parse_times([args.time or "0"])[0]
        label = str(t)
    t0 = time.perf_counter()
    h = transition(spec, t, verify_paths=args.verify_paths)
    residual = max_norm_diff(h @ conj_transpose(h), np.eye(spec.n_vertices))
    body = {
        "spec": spec.to_dict(),
        "time": label,
        "n_vertices": spec.n_vertices,
        "unitarity_residual": residual,
        "matrix": matrix_to_json(h),
    }
    _emit(_document("transition", body, _timings(args, t0)), args.output)
    return EXIT_OK


def cmd_analyze(args) -> int:
    spec = load_spec(args.spec)
    times = parse_times(args.times)
    t0 = time.perf_counter()
    report = analyze(spec, times, tol=args.tol, verify_paths=args.verify_paths)
    _emit(_document("analyze", {"report": report.to_dict()}, _timings(args, t0)), args.output)
    return EXIT_OK if report.ok else EXIT_DISCREPANCY


def cmd_certify(args) -> int:
    spec = load_spec(args.spec)
    check_size(spec, min(args.oracle_budget, size_cap()))
    times = parse_times(args.times) or default_grid()
    t0 = time.perf_counter()
    adj = neps_adjacency(spec)
    rows = []
    for t in times:
        h = transition(spec, t)
        if args.inject_error:
            h = h.copy()
            h[0, 0] += args.inject_error
        cert = certify(spec, t, h, tol=args.tol, adjacency=adj)
        rows.append({"time": str(t), "deviation": cert.deviation, "passed": cert.passed})
    passed = all(r["passed"] for r in rows)
    body = {
        "spec": spec.to_dict(),
        "tol": args.tol,
        "results": rows,
        "max_deviation": max(r["deviation"] for r in rows),
        "passed": passed,
    }
    _emit(_document("certify", body, _timings(args, t0)), args.output)
    return EXIT_OK if passed else EXIT_DISCREPANCY


def cmd_examples(args) -> int:
    t0 = time.perf_counter()
    results = run_all(tol=args.tol)
    out = sys.stderr if args.output is None and args.json else sys.stdout
    width = max(len(c.name) for r in results for c in r.checks)
    for r in results:
        print(f"{r.name}", file=out)
        for c in r.checks:
            value = f"{c.value:.3e}" if isinstance(c.value, float) else str(c.value)
            print(f"  {'PASS' if c.passed else 'FAIL'}  {c.name:<{width}}  {value}", file=out)
    passed = all(r.passed for r in results)
    print(f"{'all examples reproduced' if passed else 'REPRODUCTION FAILED'}", file=out)
    if args.json or args.output:
        body = {
            "examples": [
                {
                    "name": r.name,
                    "passed": r.passed,
                    "checks": [{"name": c.name, "passed": c.passed, "value": c.value} for c in r.checks],
                }
                for r in results
            ],
            "passed": passed,
        }
        _emit(_document("examples", body, _timings(args, t0)), args.output)
    return EXIT_OK if passed else EXIT_DISCREPANCY


@contextlib.contextmanager
def _size_cap_override(cap: int | None):
    if cap is None:
        yield
        return
    old = os.environ.get(SIZE_CAP_ENV)
    os.environ[SIZE_CAP_ENV] = str(cap)
    try:
        yield
    finally:
        if old is None:
            os.environ.pop(SIZE_CAP_ENV, None)
        else:
            os.environ[SIZE_CAP_ENV] = old


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write JSON here instead of stdout")
    common.add_argument("--size-cap", type=int, help=f"max vertex count (default from ${SIZE_CAP_ENV} or 4096)")
    common.add_argument("--no-timings", action="store_true", help="omit timings for byte-stable output")
    common.add_argument("--verify-paths", action="store_true",
                        help="cross-check the product formula against the full-spectrum path")

    parser = argparse.ArgumentParser(prog="pstneps", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"pstneps {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="adjacency, degree and spectrum")
    p.add_argument("spec")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("transition", parents=[common], help="dump H(t)")
    p.add_argument("spec")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--time", help="p/q meaning p*pi/q")
    g.add_argument("--raw-time", type=float, help="time in radians")
    p.set_defaults(func=cmd_transition)

    p = sub.add_parser("analyze", parents=[common], help="predictions, PST events, periodicity")
    p.add_argument("spec")
    p.add_argument("--times", nargs="+", help="scan times p/q (default: q <= 8 grid up to 2pi)")
    p.add_argument("--tol", type=float, default=ANALYTIC_TOL)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("certify", parents=[common], help="compare analytic H(t) with the series oracle")
    p.add_argument("spec")
    p.add_argument("--times", nargs="+")
    p.add_argument("--tol", type=float, default=ORACLE_TOL)
    p.add_argument("--oracle-budget", type=int, default=DEFAULT_ORACLE_BUDGET)
    p.add_argument("--inject-error", type=float, default=0.0, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("examples", parents=[common], help="reproduce the bundled worked examples")
    p.add_argument("--tol", type=float, default=ANALYTIC_TOL)
    p.add_argument("--json", action="store_true", help="also emit a JSON report")
    p.set_defaults(func=cmd_examples)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with _size_cap_override(args.size_cap):
            return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SizeCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (EngineError, PathMismatchError, SeriesDivergenceError, TranscriptionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DISCREPANCY


if __name__ == "__main__":
    sys.exit(main())
