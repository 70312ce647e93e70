"""Command-line front end.

    discrete-wigner compute --two-j 2 --n 0 --backend exact --format json --out results/
    discrete-wigner verify  --two-j 24
    discrete-wigner compare --two-j 24 --n 0 --format pgm --out figures/
    discrete-wigner export  results/su2_2j2_n0_exact.json --format pgm --out w0.pgm

j is always given as the integer 2j (``--two-j``).  Exit status: 0 on
success, 1 when a computation or verification fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .canonical import GridSpec, sample_canonical_grid
from .exceptions import ModelError, NormalizationError, RealnessError
from .export import FORMATS, GridExport
from .model import ModelDescriptor, load_model, su2
from .scalars import get_backend, parse_exact
from .wigner import superposition_wigner, verify_properties, wigner_matrix

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2


class _UsageError(Exception):
    pass


def _tolerance(args) -> float:
    if args.tol is not None:
        if not args.tol > 0:
            raise _UsageError("--tol must be positive")
        return args.tol
    raw = os.environ.get("WIGNER_TOL")
    if raw is None:
        return 1e-10
    try:
        tol = float(raw)
    except ValueError:
        raise _UsageError(f"WIGNER_TOL={raw!r} is not a number") from None
    if not tol > 0:
        raise _UsageError("WIGNER_TOL must be positive")
    return tol


def _add_common(p: argparse.ArgumentParser, states: bool = True) -> None:
    p.add_argument("--two-j", type=int, help="twice the su(2) label j (integer >= 0)")
    p.add_argument("--model", type=Path, help="custom model JSON instead of su(2)")
    if states:
        p.add_argument("--n", type=int, action="append", dest="states",
                       help="stationary state index (repeatable)")
    p.add_argument("--backend", choices=("exact", "float"), default="exact")
    p.add_argument("--tol", type=float, default=None,
                   help="float-mode absolute tolerance (default: $WIGNER_TOL or 1e-10)")


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=FORMATS, default="json")
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="discrete-wigner",
                                     description="Compute and check discrete Wigner functions on finite phase-space grids.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="compute W(n) grids (or a superposition) and write them")
    _add_common(p)
    p.add_argument("--coeffs", help="comma-separated state coefficients c_0,...,c_N "
                                    "(e.g. '3/5,4/5i' or '1/2*sqrt(2),1/2*sqrt(2),0')")
    _add_output(p)

    p = sub.add_parser("verify", help="check realness, marginals, normalization and symmetries")
    _add_common(p)

    p = sub.add_parser("compare", help="write discrete W(n) next to the canonical W_n")
    _add_common(p)
    p.add_argument("--samples", type=int, default=101, help="canonical samples per axis")
    p.add_argument("--extent", type=float, default=4.0, help="canonical window is (-extent, extent)^2")
    _add_output(p)

    p = sub.add_parser("export", help="convert a grid JSON file to json/csv/pgm")
    p.add_argument("input", type=Path)
    p.add_argument("--format", choices=FORMATS, default="pgm")
    p.add_argument("--out", type=Path, required=True, help="output file")
    return parser


def _model(args, tol: float) -> tuple[ModelDescriptor, str]:
    if args.model is not None:
        model = load_model(args.model, tol=tol)
        if args.backend == "exact" and not model.backend.exact:
            raise _UsageError("model file contains floats; use --backend float")
        return model, model.name
    if args.two_j is None:
        raise _UsageError("--two-j (or --model) is required")
    if args.two_j < 0:
        raise _UsageError("--two-j must be a non-negative integer")
    return su2(args.two_j, get_backend(args.backend, tol)), "su2"


def _states(args, model: ModelDescriptor, default_all: bool) -> list[int]:
    states = args.states
    if not states:
        if default_all:
            return list(range(model.dimension))
        raise _UsageError("at least one --n is required")
    for n in states:
        if not 0 <= n <= model.N:
            raise _UsageError(f"--n {n} outside 0..{model.N}")
    return states


def _parse_coeffs(text: str, exact: bool) -> list:
    try:
        values = [parse_exact(t.strip()) for t in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise _UsageError(f"cannot parse --coeffs: {exc}") from None
    return values if exact else [complex(v) for v in values]


def _stem(model_name: str, model: ModelDescriptor, label: str, backend: str) -> str:
    size = f"2j{model.two_j}" if model.two_j is not None else f"d{model.dimension}"
    return f"{model_name}_{size}_{label}_{backend}"


def _write(grid: GridExport, out_dir: Path, stem: str, fmt: str) -> Path:
    path = grid.write(out_dir / f"{stem}.{fmt}", fmt)
    print(path)
    return path


def cmd_compute(args) -> int:
    tol = _tolerance(args)
    model, name = _model(args, tol)
    if args.coeffs is not None:
        if args.states:
            raise _UsageError("--coeffs and --n are mutually exclusive")
        coeffs = _parse_coeffs(args.coeffs, model.backend.exact)
        if len(coeffs) != model.dimension:
            raise _UsageError(f"--coeffs needs {model.dimension} values, got {len(coeffs)}")
        W = superposition_wigner(model, coeffs)
        grid = GridExport.from_wigner(W, name, model.two_j)
        _write(grid, args.out, _stem(name, model, "state", model.backend.name), args.format)
        return EXIT_OK
    for n in _states(args, model, default_all=False):
        grid = GridExport.from_wigner(wigner_matrix(model, n), name, model.two_j)
        _write(grid, args.out, _stem(name, model, f"n{n}", model.backend.name), args.format)
    return EXIT_OK


def cmd_verify(args) -> int:
    tol = _tolerance(args)
    model, name = _model(args, tol)
    ok = True
    for n in _states(args, model, default_all=True):
        report = verify_properties(model, n)
        for line in report.lines():
            print(line)
        ok = ok and report.passed
    print("all checks passed" if ok else "verification FAILED")
    return EXIT_OK if ok else EXIT_FAILURE


def cmd_compare(args) -> int:
    tol = _tolerance(args)
    model, name = _model(args, tol)
    if args.samples < 2 or not args.extent > 0:
        raise _UsageError("--samples must be >= 2 and --extent positive")
    spec = GridSpec(-args.extent, args.extent, -args.extent, args.extent, args.samples)
    for n in _states(args, model, default_all=False):
        discrete = GridExport.from_wigner(wigner_matrix(model, n), name, model.two_j)
        _write(discrete, args.out, _stem(name, model, f"n{n}", model.backend.name) + "_discrete",
               args.format)
        _write(sample_canonical_grid(n, spec), args.out, f"canonical_n{n}", args.format)
    return EXIT_OK


def cmd_export(args) -> int:
    try:
        grid = GridExport.read_json(args.input)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    grid.write(args.out, args.format)
    print(args.out)
    return EXIT_OK


COMMANDS = {"compute": cmd_compute, "verify": cmd_verify, "compare": cmd_compare,
            "export": cmd_export}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ModelError, NormalizationError, RealnessError, np.linalg.LinAlgError,
            ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
