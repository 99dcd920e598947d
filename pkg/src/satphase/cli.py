"""Command-line front end.

Exit codes: 0 success/SAT, 1 UNSAT, 2 usage or input error, 3 timeout.
Data goes to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import math
import sys
import warnings
from pathlib import Path

from . import charts, sudoku
from .cnf import DimacsError, parse_dimacs, write_dimacs
from .generators import NeighborhoodSpec, RichSpec, UniformSpec, as_fraction, generate
from .network import build_graph, centrality_histogram, network_metrics
from .solver import SolverLimits, Status, solve
from .sweep import (
    NoCrossingError,
    crossover_estimate,
    format_csv,
    parse_config,
    run_sweep,
    spec_from_config,
)

EXIT_OK, EXIT_UNSAT, EXIT_USAGE, EXIT_TIMEOUT = 0, 1, 2, 3
_EXIT_FOR = {Status.SAT: EXIT_OK, Status.UNSAT: EXIT_UNSAT, Status.TIMEOUT: EXIT_TIMEOUT}


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, path: str | None) -> None:
    if path and path != "-":
        try:
            Path(path).write_text(text, newline="\n")
        except OSError as exc:
            raise UsageError(f"cannot write {path}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    if args.dist != "rich" and args.copies is not None:
        raise UsageError("--copies only applies to --dist rich")
    if args.dist != "nbhd" and (args.bucket is not None or args.p is not None):
        raise UsageError("--bucket/--p only apply to --dist nbhd")
    gamma = as_fraction(args.gamma)
    try:
        if args.dist == "uniform":
            spec = UniformSpec(args.vars, args.k, gamma)
        elif args.dist == "rich":
            spec = RichSpec(args.vars, args.k, gamma, copies=args.copies or 1)
        else:
            spec = NeighborhoodSpec(
                args.vars,
                args.k,
                gamma,
                bucket_size=10 if args.bucket is None else args.bucket,
                p=0.3 if args.p is None else args.p,
            )
        formula = generate(spec, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(write_dimacs(formula), args.output)
    return EXIT_OK


def _load_formula(path: str):
    try:
        return parse_dimacs(_read(path))
    except DimacsError as exc:
        raise UsageError(f"invalid DIMACS: {exc}") from None


def cmd_solve(args) -> int:
    f = _load_formula(args.path)
    res = solve(f, SolverLimits(args.timeout, args.max_backtracks))
    print(
        f"status={res.status.value} backtracks={res.backtracks} "
        f"decisions={res.decisions} elapsed_ms={res.elapsed_ms:.3f}"
    )
    if args.model and res.model is not None:
        print(" ".join(map(str, res.model_literals())))
    return _EXIT_FOR[res.status]


def cmd_graph(args) -> int:
    g = build_graph(_load_formula(args.path))
    m = network_metrics(g)
    if g.num_edges == 0:
        print("warning: graph has no edges; L, mu and centrality are undefined", file=sys.stderr)
    elif math.isnan(m.mu):
        print(f"warning: mean degree {m.z:g} <= 1; proximity ratio undefined", file=sys.stderr)
    if args.metrics or args.histogram is None:
        print(m.record())
    if args.histogram is not None:
        if m.centrality is None:
            raise UsageError("no centrality values to histogram (edgeless graph)")
        sys.stdout.write(centrality_histogram(m.centrality, args.histogram).to_csv())
    return EXIT_OK


_SWEEP_FLAGS = {
    "dist": "dist",
    "vars": "vars",
    "k": "k",
    "copies": "copies",
    "bucket": "bucket",
    "p": "p",
    "gamma_start": "gamma_start",
    "gamma_stop": "gamma_stop",
    "gamma_step": "gamma_step",
    "samples": "samples",
    "timeout": "timeout_ms",
    "max_backtracks": "max_backtracks",
    "seed": "seed",
    "metrics": "metrics",
    "timing": "timing",
}


def cmd_sweep(args) -> int:
    cfg = {}
    try:
        if args.config:
            cfg = parse_config(_read(args.config))
        for attr, key in _SWEEP_FLAGS.items():
            val = getattr(args, attr)
            if val is not None:
                cfg[key] = val
        spec = spec_from_config(cfg)
    except ValueError as exc:
        raise UsageError(f"invalid sweep spec: {exc}") from None
    rows = run_sweep(spec, workers=args.workers)
    _emit(format_csv(rows), args.output)
    try:
        print(f"crossover gamma* = {crossover_estimate(rows):.4f}", file=sys.stderr)
    except NoCrossingError as exc:
        print(f"no crossover: {exc}", file=sys.stderr)
    return EXIT_OK


def cmd_sudoku(args) -> int:
    try:
        grid = sudoku.parse_grid(_read(args.grid))
    except sudoku.SudokuError as exc:
        raise UsageError(f"invalid grid: {exc}") from None
    formula = sudoku.encode(grid)
    if args.action == "encode":
        _emit(write_dimacs(formula), args.output)
        return EXIT_OK
    res = solve(formula)
    if res.status is not Status.SAT:
        print("puzzle has no solution", file=sys.stderr)
        return EXIT_UNSAT
    _emit(sudoku.format_grid(sudoku.decode_model(res.model)), args.output)
    return EXIT_OK


def cmd_plot(args) -> int:
    try:
        spec = charts.ChartSpec(
            input_csv=args.csv,
            x=args.x,
            y=tuple(args.y or ["pct_sat"]),
            output_svg=args.output,
            title=args.title,
            log_y=args.log_y,
            kind=args.kind,
        )
        svg = charts.render(spec, _read(args.csv))
    except charts.ChartError as exc:
        raise UsageError(str(exc)) from None
    _emit(svg, spec.output_svg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="satphase", description="SAT phase-transition laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random k-SAT instance")
    p.add_argument("--dist", choices=["uniform", "rich", "nbhd"], required=True)
    p.add_argument("--vars", type=int, required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--gamma", required=True, help="constrainedness (clauses / variables)")
    p.add_argument("--copies", type=int)
    p.add_argument("--bucket", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="solve a DIMACS file ('-' for stdin)")
    p.add_argument("path")
    p.add_argument("--timeout", type=float, default=0, metavar="MS")
    p.add_argument("--max-backtracks", type=int, default=0)
    p.add_argument("--model", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("graph", help="clausal network metrics")
    p.add_argument("path")
    p.add_argument("--histogram", type=int, metavar="BINS")
    p.add_argument("--metrics", action="store_true")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("sweep", help="run a constrainedness sweep")
    p.add_argument("--config")
    p.add_argument("--dist", choices=["uniform", "rich", "nbhd"])
    p.add_argument("--vars", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--copies", type=int)
    p.add_argument("--bucket", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--gamma-start")
    p.add_argument("--gamma-stop")
    p.add_argument("--gamma-step")
    p.add_argument("--samples", type=int)
    p.add_argument("--timeout", type=float, metavar="MS")
    p.add_argument("--max-backtracks", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--metrics", action="store_const", const=True)
    p.add_argument("--no-timing", dest="timing", action="store_const", const=False)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("sudoku", help="encode or solve an 81-character Sudoku grid")
    p.add_argument("action", choices=["encode", "solve"])
    p.add_argument("grid")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sudoku)

    p = sub.add_parser("plot", help="render an SVG chart from a CSV")
    p.add_argument("csv")
    p.add_argument("--x", default="gamma")
    p.add_argument("--y", action="append", help="y column (repeat up to 3 times)")
    p.add_argument("--title", default="")
    p.add_argument("--log-y", action="store_true")
    p.add_argument("--kind", choices=["auto", "line", "hist"], default="auto")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            return args.func(args)
    except UsageError as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
