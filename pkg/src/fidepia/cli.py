"""Command-line front end: ``fide-pia {solve,table,residual,reproduce}``.

Exit codes: 0 success, 1 usage or validation error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from fidepia import __version__
from fidepia.errors import FidePiaError, ParseError, ValidationError
from fidepia.expr import eval_expr, parse_expr
from fidepia.fraccalc import FracOrder
from fidepia.fracseries import PRUNE_TOL, FracSeries, render, to_records
from fidepia.oracle import residual_sup_norm
from fidepia.pia import PiaConfig, PiaState, initial_state, iterate, solve
from fidepia.problem import BUILTIN_PROBLEMS, FideProblem, builtin_problem, open_problem
from fidepia.reporting import (
    DEFAULT_GRID,
    TableSpec,
    build_table,
    compare_with_published,
    figure_data,
    summarize_comparison,
)

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2

PRUNE_ENV = "FIDE_PIA_PRUNE_TOL"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


# {{{ argument helpers


def _orders(text: str | None) -> list[FracOrder] | None:
    if text is None:
        return None
    return [FracOrder(part.strip()) for part in text.split(",")]


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ValidationError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ValidationError(f"expected comma-separated integers, got {text!r}") from None


def _grid(text: str) -> list[float]:
    """Either a count ``N`` (uniform grid on [0, 1]) or an explicit list."""
    if "," not in text and text.strip().isdigit():
        n = int(text)
        if n < 1:
            raise ValidationError("point count must be positive")
        return [0.0] if n == 1 else list(np.linspace(0.0, 1.0, n))
    return _floats(text)


def _prune_tol() -> float:
    raw = os.environ.get(PRUNE_ENV)
    if raw is None:
        return PRUNE_TOL
    try:
        value = float(raw)
    except ValueError:
        raise ValidationError(f"{PRUNE_ENV} must be a number, got {raw!r}") from None
    if value < 0:
        raise ValidationError(f"{PRUNE_ENV} must be >= 0")
    return value


def _guess(text: str | None, problem: FideProblem) -> tuple[FracSeries, ...] | None:
    if text is None:
        return None
    parts = text.split(",")
    if len(parts) != problem.size:
        raise ValidationError(f"--guess needs {problem.size} comma-separated expression(s)")
    series = []
    for p in parts:
        e = parse_expr(p, [])
        series.append(eval_expr(e, []))
    return tuple(series)


def _load(args) -> FideProblem:
    problem = open_problem(args.problem)
    orders = _orders(getattr(args, "alpha", None))
    if orders is not None:
        if len(orders) not in (1, problem.size):
            raise ValidationError(f"--alpha needs 1 or {problem.size} order(s)")
        problem = problem.with_orders(orders)
    return problem


def _config(args, problem: FideProblem, max_iter: int, residual_points: int) -> PiaConfig:
    try:
        return PiaConfig(
            epsilon=getattr(args, "epsilon", 1.0),
            max_iter=max(max_iter, 1),
            prune_tol=_prune_tol(),
            max_exponent=Fraction(args.max_exponent) if getattr(args, "max_exponent", None) else None,
            initial_guess=_guess(getattr(args, "guess", None), problem),
            residual_points=residual_points,
        )
    except ValueError as exc:
        if isinstance(exc, FidePiaError):
            raise
        raise ValidationError(str(exc)) from None


# }}}

# {{{ commands


def cmd_solve(args) -> int:
    problem = _load(args)
    cfg = _config(args, problem, args.iters, 0 if args.no_residual else 21)
    state = solve(problem, cfg)
    for name, u in zip(problem.unknowns, state.iterates):
        print(f"{name}: {render(u)}")
    for rec in state.history:
        norm = "n/a" if rec.residual_sup_norm is None else f"{rec.residual_sup_norm:.6e}"
        print(f"# n={rec.n} terms={list(rec.term_count)} residual_sup={norm} "
              f"C={list(rec.correction_constant)}")
    if args.out:
        doc = {
            "problem": problem.name,
            "unknowns": list(problem.unknowns),
            "orders": [str(o) for o in problem.orders],
            "epsilon": cfg.epsilon,
            "iterations": state.n,
            "iterates": {
                name: {"text": render(u), "terms": to_records(u)}
                for name, u in zip(problem.unknowns, state.iterates)
            },
            "history": [
                {
                    "n": r.n,
                    "term_count": list(r.term_count),
                    "residual_sup_norm": r.residual_sup_norm,
                    "correction_constant": list(r.correction_constant),
                }
                for r in state.history
            ],
        }
        Path(args.out).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


def _table_spec(args) -> TableSpec:
    columns = _ints(args.columns) if args.columns else [args.iters]
    grid = _grid(args.grid) if args.grid else DEFAULT_GRID
    try:
        return TableSpec(
            grid=tuple(grid),
            iterate_columns=tuple(columns),
            compare_reference=not args.no_reference,
            rounding=args.rounding,
        )
    except ValueError as exc:
        raise ValidationError(str(exc)) from None


def cmd_table(args) -> int:
    problem = _load(args)
    spec = _table_spec(args)
    if spec.compare_reference and problem.reference is None:
        raise ValidationError(f"problem {problem.name!r} has no reference; use --no-reference")
    cfg = _config(args, problem, max(spec.iterate_columns), 0)
    table = build_table(problem, spec, cfg)
    print(table.render())
    if args.csv:
        table.write_csv(args.csv)
    return EXIT_OK


def cmd_residual(args) -> int:
    problem = _load(args)
    points = _grid(args.points)
    if any(t < 0 or t > 1 for t in points):
        raise ValidationError("residual points must lie in [0, 1]")
    if args.iters < 0:
        raise ValidationError("--iters must be >= 0")
    cfg = _config(args, problem, args.iters, 0)
    state: PiaState = initial_state(problem, cfg)
    print(f"# sup-norm of the numerical residual over {len(points)} point(s)")
    print(f"n=0 residual_sup={residual_sup_norm(problem, state.iterates, points):.6e}")
    for _ in range(args.iters):
        state = iterate(problem, state, cfg)
        print(f"n={state.n} residual_sup={residual_sup_norm(problem, state.iterates, points):.6e}")
    return EXIT_OK


def _write_rows(path: Path, header: Sequence[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(header)
        writer.writerows(rows)


def reproduce(name: str, outdir: str | os.PathLike) -> list[Path]:
    """Write the table, figure data and a comparison summary for a built-in problem."""
    if name not in BUILTIN_PROBLEMS:
        raise ValidationError(f"unknown example {name!r}; choose from {', '.join(BUILTIN_PROBLEMS)}")
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    cfg = PiaConfig(residual_points=0, prune_tol=_prune_tol())
    written = []
    if name == "example1":
        problem = builtin_problem(name).with_orders(["1"])
        table = build_table(problem, TableSpec(iterate_columns=(2, 3, 4, 5)), cfg)
        table.write_csv(out / "table1.csv")
        written.append(out / "table1.csv")
        _write_rows(out / "fig1.csv", ["t", "u3", "exact"], figure_data(problem, 3, 0, cfg))
        written.append(out / "fig1.csv")
        summary = summarize_comparison(compare_with_published(table, "table1"), "table1")
    else:
        problem = builtin_problem(name).with_orders(["1"])
        table = build_table(problem, TableSpec(iterate_columns=(3,)), cfg)
        table.write_csv(out / "table2.csv")
        written.append(out / "table2.csv")
        _write_rows(out / "fig2.csv", ["t", "u3", "exact"], figure_data(problem, 3, 0, cfg))
        _write_rows(out / "fig3.csv", ["t", "k3", "exact"], figure_data(problem, 3, 1, cfg))
        written += [out / "fig2.csv", out / "fig3.csv"]
        summary = summarize_comparison(compare_with_published(table, "table2"), "table2")
    summary_path = out / f"{name}_summary.txt"
    summary_path.write_text(summary + "\n", encoding="utf-8")
    written.append(summary_path)
    print(summary)
    return written


def cmd_reproduce(args) -> int:
    for path in reproduce(args.name, args.outdir):
        print(f"wrote {path}")
    return EXIT_OK


# }}}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fide-pia", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, iters_default: int) -> None:
        p.add_argument("problem", help=f"problem file or built-in name ({', '.join(BUILTIN_PROBLEMS)})")
        p.add_argument("--alpha", help="order(s) p/q in (0, 1]; one for all unknowns or comma-separated")
        p.add_argument("--iters", type=int, default=iters_default, help="number of iterations")
        p.add_argument("--epsilon", type=float, default=1.0, help="perturbation parameter (default 1)")
        p.add_argument("--max-exponent", help="drop terms above this exponent (p/q)")
        p.add_argument("--guess", help="initial guess, one expression in t per unknown, comma-separated")

    p = sub.add_parser("solve", help="run the iteration and print the iterates")
    common(p, 3)
    p.add_argument("--out", help="write a JSON result document")
    p.add_argument("--no-residual", action="store_true", help="skip the numerical residual diagnostic")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("table", help="evaluate iterates on a grid")
    common(p, 5)
    p.add_argument("--columns", help="iteration indices to tabulate, e.g. 2,3,4,5 (default: --iters)")
    p.add_argument("--grid", help="point count or comma-separated t values in [0, 1]")
    p.add_argument("--no-reference", action="store_true", help="omit exact and error columns")
    p.add_argument("--rounding", choices=("truncate", "nearest"), default="truncate")
    p.add_argument("--csv", help="also write the table as CSV")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("residual", help="numerical residual norms per iteration")
    common(p, 3)
    p.add_argument("--points", default="21", help="point count or comma-separated t values (default 21)")
    p.set_defaults(func=cmd_residual)

    p = sub.add_parser("reproduce", help="write published tables and figure data for a built-in example")
    p.add_argument("name", help=f"one of {', '.join(BUILTIN_PROBLEMS)}")
    p.add_argument("--outdir", default=".", help="output directory")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FidePiaError, ArithmeticError, OSError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
