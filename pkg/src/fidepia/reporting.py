"""Evaluation tables, CSV output and comparison with the published tables."""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, field, replace
from decimal import ROUND_DOWN, ROUND_HALF_EVEN, Decimal
from typing import Sequence

import mpmath
import numpy as np

from fidepia.fracseries import FracSeries, evaluate_mp
from fidepia.pia import PiaConfig, PiaState, initial_state, iterates
from fidepia.problem import FideProblem
from fidepia.published import ERRATA, TABLES, corrected_table

DEFAULT_GRID = tuple(i / 10 for i in range(11))
FIGURE_GRID = tuple(i / 100 for i in range(101))

_MODES = {"truncate": ROUND_DOWN, "nearest": ROUND_HALF_EVEN}


def _to_decimal(x) -> Decimal:
    if isinstance(x, mpmath.mpf):
        x = mpmath.nstr(x, 30, strip_zeros=False)
    elif not isinstance(x, str):
        x = repr(float(x))
    return Decimal(x)


def format_value(x, decimals: int = 6, rounding: str = "truncate") -> str:
    """Fixed-point text at ``decimals`` places.

    Values are first rounded to 12 places so that binary noise such as
    ``0.39999999999999997`` cannot flip a truncated digit.
    """
    d = _to_decimal(x).quantize(Decimal("1e-12"), rounding=ROUND_HALF_EVEN)
    d = d.quantize(Decimal(1).scaleb(-decimals), rounding=_MODES[rounding])
    if d == 0:
        d = abs(d)
    return f"{d:f}"


def format_error(x, sig: int = 7, rounding: str = "truncate") -> str:
    """Scientific text with ``sig`` significant figures, e.g. ``1.872712E-6``.

    Exact zeros are written in fixed point as ``0.000000``.
    """
    d = abs(_to_decimal(x))
    if d == 0:
        return "0." + "0" * (sig - 1)
    exp = d.adjusted()
    mant = d.scaleb(-exp)
    mant = mant.quantize(Decimal("1e-15"), rounding=ROUND_HALF_EVEN)
    mant = mant.quantize(Decimal(1).scaleb(-(sig - 1)), rounding=_MODES[rounding])
    if mant >= 10:
        mant, exp = mant / 10, exp + 1
        mant = mant.quantize(Decimal(1).scaleb(-(sig - 1)), rounding=ROUND_DOWN)
    return f"{mant:f}E{exp}"


def format_t(t: float) -> str:
    """Grid label with binary noise removed: ``0.30000000000000004`` -> ``0.3``."""
    text = f"{t:.12f}".rstrip("0")
    return text + "0" if text.endswith(".") else text


# {{{ tables


@dataclass(frozen=True)
class TableSpec:
    grid: tuple[float, ...] = DEFAULT_GRID
    iterate_columns: tuple[int, ...] = (5,)
    compare_reference: bool = True
    rounding: str = "truncate"

    def __post_init__(self) -> None:
        grid = tuple(float(t) for t in self.grid)
        if not grid or any(t < 0 or t > 1 for t in grid):
            raise ValueError("grid values must lie in [0, 1]")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("grid must be strictly ascending")
        if not self.iterate_columns or any(n < 0 for n in self.iterate_columns):
            raise ValueError("iterate columns must be non-negative iteration indices")
        if self.rounding not in _MODES:
            raise ValueError(f"rounding must be one of {sorted(_MODES)}")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "iterate_columns", tuple(sorted(set(self.iterate_columns))))


@dataclass
class Table:
    header: list[str]
    rows: list[list[str]]
    states: dict[int, PiaState] = field(default_factory=dict, repr=False)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(self.header)
        writer.writerows(self.rows)
        return buf.getvalue()

    def write_csv(self, path: str | os.PathLike) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(self.to_csv())

    def render(self) -> str:
        widths = [max(len(h), *(len(r[i]) for r in self.rows)) for i, h in enumerate(self.header)]
        lines = ["  ".join(h.rjust(w) for h, w in zip(self.header, widths))]
        lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in self.rows]
        return "\n".join(lines)

    def column(self, name: str) -> list[str]:
        i = self.header.index(name)
        return [r[i] for r in self.rows]


def collect_states(problem: FideProblem, wanted: Sequence[int], cfg: PiaConfig) -> dict[int, PiaState]:
    """Run the iteration far enough to return the states with the given indices."""
    last = max(wanted)
    if last == 0:
        return {0: initial_state(problem, cfg)}
    states = {}
    for state in iterates(problem, replace(cfg, max_iter=last)):
        if state.n in wanted:
            states[state.n] = state
    return states


def build_table(problem: FideProblem, spec: TableSpec = TableSpec(), cfg: PiaConfig = PiaConfig()) -> Table:
    """Evaluate selected iterates on a grid, optionally against the reference solution.

    Columns are ``t``, one column per iterate, then ``exact`` and
    ``abs_error`` (of the last iterate).  With several unknowns every
    column name is prefixed by the unknown, e.g. ``u3, u_exact,
    u_abs_error, k3, ...``.  Errors are computed in extended precision.
    """
    if spec.compare_reference and problem.reference is None:
        raise ValueError(f"problem {problem.name!r} has no reference solution")
    states = collect_states(problem, spec.iterate_columns, cfg)
    single = problem.size == 1
    last = spec.iterate_columns[-1]

    header = ["t"]
    for name in problem.unknowns:
        header += [f"{name}{n}" for n in spec.iterate_columns]
        if spec.compare_reference:
            header += ["exact", "abs_error"] if single else [f"{name}_exact", f"{name}_abs_error"]

    rows = []
    for t in spec.grid:
        row = [format_t(t)]
        for j in range(problem.size):
            for n in spec.iterate_columns:
                row.append(format_value(evaluate_mp(states[n].iterates[j], t), rounding=spec.rounding))
            if spec.compare_reference:
                ref = problem.reference[j].eval_mp(t)
                err = abs(evaluate_mp(states[last].iterates[j], t) - ref)
                row.append(format_value(ref, rounding=spec.rounding))
                row.append(format_error(err, rounding=spec.rounding))
        rows.append(row)
    return Table(header, rows, states)


def figure_data(problem: FideProblem, n: int, unknown: int, cfg: PiaConfig = PiaConfig(),
                grid: Sequence[float] = FIGURE_GRID) -> list[list[str]]:
    """``[t, u_n(t), exact(t)]`` rows at full double precision."""
    state = collect_states(problem, [n], cfg)[n]
    u: FracSeries = state.iterates[unknown]
    ts = np.asarray(grid, dtype=float)
    values = u(ts)
    ref = problem.reference[unknown](ts) if problem.reference else np.full_like(ts, np.nan)
    return [[repr(float(t)), repr(float(v)), repr(float(r))] for t, v, r in zip(ts, values, ref)]


# }}}

# {{{ comparison with published values


@dataclass(frozen=True)
class CellCheck:
    t: str
    column: str
    published: str
    computed: str
    erratum: str | None

    @property
    def ok(self) -> bool:
        return self.published == self.computed


def compare_with_published(table: Table, name: str) -> list[CellCheck]:
    """Cell-by-cell comparison with published table ``name`` (errata applied)."""
    columns, rows = corrected_table(name)
    notes = {(e.t, e.column): f"printed {e.printed!r}: {e.note}" for e in ERRATA if e.table == name}
    by_t = {r[0]: r for r in table.rows}
    out = []
    for prow in rows:
        crow = by_t.get(prow[0])
        for col, pub in zip(columns[1:], prow[1:]):
            comp = crow[table.header.index(col)] if crow is not None and col in table.header else ""
            out.append(CellCheck(prow[0], col, pub, comp, notes.get((prow[0], col))))
    return out


def last_place_deviation(published: str, computed: str) -> int:
    """``|computed - published|`` counted in units of the published text's last digit."""
    pub, comp = Decimal(published), Decimal(computed)
    unit = Decimal(1).scaleb(pub.as_tuple().exponent)
    return int((abs(comp - pub) / unit).to_integral_value())


def summarize_comparison(checks: Sequence[CellCheck], name: str) -> str:
    """Plain-text report: match counts, largest deviation per column, errata, mismatches."""
    lines = [f"{name}: {sum(c.ok for c in checks)}/{len(checks)} cells match at printed precision"]
    columns = list(dict.fromkeys(c.column for c in checks))
    for col in columns:
        devs = [last_place_deviation(c.published, c.computed) for c in checks if c.column == col and c.computed]
        lines.append(f"  max deviation in {col}: {max(devs)} unit(s) in the last printed place")
    errata = [c for c in checks if c.erratum]
    if errata:
        lines.append("  published errata (compared against the corrected text):")
        lines += [f"    t={c.t} {c.column}: {c.erratum}" for c in errata]
    bad = [c for c in checks if not c.ok]
    if bad:
        lines.append("  mismatches:")
        lines += [f"    t={c.t} {c.column}: published {c.published}, computed {c.computed}" for c in bad]
    return "\n".join(lines)


def published_table_names() -> tuple[str, ...]:
    return tuple(TABLES)


# }}}
