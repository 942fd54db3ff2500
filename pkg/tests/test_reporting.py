from __future__ import annotations

import csv
import io
from decimal import Decimal

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fidepia.pia import PiaConfig
from fidepia.problem import builtin_problem
from fidepia.published import ERRATA, TABLES, corrected_table
from fidepia.reporting import (
    TableSpec,
    build_table,
    compare_with_published,
    figure_data,
    format_error,
    format_t,
    format_value,
    last_place_deviation,
    summarize_comparison,
)

FAST = PiaConfig(residual_points=0)


@pytest.fixture(scope="module")
def table1():
    return build_table(builtin_problem("example1"), TableSpec(iterate_columns=(2, 3, 4, 5)), FAST)


@pytest.fixture(scope="module")
def table2():
    return build_table(builtin_problem("example2"), TableSpec(iterate_columns=(3,)), FAST)


class TestFormatting:
    @pytest.mark.parametrize(
        "x, text",
        [(0.99981273, "0.999812"), (0.4, "0.400000"), (0.39999999999999997, "0.400000"), (0.0, "0.000000"), (-0.0, "0.000000")],
    )
    def test_values_truncate(self, x, text):
        assert format_value(x) == text

    def test_values_nearest(self):
        assert format_value(0.99981273, rounding="nearest") == "0.999813"

    @pytest.mark.parametrize(
        "x, text",
        [(1.8727120483e-6, "1.872712E-6"), (1.8727120483e-4, "1.872712E-4"), (0.0, "0.000000"), (9.99999999e-3, "9.999999E-3")],
    )
    def test_errors(self, x, text):
        assert format_error(x) == text

    def test_extended_precision_input(self):
        with mpmath.workdps(40):
            assert format_error(mpmath.mpf("1.59157822e-10")) == "1.591578E-10"

    def test_t(self):
        assert format_t(0.30000000000000004) == "0.3"
        assert format_t(0.25) == "0.25"

    @given(st.floats(0, 10))
    def test_truncation_never_exceeds_value(self, x):
        assert Decimal(format_value(x)) <= Decimal(repr(x)).quantize(Decimal("1e-12")) + Decimal("1e-12")


class TestTables:
    def test_header(self, table1, table2):
        assert table1.header == ["t", "u2", "u3", "u4", "u5", "exact", "abs_error"]
        assert table2.header == ["t", "u3", "u_exact", "u_abs_error", "k3", "k_exact", "k_abs_error"]

    def test_row(self, table1):
        row = table1.rows[4]
        assert row == ["0.4", "0.396208", "0.399249", "0.399850", "0.399970", "0.400000", "2.996339E-5"]

    def test_first_row(self, table1):
        assert table1.rows[0] == ["0.0"] + ["0.000000"] * 6

    def test_second_example_row(self, table2):
        row = dict(zip(table2.header, table2.rows[8]))
        assert (row["u3"], row["u_exact"], row["u_abs_error"]) == ("0.887710", "0.888105", "3.950285E-4")

    def test_csv_round_trip(self, table1):
        text = table1.to_csv()
        assert text.startswith("t,u2,u3,u4,u5,exact,abs_error\r\n")
        parsed = list(csv.reader(io.StringIO(text)))
        assert parsed[0] == table1.header and parsed[1:] == table1.rows
        for row in parsed[1:]:
            for cell in row[1:6]:
                assert format_value(float(cell)) == cell

    def test_write_csv(self, table1, tmp_path):
        path = tmp_path / "t.csv"
        table1.write_csv(path)
        assert path.read_bytes() == table1.to_csv().encode()

    def test_without_reference(self):
        t = build_table(builtin_problem("example1"), TableSpec(grid=(0.5,), iterate_columns=(1,), compare_reference=False), FAST)
        assert t.header == ["t", "u1"] and t.rows == [["0.5", "0.468750"]]

    @pytest.mark.parametrize(
        "kwargs", [{"grid": (0.5, 0.2)}, {"grid": (1.5,)}, {"iterate_columns": ()}, {"rounding": "up"}]
    )
    def test_spec_validation(self, kwargs):
        with pytest.raises(ValueError):
            TableSpec(**kwargs)

    def test_render(self, table1):
        lines = table1.render().splitlines()
        assert len(lines) == 12 and lines[0].split() == table1.header

    def test_figure_data(self):
        rows = figure_data(builtin_problem("example1"), 3, 0, FAST)
        assert len(rows) == 101
        assert rows[-1][0] == "1.0" and float(rows[-1][2]) == 1.0


class TestComparison:
    def test_first_table(self, table1):
        checks = compare_with_published(table1, "table1")
        assert len(checks) == 66 and all(c.ok for c in checks)

    def test_summary_mentions_errata(self, table2):
        text = summarize_comparison(compare_with_published(table2, "table2"), "table2")
        assert "errata" in text and "1000000." in text

    def test_errata_apply_cleanly(self):
        for name in TABLES:
            columns, rows = corrected_table(name)
            assert len(rows) == 11 and all(len(r) == len(columns) for r in rows)
        assert len(ERRATA) == 6

    def test_last_place(self):
        assert last_place_deviation("1.191735E-11", "1.191720E-11") == 15
        assert last_place_deviation("0.999812", "0.999812") == 0
