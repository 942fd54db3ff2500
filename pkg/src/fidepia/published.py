"""Published numerical tables for the two built-in problems, as printed.

Cells are kept verbatim as strings.  :data:`ERRATA` lists the cells whose
printed text is evidently a transcription slip, with the corrected text
the comparison uses instead.
"""

from __future__ import annotations

from dataclasses import dataclass

TABLE1_COLUMNS = ("t", "u2", "u3", "u4", "u5", "exact", "abs_error")

# example1, alpha = 1
TABLE1 = (
    ("0.0", "0.000000", "0.000000", "0.000000", "0.000000", "0.000000", "0.000000"),
    ("0.1", "0.099763", "0.099953", "0.099990", "0.099981", "0.100000", "1.872712E-6"),
    ("0.2", "0.199052", "0.199812", "0.199962", "0.199992", "0.200000", "7.490848E-6"),
    ("0.3", "0.297867", "0.299577", "0.299915", "0.299983", "0.300000", "1.685440E-5"),
    ("0.4", "0.396208", "0.399249", "0.399850", "0.399970", "0.400000", "2.996339E-5"),
    ("0.5", "0.494075", "0.498826", "0.499765", "0.499953", "0.500000", "4.681780E-5"),
    ("0.6", "0.591468", "0.598310", "0.599662", "0.599932", "0.600000", "6.741763E-5"),
    ("0.7", "0.688388", "0.697700", "0.699541", "0.699908", "0.700000", "9.176289E-5"),
    ("0.8", "0.784833", "0.796996", "0.799400", "0.799880", "0.800000", "1.198535E-4"),
    ("0.9", "0.880804", "0.896198", "0.899241", "0.899848", "0.900000", "1.516896E-4"),
    ("1.0", "0.976302", "0.995307", "0.999063", "0.999812", "1.000000", "1.872712E-4"),
)

TABLE2_COLUMNS = ("t", "u3", "u_exact", "u_abs_error", "k3", "k_exact", "k_abs_error")

# example2, alpha_1 = alpha_2 = 1
TABLE2 = (
    ("0.0", "0.000000", "0.000000", "0.000000", "1.000000", "1000000.", "0.000000"),
    ("0.1", "0.100166", "0.100166", "1.591577E-10", "1.005004", "1.005004", "1.191735E-11"),
    ("0.2", "0.201335", "0.201336", "2.053723E-8", "1.020066", "1.020066", "3.060393E-9"),
    ("0.3", "0.304519", "0.304520", "3.556439E-7", "1.045338", "1.045338", "7.884730E-8"),
    ("0.4", "0.410749", "0.410752", "2.714842E-6", "1.081073", "1.081072", "7.934216E-7"),
    ("0.5", "0.521082", "0.521095", "1.326132E-5", "1.127630", "1.127625", "4.774578E-6"),
    ("0.6", "0.636604", "0.636653", "4.893639E-5", "1.185485", "1.185465", "2.077300E-5"),
    ("0.7", "0.758434", "0.758583", "1.490491E-4", "1.255241", "1.255169", "7.230620E-5"),
    ("0.8", "0.887710", "0.888105", "3.950285E-4", "1.337648", "1.337434", "2.139083E-4"),
    ("0.9", "0.025574", "0.026516", "9.426045E-4", "1.433645", "1.433086", "5.592545E-4"),
    ("1.0", "0.173128", "0.175201", "2.072716E-3", "1.544407", "1.543080", "1.327116E-3"),
)


@dataclass(frozen=True)
class Erratum:
    table: str
    t: str
    column: str
    printed: str
    corrected: str
    note: str


ERRATA = (
    Erratum(
        "table1", "0.1", "u5", "0.099981", "0.099998",
        "digit dropped; the same row's abs_error 1.872712E-6 gives 0.1 - 1.872712E-6 = 0.0999981",
    ),
    Erratum("table2", "0.0", "k_exact", "1000000.", "1.000000", "misplaced decimal point; cosh(0) = 1"),
    Erratum("table2", "0.9", "u3", "0.025574", "1.025574", "leading '1' dropped; sinh(0.9) > 1"),
    Erratum("table2", "0.9", "u_exact", "0.026516", "1.026516", "leading '1' dropped; sinh(0.9) = 1.0265..."),
    Erratum("table2", "1.0", "u3", "0.173128", "1.173128", "leading '1' dropped; sinh(1) > 1"),
    Erratum("table2", "1.0", "u_exact", "0.175201", "1.175201", "leading '1' dropped; sinh(1) = 1.1752..."),
)

TABLES = {
    "table1": (TABLE1_COLUMNS, TABLE1),
    "table2": (TABLE2_COLUMNS, TABLE2),
}


def corrected_table(name: str) -> tuple[tuple[str, ...], list[list[str]]]:
    """Printed table with the errata applied."""
    columns, rows = TABLES[name]
    fixed = [list(r) for r in rows]
    for e in ERRATA:
        if e.table != name:
            continue
        row = next(r for r in fixed if r[0] == e.t)
        col = columns.index(e.column)
        if row[col] != e.printed:
            raise AssertionError(f"erratum does not match printed cell {e}")
        row[col] = e.corrected
    return columns, fixed
