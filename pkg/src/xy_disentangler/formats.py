"""Machine-readable output: CSV tables and JSON documents."""

import csv
import io
import json
import math
from typing import Any, Dict, Iterable, List, Optional, Sequence

from .models import EigenLevel, ModeTable, ScanResult

SCAN_COLUMNS = ("lambda", "observable", "site_i", "site_j", "value")
SPECTRUM_COLUMNS = ("k", "theta_k", "omega_k", "excitation")
LEVEL_COLUMNS = ("rank", "energy", "occupation")


def format_float(value: float) -> str:
    """17 significant digits, enough for an exact float round-trip."""
    if not math.isfinite(value):
        raise ValueError(f"cannot write non-finite value {value!r}")
    return format(value, ".17g")


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def csv_table(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Header plus rows, '\\n' line endings."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(value) for value in row])
    return buffer.getvalue()


def scan_csv(result: ScanResult) -> str:
    return csv_table(
        SCAN_COLUMNS,
        (
            (row.lam, row.observable, row.site_i, row.site_j, row.value)
            for row in result.rows
        ),
    )


def spectrum_csv(table: ModeTable) -> str:
    return csv_table(
        SPECTRUM_COLUMNS,
        ((m.k, m.theta, m.omega, 2.0 * m.omega) for m in table.modes),
    )


def levels_csv(levels: List[EigenLevel]) -> str:
    return csv_table(
        LEVEL_COLUMNS,
        (
            (rank, level.energy, "".join(str(b) for b in level.occupation))
            for rank, level in enumerate(levels)
        ),
    )


def json_text(document: Dict[str, Any], indent: Optional[int] = 2) -> str:
    """Deterministic JSON: insertion-ordered keys, shortest exact float repr."""
    return json.dumps(document, indent=indent, allow_nan=False) + "\n"
