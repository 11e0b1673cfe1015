"""Tests for CSV and JSON output."""

import csv
import io
import json

import pytest

from xy_disentangler.formats import (
    SCAN_COLUMNS,
    csv_table,
    format_float,
    json_text,
    levels_csv,
    scan_csv,
    spectrum_csv,
)
from xy_disentangler.models import EigenLevel, ModelParams, ScanResult, ScanRow
from xy_disentangler.spectrum import mode_table


class TestFloatFormatting:
    def test_round_trip_digits(self):
        value = 0.1 + 0.2
        assert float(format_float(value)) == value

    def test_non_finite(self):
        with pytest.raises(ValueError):
            format_float(float("inf"))


class TestTables:
    """Test the CSV tables."""

    def test_cells(self):
        text = csv_table(("a", "b", "c"), [(None, True, 2)])
        assert text == "a,b,c\n,true,2\n"

    def test_scan_csv(self):
        result = ScanResult(
            rows=[
                ScanRow(lam=0.5, observable="xx", site_i=0, site_j=1, value=-0.25),
                ScanRow(lam=0.5, observable="z", site_i=2, value=0.125),
            ]
        )
        rows = list(csv.reader(io.StringIO(scan_csv(result))))
        assert tuple(rows[0]) == SCAN_COLUMNS
        assert rows[1] == ["0.5", "xx", "0", "1", "-0.25"]
        assert rows[2] == ["0.5", "z", "2", "", "0.125"]

    def test_spectrum_csv(self):
        table = mode_table(ModelParams(n=4, lam=0.0, gamma=1.0))
        rows = list(csv.reader(io.StringIO(spectrum_csv(table))))
        assert rows[0] == ["k", "theta_k", "omega_k", "excitation"]
        assert [row[0] for row in rows[1:]] == ["-1", "0", "1", "2"]
        assert all(float(row[3]) == 2.0 for row in rows[1:])

    def test_levels_csv(self):
        text = levels_csv([EigenLevel(occupation=[0, 1], energy=-1.5)])
        assert text == "rank,energy,occupation\n0,-1.5,01\n"


class TestJson:
    def test_trailing_newline_and_order(self):
        text = json_text({"b": 1, "a": 2})
        assert text.endswith("\n")
        assert list(json.loads(text)) == ["b", "a"]

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            json_text({"value": float("nan")})
