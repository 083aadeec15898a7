import json

import numpy as np
import pytest

from taylorlab import svg
from taylorlab.errors import MissingData
from taylorlab.report import (
    RunReport,
    _format_cell,
    matrix_to_json,
    read_csv,
    write_csv,
    write_report,
    write_snapshot,
)


def test_format_cell_covers_the_types():
    assert _format_cell(True) == "true"
    assert _format_cell(np.bool_(False)) == "false"
    assert _format_cell(7) == "7"
    assert _format_cell(np.int64(-3)) == "-3"
    assert _format_cell(0.1) == "0.1"
    assert _format_cell(np.float64(1e-17)) == "1e-17"
    assert _format_cell(1.5 + 2.5j) == "1.5+2.5j"
    assert _format_cell(1.5 - 2.5j) == "1.5-2.5j"
    assert _format_cell("label") == "label"


def test_float_cells_round_trip():
    # repr round-trips doubles exactly
    for x in (np.pi, 1 / 3, 2.194e-16, -738.0856153494404):
        assert float(_format_cell(x)) == x


def test_csv_round_trip(tmp_path):
    path = str(tmp_path / "table.csv")
    header = ["k", "value", "ok"]
    rows = [(0, 0.5, True), (1, -2.25e-9, False)]
    write_csv(path, header, rows)
    got_header, got_rows = read_csv(path)
    assert got_header == header
    assert got_rows == [["0", "0.5", "true"], ["1", "-2.25e-09", "false"]]


def test_csv_rewrite_is_byte_identical(tmp_path):
    a = str(tmp_path / "a.csv")
    b = str(tmp_path / "b.csv")
    rows = [(i, np.sin(i) * 1e-7) for i in range(20)]
    write_csv(a, ["i", "x"], rows)
    write_csv(b, ["i", "x"], rows)
    assert open(a, "rb").read() == open(b, "rb").read()


def test_read_csv_empty_file(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("")
    header, rows = read_csv(str(path))
    assert header == [] and rows == []


def test_report_passed_aggregates():
    report = RunReport(kind="spectral-check", config_hash="x", package_version="0")
    report.add("one", True, 1e-12, 1e-8)
    assert report.passed
    report.add("two", False, 0.5, 1e-8, detail="went sideways")
    assert not report.passed
    doc = report.as_dict()
    assert doc["passed"] is False
    assert doc["outcomes"][1]["detail"] == "went sideways"


def test_write_report_deterministic(tmp_path):
    report = RunReport(kind="evolve", config_hash="abc", package_version="0.1.0")
    report.add("check", True, 3.5e-16, 1e-10)
    report.artifacts.append("diagnostics.csv")
    p1, p2 = str(tmp_path / "r1.json"), str(tmp_path / "r2.json")
    write_report(report, p1)
    write_report(report, p2)
    assert open(p1, "rb").read() == open(p2, "rb").read()
    doc = json.load(open(p1))
    assert doc["kind"] == "evolve"
    assert doc["artifacts"] == ["diagnostics.csv"]
    assert doc["outcomes"][0]["measured"] == 3.5e-16


def test_matrix_to_json_shape_and_parts():
    m = np.array([[1 + 2j, 0], [0, -1j]])
    doc = matrix_to_json(m)
    assert doc["shape"] == [2, 2]
    assert doc["real"][0][0] == 1.0
    assert doc["imag"][1][1] == -1.0


def test_write_snapshot_real_and_complex(tmp_path):
    real_path = str(tmp_path / "real.json")
    write_snapshot(real_path, np.ones((2, 3)))
    doc = json.load(open(real_path))
    assert doc["shape"] == [2, 3]
    assert "values" in doc and "real" not in doc

    cplx_path = str(tmp_path / "cplx.json")
    write_snapshot(cplx_path, np.full((2,), 1j))
    doc = json.load(open(cplx_path))
    assert doc["imag"] == [1.0, 1.0]


def test_line_chart_deterministic(tmp_path):
    series = [("energy", [0.0, 1.0, 2.0], [1.0, 0.5, 0.25])]
    p1 = str(tmp_path / "c1.svg")
    p2 = str(tmp_path / "c2.svg")
    svg.line_chart(series, "decay", "t", "E", p1)
    svg.line_chart(series, "decay", "t", "E", p2)
    body1 = open(p1, "rb").read()
    assert body1 == open(p2, "rb").read()
    assert body1.startswith(b"<svg")
    assert b"energy" in body1


def test_line_chart_log_scale_labels_axis(tmp_path):
    path = str(tmp_path / "log.svg")
    svg.line_chart(
        [("gap", [2.0, 4.0], [1e-2, 1e-3])], "gaps", "band", "gap", path, log_y=True
    )
    assert "log10(gap)" in open(path).read()


def test_line_chart_rejects_bad_series(tmp_path):
    path = str(tmp_path / "bad.svg")
    with pytest.raises(MissingData, match="mismatched lengths"):
        svg.line_chart([("a", [1.0, 2.0], [1.0])], "t", "x", "y", path)
    with pytest.raises(MissingData, match="no points"):
        svg.line_chart([("a", [], [])], "t", "x", "y", path)
    with pytest.raises(MissingData, match="positive values"):
        svg.line_chart([("a", [1.0], [0.0])], "t", "x", "y", path, log_y=True)


def test_line_chart_flat_series_still_renders(tmp_path):
    # a constant series must not divide by zero when scaling
    path = str(tmp_path / "flat.svg")
    svg.line_chart([("c", [0.0, 1.0], [2.0, 2.0])], "t", "x", "y", path)
    assert open(path).read().count("<circle") == 2
