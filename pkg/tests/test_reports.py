"""Tests for report writers and check reports."""

import json

import numpy as np

from src.catdual.core.checks import CheckReport
from src.catdual.harness.registry import sector_family
from src.catdual.harness.reports import (
    build_report,
    load_json,
    sectors_frame,
    write_json,
    write_sectors_csv,
)


def test_check_report_from_residual():
    ok = CheckReport.from_residual("pentagon", 1e-12, 1e-10, checked=5)
    bad = CheckReport.from_residual("pentagon", 1e-3, 1e-10)
    assert ok.passed and not bad.passed
    assert ok.summary_line().startswith("✅ pentagon")
    assert bad.summary_line().startswith("❌")


def test_report_envelope_is_json_safe(tmp_path):
    check = CheckReport.from_residual("hermiticity", np.float64(0.0), 1e-10)
    report = build_report("build-hamiltonian", True, [check], dim=np.int64(16),
                          charge=complex(0.5, -1.0), worst=float("inf"), flags=np.array([True, False]))
    assert report["schema"] == 1
    assert report["pass"] is True
    assert report["dim"] == 16
    assert report["charge"] == [0.5, -1.0]
    assert report["worst"] == "inf"
    assert report["flags"] == [True, False]
    path = write_json(report, tmp_path / "nested" / "report.json")
    assert path.read_bytes().endswith(b"}\n")
    assert load_json(path) == json.loads(json.dumps(report))


def test_sector_table(tmp_path):
    decomp = sector_family("tfim", 4, {"g": 0.5})
    frame = sectors_frame(decomp)
    assert list(frame.columns) == ["sector", "dimension", "lowest"]
    assert frame["dimension"].sum() == decomp.dim
    path = write_sectors_csv(decomp, tmp_path / "sectors.csv")
    assert path.read_text().splitlines()[1].startswith("twist=1;")
