import io
import json

import pandas as pd

from engine.group_modules import ElementaryAbelianAlgebra, trivial_module
from engine.supports import support_of_module
from outputs.display import TerminalDisplay
from outputs.exporter import OutputExporter, cell_summary, report_frame
from validators.validator import Report, ReportValidator, TrialRecord


def sample_report():
    records = [
        TrialRecord(trial=0, p=2, r=1, checks=[{"kind": "oracle", "passed": True}],
                    passed=True, truncations=[4, 6], seconds=0.5),
        TrialRecord(trial=1, p=2, r=1, checks=[{"kind": "oracle", "passed": False}],
                    passed=False, truncations=[4], seconds=0.25),
        TrialRecord(trial=2, p=3, r=1, error="ValueError: bad", seconds=0.125),
    ]
    return Report(tool_version="0.1.0", kind="oracle", config={"seed": 5}, records=records)


def test_report_frame_columns():
    frame = report_frame(sample_report())
    assert list(frame.columns) == ["trial", "p", "r", "passed", "checks", "max_truncation", "seconds", "error"]
    assert frame["max_truncation"].tolist()[:2] == [6, 4]
    assert pd.isna(frame["max_truncation"].tolist()[2])
    assert frame["error"].tolist() == ["", "", "ValueError: bad"]


def test_cell_summary():
    summary = cell_summary(sample_report())
    assert summary[["p", "r", "trials", "passed", "failed"]].values.tolist() == [[2, 1, 2, 1, 1], [3, 1, 1, 0, 1]]


def test_cell_summary_of_empty_report():
    empty = Report(tool_version="0.1.0", kind="oracle", config={})
    assert cell_summary(empty).empty


def test_export_all(tmp_path):
    report = sample_report()
    json_path, csv_path = OutputExporter(tmp_path / "out").export_all(report)
    assert json_path.name == "report_oracle.json"
    assert json.loads(json_path.read_text(encoding="utf-8")) == report.to_json()
    assert len(pd.read_csv(csv_path)) == 3


def test_display_report_and_trials():
    report = sample_report()
    out = io.StringIO()
    for record in report.records:
        TerminalDisplay.display_trial(record, "oracle", stream=out)
    TerminalDisplay.display_report(report, ReportValidator().validate_all(report), stream=out)
    text = out.getvalue()
    assert "✓ oracle #0 (p=2, r=1): PASSED" in text
    assert "FAILED - oracle" in text
    assert "EXCEPTION - ValueError: bad" in text
    assert "✗ 2 trial(s) failed" in text


def test_display_variety():
    supp = support_of_module(trivial_module(ElementaryAbelianAlgebra(2, 1)), 5)
    out = io.StringIO()
    TerminalDisplay.display_variety("support", supp, stream=out)
    assert out.getvalue() == "  support: V(0), D = 5 (stable)\n"
