"""
Output Generation Module.

Exports sweep reports to JSON (the full record) and CSV (one row per trial)
for audit and review.
"""

import json
from pathlib import Path
from typing import List

import pandas as pd

from validators.validator import Report


def report_frame(report: Report) -> pd.DataFrame:
    """One row per trial with the columns worth scanning in a spreadsheet."""
    rows = []
    for record in report.records:
        rows.append({
            "trial": record.trial,
            "p": record.p,
            "r": record.r,
            "passed": record.passed,
            "checks": ";".join(c.get("kind", "") for c in record.checks),
            "max_truncation": max(record.truncations) if record.truncations else None,
            "seconds": round(record.seconds, 4),
            "error": record.error or "",
        })
    columns = ["trial", "p", "r", "passed", "checks", "max_truncation", "seconds", "error"]
    return pd.DataFrame(rows, columns=columns)


def cell_summary(report: Report) -> pd.DataFrame:
    """Pass counts and timings per (p, r) cell."""
    frame = report_frame(report)
    if frame.empty:
        return pd.DataFrame(columns=["p", "r", "trials", "passed", "failed", "seconds"])
    grouped = frame.groupby(["p", "r"], sort=True).agg(
        trials=("trial", "count"),
        passed=("passed", "sum"),
        seconds=("seconds", "sum"),
    ).reset_index()
    grouped["passed"] = grouped["passed"].astype(int)
    grouped["failed"] = grouped["trials"] - grouped["passed"]
    return grouped[["p", "r", "trials", "passed", "failed", "seconds"]]


class OutputExporter:
    """Exports sweep reports to structured files."""

    def __init__(self, output_dir: Path):
        """
        Initialize the output exporter.

        Args:
            output_dir: Directory to write output files
        """
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)

    def export_all(self, report: Report) -> List[Path]:
        """Write report_<kind>.json and report_<kind>.csv; returns both paths."""
        return [self.export_json(report), self.export_csv(report)]

    def export_json(self, report: Report) -> Path:
        filename = self.output_dir / f"report_{report.kind}.json"
        with open(filename, "w", encoding="utf-8") as f:
            json.dump(report.to_json(), f, indent=2, sort_keys=True)
            f.write("\n")
        return filename

    def export_csv(self, report: Report) -> Path:
        filename = self.output_dir / f"report_{report.kind}.csv"
        report_frame(report).to_csv(filename, index=False)
        return filename
