"""
Report Integrity Validator.

Detects inconsistencies in sweep reports: summary counts that disagree with
the per-trial records, a verdict that disagrees with the trials, unordered
or duplicated trial indices, and wrong schema versions.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from engine.ext import MAX_AUTO_TRUNCATION


SCHEMA_VERSION = 1


@dataclass
class Diagnostic:
    """Single diagnostic message."""
    level: str  # "error", "warning", "info"
    category: str
    subject: str
    message: str


@dataclass
class DiagnosticsReport:
    """Collection of diagnostic messages."""
    diagnostics: List[Diagnostic] = field(default_factory=list)

    def add(self, level: str, category: str, subject: str, message: str) -> None:
        self.diagnostics.append(
            Diagnostic(level=level, category=category, subject=subject, message=message)
        )

    def has_errors(self) -> bool:
        return any(d.level == "error" for d in self.diagnostics)

    def has_warnings(self) -> bool:
        return any(d.level == "warning" for d in self.diagnostics)

    def get_report(self) -> str:
        """Get formatted report string."""
        if not self.diagnostics:
            return "No diagnostics to report."

        lines = []
        for level, title in (("error", "ERRORS:"), ("warning", "WARNINGS:"), ("info", "INFO:")):
            entries = [d for d in self.diagnostics if d.level == level]
            if not entries:
                continue
            if lines:
                lines.append("")
            lines.append(title)
            for d in entries:
                lines.append(f"  [{d.subject}] {d.category}: {d.message}")

        return "\n".join(lines)


@dataclass
class TrialRecord:
    """
    One trial of a sweep.

    Attributes:
        trial: Global trial index within the sweep
        p, r: Cell of the trial
        inputs: JSON description of the random inputs
        checks: CheckReport JSON of every check run on the inputs
        passed: True iff every check passed and nothing raised
        truncations: Ext truncation degrees used
        seconds: Wall time
        error: "ExceptionType: message" when the trial raised
    """
    trial: int
    p: int
    r: int
    inputs: Dict[str, Any] = field(default_factory=dict)
    checks: List[Dict[str, Any]] = field(default_factory=list)
    passed: bool = False
    truncations: List[int] = field(default_factory=list)
    seconds: float = 0.0
    error: Optional[str] = None

    def to_json(self) -> Dict[str, Any]:
        return {
            "trial": self.trial,
            "p": self.p,
            "r": self.r,
            "inputs": self.inputs,
            "checks": self.checks,
            "passed": self.passed,
            "truncations": self.truncations,
            "seconds": round(self.seconds, 4),
            "error": self.error,
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "TrialRecord":
        try:
            return cls(**{key: data[key] for key in (
                "trial", "p", "r", "inputs", "checks", "passed", "truncations", "seconds", "error",
            )})
        except (KeyError, TypeError) as e:
            raise ValueError(f"Malformed trial record: {e}") from e


@dataclass
class Report:
    """Machine-readable outcome of one `check` sweep."""
    tool_version: str
    kind: str
    config: Dict[str, Any]
    records: List[TrialRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(record.passed for record in self.records)

    def summary(self) -> Dict[str, int]:
        passed = sum(1 for record in self.records if record.passed)
        errored = sum(1 for record in self.records if record.error is not None)
        return {
            "trials": len(self.records),
            "passed": passed,
            "failed": len(self.records) - passed,
            "errors": errored,
        }

    def to_json(self) -> Dict[str, Any]:
        return {
            "schema": SCHEMA_VERSION,
            "tool_version": self.tool_version,
            "kind": self.kind,
            "config": self.config,
            "records": [record.to_json() for record in self.records],
            "summary": self.summary(),
            "passed": self.passed,
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "Report":
        """
        Raises:
            ValueError: If the document is malformed, has another schema
                        version, or its summary disagrees with its records
        """
        if not isinstance(data, dict):
            raise ValueError("Report must be a JSON object")
        if data.get("schema") != SCHEMA_VERSION:
            raise ValueError(f"Report has schema {data.get('schema')!r}, expected {SCHEMA_VERSION}")
        try:
            report = cls(
                tool_version=data["tool_version"],
                kind=data["kind"],
                config=data["config"],
                records=[TrialRecord.from_json(r) for r in data["records"]],
            )
        except (KeyError, TypeError) as e:
            raise ValueError(f"Malformed report: {e}") from e
        if data.get("summary") != report.summary() or data.get("passed") != report.passed:
            raise ValueError("Report summary does not match its trial records")
        return report


class ReportValidator:
    """Validates sweep report integrity."""

    SLOW_TRIAL_SECONDS = 60.0

    def validate_all(self, report: Report) -> DiagnosticsReport:
        diagnostics = DiagnosticsReport()

        self._validate_ordering(report, diagnostics)
        self._validate_verdicts(report, diagnostics)
        self._validate_summary(report, diagnostics)
        self._validate_truncations(report, diagnostics)

        return diagnostics

    def _validate_ordering(self, report: Report, diagnostics: DiagnosticsReport) -> None:
        indices = [record.trial for record in report.records]
        if indices != sorted(indices):
            diagnostics.add("error", "Ordering", report.kind, "Trial records are not sorted by index")
        if len(set(indices)) != len(indices):
            diagnostics.add("error", "Ordering", report.kind, "Trial indices are not unique")

    def _validate_verdicts(self, report: Report, diagnostics: DiagnosticsReport) -> None:
        for record in report.records:
            subject = f"trial {record.trial}"
            checks_pass = bool(record.checks) and all(c.get("passed") for c in record.checks)
            expected = checks_pass and record.error is None
            if record.passed != expected:
                diagnostics.add(
                    "error", "Verdict", subject,
                    f"Recorded passed={record.passed} but the checks give {expected}",
                )
            if record.error is not None:
                diagnostics.add("warning", "Exception", subject, record.error)
            elif not record.passed:
                failing = [c.get("kind") for c in record.checks if not c.get("passed")]
                diagnostics.add("info", "Failure", subject, f"Failing checks: {failing}")
            if record.seconds > self.SLOW_TRIAL_SECONDS:
                diagnostics.add("info", "Timing", subject, f"Trial took {record.seconds:.1f}s")

    def _validate_summary(self, report: Report, diagnostics: DiagnosticsReport) -> None:
        summary = report.summary()
        if summary["passed"] + summary["failed"] != summary["trials"]:
            diagnostics.add("error", "Summary", report.kind, "Pass and fail counts do not add up")
        if report.passed != (summary["failed"] == 0):
            diagnostics.add("error", "Summary", report.kind, "Verdict disagrees with the failure count")

    def _validate_truncations(self, report: Report, diagnostics: DiagnosticsReport) -> None:
        for record in report.records:
            if any(d >= MAX_AUTO_TRUNCATION for d in record.truncations):
                diagnostics.add(
                    "warning", "Truncation", f"trial {record.trial}",
                    f"Ext truncation reached the cap {MAX_AUTO_TRUNCATION}",
                )
