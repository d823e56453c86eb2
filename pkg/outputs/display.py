"""
Terminal Display Module.

Formats sweep reports and varieties for the terminal. Everything goes to
stderr so that stdout stays machine-readable JSON.
"""

import sys
from typing import Optional, TextIO

from engine.supports import Variety
from outputs.exporter import cell_summary
from validators.validator import DiagnosticsReport, Report, TrialRecord


def _out(stream: Optional[TextIO]) -> TextIO:
    return sys.stderr if stream is None else stream


class TerminalDisplay:
    """Displays sweep results in formatted tables."""

    WIDTH = 70

    @staticmethod
    def display_trial(record: TrialRecord, kind: str, stream: Optional[TextIO] = None) -> None:
        """One status line per finished trial."""
        out = _out(stream)
        label = f"{kind} #{record.trial} (p={record.p}, r={record.r})"
        if record.passed:
            print(f"✓ {label}: PASSED", file=out)
        elif record.error is not None:
            print(f"✗ {label}: EXCEPTION - {record.error[:60]}", file=out)
        else:
            failing = [c.get("kind") for c in record.checks if not c.get("passed")]
            print(f"✗ {label}: FAILED - {', '.join(failing)}", file=out)

    @staticmethod
    def display_report(report: Report, diagnostics: Optional[DiagnosticsReport] = None,
                       stream: Optional[TextIO] = None) -> None:
        """Per-cell table and overall verdict."""
        out = _out(stream)
        width = TerminalDisplay.WIDTH
        print("\n" + "=" * width, file=out)
        print(f"  CHECK {report.kind.upper()}  (seed {report.config.get('seed')})", file=out)
        print("=" * width, file=out)
        print(f"{'p':>4}{'r':>4}{'trials':>10}{'passed':>10}{'failed':>10}{'seconds':>12}", file=out)
        print("-" * width, file=out)
        for row in cell_summary(report).itertuples(index=False):
            print(
                f"{row.p:>4}{row.r:>4}{row.trials:>10}{row.passed:>10}{row.failed:>10}{row.seconds:>12.2f}",
                file=out,
            )
        print("-" * width, file=out)
        summary = report.summary()
        print(
            f"Total: {summary['trials']} | ✓ {summary['passed']} | ✗ {summary['failed']}"
            f" | exceptions {summary['errors']}",
            file=out,
        )
        if diagnostics is not None and diagnostics.diagnostics:
            print(file=out)
            print(diagnostics.get_report(), file=out)
        print("=" * width, file=out)
        if report.passed:
            print("✓ All trials passed", file=out)
        else:
            print(f"✗ {summary['failed']} trial(s) failed", file=out)

    @staticmethod
    def display_variety(name: str, v: Variety, stream: Optional[TextIO] = None) -> None:
        out = _out(stream)
        generators = ", ".join(v.generators()) or "0"
        stable = "" if v.stable is None else (" (stable)" if v.stable else " (⚠ not stable)")
        print(f"  {name}: V({generators}), D = {v.truncation}{stable}", file=out)
