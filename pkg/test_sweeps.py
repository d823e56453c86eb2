"""
Acceptance Sweep Script

Runs every checker over the acceptance grid (primes, ranks, trial counts and
dimension bounds per check kind) and reports pass/fail per sweep. Long
running; not part of the pytest suite.
"""

import argparse
import json
import sys
import threading
import time
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import List, Optional, Tuple

import pandas as pd

from outputs.exporter import cell_summary
from settings.loader import SweepConfig
from sweeps.sweep_engine import SweepEngine
from validators.validator import Report, ReportValidator, TrialRecord


@dataclass(frozen=True)
class Sweep:
    """One row of the acceptance grid."""
    name: str
    kind: str
    p: List[int]
    r: List[int]
    trials: int
    dim_max: int = 12
    window: Tuple[int, int] = (-8, 8)
    m: int = 6


ACCEPTANCE_GRID = [
    Sweep("dg chain", "bgg", [2, 3, 5], [1, 2, 3], trials=1, m=8),
    Sweep("tensor product", "tensor", [2, 3], [2, 3], trials=200),
    Sweep("subgroup restriction", "subgroup", [2, 3], [2, 3], trials=100),
    Sweep("induction", "induction", [2, 3], [2, 3], trials=100),
    Sweep("rank variety oracle", "oracle", [2, 3], [1, 2, 3], trials=100),
    Sweep("detection on subgroups", "chouinard", [2], [1], trials=20),
    Sweep("Koszul modules", "koszul", [2], [2, 3], trials=50),
    Sweep("support bridge", "bgg", [2], [2], trials=26),
]


class ProgressTracker:
    """Thread-safe progress tracker with loading animation."""

    def __init__(self, total: int):
        self.total = total
        self.completed = 0
        self.successful = 0
        self.failed = 0
        self.lock = threading.Lock()
        self.spinner_chars = ['⠋', '⠙', '⠹', '⠸', '⠼', '⠴', '⠦', '⠧', '⠇', '⠏']
        self.spinner_idx = 0
        self.running = True

    def update(self, record: TrialRecord) -> None:
        with self.lock:
            self.completed += 1
            if record.passed:
                self.successful += 1
            else:
                self.failed += 1

    def get_status_line(self, name: str) -> str:
        with self.lock:
            spinner = self.spinner_chars[self.spinner_idx % len(self.spinner_chars)]
            self.spinner_idx += 1
            progress_pct = (self.completed / self.total * 100) if self.total > 0 else 0
            return (
                f"{spinner} {name}: {self.completed}/{self.total} ({progress_pct:.1f}%) | "
                f"✓ {self.successful} | ✗ {self.failed}"
            )

    def stop(self) -> None:
        self.running = False


class AcceptanceTester:
    """Runs the acceptance grid sweep by sweep."""

    def __init__(self, seed: int = 42, scale: float = 1.0, max_workers: int = 8):
        """
        Initialize the tester.

        Args:
            seed: Root seed of every sweep
            scale: Fraction of the trial counts to run (at least one trial)
            max_workers: Maximum number of parallel workers
        """
        if not 0 < scale <= 1:
            raise ValueError(f"scale must lie in (0, 1], got {scale}")
        self.seed = seed
        self.scale = scale
        self.max_workers = max_workers
        self.reports: List[Report] = []
        self.names: List[str] = []
        self.start_time = datetime.now()
        self.duration = 0.0

    def config_for(self, sweep: Sweep) -> SweepConfig:
        return SweepConfig(
            p=sweep.p, r=sweep.r, dim_max=sweep.dim_max,
            trials=max(1, int(sweep.trials * self.scale)), seed=self.seed,
            truncation="auto", hopf="group", window=sweep.window, m=sweep.m,
        )

    def run_sweep(self, sweep: Sweep) -> Report:
        config = self.config_for(sweep)
        total = config.trials * len(list(config.cells()))
        progress = ProgressTracker(total)

        def animate_progress():
            while progress.running:
                print(f"\r{progress.get_status_line(sweep.name):<100}", end="", flush=True)
                time.sleep(0.15)

        progress_thread = threading.Thread(target=animate_progress, daemon=True)
        progress_thread.start()
        try:
            report = SweepEngine(sweep.kind, config, self.max_workers, progress.update).run()
        finally:
            progress.stop()
            time.sleep(0.2)
            print(f"\r{' ' * 100}\r", end="", flush=True)

        status = "PASSED" if report.passed else "FAILED"
        marker = "✓" if report.passed else "✗"
        summary = report.summary()
        print(f"{marker} {sweep.name} [{sweep.kind}]: {status} ({summary['passed']}/{summary['trials']})")
        return report

    def run_tests(self, kinds: Optional[List[str]] = None) -> List[Report]:
        sweeps = [s for s in ACCEPTANCE_GRID if kinds is None or s.kind in kinds]

        print("=" * 80)
        print("SUPPORT VARIETY TOOLKIT - ACCEPTANCE SWEEPS")
        print("=" * 80)
        print(f"Running {len(sweeps)} sweeps, seed {self.seed}, scale {self.scale}")
        print("=" * 80)
        print()

        for sweep in sweeps:
            try:
                self.reports.append(self.run_sweep(sweep))
                self.names.append(sweep.name)
            except KeyboardInterrupt:
                print("\n\nSweeps interrupted by user")
                break

        self.duration = (datetime.now() - self.start_time).total_seconds()
        return self.reports

    def print_summary(self) -> None:
        validator = ReportValidator()
        print()
        print("=" * 80)
        print("SWEEP SUMMARY")
        print("=" * 80)
        for name, report in zip(self.names, self.reports):
            summary = report.summary()
            print(f"{name} [{report.kind}]: {summary['passed']}/{summary['trials']} passed")
            print(cell_summary(report).to_string(index=False))
            diagnostics = validator.validate_all(report)
            if diagnostics.has_errors() or diagnostics.has_warnings():
                print(diagnostics.get_report())
            print()
        print(f"Duration: {self.duration:.1f} seconds")
        print("=" * 80)

    def save_results(self, output_file: Path) -> None:
        """Save all reports to one JSON file, plus a CSV of the per-cell tallies."""
        results = {
            "schema": 1,
            "test_date": self.start_time.isoformat(),
            "duration_seconds": self.duration,
            "seed": self.seed,
            "scale": self.scale,
            "sweeps": [
                {"name": name, "report": report.to_json()}
                for name, report in zip(self.names, self.reports)
            ],
        }
        with open(output_file, "w", encoding="utf-8") as f:
            json.dump(results, f, indent=2, sort_keys=True)
        print(f"Results saved to: {output_file}")

        frames = []
        for name, report in zip(self.names, self.reports):
            frame = cell_summary(report)
            frame.insert(0, "kind", report.kind)
            frame.insert(0, "sweep", name)
            frames.append(frame)
        if frames:
            csv_file = output_file.with_suffix(".csv")
            pd.concat(frames, ignore_index=True).to_csv(csv_file, index=False)
            print(f"CSV results saved to: {csv_file}")


def main():
    parser = argparse.ArgumentParser(description="Run the acceptance sweeps")
    parser.add_argument("--kinds", nargs="+", help="Only these check kinds")
    parser.add_argument("--seed", type=int, default=42, help="Root seed (default: 42)")
    parser.add_argument("--scale", type=float, default=1.0,
                        help="Fraction of the trial counts to run (default: 1.0)")
    parser.add_argument("--workers", type=int, default=8, help="Number of parallel workers (default: 8)")
    parser.add_argument("--output", type=Path, default=Path("sweep_results.json"),
                        help="Output file for results (default: sweep_results.json)")
    args = parser.parse_args()

    tester = AcceptanceTester(seed=args.seed, scale=args.scale, max_workers=args.workers)
    reports = tester.run_tests(kinds=args.kinds)
    tester.print_summary()
    tester.save_results(args.output)

    failed = [report.kind for report in reports if not report.passed]
    if not failed:
        print("\n✅ All sweeps passed!")
        sys.exit(0)
    print(f"\n⚠️  {len(failed)} sweep(s) failed: {', '.join(failed)}")
    sys.exit(1)


if __name__ == "__main__":
    main()
