"""
Main entry point for the support variety toolkit (`strat`).

Subcommands:
1. support - support variety of a module given as JSON
2. check   - seeded sweep of one theorem checker, with a JSON report
3. random  - a random module as JSON, byte-identical for identical inputs

Exit codes: 0 all checks pass, 1 a check failed or an internal verification
failed, 2 invalid input or usage. JSON goes to stdout, progress to stderr.
"""

import argparse
import json
import sys
import threading
from pathlib import Path
from typing import List, Optional, Union

from data.loader import DataLoader, dump_document, module_document, with_schema
from engine import __version__
from engine.group_modules import ElementaryAbelianAlgebra, random_module
from engine.supports import support_of_module
from outputs.display import TerminalDisplay
from outputs.exporter import OutputExporter
from settings.loader import SweepConfigLoader, parse_window
from sweeps.sweep_engine import KINDS, SweepEngine, named_stream
from validators.validator import ReportValidator, TrialRecord


DEFAULT_SETTINGS = Path(__file__).parent / "settings" / "base.json"

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _status(message: str) -> None:
    print(message, file=sys.stderr)


def truncation_arg(text: str) -> Union[int, str]:
    if text == "auto":
        return text
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'auto' or a positive integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"truncation must be positive, got {value}")
    return value


def window_arg(text: str):
    try:
        return parse_window(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="strat",
        description="Support varieties of modules over elementary abelian p-groups",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    support = commands.add_parser("support", help="Support variety of a module JSON file")
    support.add_argument("-i", "--input", required=True,
                         help="Module JSON file, or a fixture name under data/fixtures")
    support.add_argument("--D", dest="truncation", type=truncation_arg, default="auto",
                         help="Ext truncation degree or 'auto' (default: auto)")

    check = commands.add_parser("check", help="Seeded sweep of one theorem checker")
    check.add_argument("kind", choices=KINDS)
    check.add_argument("--config", type=Path, default=DEFAULT_SETTINGS,
                       help=f"Settings file (default: {DEFAULT_SETTINGS.relative_to(Path(__file__).parent)})")
    check.add_argument("--p", nargs="+", type=int, help="Primes of the sweep cells")
    check.add_argument("--r", nargs="+", type=int, help="Ranks of the sweep cells")
    check.add_argument("--trials", type=int, help="Trials per cell")
    check.add_argument("--seed", type=int, help="Root seed")
    check.add_argument("--max-dim", dest="dim_max", type=int, help="Upper bound on module dimensions")
    check.add_argument("--hopf", choices=["group", "lie"], help="Comultiplication for tensor products")
    check.add_argument("--D", dest="truncation", type=truncation_arg, help="Ext truncation degree or 'auto'")
    check.add_argument("--window", type=window_arg, help="Degree window lo..hi of the dg checks")
    check.add_argument("--m", type=int, help="Truncation of the BGG module J")
    check.add_argument("--output", help="Directory for report_<kind>.json and .csv")
    check.add_argument("--workers", type=int, default=4, help="Parallel workers (default: 4)")
    check.add_argument("--quiet", action="store_true", help="No per-trial status lines")

    random_cmd = commands.add_parser("random", help="Random module as JSON")
    random_cmd.add_argument("--seed", type=int, required=True)
    random_cmd.add_argument("--p", type=int, required=True)
    random_cmd.add_argument("--r", type=int, required=True)
    random_cmd.add_argument("--dim", type=int, required=True, help="Upper bound on the dimension")
    random_cmd.add_argument("-o", "--output", type=Path, help="Write to this file instead of stdout")
    return parser


def cmd_support(args: argparse.Namespace) -> int:
    loader = DataLoader(args.input)
    _status(f"📊 Loading module from {loader.path}...")
    m = loader.load_module()
    _status(f"   ✓ dim {m.dim} over (p={m.p}, r={m.r})")
    supp = support_of_module(m, args.truncation)
    TerminalDisplay.display_variety("support", supp)
    document = with_schema(supp.to_json())
    document["stable"] = supp.stable
    print(json.dumps(document, sort_keys=True))
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    config = SweepConfigLoader(args.config).load().with_overrides(
        p=args.p, r=args.r, trials=args.trials, seed=args.seed, dim_max=args.dim_max,
        hopf=args.hopf, truncation=args.truncation, window=args.window, m=args.m,
        output=args.output,
    )
    cells = ", ".join(f"({p}, {r})" for p, r in config.cells())
    _status("=" * TerminalDisplay.WIDTH)
    _status(f"🔮 check {args.kind}: cells {cells}, {config.trials} trial(s) each, seed {config.seed}")
    _status("=" * TerminalDisplay.WIDTH)

    lock = threading.Lock()

    def progress(record: TrialRecord) -> None:
        if args.quiet:
            return
        with lock:
            TerminalDisplay.display_trial(record, args.kind)

    report = SweepEngine(args.kind, config, max_workers=args.workers, progress=progress).run()
    diagnostics = ReportValidator().validate_all(report)
    TerminalDisplay.display_report(report, diagnostics)
    print(json.dumps(report.to_json(), sort_keys=True))

    if config.output:
        paths = OutputExporter(Path(config.output)).export_all(report)
        _status(f"📁 Report written to {', '.join(str(p) for p in paths)}")

    if diagnostics.has_errors():
        raise RuntimeError("Report validation failed. See diagnostics above.")
    return EXIT_OK if report.passed else EXIT_FAILURE


def cmd_random(args: argparse.Namespace) -> int:
    algebra = ElementaryAbelianAlgebra(args.p, args.r)
    m = random_module(algebra, named_stream(args.seed, "random", args.p, args.r, args.dim), args.dim)
    text = dump_document(module_document(m))
    if args.output is not None:
        args.output.write_text(text, encoding="utf-8")
        _status(f"📁 Module of dim {m.dim} written to {args.output}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


COMMANDS = {"support": cmd_support, "check": cmd_check, "random": cmd_random}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments and run one subcommand.

    Returns:
        The process exit code
    """
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ValueError, FileNotFoundError) as e:
        _status(f"❌ ERROR: {e}")
        return EXIT_USAGE
    except RuntimeError as e:
        _status(f"❌ ERROR: {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
