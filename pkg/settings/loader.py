"""
Sweep Configuration Layer.

Loads and validates sweep settings from JSON or YAML files.
All required settings must be present - only the dg window, the J truncation
and the output directory have defaults.
"""

import json
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Any, Dict, Iterator, Optional, Tuple, Union

import sympy

try:
    import yaml
except ImportError:
    yaml = None


HOPF_MODES = ("group", "lie")


@dataclass(frozen=True)
class SweepConfig:
    """
    Parameters of a seeded sweep.

    Attributes:
        p: Primes of the sweep cells
        r: Ranks of the sweep cells
        dim_max: Upper bound on random module dimensions
        trials: Trials per cell
        seed: Root seed of every random stream
        truncation: "auto" or a fixed Ext truncation degree D
        hopf: Comultiplication for tensor products, "group" or "lie"
        window: Degree window (lo, hi) of the dg checks
        m: Truncation of the BGG module J
        output: Directory for report files, None to skip writing
    """
    p: Tuple[int, ...]
    r: Tuple[int, ...]
    dim_max: int
    trials: int
    seed: int
    truncation: Union[int, str]
    hopf: str
    window: Tuple[int, int] = (-8, 8)
    m: int = 6
    output: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(self.p))
        object.__setattr__(self, "r", tuple(self.r))
        object.__setattr__(self, "window", tuple(self.window))
        validate_config(self)

    def cells(self) -> Iterator[Tuple[int, int]]:
        for p in self.p:
            for r in self.r:
                yield p, r

    def with_overrides(self, **overrides: Any) -> "SweepConfig":
        """A copy with every non-None override applied (and re-validated)."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def to_json(self) -> Dict[str, Any]:
        out = asdict(self)
        out["p"], out["r"], out["window"] = list(self.p), list(self.r), list(self.window)
        return out


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def validate_config(config: SweepConfig) -> None:
    """
    Raises:
        ValueError: If a setting has the wrong type or lies out of range
    """
    if not config.p or not config.r:
        raise ValueError("Settings 'p' and 'r' must list at least one value")
    for p in config.p:
        if not _is_int(p) or not sympy.isprime(p):
            raise ValueError(f"Setting 'p' must list primes, got {p!r}")
    for r in config.r:
        if not _is_int(r) or r < 1:
            raise ValueError(f"Setting 'r' must list ranks >= 1, got {r!r}")
    if not _is_int(config.dim_max) or config.dim_max < 1:
        raise ValueError(f"Setting 'dim_max' must be >= 1, got {config.dim_max!r}")
    if not _is_int(config.trials) or config.trials < 1:
        raise ValueError(f"Setting 'trials' must be >= 1, got {config.trials!r}")
    if not _is_int(config.seed) or config.seed < 0:
        raise ValueError(f"Setting 'seed' must be a non-negative integer, got {config.seed!r}")
    truncation = config.truncation
    if truncation != "auto" and (not _is_int(truncation) or truncation < 1):
        raise ValueError(f"Setting 'truncation' must be 'auto' or a positive integer, got {truncation!r}")
    if config.hopf not in HOPF_MODES:
        raise ValueError(f"Setting 'hopf' must be one of {HOPF_MODES}, got {config.hopf!r}")
    if len(config.window) != 2 or not all(_is_int(v) for v in config.window) \
            or config.window[0] >= config.window[1]:
        raise ValueError(f"Setting 'window' must be two integers lo < hi, got {list(config.window)}")
    if not _is_int(config.m) or config.m < 1:
        raise ValueError(f"Setting 'm' must be >= 1, got {config.m!r}")


def parse_window(text: str) -> Tuple[int, int]:
    """'lo..hi' -> (lo, hi)."""
    try:
        lo, hi = text.split("..")
        return int(lo), int(hi)
    except ValueError as e:
        raise ValueError(f"Window must look like lo..hi, got {text!r}") from e


class SweepConfigLoader:
    """Loads and validates sweep settings."""

    REQUIRED_SETTINGS = [
        "p",
        "r",
        "dim_max",
        "trials",
        "seed",
        "truncation",  # "auto" or D
        "hopf",  # group | lie
    ]
    OPTIONAL_SETTINGS = ["window", "m", "output"]

    def __init__(self, settings_file: Path):
        """
        Initialize the settings loader.

        Args:
            settings_file: Path to JSON or YAML settings file

        Raises:
            FileNotFoundError: If settings file does not exist
        """
        self.settings_file = Path(settings_file)
        if not self.settings_file.exists():
            raise FileNotFoundError(f"Settings file not found: {settings_file}")

    def load(self) -> SweepConfig:
        """
        Load settings from file.

        Raises:
            ValueError: If required settings are missing or invalid, or the
                        file format is unsupported
        """
        file_ext = self.settings_file.suffix.lower()

        if file_ext == ".json":
            settings = self._load_json()
        elif file_ext in [".yaml", ".yml"]:
            settings = self._load_yaml()
        else:
            raise ValueError(
                f"Unsupported file format: {file_ext}. "
                "Supported formats: .json, .yaml, .yml"
            )

        return self._build(settings)

    def _load_json(self) -> Dict[str, Any]:
        with open(self.settings_file, "r", encoding="utf-8") as f:
            try:
                return json.load(f)
            except json.JSONDecodeError as e:
                raise ValueError(f"Invalid JSON in settings file: {e}") from e

    def _load_yaml(self) -> Dict[str, Any]:
        if yaml is None:
            raise RuntimeError(
                "PyYAML is required for YAML support. "
                "Install with: pip install pyyaml"
            )

        with open(self.settings_file, "r", encoding="utf-8") as f:
            try:
                return yaml.safe_load(f)
            except yaml.YAMLError as e:
                raise ValueError(f"Invalid YAML in settings file: {e}") from e

    def _build(self, settings: Any) -> SweepConfig:
        if not isinstance(settings, dict):
            raise ValueError("Settings must be a dictionary")

        missing = [req for req in self.REQUIRED_SETTINGS if req not in settings]
        if missing:
            raise ValueError(
                f"Missing required settings: {missing}. "
                f"All of the following must be provided: {self.REQUIRED_SETTINGS}"
            )
        unknown = sorted(set(settings) - set(self.REQUIRED_SETTINGS) - set(self.OPTIONAL_SETTINGS))
        if unknown:
            raise ValueError(f"Unknown settings: {unknown}")

        values = {key: settings[key] for key in self.REQUIRED_SETTINGS}
        for key in ("p", "r"):
            # A single value stands for a one-cell sweep
            if not isinstance(values[key], list):
                values[key] = [values[key]]
        window = settings.get("window")
        if isinstance(window, str):
            window = parse_window(window)
        if window is not None:
            if not isinstance(window, (list, tuple)):
                raise ValueError(f"Setting 'window' must be 'lo..hi' or [lo, hi], got {window!r}")
            values["window"] = tuple(window)
        for key in ("m", "output"):
            if settings.get(key) is not None:
                values[key] = settings[key]
        return SweepConfig(**values)
