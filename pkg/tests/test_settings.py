import json
from pathlib import Path

import pytest

from settings.loader import SweepConfig, SweepConfigLoader, parse_window

BASE = Path(__file__).parent.parent / "settings" / "base.json"


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def base_settings():
    return json.loads(BASE.read_text(encoding="utf-8"))


def test_base_settings_load():
    config = SweepConfigLoader(BASE).load()
    assert config.p == (2,)
    assert config.r == (2,)
    assert config.seed == 42
    assert config.window == (-8, 8)
    assert config.output is None
    assert list(config.cells()) == [(2, 2)]


def test_yaml_settings(tmp_path):
    path = write(tmp_path, "sweep.yaml", "\n".join([
        "p: [2, 3]",
        "r: 1",
        "dim_max: 4",
        "trials: 2",
        "seed: 7",
        "truncation: 10",
        "hopf: lie",
        "window: -4..4",
    ]))
    config = SweepConfigLoader(path).load()
    assert config.r == (1,)
    assert config.truncation == 10
    assert config.window == (-4, 4)
    assert list(config.cells()) == [(2, 1), (3, 1)]


def test_missing_file():
    with pytest.raises(FileNotFoundError):
        SweepConfigLoader(Path("no/such/settings.json"))


def test_unsupported_format(tmp_path):
    with pytest.raises(ValueError):
        SweepConfigLoader(write(tmp_path, "sweep.toml", "p = 2")).load()


def test_invalid_json(tmp_path):
    with pytest.raises(ValueError):
        SweepConfigLoader(write(tmp_path, "sweep.json", "{p: 2")).load()


def test_missing_and_unknown_settings(tmp_path):
    settings = base_settings()
    del settings["hopf"]
    with pytest.raises(ValueError, match="hopf"):
        SweepConfigLoader(write(tmp_path, "a.json", json.dumps(settings))).load()
    settings = base_settings()
    settings["colour"] = "blue"
    with pytest.raises(ValueError, match="colour"):
        SweepConfigLoader(write(tmp_path, "b.json", json.dumps(settings))).load()


@pytest.mark.parametrize("key,value", [
    ("p", [4]),
    ("p", [True]),
    ("r", [0]),
    ("dim_max", 0),
    ("trials", -1),
    ("seed", -5),
    ("truncation", "deep"),
    ("truncation", 0),
    ("hopf", "hopf"),
    ("window", [3, 3]),
    ("m", 0),
])
def test_out_of_range_settings(tmp_path, key, value):
    settings = base_settings()
    settings[key] = value
    with pytest.raises(ValueError):
        SweepConfigLoader(write(tmp_path, "bad.json", json.dumps(settings))).load()


def test_overrides_are_validated():
    config = SweepConfigLoader(BASE).load()
    assert config.with_overrides(seed=3, trials=None).seed == 3
    assert config.with_overrides(seed=3, trials=None).trials == config.trials
    with pytest.raises(ValueError):
        config.with_overrides(p=(6,))


def test_parse_window():
    assert parse_window("-8..8") == (-8, 8)
    with pytest.raises(ValueError):
        parse_window("-8:8")


def test_config_json():
    config = SweepConfig(p=[3], r=[1, 2], dim_max=4, trials=1, seed=0, truncation="auto", hopf="group")
    document = config.to_json()
    assert document["r"] == [1, 2]
    assert document["window"] == [-8, 8]
    assert document["m"] == 6
