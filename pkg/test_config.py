"""
Tests for configuration loading, validation and environment overrides.
"""

import json

import pytest

from config import DEFAULTS, load_config, settings_from_config, validate_config
from errors import ConfigError


def _write(tmp_path, data, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data) if not isinstance(data, str) else data, encoding="utf-8")
    return str(path)


def test_defaults_validate(default_config):
    assert validate_config(default_config) == []
    lab = settings_from_config(default_config)
    assert len(lab.numerics.valuation.grid) == 35
    assert lab.numerics.valuation.q_max == 10.0
    assert lab.mollifier.fft_size == 65536
    assert lab.jobs == 1
    assert lab.include_timings is False


def test_load_without_file_gives_defaults(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    assert load_config() == DEFAULTS


def test_file_merges_over_defaults(tmp_path):
    path = _write(tmp_path, {"valuation": {"q_max": 6}, "jobs": 3})
    config = load_config(path)
    assert config["valuation"]["q_max"] == 6
    assert config["valuation"]["residual_tol"] == 0.25
    assert config["jobs"] == 3


def test_unknown_keys_are_rejected(tmp_path):
    path = _write(tmp_path, {"valuation": {"qmax": 6}})
    with pytest.raises(ConfigError, match="unknown key 'valuation.qmax'"):
        load_config(path)


@pytest.mark.parametrize("text", ["{not json", "[1, 2]"])
def test_unreadable_files(tmp_path, text):
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, text))


def test_missing_file():
    with pytest.raises(ConfigError, match="file not found"):
        load_config("/nonexistent/colombeau.json")


@pytest.mark.parametrize("section, values, message", [
    ("eps_grid", {"k_min": 10, "k_max": 12}, "at least 8 points"),
    ("eps_grid", {"k_max": 2000}, "underflow floor"),
    ("eps_grid", {"base": 1}, "base"),
    ("valuation", {"cancellation_tol": 1.5}, "cancellation_tol"),
    ("quadrature", {"abs_tol": -1.0}, "abs_tol"),
    ("mollifier", {"fft_size": 5000}, "power of two"),
    ("mollifier", {"r_in": 3.0}, "r_in < r_out"),
    ("sup", {"global_radius": 2.0}, "global_radius"),
    ("output", {"include_timings": "yes"}, "include_timings"),
])
def test_validation_problems(tmp_path, section, values, message):
    path = _write(tmp_path, {section: values})
    with pytest.raises(ConfigError, match=message):
        load_config(path)


def test_env_overrides(monkeypatch):
    monkeypatch.setenv("COLOMBEAU_QMAX", "8")
    monkeypatch.setenv("COLOMBEAU_EPS_KMAX", "30")
    monkeypatch.setenv("COLOMBEAU_JOBS", "2")
    config = load_config()
    assert config["valuation"]["q_max"] == 8.0
    assert config["eps_grid"]["k_max"] == 30
    assert config["jobs"] == 2


def test_env_config_path(monkeypatch, tmp_path):
    monkeypatch.setenv("COLOMBEAU_CONFIG", _write(tmp_path, {"jobs": 4}))
    assert load_config()["jobs"] == 4


def test_bad_env_value(monkeypatch):
    monkeypatch.setenv("COLOMBEAU_JOBS", "many")
    with pytest.raises(ConfigError, match="COLOMBEAU_JOBS"):
        load_config()


def test_explicit_overrides_win(monkeypatch):
    monkeypatch.setenv("COLOMBEAU_QMAX", "8")
    config = load_config(overrides={("valuation", "q_max"): 5.0, ("eps_grid", "k_max"): None, "jobs": 2})
    assert config["valuation"]["q_max"] == 5.0
    assert config["eps_grid"]["k_max"] == 40
    assert config["jobs"] == 2


def test_config_error_is_a_value_error(tmp_path):
    with pytest.raises(ValueError):
        load_config(_write(tmp_path, {"jobs": 0}))
