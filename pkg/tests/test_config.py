"""Tests for run configuration loading and validation."""

import json

import pytest

from src.catdual.core.errors import ConfigError
from src.catdual.harness.config import (
    SCHEMA_VERSION,
    ConfigManager,
    RunConfig,
    load_config,
)


def test_defaults_fill_missing_fields():
    config = RunConfig.from_dict({"command": "verify-duality", "model": "tfim", "model_b": "tfim_kw"})
    assert config.N == 6
    assert config.couplings.as_params() == {"J": 1.0, "g": 1.0}
    assert config.tolerances.consistency == 1e-10
    assert config.tolerances.spectral == 1e-8


def test_nested_blocks_merge_with_defaults():
    config = RunConfig.from_dict({"command": "spectrum", "couplings": {"g": 0.5, "n": 3},
                                  "tolerances": {"spectral": 1e-6}})
    assert config.couplings.J == 1.0
    assert config.couplings.as_params() == {"J": 1.0, "g": 0.5, "n": 3}
    assert config.tolerances.consistency == 1e-10
    assert config.tolerances.spectral == 1e-6


@pytest.mark.parametrize("data,path", [
    ([], "$"),
    ({"schema": 2}, "schema"),
    ({"colour": "red"}, "colour"),
    ({"N": "six"}, "N"),
    ({"N": True}, "N"),
    ({"N": 0}, "N"),
    ({"depth": 0}, "depth"),
    ({"command": "plot"}, "command"),
    ({"couplings": {"h": 1.0}}, "couplings.h"),
    ({"couplings": {"g": "strong"}}, "couplings.g"),
    ({"tolerances": {"spectral": 0}}, "tolerances.spectral"),
    ({"category": "vec_z2", "hamiltonian": {"terms": []}}, "hamiltonian.chain"),
    ({"category": "vec_z2", "hamiltonian": {"chain": {"length": 3}, "terms": []}}, "hamiltonian.terms"),
    ({"category": "vec_z2", "hamiltonian": {"chain": {"length": 3}, "terms": [{"J": 1.0}]}},
     "hamiltonian.terms[0].bond"),
    ({"hamiltonian": {"chain": {"length": 3}, "terms": [{"bond": []}]}}, "category"),
])
def test_invalid_fields_name_their_path(data, path):
    with pytest.raises(ConfigError) as err:
        RunConfig.from_dict(data)
    assert err.value.field_path == path
    assert str(err.value).startswith(path)


def test_to_dict_carries_schema():
    data = RunConfig.default().to_dict()
    assert data["schema"] == SCHEMA_VERSION
    assert RunConfig.from_dict(data) == RunConfig.default()


def test_load_config_from_file(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"command": "check-pentagon", "category": "ising"}))
    config = load_config(path, RunConfig.default())
    assert config.command == "check-pentagon"
    assert config.category == "ising"
    assert config.model == "tfim"


def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError) as err:
        load_config(bad)
    assert err.value.field_path == "$"


def test_config_manager_round_trip(tmp_path):
    manager = ConfigManager(config_dir=tmp_path)
    assert manager.defaults == RunConfig.default()
    manager.save()
    saved = json.loads((tmp_path / ConfigManager.CONFIG_FILENAME).read_text())
    assert saved["schema"] == SCHEMA_VERSION
    manager.reload()
    assert manager.defaults == RunConfig.default()


def test_broken_defaults_file_is_ignored(tmp_path):
    (tmp_path / ConfigManager.CONFIG_FILENAME).write_text(json.dumps({"N": -1}))
    assert ConfigManager(config_dir=tmp_path).defaults == RunConfig.default()
