import json

import pytest

from group_engine import CoxeterKind, ProductConvention
from utils.run_config import DEFAULTS, RunConfig, apply_env_overrides, load_config_file


def test_defaults_are_valid():
    config = RunConfig()
    assert config.convention is ProductConvention.LEFT_TO_RIGHT
    assert config.coxeter_spec.kind is CoxeterKind.STANDARD


@pytest.mark.parametrize("override", [
    {"jobs": 0},
    {"max_group_order": -1},
    {"output_format": "xml"},
    {"projection_mode": "guess"},
    {"product_convention": "sideways"},
    {"coxeter": "a b c"},
])
def test_invalid_settings(override):
    with pytest.raises(ValueError):
        RunConfig(**override)


def test_from_mapping_ignores_unknown_keys_and_none_overrides():
    config = RunConfig.from_mapping(
        {"jobs": 3, "bot_token": "unused", "output_format": "json"},
        {"jobs": None, "output_format": "tsv", "coxeter": "bipartite"},
    )
    assert config.jobs == 3
    assert config.output_format == "tsv"
    assert config.coxeter_spec.kind is CoxeterKind.BIPARTITE


def test_env_overrides():
    merged = apply_env_overrides({"jobs": 1}, {"POPTSACK_JOBS": "4", "POPTSACK_CACHE_DIR": "/tmp/x"})
    assert merged == {"jobs": 4, "cache_dir": "/tmp/x"}
    assert apply_env_overrides({"jobs": 1}, {"POPTSACK_JOBS": ""}) == {"jobs": 1}
    with pytest.raises(ValueError):
        apply_env_overrides({}, {"POPTSACK_BUDGET_ORDER": "lots"})


def test_missing_config_file_falls_back(tmp_path, capsys):
    settings = load_config_file(str(tmp_path / "absent.json"))
    assert settings == DEFAULTS
    assert "[WARNING]" in capsys.readouterr().err


def test_invalid_config_file_falls_back(tmp_path, capsys):
    path = tmp_path / "config.json"
    path.write_text("{not json")
    assert load_config_file(str(path)) == DEFAULTS
    assert "not valid JSON" in capsys.readouterr().err


def test_shipped_config_is_loadable():
    import os

    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    with open(os.path.join(root, "config.json")) as f:
        settings = json.load(f)
    config = RunConfig.from_mapping(settings)
    assert config.max_group_order == 700000
    assert config.product_convention == "left_to_right"
