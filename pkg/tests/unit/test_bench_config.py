import math
from pathlib import Path

import pytest

from couplab.accel.iqn import IqnIls
from couplab.bench.config import (
    SweepConfig,
    config_from_dict,
    format_grid_value,
    load_config,
    parse_grid_value,
)
from couplab.errors import ConfigError
from couplab.policy.budgets import ConvergedInterfaceData, FixedPerCall, NkCC


class TestGridValues:
    """Budget grid entries: positive integers or "inf"."""

    @pytest.mark.parametrize("raw,expected", [(1, 1), ("3", 3), ("inf", math.inf), ("INF", math.inf), (math.inf, math.inf)])
    def test_parse(self, raw, expected):
        assert parse_grid_value(raw) == expected

    @pytest.mark.parametrize("raw", [0, -2, 1.5, "x"])
    def test_rejected(self, raw):
        with pytest.raises(ValueError):
            parse_grid_value(raw)

    def test_format(self):
        assert format_grid_value(math.inf) == "inf"
        assert format_grid_value(4) == "4"
        assert format_grid_value(None) == ""


class TestConfigFromDict:
    """Schema validation followed by the typed model."""

    def test_defaults(self):
        cfg = config_from_dict({})
        assert isinstance(cfg, SweepConfig)
        assert cfg.build_tolerances().eps_coupling == 1e-5
        assert cfg.build_time().n_steps == 20
        assert isinstance(cfg.build_accelerator(), IqnIls)
        assert len(cfg.fixed_policies()) == 36
        assert cfg.fixed_policies()[5] == FixedPerCall(1, math.inf)

    def test_grid_and_policies(self):
        cfg = config_from_dict(
            {"grid": {"n_a": [1, "inf"], "n_b": [2]}, "policies": ["N1-CC", {"kind": "cid"}]}
        )
        assert [p.label for p in cfg.fixed_policies()] == ["(1,2)", "(inf,2)"]
        adaptive = cfg.adaptive_policies()
        assert adaptive[0] == NkCC(k=1)
        assert adaptive[1] == ConvergedInterfaceData(eps_cid=1e-4)

    def test_eps_problem_split(self):
        tol = config_from_dict({"tolerances": {"eps_problem": 1e-8, "eps_problem_b": 1e-9}}).build_tolerances()
        assert (tol.eps_problem_a, tol.eps_problem_b) == (1e-8, 1e-9)

    def test_negative_dt(self):
        with pytest.raises(ConfigError, match="time.dt"):
            config_from_dict({"time": {"dt": -0.01}})

    def test_unknown_field(self):
        with pytest.raises(ConfigError, match="<root>"):
            config_from_dict({"grids": {}})

    def test_bad_grid_entry(self):
        with pytest.raises(ConfigError, match="grid.n_a"):
            config_from_dict({"grid": {"n_a": [0]}})

    def test_bad_policy_name(self):
        with pytest.raises(ConfigError, match="N0-CC"):
            config_from_dict({"policies": ["N0-CC"]})

    def test_bad_problem_parameter(self):
        with pytest.raises(ConfigError, match="m >= 1"):
            config_from_dict({"problem": {"kind": "mp1", "params": {"m": 0}}})


class TestLoadConfig:
    """Config files on disk."""

    def test_round_trip(self, write_config):
        path = write_config({"name": "tiny", "problem": {"kind": "mp2", "params": {"cells_a": 8}}})
        cfg = load_config(path)
        assert cfg.name == "tiny"
        assert cfg.build_problem().name == "mp2"

    def test_parse_error_has_position(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "time": ,\n}')
        with pytest.raises(ConfigError, match=r"broken\.json:2:"):
            load_config(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="Cannot read config"):
            load_config(tmp_path / "absent.json")

    def test_top_level_must_be_object(self, tmp_path):
        path = tmp_path / "list.json"
        path.write_text("[]")
        with pytest.raises(ConfigError, match="object"):
            load_config(path)


def test_shipped_configs_load():
    configs = sorted((Path(__file__).resolve().parents[2] / "configs").glob("*.json"))
    assert [p.stem for p in configs] == ["mp1-strong", "mp1-weak", "mp2-strong", "mp2-weak"]
    for path in configs:
        cfg = load_config(path)
        assert cfg.name == path.stem
        assert cfg.fixed_policies()
