import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import magbrownian as mb
from magbrownian.cli import (
    ConfigError,
    ScenarioConfig,
    load_config,
    main,
    parse_config,
    preset_names,
    render_config,
    run_scenario,
    run_sweep,
)

FAST_ARGS = ["--set", "t_points=6", "--set", "t_max=0.5"]


def make_config(**over):
    base = dict(t_max=0.5, t_points=6, out=None, format="csv")
    base.update(over)
    params = base.pop("params", mb.ModelParams())
    return ScenarioConfig(params=params, **base)


class TestParsing:
    def test_round_trip_is_identity(self):
        cfg = make_config()
        assert parse_config(render_config(cfg)) == cfg

    @given(
        omega0=st.floats(0.5, 50.0),
        omega_c=st.floats(0.0, 20.0),
        gamma=st.floats(0.0, 10.0).filter(lambda g: g == g),
        t_points=st.integers(2, 500),
        strategy=st.sampled_from(["omega_analytic", "tau_grid", "both"]),
    )
    @settings(max_examples=60, deadline=None)
    def test_round_trip_random(self, omega0, omega_c, gamma, t_points, strategy):
        cfg = make_config(params=mb.ModelParams(omega0=omega0, omega_c=omega_c, gamma=gamma),
                          t_points=t_points, strategy=strategy)
        assert parse_config(render_config(cfg)) == cfg

    def test_unknown_key_named(self):
        with pytest.raises(ConfigError, match="unknown key 'qq'"):
            parse_config("m = 1\nqq = 3\n")

    def test_garbage_line_rejected(self):
        with pytest.raises(ConfigError, match="not a 'key = value'"):
            parse_config("m = 1\nwhatisthis\n")

    def test_empty_config_rejected(self):
        with pytest.raises(ConfigError, match="empty config"):
            parse_config("# only a comment\n")

    def test_mode_conflicts_with_explicit_coupling(self):
        with pytest.raises(ConfigError, match="mode"):
            parse_config("mode = both\nd = 1\n")

    def test_bad_mode_value(self):
        with pytest.raises(ConfigError, match="mode"):
            parse_config("mode = sideways\n")

    def test_invalid_physics_rejected(self):
        with pytest.raises(ConfigError, match="both"):
            parse_config("d = 0\ng = 0\n")
        with pytest.raises(ConfigError, match="omega0"):
            parse_config("omega0 = -3\n")

    def test_set_overrides(self):
        cfg = parse_config("m = 1\n", overrides=["omega_c=4", "t_points=11"])
        assert cfg.params.omega_c == 4.0
        assert cfg.t_points == 11

    def test_comments_and_blanks(self):
        cfg = parse_config("\n# header\nm = 2 # trailing\n\n")
        assert cfg.params.m == 2.0


class TestPresets:
    def test_all_presets_parse(self):
        names = preset_names()
        assert names == ["fig2a", "fig2b", "fig2c", "fig2d", "fig3"]
        for name in names:
            cfg = load_config(name)
            assert cfg.t_max == 10.0
            assert cfg.t_points == 1001

    def test_preset_values(self):
        cfg = load_config("fig2a")
        p = cfg.params
        assert (p.m, p.omega0, p.gamma, p.Omega) == (1.0, 10.0, 1.0, 1e3)
        assert (p.Lambda, p.m_b, p.m_r, p.K) == (1e3, 1e-2, 1e-3, 1e2)
        cfg3 = load_config("fig3")
        assert cfg3.mode is mb.CouplingMode.BOTH

    def test_unknown_source(self):
        with pytest.raises(ConfigError, match="no such file or bundled preset"):
            load_config("fig9")


class TestRunVerb:
    def test_run_writes_csv(self, tmp_path):
        out = tmp_path / "run.csv"
        rc = main(["run", "--config", "fig2a", *FAST_ARGS, "--out", str(out)])
        assert rc == 0
        lines = out.read_text().splitlines()
        header = [ln for ln in lines if ln.startswith("#")]
        assert any("omega_c = 1.0" in ln for ln in header)
        cols = next(ln for ln in lines if not ln.startswith("#"))
        assert cols == "t,D1,D2,Danom1,Danom2,D_total,rho_ratio"
        first = next(ln for ln in lines[lines.index(cols) + 1:]).split(",")
        assert float(first[0]) == 0.0
        assert float(first[-1]) == 1.0

    def test_run_deterministic(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["run", "--config", "fig2a", *FAST_ARGS, "--out", str(a)]) == 0
        assert main(["run", "--config", "fig2a", *FAST_ARGS, "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_run_json(self, tmp_path):
        out = tmp_path / "run.json"
        rc = main(["run", "--config", "fig2a", *FAST_ARGS, "--format", "json",
                   "--out", str(out)])
        assert rc == 0
        doc = json.loads(out.read_text())
        assert doc["columns"][0] == "t"
        assert len(doc["rows"]) == 6
        assert doc["rows"][0][-1] == 1.0

    def test_config_error_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text("nonsense = 1\n")
        rc = main(["run", "--config", str(bad)])
        assert rc == 2
        assert "nonsense" in capsys.readouterr().err

    def test_numerical_failure_exit_code(self, tmp_path, capsys):
        out = tmp_path / "never.csv"
        rc = main(["run", "--config", "fig2a", *FAST_ARGS,
                   "--set", "max_panels=64", "--out", str(out)])
        assert rc == 3
        err = capsys.readouterr().err
        assert "numerical failure" in err
        assert "t=" in err or "tau=" in err

    def test_missing_config_file(self, capsys):
        rc = main(["run", "--config", "/does/not/exist.cfg"])
        assert rc == 2


class TestSweepVerb:
    def test_single_value_sweep_matches_run_final_row(self, tmp_path):
        cfg = make_config(out=str(tmp_path / "run.csv"))
        series, _ = run_scenario(cfg)
        rows, _ = run_sweep(make_config(out=str(tmp_path / "sweep.csv")), "omega_c", [1.0])
        assert rows[0][1] == series.D_total[-1]

    def test_zero_damping_first_entry(self, tmp_path):
        rows, text = run_sweep(make_config(out=None), "gamma", [0.0, 1.0])
        assert rows[0][1] == 0.0
        assert rows[1][1] > 0.0

    def test_sweep_csv_columns(self, tmp_path):
        out = tmp_path / "sweep.csv"
        rc = main(["sweep", "--config", "fig2a", *FAST_ARGS, "--param", "omega_c",
                   "--values", "1,2", "--out", str(out)])
        assert rc == 0
        lines = [ln for ln in out.read_text().splitlines() if not ln.startswith("#")]
        assert lines[0] == "omega_c,D_total_at_tmax"
        assert len(lines) == 3

    def test_sweep_workers_match_serial(self, tmp_path):
        cfg = make_config()
        serial, _ = run_sweep(cfg, "omega_c", [1.0, 3.0], workers=1)
        threaded, _ = run_sweep(cfg, "omega_c", [1.0, 3.0], workers=2)
        assert serial == threaded

    def test_bad_param_rejected(self):
        rc = main(["sweep", "--config", "fig2a", "--param", "volume", "--values", "1"])
        assert rc == 2


class TestCompareModesVerb:
    def test_columns_and_start(self, tmp_path):
        out = tmp_path / "modes.csv"
        rc = main(["compare-modes", "--config", "fig3", *FAST_ARGS, "--out", str(out)])
        assert rc == 0
        lines = [ln for ln in out.read_text().splitlines() if not ln.startswith("#")]
        assert lines[0] == ("t,D_total_position,rho_ratio_position,"
                            "D_total_momentum,rho_ratio_momentum,"
                            "D_total_both,rho_ratio_both")
        first = [float(v) for v in lines[1].split(",")]
        assert first[2] == first[4] == first[6] == 1.0


class TestValidateVerb:
    def test_prints_canonical_form(self, capsys):
        rc = main(["validate", "--config", "fig2a"])
        assert rc == 0
        text = capsys.readouterr().out
        assert parse_config(text) == load_config("fig2a")


class TestStrategyBoth:
    def test_extra_columns_and_agreement(self, tmp_path):
        out = tmp_path / "both.csv"
        # modest grid keeps the tau-grid table small; steps stay aligned
        rc = main(["run", "--config", "fig2a", "--set", "t_max=0.5",
                   "--set", "t_points=11", "--strategy", "both", "--out", str(out)])
        assert rc == 0
        lines = [ln for ln in out.read_text().splitlines() if not ln.startswith("#")]
        cols = lines[0].split(",")
        assert "D1_tau" in cols and "D1_reldiff" in cols
        data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
        table = dict(zip(cols, data.T))
        for kind in ("D1", "D2", "Danom1", "Danom2"):
            scale = np.maximum(np.abs(table[kind]), np.abs(table[f"{kind}_tau"]))
            gate = scale > 1e-3 * np.max(scale)
            assert np.all(table[f"{kind}_reldiff"][gate] < 1e-4), kind
