import csv
import io
import json
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from typmix import cli
from typmix.config import (
    EXPERIMENTS,
    ConfigError,
    default_config,
    emit_config,
    load_config,
    parse_config,
)
from typmix.experiments import Table, emit_csv, emit_json, execute, run_experiment

CONFIGS = Path(__file__).resolve().parents[1] / "configs"

SMALL_DAVIES = """[davies_concentration]
sizes = 2, 3
n_samples = 20
n_points = 24
"""


class TestConfig:
    @pytest.mark.parametrize("name", EXPERIMENTS)
    def test_bundled_round_trip(self, name):
        cfg = load_config(CONFIGS / f"{name}.ini")
        assert cfg.experiment == name
        assert parse_config(emit_config(cfg)) == cfg

    @pytest.mark.parametrize("name", EXPERIMENTS)
    def test_default_round_trip(self, name):
        cfg = default_config(name)
        assert parse_config(emit_config(cfg)) == cfg

    def test_minimal_config_echoes_defaults(self):
        cfg = parse_config("[davies_concentration]\n")
        assert cfg == default_config("davies_concentration")
        assert cfg.params == {"beta": 1.2, "omega": 1.0}
        assert cfg.n_points == 72 and cfg.t_max == 6.0

    def test_overrides(self):
        cfg = parse_config("[skin_bundles]\nepsilon = 0.2, 0.05\ngamma_r = 2.0\nlog_grid = false\nt_min = 0\n")
        assert cfg.epsilon == (0.2, 0.05)
        assert cfg.params["gamma_r"] == 2.0
        assert not cfg.log_grid

    def test_float_round_trip_is_exact(self):
        cfg = replace(default_config("davies_concentration"), t_min=0.1 + 0.2, epsilon=(1 / 3,))
        back = parse_config(emit_config(cfg))
        assert back.t_min == 0.1 + 0.2 and back.epsilon == (1 / 3,)

    def test_duplicate_key(self):
        with pytest.raises(ConfigError, match="duplicate|already exists"):
            parse_config("[davies_concentration]\nseed = 1\nseed = 2\n")

    def test_unknown_keys_listed(self):
        with pytest.raises(ConfigError) as exc:
            parse_config("[davies_concentration]\nbogus = 1\nalso_bad = 2\n")
        assert "also_bad" in str(exc.value) and "bogus" in str(exc.value)

    def test_unknown_experiment(self):
        with pytest.raises(ConfigError, match="unknown experiment"):
            parse_config("[nope]\n")

    def test_single_section(self):
        with pytest.raises(ConfigError):
            parse_config("[davies_concentration]\n[skin_bundles]\n")
        with pytest.raises(ConfigError):
            parse_config("seed = 3\n")

    def test_field_path_in_parse_error(self):
        with pytest.raises(ConfigError, match=r"davies_concentration\.n_samples"):
            parse_config("[davies_concentration]\nn_samples = many\n")

    @pytest.mark.parametrize(
        "body, field",
        [
            ("n_points = 4", "n_points"),
            ("t_min = 0", "t_min"),
            ("t_max = 1e-4", "t_max"),
            ("epsilon = 2.5", "epsilon"),
            ("workers = 0", "workers"),
            ("epsilon_rule = random", "epsilon_rule"),
            ("log_grid = maybe", "log_grid"),
        ],
    )
    def test_invalid_values(self, body, field):
        with pytest.raises(ConfigError, match=field):
            parse_config(f"[davies_concentration]\n{body}\n")

    def test_scaled_rule(self):
        cfg = default_config("boundary_scaled_eps")
        assert cfg.epsilons(4) == (pytest.approx(0.025),)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(tmp_path / "absent.ini")


class TestEmit:
    def test_csv_full_precision(self):
        t = Table(["name", "x", "flag"])
        t.add(name="a", x=0.1, flag=True)
        t.add(name="b", x=np.float64(1 / 3), flag=np.bool_(False))
        buf = io.StringIO()
        emit_csv(t, buf)
        rows = list(csv.reader(io.StringIO(buf.getvalue())))
        assert rows[0] == ["name", "x", "flag"]
        assert rows[1] == ["a", "0.10000000000000001", "true"]
        assert float(rows[2][1]) == 1 / 3 and rows[2][2] == "false"

    def test_csv_file_utf8(self, tmp_path):
        t = Table(["label"])
        t.add(label="γ₂")
        emit_csv(t, tmp_path / "x.csv")
        assert (tmp_path / "x.csv").read_text(encoding="utf-8") == "label\nγ₂\n"

    def test_json(self, tmp_path):
        emit_json({"a": np.float64(0.5), "b": float("inf"), "c": [np.int64(3)], "d": np.bool_(True)}, tmp_path / "m.json")
        data = json.loads((tmp_path / "m.json").read_text())
        assert data == {"a": 0.5, "b": "inf", "c": [3], "d": True}


class TestRun:
    def test_outputs_and_metadata(self, tmp_path):
        cfg = parse_config(SMALL_DAVIES)
        res = run_experiment(cfg, tmp_path)
        for f in ("summary.csv", "curves.csv", "meta.json"):
            assert (tmp_path / f).exists()
        meta = json.loads((tmp_path / "meta.json").read_text())
        assert meta["seed"] == 0 and meta["code_version"]
        assert parse_config(meta["config"]) == cfg
        header = (tmp_path / "curves.csv").read_text().splitlines()[0]
        assert header == "size,sample_id,t,g"
        assert res.summary.column("size") == [2, 3]

    def test_deterministic_across_workers(self):
        cfg = parse_config(SMALL_DAVIES)
        a, b = execute(cfg), execute(replace(cfg, workers=2))
        assert a.summary.rows == b.summary.rows
        assert a.curves.rows == b.curves.rows

    def test_seed_changes_samples(self):
        cfg = parse_config(SMALL_DAVIES)
        assert execute(cfg).summary.rows != execute(replace(cfg, seed=1)).summary.rows

    def test_censored_warning(self):
        cfg = parse_config("[davies_concentration]\nsizes = 2\nn_samples = 4\nt_max = 0.01\nn_points = 8\n")
        meta = execute(cfg).meta
        assert meta["censored_rows"] == [2]
        assert len(meta["warnings"]) == 1


class TestCli:
    def test_list(self, capsys):
        assert cli.main(["list-experiments"]) == 0
        out = capsys.readouterr().out
        assert all(name in out for name in EXPERIMENTS)

    def test_run(self, tmp_path, capsys):
        path = tmp_path / "small.ini"
        path.write_text(SMALL_DAVIES)
        assert cli.main(["run", str(path), "--out", str(tmp_path / "o"), "--seed", "5", "--workers", "1"]) == 0
        meta = json.loads((tmp_path / "o" / "meta.json").read_text())
        assert meta["seed"] == 5

    def test_config_error_exit(self, tmp_path, capsys):
        path = tmp_path / "bad.ini"
        path.write_text("[davies_concentration]\nbogus = 1\n")
        assert cli.main(["run", str(path)]) == 1
        assert "bogus" in capsys.readouterr().err

    def test_bad_override_exit(self, tmp_path):
        path = tmp_path / "small.ini"
        path.write_text(SMALL_DAVIES)
        assert cli.main(["run", str(path), "--workers", "0"]) == 1

    def test_check_oracles(self, capsys):
        assert cli.main(["check-oracles", "--triples", "5"]) == 0
        rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
        assert rows and all(r["passed"] == "true" for r in rows)

    def test_check_oracles_guard(self, capsys):
        assert cli.main(["check-oracles", "--triples", "2", "--tolerance", "1e-300"]) == 2
