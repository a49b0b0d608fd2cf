import json

import pytest

from axblab import cli
from axblab.errors import ConfigInvalid
from axblab.suites import SuiteConfig, config_from_mapping, run_suite


def test_generators_suite_passes(tmp_path, capsys):
    assert cli.main(["run", "generators", "--out", str(tmp_path), "--quiet"]) == cli.EXIT_PASS
    rep = json.loads((tmp_path / "report.json").read_text())
    assert rep["passed"] and rep["suite"] == "generators"
    assert all(r["anchor"] for r in rep["records"])
    assert (tmp_path / "report.csv").exists() and (tmp_path / "summary.md").exists()


def test_flipped_orientation_fails(tmp_path):
    code = cli.main(["run", "generators", "--orientation", "paper", "--out", str(tmp_path), "--quiet"])
    assert code == cli.EXIT_FAIL
    rep = json.loads((tmp_path / "report.json").read_text())
    failed = {r["check_id"] for r in rep["records"] if not r["passed"]}
    assert "generators.coproduct.Y" in failed


def test_unknown_suite_is_a_config_error(tmp_path, capsys):
    assert cli.main(["run", "nonsense", "--out", str(tmp_path)]) == cli.EXIT_CONFIG
    assert "unknown suite" in capsys.readouterr().err
    with pytest.raises(ConfigInvalid):
        run_suite("nonsense", SuiteConfig())


@pytest.mark.parametrize("body", [
    "seed = 1\nbogus = 2\n",
    "[samples]\ngroupoid_pointz = 5\n",
    "[quadrature]\nordr = 8\n",
    "orientation = 'sideways'\n",
    "s_grid = [0.1, 0.2, 0.01]\n",
    "margin = 2.0\n",
    "seed = -3\n",
    "[samples]\ngroupoid_points = 0\n",
    "seed = \n",
])
def test_bad_config_files(tmp_path, body):
    cfg = tmp_path / "c.toml"
    cfg.write_text(body)
    assert cli.main(["run", "generators", "--config", str(cfg), "--out", str(tmp_path / "o")]) == cli.EXIT_CONFIG


def test_missing_config_file(tmp_path):
    assert cli.main(["run", "group", "--config", str(tmp_path / "none.toml")]) == cli.EXIT_CONFIG


def test_thread_variable(monkeypatch, tmp_path):
    monkeypatch.setenv("AXBLAB_THREADS", "0")
    assert cli.main(["run", "generators", "--out", str(tmp_path)]) == cli.EXIT_CONFIG
    monkeypatch.setenv("AXBLAB_THREADS", "2")
    assert cli.threads_from_env() == 2


def test_config_file_is_applied(tmp_path):
    cfg = tmp_path / "c.toml"
    cfg.write_text("seed = 11\n[samples]\ngenerator_functions = 2\n[quadrature]\norder = 12\n")
    assert cli.main(["run", "generators", "--config", str(cfg), "--seed", "5", "--out", str(tmp_path),
                     "--quiet"]) == 0
    rep = json.loads((tmp_path / "report.json").read_text())
    assert rep["seed"] == 5
    assert rep["config"]["samples"]["generator_functions"] == 2
    assert rep["config"]["quadrature"] == {"order": 12}


def test_same_seed_same_bytes(tmp_path):
    for d in ("a", "b"):
        cli.main(["run", "fourier", "--seed", "3", "--out", str(tmp_path / d), "--quiet"])
    for name in ("report.json", "report.csv", "summary.md"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_config_mapping_overrides():
    cfg = config_from_mapping({"seed": 1, "orientation": "paper"}, seed=9, orientation=None)
    assert cfg.seed == 9 and cfg.orientation == "paper"
