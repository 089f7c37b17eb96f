"""
Тесты команд CLI: коды выхода, кэш серий, повторяемость таблиц.
"""
import json

import pytest
import yaml

from db import SeriesRepository
from main import main
from modules.core.app import EXIT_CONFIG, EXIT_FAILURE, EXIT_OK, ExperimentApp, exit_code
from modules.core.errors import ConfigError, PointFailedError, TruncationError
from modules.experiments import ScenarioLoader

TINY = {
    "id": "tiny",
    "protocol": "first_peak",
    "modes": ["a", "b"],
    "hamiltonian": {"kind": "degenerate_trilinear"},
    "initial": {"a": {"kind": "thermal"}},
    "sweep": {"nbar": [0.1]},
    "measures": ["EP_b", "odd_b"],
    "eps_tail": 1e-8,
    "numerics": {"tau_max": 2.0, "tau_step": 0.05},
    "options": {"emit_series": True},
}


@pytest.fixture
def scenario_file(tmp_path):
    def write(**changes):
        path = tmp_path / "scenarios" / "tiny.yml"
        path.parent.mkdir(exist_ok=True)
        path.write_text(yaml.safe_dump({**TINY, **changes}), encoding="utf-8")
        return path

    return write


@pytest.fixture
def app(tmp_path):
    return ExperimentApp(ScenarioLoader(tmp_path / "scenarios"))


def test_exit_codes_for_errors():
    assert exit_code(ConfigError("x")) == EXIT_CONFIG
    assert exit_code(TruncationError("x")) == EXIT_FAILURE
    assert exit_code(PointFailedError({"nbar": 1.0}, ConfigError("x"))) == EXIT_CONFIG
    assert exit_code(PointFailedError({"nbar": 1.0}, TruncationError("x"))) == EXIT_FAILURE


class TestRun:
    def test_run_writes_tables(self, app, scenario_file, tmp_path, isolated_cache):
        path = scenario_file()
        out = tmp_path / "out"
        assert app.run(path, out_dir=out) == EXIT_OK

        target = out / "tiny"
        assert (target / "points.csv").exists()
        assert (target / "series.csv").exists()
        summary = json.loads((target / "summary.json").read_text(encoding="utf-8"))
        assert summary["convergence"]["passed"] is True
        assert summary["convergence"]["dims_increment"] == 2
        assert summary["convergence"]["eps_factor"] == 10.0
        # n̄ = 0.1, eps = 1e-8: восемь уровней накачки, K = 2n_a + n_b <= 14
        assert summary["points"][0]["provenance"]["dims"] == [8, 15]
        # пик первой передачи кванта в моду b лежит внутри окна
        assert summary["points"][0]["diagnostics"]["interior"]["EP_b"] is True

    def test_second_run_uses_cache(self, app, scenario_file, tmp_path, isolated_cache):
        path = scenario_file()
        assert app.run(path, out_dir=tmp_path / "first") == EXIT_OK
        repository = SeriesRepository()
        # основная серия и серия проверки сходимости
        assert repository.count() == 2

        assert app.run(path, out_dir=tmp_path / "second") == EXIT_OK
        assert repository.count() == 2
        for name in ("points.csv", "series.csv", "summary.json"):
            first = (tmp_path / "first" / "tiny" / name).read_bytes()
            second = (tmp_path / "second" / "tiny" / name).read_bytes()
            assert first == second

    def test_no_cache(self, app, scenario_file, tmp_path, isolated_cache):
        assert app.run(scenario_file(), out_dir=tmp_path / "out", use_cache=False) == EXIT_OK
        assert SeriesRepository().count() == 0

    def test_threads_keep_point_order(self, app, scenario_file, tmp_path, isolated_cache):
        path = scenario_file(sweep={"nbar": [0.2, 0.1]})
        assert app.run(path, out_dir=tmp_path / "out", threads=2, use_cache=False) == EXIT_OK
        summary = json.loads((tmp_path / "out" / "tiny" / "summary.json").read_text(encoding="utf-8"))
        assert [p["point"]["nbar"] for p in summary["points"]] == [0.2, 0.1]


    def test_write_error_is_a_failure(self, app, scenario_file, tmp_path, isolated_cache, monkeypatch):
        def refuse(*args, **kwargs):
            raise PermissionError("каталог только для чтения")

        monkeypatch.setattr("modules.core.app.emit", refuse)
        assert app.run(scenario_file(), out_dir=tmp_path / "out", use_cache=False) == EXIT_FAILURE


class TestConfigErrors:
    def test_bad_protocol(self, app, scenario_file, tmp_path, isolated_cache):
        assert app.run(scenario_file(protocol="nope"), out_dir=tmp_path / "out") == EXIT_CONFIG
        assert not (tmp_path / "out").exists()

    def test_missing_scenario(self, app, tmp_path, isolated_cache):
        assert app.run("absent", out_dir=tmp_path / "out") == EXIT_CONFIG

    def test_dims_too_small(self, app, scenario_file, tmp_path, isolated_cache):
        assert app.run(scenario_file(), out_dir=tmp_path / "out", dims="1,1") == EXIT_CONFIG

    def test_dims_wrong_count(self, app, scenario_file, tmp_path, isolated_cache):
        assert app.run(scenario_file(), out_dir=tmp_path / "out", dims="3") == EXIT_CONFIG


class TestOtherCommands:
    def test_list_scenarios(self, capsys):
        assert ExperimentApp().list_scenarios() == EXIT_OK
        output = capsys.readouterr().out
        assert "ep_ln_vs_nbar" in output
        assert "quadrature_map" in output

    def test_clean_cache(self, app, scenario_file, tmp_path, isolated_cache, capsys):
        app.run(scenario_file(), out_dir=tmp_path / "out")
        assert app.clean_cache() == EXIT_OK
        assert "2" in capsys.readouterr().out
        assert SeriesRepository().count() == 0


def test_main_runs_scenario(scenario_file, tmp_path, isolated_cache):
    path = scenario_file()
    code = main(["run", str(path), "--out", str(tmp_path / "out"), "--no-cache", "--log-base", "e"])
    assert code == EXIT_OK
    summary = json.loads((tmp_path / "out" / "tiny" / "summary.json").read_text(encoding="utf-8"))
    assert summary["log_base"] == "e"
