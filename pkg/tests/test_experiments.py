"""
Тесты слоя экспериментов: загрузка сценариев, разрешение точек, кэш серий,
проверка сходимости и запись результатов.
"""
import json
import math

import pandas as pd
import pytest
import yaml

from modules.core.errors import ConfigError
from modules.experiments import (
    MeasureSeries,
    PointRecord,
    ScenarioLoader,
    ScenarioRunner,
    SeriesCache,
    cache_key,
    compare_scalars,
    emit,
    get_protocol,
    load_scenario,
    parse_scenario,
    resolve_point,
    resolve_settings,
)
from modules.experiments import validators
from modules.experiments.protocols import Protocol, quadrature_variances
from modules.experiments.scenario_config import PROTOCOL_NAMES
from modules.fock import FockSpace, StatePrep, prepare


def tiny_scenario(**changes):
    data = {
        "id": "tiny",
        "protocol": "first_peak",
        "modes": ["a", "b"],
        "hamiltonian": {"kind": "degenerate_trilinear"},
        "initial": {"a": {"kind": "thermal", "nbar": 0.1}},
        "measures": ["EP_b", "odd_b"],
        "eps_tail": 1e-3,
        "numerics": {"tau_max": 2.0, "tau_step": 0.05},
    }
    data.update(changes)
    return data


def record(point, **scalars):
    return PointRecord(point=point, scalars=scalars)


class TestValidators:
    def test_measure_names(self):
        assert validators.validate_measure("LN_bc", ("a", "b", "c")) == (True, "LN_bc", None)
        ok, _, error = validators.validate_measure("LN_bb", ("a", "b", "c"))
        assert not ok and error
        ok, _, _ = validators.validate_measure("EP_z", ("a", "b"))
        assert not ok

    def test_dims_from_command_line(self):
        assert validators.validate_dims("4, 8,8", ("a", "b", "c")) == (True, (4, 8, 8), None)
        assert validators.validate_dims("auto", ("a",)) == (True, "auto", None)
        assert not validators.validate_dims("4,x", ("a", "b"))[0]
        assert not validators.validate_dims([4], ("a", "b"))[0]

    def test_log_base(self):
        assert validators.validate_log_base("E") == (True, "e", None)
        assert validators.validate_log_base(2) == (True, "2", None)
        assert not validators.validate_log_base(10)[0]

    def test_numerics_overrides(self):
        assert validators.validate_numerics({"tau_max": 3})[0]
        ok, _, error = validators.validate_numerics({"tau_max": -1, "unknown": 1})
        assert not ok
        assert "unknown" in error

    def test_sweep_axes(self):
        assert validators.validate_sweep_axis("N", [2, 3]) == (True, [2, 3], None)
        assert not validators.validate_sweep_axis("N", [1])[0]
        assert not validators.validate_sweep_axis("temperature", [1.0])[0]
        assert validators.validate_sweep_axis("resource", ["thermal", "fock"])[0]


class TestScenarioParsing:
    def test_valid_scenario(self):
        scenario = parse_scenario(tiny_scenario(sweep={"nbar": [0.1, 0.2]}))
        assert scenario.id == "tiny"
        assert scenario.axes == ("nbar",)
        assert scenario.measures == ("EP_b", "odd_b")

    def test_all_errors_reported_together(self):
        data = tiny_scenario(protocol="nope", measures=["XX_b"], colour="red")
        with pytest.raises(ConfigError) as info:
            parse_scenario(data)
        message = str(info.value)
        assert "protocol" in message
        assert "measures" in message
        assert "colour" in message

    def test_open_system_axes_need_open_protocol(self):
        with pytest.raises(ConfigError):
            parse_scenario(tiny_scenario(sweep={"lam": [0.1]}))

    def test_first_peak_needs_time_series_measure(self):
        with pytest.raises(ConfigError):
            parse_scenario(tiny_scenario(measures=["sv_EP_b"]))

    def test_points_in_declaration_order(self):
        scenario = parse_scenario(tiny_scenario(sweep={"nbar": [0.1, 0.2], "N": [2, 3]}))
        assert scenario.points() == [
            {"nbar": 0.1, "N": 2},
            {"nbar": 0.1, "N": 3},
            {"nbar": 0.2, "N": 2},
            {"nbar": 0.2, "N": 3},
        ]
        assert parse_scenario(tiny_scenario()).points() == [{}]

    def test_config_hash_ignores_description(self):
        first = parse_scenario(tiny_scenario(description="один"))
        second = parse_scenario(tiny_scenario(description="другой"))
        assert first.config_hash == second.config_hash
        assert first.config_hash != parse_scenario(tiny_scenario(eps_tail=1e-4)).config_hash

    def test_overrides(self):
        scenario = parse_scenario(tiny_scenario())
        changed = scenario.with_overrides(dims=(3, 5), log_base="e")
        assert changed.dims == (3, 5)
        assert changed.log_base == "e"
        assert scenario.with_overrides() is scenario


class TestLoader:
    def test_load_by_path_and_id(self, tmp_path):
        path = tmp_path / "mine.yml"
        path.write_text(yaml.safe_dump(tiny_scenario(id="custom_id")), encoding="utf-8")
        loader = ScenarioLoader(tmp_path)
        assert loader.load(path).id == "custom_id"
        assert loader.load("mine").id == "custom_id"
        assert loader.load("custom_id").source == path

    def test_missing_scenario(self, tmp_path):
        with pytest.raises(ConfigError):
            ScenarioLoader(tmp_path).load("absent")

    def test_broken_yaml(self, tmp_path):
        path = tmp_path / "broken.yml"
        path.write_text("id: [unclosed", encoding="utf-8")
        with pytest.raises(ConfigError):
            ScenarioLoader(tmp_path).load(path)

    def test_load_bundled_by_id(self):
        assert load_scenario("ep_ln_vs_nbar").protocol == "first_peak"

    def test_bundled_scenarios_are_valid(self):
        scenarios = ScenarioLoader().bundled()
        ids = {s.id for s in scenarios}
        assert {"degenerate_snapshot", "ep_ln_vs_nbar", "quadrature_variance_map", "decoherence_vs_time"} <= ids
        assert {"nondegenerate_aux_ep_ln", "thermal_b_snapshot", "thermal_b_distillation"} <= ids
        assert len(scenarios) == 17


class TestPointSetup:
    def test_auto_dims_cover_charge_shells(self):
        scenario = parse_scenario(tiny_scenario())
        setup = resolve_point(scenario, {})
        # n̄ = 0.1, eps = 1e-3: три уровня накачки, K = 2n_a + n_b <= 4
        assert setup.charge_basis == [(2, 1)]
        assert setup.max_charges == (4,)
        assert setup.space.mode_dims == (3, 5)

    def test_guard_pass_tightens_tail(self):
        scenario = parse_scenario(tiny_scenario())
        refined = resolve_point(scenario, {}, dims_increment=2)
        # eps = 1e-4: четыре уровня накачки, K <= 6, затем +2 к каждой размерности
        assert refined.settings.eps_tail == pytest.approx(1e-4)
        assert refined.max_charges == (6,)
        assert refined.space.mode_dims == (6, 9)
        assert len(refined.initial_ensemble().components) == 4

    def test_guard_pass_keeps_explicit_dims_sufficient(self):
        scenario = parse_scenario(tiny_scenario(dims=[3, 5]))
        assert resolve_point(scenario, {}).space.mode_dims == (3, 5)
        assert resolve_point(scenario, {}, dims_increment=2).space.mode_dims == (5, 7)

    def test_guard_pass_raises_lindblad_bounds(self):
        scenario = parse_scenario(
            tiny_scenario(protocol="open_system", lindblad={"rate": 0.1}, measures=["EP_b"], options={})
        )
        # K <= 4 плюс запас lindblad_charge_margin = 4
        assert resolve_point(scenario, {}).truncation_bounds == (8,)
        assert resolve_point(scenario, {}, dims_increment=2).truncation_bounds == (12,)

    def test_explicit_dims_too_small(self):
        scenario = parse_scenario(tiny_scenario(dims=[2, 2]))
        with pytest.raises(ConfigError):
            resolve_point(scenario, {})

    def test_sweep_axis_sets_pump(self):
        scenario = parse_scenario(tiny_scenario(sweep={"nbar": [0.5]}))
        setup = resolve_point(scenario, {"nbar": 0.5})
        assert setup.preps["a"] == StatePrep.thermal(0.5)

    def test_resource_axis(self):
        scenario = parse_scenario(tiny_scenario(sweep={"resource": ["coherent"], "nbar": [1.0]}))
        setup = resolve_point(scenario, {"resource": "coherent", "nbar": 1.0})
        assert setup.preps["a"].kind == "coherent"
        assert setup.preps["a"].mean_occupation == pytest.approx(1.0)

    def test_order_axis_switches_to_higher_order(self):
        scenario = parse_scenario(tiny_scenario(sweep={"N": [3]}))
        setup = resolve_point(scenario, {"N": 3})
        assert setup.spec.kind == "higher_order"
        assert setup.charge_basis == [(3, 1)]

    def test_settings_precedence(self):
        scenario = parse_scenario(tiny_scenario(log_base="e"))
        settings = resolve_settings(scenario)
        assert settings.eps_tail == 1e-3
        assert settings.log_base == "e"
        assert settings.get("tau_max") == 2.0
        assert settings.get("tau_step") == 0.05


class TestTrilinearVariants:
    def variant(self, modes, hamiltonian, measures):
        return tiny_scenario(
            modes=modes,
            hamiltonian=hamiltonian,
            initial={"a": {"kind": "thermal", "nbar": 1.0}},
            measures=measures,
            numerics={"tau_max": 5.0, "tau_step": 0.05},
        )

    def first_peak(self, data, point=None):
        setup = resolve_point(parse_scenario(data), point or {})
        return get_protocol("first_peak").run_point(setup).scalars

    def test_nondegenerate_coupling_needs_aux_mode(self):
        with pytest.raises(ConfigError, match="вспомогательной модой d"):
            parse_scenario(self.variant(["a", "b", "c"], {"kind": "nondegenerate", "g": 1.0}, ["EP_b"]))

    def test_nondegenerate_with_aux_mode(self):
        data = self.variant(["a", "b", "c", "d"], {"kind": "nondegenerate", "g": 1.0}, ["LN_bd"])
        setup = resolve_point(parse_scenario(data), {})
        assert setup.spec.kind == "nondegenerate_aux"
        assert setup.spec.modes == ("a", "b", "c", "d")
        # a†a + c†c и a†a + b†b + d†d
        assert sorted(setup.charge_basis) == [(1, 0, 1, 0), (1, 1, 0, 1)]

    def test_nondegenerate_aux_entanglement_is_weak(self):
        aux = self.first_peak(
            self.variant(["a", "b", "c", "d"], {"kind": "nondegenerate", "g": 1.0}, ["LN_bd"])
        )
        degenerate = self.first_peak(self.variant(["a", "b", "c"], {"kind": "aux_linear", "g": 1.0}, ["LN_bc"]))
        assert aux["LN_bd"] > 0.0
        assert aux["LN_bd"] < degenerate["LN_bc"]

    def test_shared_mode_interactions_entangle_less(self):
        data = self.variant(["a", "b", "c"], {"kind": "aux_linear", "g": 1.0}, ["LN_bc"])
        data["sweep"] = {"hamiltonian": ["aux_linear", "multi_shared_b", "multi_shared_a"]}
        single = self.first_peak(data, {"hamiltonian": "aux_linear"})["LN_bc"]
        for kind in ("multi_shared_b", "multi_shared_a"):
            assert self.first_peak(data, {"hamiltonian": kind})["LN_bc"] < single


class TestProtocols:
    def test_registry_covers_protocol_names(self):
        for name in PROTOCOL_NAMES:
            handler = get_protocol(name)
            assert isinstance(handler, Protocol)
            assert handler.name == name

    def test_unknown_protocol_rejected(self):
        with pytest.raises(ConfigError, match="first_peak"):
            get_protocol("unknown")

    def test_handler_rejects_unknown_options(self):
        with pytest.raises(ConfigError, match="colour"):
            parse_scenario(tiny_scenario(options={"colour": "red"}))

    def test_quadrature_variances_of_vacuum(self):
        rho = prepare(FockSpace((4,), ("b",)), {}, as_density=True)
        variances = quadrature_variances(rho, [0.0, 1.0, 2.0])
        assert variances == pytest.approx([0.5, 0.5, 0.5])


class TestConvergenceComparison:
    def test_nan_in_both_is_equal(self):
        reference = MeasureSeries("s", "first_peak", {}, [record({}, x=math.nan, y=1.0)])
        refined = MeasureSeries("s", "first_peak", {}, [record({}, x=math.nan, y=1.0 + 1e-6)])
        assert compare_scalars(reference, refined, 1e-4) == []

    def test_differences_reported(self):
        reference = MeasureSeries("s", "first_peak", {}, [record({"nbar": 1.0}, x=1.0, y=math.nan)])
        refined = MeasureSeries("s", "first_peak", {}, [record({"nbar": 1.0}, x=1.1, y=0.3)])
        violations = compare_scalars(reference, refined, 1e-4)
        assert [v["scalar"] for v in violations] == ["x", "y"]
        assert violations[0]["difference"] == pytest.approx(0.1)
        assert violations[0]["point"] == {"nbar": 1.0}


class TestConvergenceGuard:
    def test_coarse_tail_trips_guard(self):
        scenario = parse_scenario(
            tiny_scenario(initial={"a": {"kind": "thermal", "nbar": 0.5}}, eps_tail=0.2)
        )
        series = ScenarioRunner(scenario, use_cache=False).run()
        assert series.convergence["eps_factor"] == 10.0
        assert not series.convergence["passed"]
        assert "EP_b" in {v["scalar"] for v in series.convergence["violations"]}

    def test_fine_tail_passes_guard(self):
        scenario = parse_scenario(tiny_scenario(eps_tail=1e-8))
        series = ScenarioRunner(scenario, use_cache=False).run()
        assert series.convergence["passed"], series.convergence["violations"]


class TestLogBases:
    def test_ep_ln_sweep_covers_published_grid(self):
        scenario = load_scenario("ep_ln_vs_nbar")
        assert scenario.sweep["nbar"] == [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0]
        assert {"gaussian_LN_ab", "gaussian_LN_ac", "gaussian_LN_bc"} <= set(scenario.measures)
        assert scenario.options["alternate_base"] is True

    def test_first_peak_reports_both_bases(self):
        scenario = parse_scenario(tiny_scenario(eps_tail=1e-6))
        record = ScenarioRunner(scenario, use_cache=False).compute().records[0]
        assert record.scalars["EP_b_base_e"] == pytest.approx(record.scalars["EP_b"] * math.log(2.0))
        assert "odd_b_base_e" not in record.scalars


class TestCache:
    def make_series(self):
        rec = PointRecord(
            point={"nbar": 1.0},
            scalars={"EP_b": 0.25, "sv_EP_b": math.nan},
            tables={"series": [{"tau": 0.0, "EP_b": 0.0}, {"tau": 0.1, "EP_b": 0.01}]},
            diagnostics={"interior": {"EP_b": True}},
        )
        return MeasureSeries("tiny", "first_peak", {"nbar": [1.0]}, [rec], {"config_hash": "abc"})

    def test_round_trip(self, isolated_cache):
        cache = SeriesCache()
        series = self.make_series()
        cache.store("k" * 64, series, "abc")
        loaded = cache.fetch("k" * 64)
        assert loaded.to_json() == series.to_json()
        assert math.isnan(loaded.records[0].scalars["sv_EP_b"])
        assert cache.fetch("m" * 64) is None
        assert cache.repository.keys_for("tiny") == ["k" * 64]

    def test_corrupted_entry_dropped(self, isolated_cache):
        cache = SeriesCache()
        cache.store("k" * 64, self.make_series(), "abc")
        row = cache.repository.get("k" * 64)
        cache.repository.put(**{**row, "payload": row["payload"].replace("0.25", "0.26")})
        assert cache.fetch("k" * 64) is None
        assert cache.repository.count() == 0

    def test_clear(self, isolated_cache):
        cache = SeriesCache()
        cache.store("a" * 64, self.make_series(), "abc")
        cache.store("b" * 64, self.make_series(), "abc")
        assert cache.clear() == 2

    def test_key_depends_on_dims_increment_and_settings(self):
        scenario = parse_scenario(tiny_scenario())
        settings = resolve_settings(scenario)
        assert cache_key(scenario, 0, settings) != cache_key(scenario, 2, settings)
        other = resolve_settings(scenario.with_overrides(log_base="e"))
        assert cache_key(scenario, 0, settings) != cache_key(scenario, 0, other)
        assert cache_key(scenario, 0, settings) == cache_key(parse_scenario(tiny_scenario()), 0, settings)


class TestEmit:
    def test_tables_and_summary(self, tmp_path):
        series = TestCache().make_series()
        series.convergence = {"dims_increment": 2, "tol": 1e-4, "passed": True, "violations": []}
        target = emit(series, tmp_path)
        assert target == tmp_path / "tiny"

        points = pd.read_csv(target / "points.csv")
        assert list(points.columns) == ["nbar", "EP_b", "sv_EP_b"]
        assert points.loc[0, "EP_b"] == 0.25
        assert math.isnan(points.loc[0, "sv_EP_b"])

        rows = pd.read_csv(target / "series.csv")
        assert list(rows.columns) == ["nbar", "tau", "EP_b"]
        assert len(rows) == 2

        summary = json.loads((target / "summary.json").read_text(encoding="utf-8"))
        assert summary["scenario_id"] == "tiny"
        assert summary["config_hash"] == "abc"
        assert summary["convergence"]["passed"] is True
        assert summary["points"][0]["scalars"]["sv_EP_b"] is None
        assert summary["tables"]["series"] == ["nbar", "tau", "EP_b"]

    def test_emit_is_repeatable(self, tmp_path):
        series = TestCache().make_series()
        first = (emit(series, tmp_path / "one") / "points.csv").read_bytes()
        second = (emit(series, tmp_path / "two") / "points.csv").read_bytes()
        assert first == second

    def test_plots_written(self, tmp_path):
        target = emit(TestCache().make_series(), tmp_path, plots=True)
        assert any(target.glob("*.svg"))
