"""
Протокол open_system: эволюция по уравнению Линдблада.

Величины считаются вдоль сетки времени (таблица open_series) и в момент
tau_eval (колонки таблицы points). tau_eval: "peak" - первый пик основной
величины в замкнутой системе, иначе число.
"""
import logging
from typing import Any, Dict, List, Sequence

import numpy as np

from modules.evolution import TimeGrid, iter_lindblad_evolve
from ..quantities import parse_quantities
from ..series import PointRecord
from .base import Protocol, evaluator_for, locate_peaks, scan_grid, scan_time, trajectory_for

logger = logging.getLogger(__name__)


class OpenSystemProtocol(Protocol):
    name = "open_system"
    options = {"tau_eval": "peak", "primary": None, "tau_max": None, "tau_step": 0.05, "emit_series": True}

    def validate_options(self, options: Dict[str, Any], modes: Sequence[str]) -> List[str]:
        errors = super().validate_options(options, modes)
        tau_eval = options.get("tau_eval", "peak")
        if tau_eval != "peak" and not (_is_number(tau_eval) and tau_eval >= 0):
            errors.append(f"tau_eval должен быть 'peak' или числом >= 0: {tau_eval!r}")
        for key in ("tau_max", "tau_step"):
            value = options.get(key)
            if value is not None and not (_is_number(value) and value > 0):
                errors.append(f"{key} должен быть числом > 0")
        if "emit_series" in options and not isinstance(options["emit_series"], bool):
            errors.append("emit_series должен быть true/false")
        return errors

    def validate_measures(self, measures: Sequence[str]) -> List[str]:
        if not any(q.is_series for q in parse_quantities(measures)):
            return ["measures: протоколу open_system нужна хотя бы одна величина EP_/LN_/gaussian_LN_/odd_"]
        return []

    def _tau_eval(self, setup, primary: str) -> float:
        tau = self.option(setup, "tau_eval")
        if tau != "peak":
            return float(tau)
        quantity = [q for q in parse_quantities(setup.scenario.measures) if q.name == primary]
        evaluator = evaluator_for(setup, quantity)
        scan = scan_time(setup, trajectory_for(setup), evaluator, scan_grid(setup), bool(setup.settings.get("early_stop")))
        return locate_peaks(scan, float(setup.settings.get("peak_noise_floor")))[primary].tau

    def _grid(self, setup, tau_eval: float) -> TimeGrid:
        if not self.option(setup, "emit_series"):
            return TimeGrid.single(tau_eval)
        tau_max = self.option(setup, "tau_max") or setup.settings.get("tau_max")
        uniform = scan_grid(setup, tau_max=tau_max, tau_step=self.option(setup, "tau_step"))
        taus = np.union1d(uniform.taus, [tau_eval])
        # узлы, отличающиеся от tau_eval меньше чем на 1e-12, сливаются с ним
        taus = taus[(np.abs(taus - tau_eval) > 1e-12) | (taus == tau_eval)]
        return TimeGrid(taus)

    def run_point(self, setup) -> PointRecord:
        quantities = parse_quantities(setup.scenario.measures)
        series_names = [q.name for q in quantities if q.is_series]
        primary = self.option(setup, "primary") or series_names[0]
        tau_eval = self._tau_eval(setup, primary)
        grid = self._grid(setup, tau_eval)
        settings = setup.settings

        evaluator = evaluator_for(setup, quantities)
        rows: List[Dict[str, float]] = []
        at_eval: Dict[str, float] = {}
        trace_drift = 0.0
        evolution = iter_lindblad_evolve(
            setup.hamiltonian,
            setup.jumps(),
            setup.initial_density(),
            grid,
            step=float(settings.get("lindblad_step")),
            min_step=float(settings.get("lindblad_min_step")),
            tol=float(settings.get("lindblad_tol")),
            truncation=setup.truncation(),
        )
        for tau, rho in evolution:
            trace_drift = max(trace_drift, abs(rho.trace() - 1.0))
            if tau == tau_eval:
                at_eval = evaluator.evaluate(rho)
                values = {name: at_eval[name] for name in series_names}
            else:
                values = evaluator.evaluate(rho, only=series_names)
            rows.append({"tau": float(tau), **{name: float(values[name]) for name in series_names}})

        scalars: Dict[str, float] = {"tau_eval": tau_eval}
        for quantity in quantities:
            scalars[quantity.name] = float(at_eval[quantity.name])

        logger.info(
            "%s %s: τ=%.4g, %s, дрейф следа %.2e",
            setup.scenario.id,
            setup.point,
            tau_eval,
            ", ".join(f"{name}={scalars[name]:.6g}" for name in series_names),
            trace_drift,
        )
        return PointRecord(
            point=setup.point,
            scalars=scalars,
            tables={"open_series": rows} if self.option(setup, "emit_series") else {},
            diagnostics={
                "trace_drift": trace_drift,
                "grid_points": len(grid),
                "rates": dict(setup.lindblad.rates) if setup.lindblad else {},
                "nbar_th": setup.lindblad.nbar_th if setup.lindblad else 0.0,
            },
            provenance=setup.provenance(),
        )


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)
