"""
Протокол snapshot: распределение фононов, критерий Клышко, плотность квадратуры,
дистилляция и функция Вигнера одной моды в момент τ*.
"""
import logging
import math
from typing import Any, Dict, List, Sequence

from modules.core.errors import NoDistillableSqueezingError
from modules.distillation import asymptotic_limit, nonuniversal_distill, universal_distill, variance_to_db
from modules.fock import reduce
from modules.measures import default_grid, klyshko, phonon_distribution, quadrature_pdf, wigner_grid, wigner_min
from ..quantities import Quantity
from ..series import PointRecord
from .base import Protocol, evaluator_for, locate_peaks, scan_grid, scan_time, trajectory_for

logger = logging.getLogger(__name__)

METHODS = ("universal", "nonuniversal")


class SnapshotProtocol(Protocol):
    """
    tau: "peak" (первый пик peak_measure, по умолчанию EP выбранной моды) или число.
    """

    name = "snapshot"
    options = {
        "mode": "b",
        "tau": "peak",
        "peak_measure": None,
        "theta": 0.0,
        "distillation": ["universal"],
        "steps": None,
        "wigner": False,
        "emit_pdf": True,
    }

    def validate_options(self, options: Dict[str, Any], modes: Sequence[str]) -> List[str]:
        errors = super().validate_options(options, modes)
        mode = options.get("mode", "b")
        if mode not in modes:
            errors.append(f"mode {mode!r} отсутствует в modes")
        tau = options.get("tau", "peak")
        if tau != "peak" and not (isinstance(tau, (int, float)) and not isinstance(tau, bool) and tau >= 0):
            errors.append(f"tau должен быть 'peak' или числом >= 0: {tau!r}")
        methods = options.get("distillation", ["universal"])
        if not isinstance(methods, list) or any(m not in METHODS for m in methods):
            errors.append(f"distillation: список из {', '.join(METHODS)}")
        steps = options.get("steps")
        if steps is not None and not (isinstance(steps, int) and steps >= 1):
            errors.append("steps должен быть целым >= 1")
        for key in ("wigner", "emit_pdf"):
            if key in options and not isinstance(options[key], bool):
                errors.append(f"{key} должен быть true/false")
        return errors

    def _tau_star(self, setup, trajectory, mode: str) -> float:
        tau = self.option(setup, "tau")
        if tau != "peak":
            return float(tau)
        measure = self.option(setup, "peak_measure") or f"EP_{mode}"
        evaluator = evaluator_for(setup, [Quantity.parse(measure)])
        scan = scan_time(setup, trajectory, evaluator, scan_grid(setup), bool(setup.settings.get("early_stop")))
        return locate_peaks(scan, float(setup.settings.get("peak_noise_floor")))[measure].tau

    def run_point(self, setup) -> PointRecord:
        mode = self.option(setup, "mode")
        theta = float(self.option(setup, "theta"))
        steps = int(self.option(setup, "steps") or setup.settings.get("distillation_steps"))
        settings = setup.settings

        trajectory = trajectory_for(setup)
        tau_star = self._tau_star(setup, trajectory, mode)
        rho = reduce(trajectory.at(tau_star), [mode])

        distribution = phonon_distribution(rho, mode)
        report = klyshko(distribution)
        grid = default_grid(rho, theta, int(settings.get("quadrature_points")), float(settings.get("quadrature_half_width")))
        pdf = quadrature_pdf(rho, theta, grid)

        scalars: Dict[str, float] = {
            "tau_star": tau_star,
            "mean_n": distribution.mean,
            "odd_population": distribution.odd_population,
            "klyshko_min": report.strongest,
            "klyshko_violations": float(len(report.violated_at)),
            "variance": pdf.variance,
            "squeezing_db": variance_to_db(pdf.variance),
        }
        diagnostics: Dict[str, Any] = {"klyshko_violated_at": report.violated_at}

        tables: Dict[str, List[Dict[str, Any]]] = {
            "phonon": [{"k": k, "P_k": float(p)} for k, p in enumerate(distribution.probabilities)],
            "klyshko": [
                {"n": n, "B_n": float(v), "violated": bool(flag)}
                for n, (v, flag) in enumerate(zip(report.values, report.violations))
            ],
        }
        if self.option(setup, "emit_pdf"):
            tables["pdf"] = [{"x": float(x), "P": float(p)} for x, p in zip(pdf.grid, pdf.density)]

        distillation_rows: List[Dict[str, Any]] = []
        for method in self.option(setup, "distillation"):
            trace = universal_distill(pdf, steps) if method == "universal" else nonuniversal_distill(pdf, steps)
            distillation_rows.extend(trace.to_rows())
            scalars[f"{method}_variance"] = trace.best_variance
            scalars[f"{method}_db"] = variance_to_db(trace.best_variance)
        if distillation_rows:
            tables["distillation"] = distillation_rows

        try:
            limit = asymptotic_limit(pdf, require_squeezing=True)
            diagnostics["universal_squeezing"] = True
        except NoDistillableSqueezingError as e:
            logger.info("%s %s: %s", setup.scenario.id, setup.point, e)
            limit = math.nan
            diagnostics["universal_squeezing"] = False
        scalars["asymptotic_variance"] = limit
        scalars["asymptotic_db"] = variance_to_db(limit) if math.isfinite(limit) else math.nan

        if self.option(setup, "wigner"):
            axis = wigner_grid(rho, int(settings.get("wigner_points")), float(settings.get("wigner_half_width")))
            minimum = wigner_min(rho, (axis, axis))
            scalars["wigner_min"] = minimum.value
            scalars["wigner_normalisation"] = minimum.normalisation
            diagnostics["wigner_coarse"] = minimum.coarse

        logger.info(
            "%s %s: τ*=%.4g, Var=%.6g, нарушений Клышко %d",
            setup.scenario.id,
            setup.point,
            tau_star,
            pdf.variance,
            len(report.violated_at),
        )
        return PointRecord(
            point=setup.point,
            scalars={k: float(v) for k, v in scalars.items()},
            tables=tables,
            diagnostics=diagnostics,
            provenance=setup.provenance(),
        )
