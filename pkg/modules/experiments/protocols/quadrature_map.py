"""
Протокол quadrature_map: дисперсия обобщённой квадратуры X_θ на сетке τ × θ.
"""
import logging
import math
from typing import Any, Dict, List, Sequence

import numpy as np

from modules.distillation import variance_to_db
from modules.evolution import TimeGrid
from modules.fock import ladder_moments, reduce
from ..series import PointRecord
from .base import Protocol, trajectory_for

logger = logging.getLogger(__name__)


def quadrature_variances(rho, thetas: np.ndarray) -> np.ndarray:
    """Var X_θ одной моды для массива углов из нормально упорядоченных моментов."""
    mean_b, number, mean_b2 = ladder_moments(rho)
    phase = np.exp(-0.5j * np.asarray(thetas))
    mean = np.sqrt(2.0) * np.real(phase * mean_b)
    second = np.real(phase ** 2 * mean_b2) + number + 0.5
    return second - mean ** 2


class QuadratureMapProtocol(Protocol):
    """θ ∈ [0, 2π) с theta_points точками, τ ∈ [0, tau_max] с tau_points точками."""

    name = "quadrature_map"
    options = {"mode": "b", "theta_points": 128, "tau_max": 3.0, "tau_points": 256}

    def validate_options(self, options: Dict[str, Any], modes: Sequence[str]) -> List[str]:
        errors = super().validate_options(options, modes)
        mode = options.get("mode", "b")
        if mode not in modes:
            errors.append(f"mode {mode!r} отсутствует в modes")
        for key in ("theta_points", "tau_points"):
            value = options.get(key, self.options[key])
            if not (isinstance(value, int) and not isinstance(value, bool) and value >= 2):
                errors.append(f"{key} должен быть целым >= 2")
        tau_max = options.get("tau_max", self.options["tau_max"])
        if not (isinstance(tau_max, (int, float)) and not isinstance(tau_max, bool) and tau_max > 0):
            errors.append("tau_max должен быть числом > 0")
        return errors

    def run_point(self, setup) -> PointRecord:
        mode = self.option(setup, "mode")
        tau_max = float(self.option(setup, "tau_max"))
        tau_points = int(self.option(setup, "tau_points"))
        thetas = np.linspace(0.0, 2.0 * np.pi, int(self.option(setup, "theta_points")), endpoint=False)
        grid = TimeGrid(np.linspace(0.0, tau_max, tau_points))

        trajectory = trajectory_for(setup)
        rows: List[Dict[str, float]] = []
        best = (math.inf, math.nan, math.nan)
        for tau in grid:
            variances = quadrature_variances(reduce(trajectory.at(tau), [mode], check=False), thetas)
            for theta, variance in zip(thetas, variances):
                rows.append({"tau": float(tau), "theta": float(theta), "variance": float(variance)})
            index = int(np.argmin(variances))
            if variances[index] < best[0]:
                best = (float(variances[index]), float(thetas[index]), float(tau))

        min_variance, theta_at_min, tau_at_min = best
        logger.info(
            "%s %s: min Var X_θ = %.6g при θ=%.4g, τ=%.4g",
            setup.scenario.id,
            setup.point,
            min_variance,
            theta_at_min,
            tau_at_min,
        )
        return PointRecord(
            point=setup.point,
            scalars={
                "min_variance": min_variance,
                "theta_at_min": theta_at_min,
                "tau_at_min": tau_at_min,
                "squeezing_db_at_min": variance_to_db(min_variance),
            },
            tables={"quadrature_map": rows},
            diagnostics={"grid": [len(grid), len(thetas)]},
            provenance=setup.provenance(),
        )
