"""
Протокол first_peak: величины в первом пике по времени для каждой точки перебора.
"""
import logging
from typing import Any, Dict, List, Sequence

from modules.core.errors import ConfigError
from ..quantities import alternate_base, parse_quantities
from ..series import PointRecord
from .base import Protocol, evaluator_for, locate_peaks, scan_grid, scan_time, trajectory_for

logger = logging.getLogger(__name__)


class FirstPeakProtocol(Protocol):
    """
    Для каждой величины ищется первый пик по времени, затем величина
    пересчитывается точно в уточнённом τ*. tau_star - момент пика основной
    величины (первой в списке measures, если не задана primary).
    """

    name = "first_peak"
    options = {"primary": None, "emit_series": False, "alternate_base": True}

    def validate_options(self, options: Dict[str, Any], modes: Sequence[str]) -> List[str]:
        errors = super().validate_options(options, modes)
        for key in ("emit_series", "alternate_base"):
            if key in options and not isinstance(options[key], bool):
                errors.append(f"{key} должен быть true/false")
        return errors

    def validate_measures(self, measures: Sequence[str]) -> List[str]:
        quantities = parse_quantities(measures)
        if not any(q.is_series for q in quantities):
            return ["measures: протоколу first_peak нужна хотя бы одна величина EP_/LN_/gaussian_LN_/odd_"]
        return []

    def run_point(self, setup) -> PointRecord:
        quantities = parse_quantities(setup.scenario.measures)
        series_quantities = [q for q in quantities if q.is_series]
        primary = self.option(setup, "primary") or series_quantities[0].name
        if primary not in [q.name for q in series_quantities]:
            raise ConfigError(f"primary={primary!r} не входит в величины с временным рядом")
        floor = float(setup.settings.get("peak_noise_floor"))

        trajectory = trajectory_for(setup)
        evaluator = evaluator_for(setup, series_quantities)
        scan = scan_time(setup, trajectory, evaluator, scan_grid(setup), bool(setup.settings.get("early_stop")))
        peaks = locate_peaks(scan, floor)

        exact = evaluator_for(setup, quantities, check=True)
        values: Dict[str, float] = {}
        taus: Dict[str, float] = {}
        for quantity in series_quantities:
            peak = peaks[quantity.name]
            at_peak = exact.evaluate(trajectory.at(peak.tau), only=[quantity.name])
            values[quantity.name] = at_peak[quantity.name]
            taus[quantity.name] = peak.tau
        for quantity in quantities:
            if quantity.is_series:
                continue
            # эталон сжатого вакуума берётся в пике EP той же моды, иначе в пике основной величины
            source = f"EP_{quantity.modes[0]}"
            tau = taus.get(source, taus[primary])
            values.update(exact.evaluate(trajectory.at(tau), only=[quantity.name]))
            taus[quantity.name] = tau

        scalars: Dict[str, float] = {"tau_star": taus[primary]}
        for quantity in quantities:
            scalars[quantity.name] = float(values[quantity.name])
        if self.option(setup, "alternate_base"):
            for quantity in quantities:
                if quantity.is_logarithmic:
                    suffix, value = alternate_base(values[quantity.name], setup.settings.base)
                    scalars[f"{quantity.name}_{suffix}"] = value
        for quantity in quantities:
            scalars[f"tau_{quantity.name}"] = float(taus[quantity.name])
        for quantity in series_quantities:
            scalars[f"max_{quantity.name}"] = float(max(scan.series[quantity.name]))

        logger.info(
            "%s %s: τ*=%.4g, %s",
            setup.scenario.id,
            setup.point,
            scalars["tau_star"],
            ", ".join(f"{q.name}={values[q.name]:.6g}" for q in quantities),
        )
        tables = {"series": scan.rows()} if self.option(setup, "emit_series") else {}
        return PointRecord(
            point=setup.point,
            scalars=scalars,
            tables=tables,
            diagnostics={
                "interior": {name: peak.interior for name, peak in peaks.items()},
                "charge_drift": scan.charge_drift,
                "scanned_points": len(scan.taus),
                "stopped_early": scan.stopped_early,
            },
            provenance=setup.provenance(),
        )
