"""
Базовый класс протокола и общие шаги: траектория, сканирование по времени, поиск пиков.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Sequence

import numpy as np

from modules.evolution import EnsembleTrajectory, PeakResult, TimeGrid, first_peak
from ..quantities import Quantity, QuantityEvaluator
from ..series import PointRecord

logger = logging.getLogger(__name__)


class Protocol:
    """Базовый протокол: проверка опций и расчёт одной точки перебора."""

    name = "base"
    options: Dict[str, Any] = {}

    def validate_options(self, options: Dict[str, Any], modes: Sequence[str]) -> List[str]:
        """
        Проверяет опции сценария.

        Returns:
            список сообщений об ошибках (пустой, если всё верно)
        """
        unknown = sorted(set(options) - set(self.options))
        return [f"неизвестная опция {key!r} протокола {self.name}" for key in unknown]

    def validate_measures(self, measures: Sequence[str]) -> List[str]:
        return []

    def run_point(self, setup) -> PointRecord:
        raise NotImplementedError

    def option(self, setup, key: str) -> Any:
        return setup.option(key, self.options.get(key))


def evaluator_for(setup, quantities: Iterable[Quantity], check: bool = False) -> QuantityEvaluator:
    settings = setup.settings
    return QuantityEvaluator(
        quantities,
        settings.base,
        settings.get("ep_max_doubled_dim"),
        settings.get("quadrature_points"),
        settings.get("quadrature_half_width"),
        check=check,
    )


def trajectory_for(setup) -> EnsembleTrajectory:
    return EnsembleTrajectory(
        setup.hamiltonian,
        setup.initial_ensemble(),
        setup.charge,
        max_dense_sector=int(setup.settings.get("max_dense_sector")),
    )


def scan_grid(setup, tau_max: float = None, tau_step: float = None) -> TimeGrid:
    settings = setup.settings
    return TimeGrid.uniform(
        float(tau_max if tau_max is not None else settings.get("tau_max")),
        float(tau_step if tau_step is not None else settings.get("tau_step")),
    )


@dataclass
class TimeScan:
    """Временные ряды величин и дрейф заряда на просканированном участке."""

    taus: List[float] = field(default_factory=list)
    series: Dict[str, List[float]] = field(default_factory=dict)
    charge_drift: float = 0.0
    stopped_early: bool = False

    def rows(self) -> List[Dict[str, float]]:
        return [
            {"tau": tau, **{name: values[i] for name, values in self.series.items()}}
            for i, tau in enumerate(self.taus)
        ]


class _PeakWatch:
    """Отмечает величины, у которых после подъёма выше порога началось падение."""

    def __init__(self, names: Iterable[str], floor: float):
        self.floor = floor
        self.maxima = {n: -np.inf for n in names}
        self.passed = {n: False for n in names}

    def update(self, values: Dict[str, float]) -> bool:
        for name, value in values.items():
            if value > self.maxima[name]:
                self.maxima[name] = value
            elif self.maxima[name] > self.floor and value < self.maxima[name] - self.floor:
                self.passed[name] = True
        # величины, ни разу не поднявшиеся выше порога, не задерживают остановку
        active = [n for n, m in self.maxima.items() if m > self.floor]
        return bool(active) and all(self.passed[n] for n in active)


def scan_time(
    setup,
    trajectory: EnsembleTrajectory,
    evaluator: QuantityEvaluator,
    grid: TimeGrid,
    early_stop: bool,
) -> TimeScan:
    """
    Величины вдоль траектории в точках сетки.

    При early_stop сканирование прекращается, как только у всех ненулевых
    величин пройден первый пик.
    """
    names = [q.name for q in evaluator.quantities]
    scan = TimeScan(series={n: [] for n in names})
    watch = _PeakWatch(names, float(setup.settings.get("peak_noise_floor")))
    charge_values = setup.charge_values
    initial_charge = None
    for tau in grid:
        ensemble = trajectory.at(tau)
        charge = ensemble.diagonal_expectation(charge_values)
        if initial_charge is None:
            initial_charge = charge
        scan.charge_drift = max(scan.charge_drift, abs(charge - initial_charge))
        values = evaluator.evaluate(ensemble)
        scan.taus.append(float(tau))
        for name in names:
            scan.series[name].append(float(values[name]))
        passed = watch.update(values)
        if early_stop and passed and len(scan.taus) >= 3:
            scan.stopped_early = True
            logger.debug("Сканирование остановлено при τ=%.4g: первые пики пройдены", tau)
            break
    return scan


def locate_peaks(scan: TimeScan, floor: float) -> Dict[str, PeakResult]:
    return {name: first_peak(scan.taus, values, floor) for name, values in scan.series.items()}

