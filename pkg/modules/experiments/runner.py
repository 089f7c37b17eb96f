"""
Прогон сценария: точки перебора, кэш и проверка сходимости по размерностям.
"""
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional

from modules.core.errors import PointFailedError
from .cache import SeriesCache, cache_key, library_version
from .protocols import get_protocol
from .scenario_config import ScenarioConfig
from .series import MeasureSeries, PointRecord
from .setup import Settings, refined_settings, resolve_point, resolve_settings

logger = logging.getLogger(__name__)


def compare_scalars(
    reference: MeasureSeries, refined: MeasureSeries, tol: float
) -> List[Dict[str, Any]]:
    """
    Расхождения скаляров двух серий больше tol.

    NaN в обеих сериях считается совпадением; NaN только в одной - расхождением.
    """
    violations = []
    for base, other in zip(reference.records, refined.records):
        for name, value in base.scalars.items():
            other_value = other.scalars.get(name, math.nan)
            if math.isnan(value) and math.isnan(other_value):
                continue
            difference = abs(value - other_value)
            if not difference < tol:
                violations.append(
                    {"point": base.point, "scalar": name, "value": value, "refined": other_value, "difference": difference}
                )
    return violations


class ScenarioRunner:
    """Считает серию сценария; точки перебора независимы и идут в пуле потоков."""

    def __init__(self, scenario: ScenarioConfig, threads: int = 1, use_cache: bool = True):
        self.scenario = scenario
        self.threads = max(1, int(threads))
        self.settings: Settings = resolve_settings(scenario)
        self.protocol = get_protocol(scenario.protocol)
        self.cache: Optional[SeriesCache] = SeriesCache() if use_cache else None

    def _run_point(self, point: Dict[str, Any], dims_increment: int) -> PointRecord:
        started = time.monotonic()
        logger.info("%s: точка %s (dims +%d)", self.scenario.id, point, dims_increment)
        try:
            setup = resolve_point(self.scenario, point, dims_increment, self.settings)
            record = self.protocol.run_point(setup)
        except Exception as e:
            raise PointFailedError(point, e, self.scenario.id) from e
        logger.info("%s: точка %s готова за %.2f с", self.scenario.id, point, time.monotonic() - started)
        return record

    def compute(self, dims_increment: int = 0) -> MeasureSeries:
        """Серия с заданным приращением размерностей; берётся из кэша, если там есть."""
        key = cache_key(self.scenario, dims_increment, self.settings)
        if self.cache is not None:
            cached = self.cache.fetch(key)
            if cached is not None:
                return cached

        points = self.scenario.points()
        if self.threads > 1 and len(points) > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as executor:
                records = list(executor.map(lambda p: self._run_point(p, dims_increment), points))
        else:
            records = [self._run_point(p, dims_increment) for p in points]

        series = MeasureSeries(
            scenario_id=self.scenario.id,
            protocol=self.scenario.protocol,
            axes={name: list(values) for name, values in self.scenario.sweep.items()},
            records=records,
            provenance={
                "config_hash": self.scenario.config_hash,
                "library_version": library_version(),
                "dims_increment": dims_increment,
                "eps_tail": refined_settings(self.settings, dims_increment).eps_tail,
                "log_base": self.settings.log_base,
            },
        )
        if self.cache is not None:
            self.cache.store(key, series, self.scenario.config_hash)
        return series

    def run(self) -> MeasureSeries:
        """
        Серия сценария с проверкой сходимости: при convergence_guard расчёт
        повторяется с размерностями +convergence_increment и более строгой
        отсечкой хвоста (eps_tail / convergence_eps_factor), результат проверки
        записывается в series.convergence.
        """
        series = self.compute()
        if not self.settings.get("convergence_guard"):
            return series

        increment = int(self.settings.get("convergence_increment"))
        tol = float(self.settings.get("convergence_tol"))
        refined = self.compute(increment)
        violations = compare_scalars(series, refined, tol)
        series.convergence = {
            "dims_increment": increment,
            "eps_factor": float(self.settings.get("convergence_eps_factor")),
            "tol": tol,
            "passed": not violations,
            "violations": violations,
        }
        if violations:
            for v in violations:
                logger.error(
                    "Сходимость по размерностям нарушена: %s %s: %.10g -> %.10g",
                    v["point"],
                    v["scalar"],
                    v["value"],
                    v["refined"],
                )
        else:
            logger.info("Проверка сходимости (dims +%d) пройдена", increment)
        return series


def run(scenario: ScenarioConfig, threads: int = 1, use_cache: bool = True) -> MeasureSeries:
    return ScenarioRunner(scenario, threads, use_cache).run()


def clear_cache() -> int:
    return SeriesCache().clear()
