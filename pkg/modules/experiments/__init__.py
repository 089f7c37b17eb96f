"""
Сценарии расчётов: загрузка YAML, протоколы, прогон с кэшем, запись таблиц.
"""
from .cache import SeriesCache, cache_key, library_version
from .emit import emit
from .protocols import PROTOCOLS, Protocol, get_protocol
from .quantities import Quantity, QuantityEvaluator, parse_quantities
from .runner import ScenarioRunner, clear_cache, compare_scalars, run
from .scenario_config import ScenarioConfig
from .scenario_loader import ScenarioLoader, load_scenario, parse_scenario
from .series import MeasureSeries, PointRecord
from .setup import PointSetup, Settings, resolve_point, resolve_settings

__all__ = [
    'SeriesCache',
    'cache_key',
    'library_version',
    'emit',
    'PROTOCOLS',
    'Protocol',
    'get_protocol',
    'Quantity',
    'QuantityEvaluator',
    'parse_quantities',
    'ScenarioRunner',
    'clear_cache',
    'compare_scalars',
    'run',
    'ScenarioConfig',
    'ScenarioLoader',
    'load_scenario',
    'parse_scenario',
    'MeasureSeries',
    'PointRecord',
    'PointSetup',
    'Settings',
    'resolve_point',
    'resolve_settings',
]
