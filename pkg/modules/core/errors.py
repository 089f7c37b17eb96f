"""
Исключения симуляции.

Все ошибки библиотеки наследуются от SimulationError; ошибки входных данных
дополнительно являются ValueError, чтобы их можно было ловить привычным образом.
"""
from typing import Any, Dict, Optional


class SimulationError(Exception):
    """Базовая ошибка симуляции."""


class InvalidModeError(SimulationError, ValueError):
    """Неверный индекс или имя моды."""


class InvalidStateError(SimulationError, ValueError):
    """Неверные параметры подготовки состояния или нефизичное состояние на входе."""


class NonPhysicalStateError(SimulationError):
    """Состояние или ковариационная матрица нарушают физические ограничения."""


class TruncationError(SimulationError):
    """Усечения пространства Фока недостаточно для заданной точности."""


class ConvergenceError(SimulationError):
    """Численная процедура не сошлась."""


class GridTooNarrowError(SimulationError):
    """Сетка квадратур не покрывает распределение."""


class NoDistillableSqueezingError(SimulationError):
    """Кривизна ln P в глобальном максимуме неотрицательна: универсальная дистилляция не находит сжатия."""


class ConfigError(SimulationError, ValueError):
    """Ошибка конфигурации сценария."""


class CacheCorruptionError(SimulationError):
    """Контрольная сумма записи кэша не совпала."""


class PointFailedError(SimulationError):
    """Ошибка в конкретной точке перебора параметров."""

    def __init__(self, point: Dict[str, Any], cause: Exception, scenario_id: Optional[str] = None):
        self.point = dict(point)
        self.cause = cause
        self.scenario_id = scenario_id
        label = ", ".join(f"{k}={v}" for k, v in self.point.items()) or "<без осей>"
        prefix = f"{scenario_id}: " if scenario_id else ""
        super().__init__(f"{prefix}точка [{label}]: {type(cause).__name__}: {cause}")
