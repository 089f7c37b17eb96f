"""Ядро: иерархия ошибок и приложение CLI (modules.core.app)."""
from .errors import (
    CacheCorruptionError,
    ConfigError,
    ConvergenceError,
    GridTooNarrowError,
    InvalidModeError,
    InvalidStateError,
    NoDistillableSqueezingError,
    NonPhysicalStateError,
    PointFailedError,
    SimulationError,
    TruncationError,
)

__all__ = [
    'CacheCorruptionError',
    'ConfigError',
    'ConvergenceError',
    'GridTooNarrowError',
    'InvalidModeError',
    'InvalidStateError',
    'NoDistillableSqueezingError',
    'NonPhysicalStateError',
    'PointFailedError',
    'SimulationError',
    'TruncationError',
]
