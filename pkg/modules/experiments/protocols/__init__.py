"""
Протоколы расчёта точки перебора.
"""
from modules.core.errors import ConfigError
from .base import Protocol, TimeScan, evaluator_for, locate_peaks, scan_grid, scan_time, trajectory_for
from .first_peak import FirstPeakProtocol
from .open_system import OpenSystemProtocol
from .quadrature_map import QuadratureMapProtocol, quadrature_variances
from .snapshot import SnapshotProtocol

PROTOCOLS = {
    "first_peak": FirstPeakProtocol(),
    "snapshot": SnapshotProtocol(),
    "quadrature_map": QuadratureMapProtocol(),
    "open_system": OpenSystemProtocol(),
}


def get_protocol(name: str) -> Protocol:
    """
    Возвращает протокол по имени.

    Raises:
        ConfigError: протокол не зарегистрирован
    """
    handler = PROTOCOLS.get(name)
    if handler is None:
        raise ConfigError(f"Неизвестный протокол {name!r}; допустимы: {', '.join(PROTOCOLS)}")
    return handler


__all__ = [
    'Protocol',
    'TimeScan',
    'FirstPeakProtocol',
    'OpenSystemProtocol',
    'QuadratureMapProtocol',
    'SnapshotProtocol',
    'PROTOCOLS',
    'evaluator_for',
    'get_protocol',
    'locate_peaks',
    'quadrature_variances',
    'scan_grid',
    'scan_time',
    'trajectory_for',
]
