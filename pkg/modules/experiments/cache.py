"""
Кэш посчитанных серий в базе данных (SQLAlchemy, таблица cached_series).

Ключ - sha256 канонического JSON конфигурации сценария, версии библиотеки,
приращения размерностей и итоговых численных настроек. Запись хранит
контрольную сумму содержимого; при несовпадении запись удаляется и серия
пересчитывается.
"""
import hashlib
import logging
from typing import Optional

from db import SeriesRepository, init_db
from modules import __version__
from modules.core.errors import CacheCorruptionError
from .scenario_config import ScenarioConfig, canonical_json
from .series import MeasureSeries
from .setup import Settings

logger = logging.getLogger(__name__)


def library_version() -> str:
    return __version__


def cache_key(scenario: ScenarioConfig, dims_increment: int, settings: Settings) -> str:
    material = {
        "config": scenario.canonical(),
        "library_version": library_version(),
        "dims_increment": int(dims_increment),
        "settings": {
            "numerics": dict(settings.numerics),
            "eps_tail": settings.eps_tail,
            "log_base": settings.log_base,
        },
    }
    return hashlib.sha256(canonical_json(material).encode("utf-8")).hexdigest()


def payload_checksum(payload: str) -> str:
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class SeriesCache:
    """Чтение и запись серий с проверкой контрольной суммы."""

    def __init__(self, repository: Optional[SeriesRepository] = None):
        init_db()
        self.repository = repository or SeriesRepository()

    def _verified(self, row: dict) -> MeasureSeries:
        """
        Raises:
            CacheCorruptionError: контрольная сумма или содержимое не совпадают с записанными
        """
        if payload_checksum(row["payload"]) != row["checksum"]:
            raise CacheCorruptionError(f"Контрольная сумма записи {row['cache_key'][:12]} не совпадает")
        try:
            return MeasureSeries.from_json(row["payload"])
        except (ValueError, KeyError, TypeError) as e:
            raise CacheCorruptionError(f"Запись {row['cache_key'][:12]} не читается: {e}") from e

    def fetch(self, key: str) -> Optional[MeasureSeries]:
        """Серия из кэша или None (нет записи или запись повреждена и удалена)."""
        row = self.repository.get(key)
        if row is None:
            return None
        try:
            series = self._verified(row)
        except CacheCorruptionError as e:
            logger.warning("%s; запись удалена, серия будет пересчитана", e)
            self.repository.delete(key)
            return None
        logger.info("Серия %s взята из кэша (%s)", row["scenario_id"], key[:12])
        return series

    def store(self, key: str, series: MeasureSeries, config_hash: str) -> None:
        payload = series.to_json()
        self.repository.put(
            cache_key=key,
            scenario_id=series.scenario_id,
            config_hash=config_hash,
            library_version=library_version(),
            checksum=payload_checksum(payload),
            payload=payload,
        )

    def clear(self) -> int:
        removed = self.repository.clear()
        logger.info("Кэш очищен: удалено записей %d", removed)
        return removed
