"""
Репозиторий для работы с кэшем серий (таблица cached_series).
"""
import logging
from typing import List, Optional

from sqlalchemy import delete, func, select

from db.models import CachedSeries
from db.session import get_session_context

logger = logging.getLogger(__name__)


class SeriesRepository:
    """Репозиторий для CachedSeries."""

    def get(self, cache_key: str) -> Optional[dict]:
        """
        Возвращает запись по ключу кэша.
        Возвращает dict (не ORM-объект), чтобы не зависеть от жизни сессии.
        """
        with get_session_context() as session:
            row = session.scalar(select(CachedSeries).where(CachedSeries.cache_key == cache_key))
            if row is None:
                return None
            return {
                "cache_key": row.cache_key,
                "scenario_id": row.scenario_id,
                "config_hash": row.config_hash,
                "library_version": row.library_version,
                "checksum": row.checksum,
                "payload": row.payload,
            }

    def put(
        self,
        cache_key: str,
        scenario_id: str,
        config_hash: str,
        library_version: str,
        checksum: str,
        payload: str,
    ) -> None:
        """
        Сохраняет серию. Существующая запись с тем же ключом заменяется
        в той же транзакции: читатель видит либо старую, либо новую запись целиком.
        """
        with get_session_context() as session:
            existing = session.scalar(select(CachedSeries).where(CachedSeries.cache_key == cache_key))
            if existing:
                existing.scenario_id = scenario_id
                existing.config_hash = config_hash
                existing.library_version = library_version
                existing.checksum = checksum
                existing.payload = payload
            else:
                session.add(
                    CachedSeries(
                        cache_key=cache_key,
                        scenario_id=scenario_id,
                        config_hash=config_hash,
                        library_version=library_version,
                        checksum=checksum,
                        payload=payload,
                    )
                )
            session.flush()
        logger.debug("Серия %s сохранена в кэш (%s)", scenario_id, cache_key[:12])

    def delete(self, cache_key: str) -> bool:
        """Удаляет запись; True, если она была."""
        with get_session_context() as session:
            result = session.execute(delete(CachedSeries).where(CachedSeries.cache_key == cache_key))
            return bool(result.rowcount)

    def clear(self) -> int:
        """Удаляет все записи, возвращает их число."""
        with get_session_context() as session:
            result = session.execute(delete(CachedSeries))
            return int(result.rowcount or 0)

    def count(self) -> int:
        with get_session_context() as session:
            return int(session.scalar(select(func.count()).select_from(CachedSeries)) or 0)

    def keys_for(self, scenario_id: str) -> List[str]:
        """Ключи всех сохранённых серий сценария."""
        with get_session_context() as session:
            return list(
                session.scalars(select(CachedSeries.cache_key).where(CachedSeries.scenario_id == scenario_id))
            )
