"""
Модели базы данных (SQLAlchemy 2.0 / Mapped style).
"""
from datetime import datetime

from sqlalchemy import (
    DateTime,
    Integer,
    String,
    Text,
    func,
)
from sqlalchemy.orm import DeclarativeBase, Mapped, mapped_column


class Base(DeclarativeBase):
    """Базовый класс для моделей."""
    pass


class BaseModel(Base):
    """Базовый класс для моделей с общими полями id, created_at, updated_at."""

    __abstract__ = True

    id: Mapped[int] = mapped_column(Integer, primary_key=True, autoincrement=True)
    created_at: Mapped[datetime] = mapped_column(
        DateTime(timezone=True),
        default=func.now(),
        server_default=func.now(),
    )
    updated_at: Mapped[datetime] = mapped_column(
        DateTime(timezone=True),
        default=func.now(),
        onupdate=func.now(),
        server_default=func.now(),
    )


class CachedSeries(BaseModel):
    """
    Сохранённая серия измерений одного сценария.

    cache_key - sha256 канонического JSON конфигурации, версии библиотеки и
    приращения размерностей; checksum - sha256 поля payload.
    """

    __tablename__ = "cached_series"

    cache_key: Mapped[str] = mapped_column(String(64), nullable=False, unique=True, index=True)
    scenario_id: Mapped[str] = mapped_column(String(255), nullable=False, index=True)
    config_hash: Mapped[str] = mapped_column(String(64), nullable=False)
    library_version: Mapped[str] = mapped_column(String(50), nullable=False)
    checksum: Mapped[str] = mapped_column(String(64), nullable=False)
    payload: Mapped[str] = mapped_column(Text, nullable=False)

    def __repr__(self) -> str:
        return f"<CachedSeries(id={self.id}, scenario_id={self.scenario_id!r}, cache_key={self.cache_key[:12]!r})>"
