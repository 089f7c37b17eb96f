"""
Модуль работы с базой данных кэша серий.
"""
from .models import (
    Base,
    BaseModel,
    CachedSeries,
)
from .series_repository import SeriesRepository
from .session import (
    get_engine,
    get_session_context,
    init_db,
    reset_engine,
)

__all__ = [
    'Base',
    'BaseModel',
    'CachedSeries',
    'SeriesRepository',
    'get_engine',
    'get_session_context',
    'init_db',
    'reset_engine',
]
