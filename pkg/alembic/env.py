"""
Окружение для миграций базы кэша серий.
URL берётся из config (TQS_CACHE_URL или sqlite-файл в TQS_CACHE_DIR), метаданные - из db.models.
"""
import sys
from pathlib import Path

# Корень проекта в sys.path для импорта config и db
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from logging.config import fileConfig

from sqlalchemy import engine_from_config
from sqlalchemy import pool
from alembic import context

from config import config as app_config
from db.models import Base

alembic_config = context.config

if alembic_config.config_file_name is not None:
    fileConfig(alembic_config.config_file_name)

target_metadata = Base.metadata

# sqlite-файл кэша по умолчанию лежит в TQS_CACHE_DIR
if not app_config.cache_url:
    app_config.cache_dir.mkdir(parents=True, exist_ok=True)
alembic_config.set_main_option("sqlalchemy.url", app_config.database_url)


def _is_sqlite(url: str) -> bool:
    return url.startswith("sqlite")


def run_migrations_offline() -> None:
    """Генерация SQL без подключения."""
    url = alembic_config.get_main_option("sqlalchemy.url")
    context.configure(
        url=url,
        target_metadata=target_metadata,
        literal_binds=True,
        dialect_opts={"paramstyle": "named"},
        render_as_batch=_is_sqlite(url),
    )

    with context.begin_transaction():
        context.run_migrations()


def run_migrations_online() -> None:
    """Миграции на живой базе кэша."""
    connectable = engine_from_config(
        alembic_config.get_section(alembic_config.config_ini_section, {}),
        prefix="sqlalchemy.",
        poolclass=pool.NullPool,
    )

    with connectable.connect() as connection:
        context.configure(
            connection=connection,
            target_metadata=target_metadata,
            # ALTER TABLE в sqlite только через пересоздание таблицы
            render_as_batch=connection.dialect.name == "sqlite",
            compare_type=True,
        )

        with context.begin_transaction():
            context.run_migrations()


if context.is_offline_mode():
    run_migrations_offline()
else:
    run_migrations_online()
