"""
Конфигурация симулятора расщепления тепловых квантов.
"""
import logging
import os
from pathlib import Path
from dataclasses import dataclass, field
from typing import Optional, Dict, Any

from dotenv import load_dotenv

try:
    import yaml
except ImportError:
    yaml = None

# Загружаем .env
load_dotenv()

# Численные настройки по умолчанию (перекрываются config/simulation_settings.yml
# и секцией numerics: сценария)
DEFAULT_NUMERICS: Dict[str, Any] = {
    "eps_tail": 1e-6,
    "tau_max": 10.0,
    "tau_step": 0.01,
    "peak_noise_floor": 1e-9,
    "early_stop": True,
    "quadrature_points": 4096,
    "quadrature_half_width": 10.0,
    "wigner_points": 201,
    "wigner_half_width": 6.0,
    "lindblad_step": 0.01,
    "lindblad_min_step": 1e-6,
    "lindblad_tol": 1e-6,
    "lindblad_charge_margin": 4,
    "convergence_guard": True,
    "convergence_tol": 1e-4,
    "convergence_increment": 2,
    "convergence_eps_factor": 10.0,
    "ep_max_doubled_dim": 40000,
    "max_dense_sector": 1500,
    "distillation_steps": 12,
}


@dataclass
class Config:
    """Конфигурация приложения."""

    # Пути
    base_dir: Path = field(
        default_factory=lambda: Path(__file__).parent
    )
    scenarios_dir: Path = field(
        default_factory=lambda: (
            Path(__file__).parent / "config" / "scenarios"
        )
    )

    # Кэш серий: каталог и (необязательно) полный URL базы данных
    cache_dir: Path = field(
        default_factory=lambda: Path(os.getenv("TQS_CACHE_DIR", ".cache"))
    )
    cache_url: Optional[str] = field(
        default_factory=lambda: os.getenv("TQS_CACHE_URL")
    )

    # Результаты
    output_dir: Path = field(
        default_factory=lambda: Path(os.getenv("TQS_OUTPUT_DIR", "results"))
    )

    # Вычисления
    threads: int = field(
        default_factory=lambda: int(os.getenv("TQS_THREADS", "1"))
    )
    log_base: str = field(
        default_factory=lambda: os.getenv("TQS_LOG_BASE", "2")
    )

    # Логирование
    log_level: str = field(default_factory=lambda: os.getenv("LOG_LEVEL", "INFO"))
    log_file: Optional[str] = field(default_factory=lambda: os.getenv("LOG_FILE"))

    # Численные настройки из simulation_settings.yml
    numerics: Dict[str, Any] = field(default_factory=lambda: dict(DEFAULT_NUMERICS))

    def __post_init__(self):
        """Загружает численные настройки после инициализации."""
        self._load_simulation_settings()

    def _load_simulation_settings(self) -> None:
        """Загружает настройки из config/simulation_settings.yml поверх значений по умолчанию."""
        logger = logging.getLogger(__name__)
        if yaml is None:
            logger.warning("PyYAML не установлен, численные настройки по умолчанию")
            return

        settings_file = self.base_dir / "config" / "simulation_settings.yml"
        if not settings_file.exists():
            logger.warning("Файл настроек %s не найден, используются значения по умолчанию", settings_file)
            return
        try:
            with open(settings_file, "r", encoding="utf-8") as f:
                loaded = yaml.safe_load(f) or {}
        except Exception as e:
            logger.warning(
                "Не удалось загрузить настройки из %s: %s",
                settings_file, e
            )
            return
        self.numerics.update(loaded.get("numerics", {}) or {})

    @property
    def database_url(self) -> str:
        """URL базы кэша: TQS_CACHE_URL или sqlite-файл в каталоге кэша."""
        if self.cache_url:
            return self.cache_url
        return f"sqlite:///{(self.cache_dir / 'series.db').as_posix()}"

    def validate(self) -> None:
        """Проверяет настройки окружения."""
        if str(self.log_base).lower() not in ("2", "e"):
            raise ValueError(f"TQS_LOG_BASE должен быть 2 или e, получено {self.log_base!r}")
        if self.threads < 1:
            raise ValueError(f"TQS_THREADS должен быть >= 1, получено {self.threads}")


# Глобальный экземпляр конфигурации
config = Config()
