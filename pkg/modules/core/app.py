"""
Основной класс приложения: прогон сценария, список сценариев, очистка кэша.
"""
import logging
from pathlib import Path
from typing import Callable, Optional, Union

from config import config
from modules.experiments import ScenarioLoader, ScenarioRunner, clear_cache, emit
from modules.experiments.validators import validate_dims
from .errors import ConfigError, PointFailedError, SimulationError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


def exit_code(error: Exception) -> int:
    """Код выхода для ошибки: 2 - ошибка конфигурации (в том числе внутри точки), иначе 1."""
    if isinstance(error, PointFailedError):
        return exit_code(error.cause)
    if isinstance(error, ConfigError):
        return EXIT_CONFIG
    return EXIT_FAILURE


class ExperimentApp:
    """Команды CLI; каждая возвращает код выхода."""

    def __init__(self, loader: Optional[ScenarioLoader] = None):
        self.loader = loader or ScenarioLoader()

    def _wrap_command(self, command: Callable[[], int]) -> int:
        """Оборачивает команду в try-except и переводит исключение в код выхода."""
        try:
            return command()
        except ConfigError as e:
            logger.error("Ошибка конфигурации: %s", e)
            return EXIT_CONFIG
        except PointFailedError as e:
            logger.error("Расчёт прерван: %s", e, exc_info=e.cause)
            return exit_code(e)
        except SimulationError as e:
            logger.error("Ошибка расчёта: %s", e, exc_info=True)
            return EXIT_FAILURE
        except OSError as e:
            logger.error("Ошибка записи или чтения файлов: %s", e, exc_info=True)
            return EXIT_FAILURE

    def run(
        self,
        scenario_name: Union[str, Path],
        out_dir: Optional[Union[str, Path]] = None,
        plots: bool = False,
        threads: Optional[int] = None,
        log_base: Optional[str] = None,
        dims: Optional[str] = None,
        use_cache: bool = True,
    ) -> int:
        def command() -> int:
            scenario = self.loader.load(scenario_name)
            dims_override = None
            if dims is not None:
                ok, dims_override, error = validate_dims(dims, scenario.modes)
                if not ok:
                    raise ConfigError(f"--dims: {error}")
            scenario = scenario.with_overrides(dims=dims_override, log_base=log_base)

            series = ScenarioRunner(scenario, threads or config.threads, use_cache).run()
            target = emit(series, out_dir or config.output_dir, plots=plots)
            if series.convergence is not None and not series.convergence["passed"]:
                logger.error(
                    "Сценарий %s: проверка сходимости не пройдена (%d расхождений), см. %s",
                    scenario.id,
                    len(series.convergence["violations"]),
                    target / "summary.json",
                )
                return EXIT_FAILURE
            return EXIT_OK

        return self._wrap_command(command)

    def list_scenarios(self) -> int:
        def command() -> int:
            scenarios = self.loader.bundled()
            width = max((len(s.id) for s in scenarios), default=0)
            for scenario in scenarios:
                print(f"{scenario.id:<{width}}  {scenario.protocol:<14}  {scenario.description}")
            return EXIT_OK

        return self._wrap_command(command)

    def clean_cache(self) -> int:
        def command() -> int:
            removed = clear_cache()
            print(f"Удалено записей кэша: {removed}")
            return EXIT_OK

        return self._wrap_command(command)
