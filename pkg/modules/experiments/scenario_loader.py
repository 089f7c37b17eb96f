"""
Загрузка файлов сценариев (YAML).
"""
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml

from config import config
from modules.core.errors import ConfigError
from . import validators
from .protocols import get_protocol
from .scenario_config import ScenarioConfig

logger = logging.getLogger(__name__)

KNOWN_KEYS = {
    "id",
    "protocol",
    "description",
    "modes",
    "hamiltonian",
    "initial",
    "lindblad",
    "sweep",
    "measures",
    "dims",
    "eps_tail",
    "log_base",
    "numerics",
    "options",
}


def parse_scenario(data: Any, source: Optional[Path] = None) -> ScenarioConfig:
    """
    Проверяет словарь сценария и строит ScenarioConfig.

    Raises:
        ConfigError: со списком всех найденных ошибок
    """
    if not isinstance(data, dict):
        raise ConfigError(f"{source or 'сценарий'}: ожидается словарь верхнего уровня")
    errors: List[str] = []

    def check(result, field_name: str):
        ok, value, error = result
        if not ok:
            errors.append(f"{field_name}: {error}")
        return value

    unknown = sorted(set(data) - KNOWN_KEYS)
    if unknown:
        errors.append(f"неизвестные ключи: {', '.join(unknown)}")

    default_id = source.stem if source is not None else None
    scenario_id = check(validators.validate_scenario_id(data.get("id", default_id)), "id")
    protocol = check(validators.validate_protocol(data.get("protocol")), "protocol")
    modes = check(validators.validate_modes(data.get("modes", ["a", "b", "c"])), "modes") or ("a", "b", "c")
    hamiltonian = check(validators.validate_hamiltonian(data.get("hamiltonian", {}), modes), "hamiltonian")

    initial: Dict[str, Dict[str, Any]] = {}
    raw_initial = data.get("initial", {}) or {}
    if not isinstance(raw_initial, dict):
        errors.append("initial: ожидается словарь мода -> приготовление")
        raw_initial = {}
    for mode, prep in raw_initial.items():
        if mode not in modes:
            errors.append(f"initial: мода {mode!r} отсутствует в modes")
            continue
        normalized = check(validators.validate_prep(prep), f"initial.{mode}")
        if normalized is not None:
            initial[mode] = normalized

    lindblad = check(validators.validate_lindblad(data.get("lindblad"), modes), "lindblad")

    sweep: Dict[str, List[Any]] = {}
    raw_sweep = data.get("sweep", {}) or {}
    if not isinstance(raw_sweep, dict):
        errors.append("sweep: ожидается словарь ось -> список значений")
        raw_sweep = {}
    for axis, values in raw_sweep.items():
        normalized = check(validators.validate_sweep_axis(axis, values), f"sweep.{axis}")
        if normalized is not None:
            sweep[axis] = normalized
    if ("lam" in sweep or "nbar_th" in sweep) and protocol != "open_system":
        errors.append("sweep: оси lam/nbar_th требуют протокола open_system")

    measures = []
    raw_measures = data.get("measures", []) or []
    if not isinstance(raw_measures, list):
        errors.append("measures: ожидается список имён величин")
        raw_measures = []
    for name in raw_measures:
        measure = check(validators.validate_measure(name, modes), "measures")
        if measure is not None:
            measures.append(measure)

    dims = check(validators.validate_dims(data.get("dims", "auto"), modes), "dims")
    eps_tail = check(validators.validate_eps_tail(data.get("eps_tail")), "eps_tail")
    log_base = check(validators.validate_log_base(data.get("log_base")), "log_base")
    numerics = check(validators.validate_numerics(data.get("numerics")), "numerics")

    options = data.get("options", {}) or {}
    if not isinstance(options, dict):
        errors.append("options: ожидается словарь")
        options = {}
    if protocol is not None:
        handler = get_protocol(protocol)
        errors.extend(f"options: {e}" for e in handler.validate_options(options, modes))
        errors.extend(handler.validate_measures(measures))

    if errors:
        location = f"{source}: " if source else ""
        raise ConfigError(location + "ошибки сценария:\n  - " + "\n  - ".join(errors))

    return ScenarioConfig(
        id=scenario_id,
        protocol=protocol,
        description=str(data.get("description", "")).strip(),
        modes=tuple(modes),
        hamiltonian=hamiltonian,
        initial=initial,
        lindblad=lindblad,
        sweep=sweep,
        measures=tuple(measures),
        dims=dims,
        eps_tail=eps_tail,
        log_base=log_base,
        numerics=numerics,
        options=dict(sorted(options.items())),
        source=source,
    )


class ScenarioLoader:
    """Загрузка сценариев из файлов и каталога встроенных сценариев."""

    def __init__(self, scenarios_dir: Optional[Path] = None):
        self.scenarios_dir = Path(scenarios_dir) if scenarios_dir else config.scenarios_dir

    def resolve(self, name: Union[str, Path]) -> Path:
        """Путь к файлу: как указан, либо встроенный сценарий по имени файла или id."""
        path = Path(name)
        if path.exists():
            return path
        for candidate in (self.scenarios_dir / path.name, self.scenarios_dir / f"{path.name}.yml"):
            if candidate.exists():
                return candidate
        for candidate in self._files():
            try:
                with open(candidate, "r", encoding="utf-8") as f:
                    if (yaml.safe_load(f) or {}).get("id") == str(name):
                        return candidate
            except yaml.YAMLError:
                continue
        raise ConfigError(f"Сценарий {name!r} не найден (ни файла, ни встроенного сценария)")

    def load(self, name: Union[str, Path]) -> ScenarioConfig:
        """
        Raises:
            ConfigError: файл не найден, не разбирается как YAML или не проходит проверку
        """
        path = self.resolve(name)
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = yaml.safe_load(f)
        except (OSError, yaml.YAMLError) as e:
            raise ConfigError(f"Не удалось прочитать сценарий {path}: {e}") from e
        scenario = parse_scenario(data, path)
        logger.info("Сценарий %s загружен из %s (протокол %s)", scenario.id, path, scenario.protocol)
        return scenario

    def _files(self) -> List[Path]:
        if not self.scenarios_dir.exists():
            logger.warning("Каталог сценариев не существует: %s", self.scenarios_dir)
            return []
        return sorted(self.scenarios_dir.glob("*.yml"))

    def bundled(self) -> List[ScenarioConfig]:
        """Все встроенные сценарии; некорректные пропускаются с предупреждением."""
        scenarios = []
        for path in self._files():
            try:
                scenarios.append(self.load(path))
            except ConfigError as e:
                logger.warning("Сценарий %s пропущен: %s", path.name, e)
        return scenarios


def load_scenario(name: Union[str, Path]) -> ScenarioConfig:
    """Загрузка сценария по пути или имени встроенного сценария."""
    return ScenarioLoader().load(name)
