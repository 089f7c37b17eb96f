"""
Описание сценария эксперимента.
"""
import hashlib
import itertools
import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

# Оси перебора, которые понимает setup.resolve_point
SWEEP_AXES = ("nbar", "nbar_b", "N", "resource", "lam", "nbar_th", "hamiltonian", "g", "omega_b")

PROTOCOL_NAMES = ("first_peak", "snapshot", "quadrature_map", "open_system")

Dims = Union[str, Tuple[int, ...]]


def canonical_json(value: Any) -> str:
    """JSON с сортированными ключами и без пробелов: одинаковые данные дают одинаковую строку."""
    return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


@dataclass(frozen=True)
class ScenarioConfig:
    """
    Проверенный сценарий.

    hamiltonian, initial, lindblad и options хранятся как простые словари
    (после валидации); объекты физики строятся для каждой точки в setup.
    """

    id: str
    protocol: str
    description: str = ""
    modes: Tuple[str, ...] = ("a", "b", "c")
    hamiltonian: Dict[str, Any] = field(default_factory=dict)
    initial: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    lindblad: Optional[Dict[str, Any]] = None
    sweep: Dict[str, List[Any]] = field(default_factory=dict)
    measures: Tuple[str, ...] = ()
    dims: Dims = "auto"
    eps_tail: Optional[float] = None
    log_base: Optional[str] = None
    numerics: Dict[str, Any] = field(default_factory=dict)
    options: Dict[str, Any] = field(default_factory=dict)
    source: Optional[Path] = field(default=None, compare=False)

    @property
    def axes(self) -> Tuple[str, ...]:
        return tuple(self.sweep)

    def points(self) -> List[Dict[str, Any]]:
        """Декартово произведение осей в порядке объявления (без осей - одна пустая точка)."""
        if not self.sweep:
            return [{}]
        names = list(self.sweep)
        return [dict(zip(names, values)) for values in itertools.product(*(self.sweep[n] for n in names))]

    def canonical(self) -> Dict[str, Any]:
        """Всё, что влияет на результат; описание и путь к файлу не входят."""
        return {
            "id": self.id,
            "protocol": self.protocol,
            "modes": list(self.modes),
            "hamiltonian": self.hamiltonian,
            "initial": self.initial,
            "lindblad": self.lindblad,
            "sweep": self.sweep,
            "measures": list(self.measures),
            "dims": self.dims if isinstance(self.dims, str) else list(self.dims),
            "eps_tail": self.eps_tail,
            "log_base": self.log_base,
            "numerics": self.numerics,
            "options": self.options,
        }

    @property
    def config_hash(self) -> str:
        return hashlib.sha256(canonical_json(self.canonical()).encode("utf-8")).hexdigest()

    def with_overrides(
        self,
        dims: Optional[Dims] = None,
        log_base: Optional[str] = None,
    ) -> "ScenarioConfig":
        """Копия с параметрами командной строки (--dims, --log-base)."""
        changes: Dict[str, Any] = {}
        if dims is not None:
            changes["dims"] = dims
        if log_base is not None:
            changes["log_base"] = log_base
        return replace(self, **changes) if changes else self
