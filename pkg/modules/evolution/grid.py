"""
Сетка безразмерного времени τ = Ω_T t.
"""
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from modules.core.errors import ConfigError


@dataclass(frozen=True, eq=False)
class TimeGrid:
    """Строго возрастающие неотрицательные моменты времени."""

    taus: np.ndarray

    def __post_init__(self):
        taus = np.asarray(self.taus, dtype=np.float64).ravel()
        if taus.size == 0:
            raise ConfigError("Сетка времени пуста")
        if not np.all(np.isfinite(taus)) or taus[0] < 0:
            raise ConfigError("Моменты времени должны быть конечными и неотрицательными")
        if np.any(np.diff(taus) <= 0):
            raise ConfigError("Моменты времени должны строго возрастать")
        taus.setflags(write=False)
        object.__setattr__(self, "taus", taus)

    @classmethod
    def uniform(cls, tau_max: float, step: float, tau_min: float = 0.0) -> "TimeGrid":
        """Равномерная сетка [tau_min, tau_max] с шагом step (узлы i·step без накопления ошибки)."""
        if step <= 0 or tau_max < tau_min:
            raise ConfigError(f"Некорректная сетка: [{tau_min}, {tau_max}] с шагом {step}")
        count = int(round((tau_max - tau_min) / step))
        return cls(tau_min + step * np.arange(count + 1))

    @classmethod
    def single(cls, tau: float) -> "TimeGrid":
        return cls(np.array([tau]))

    def __len__(self) -> int:
        return self.taus.size

    def __iter__(self) -> Iterator[float]:
        return iter(float(t) for t in self.taus)

    def __getitem__(self, item) -> float:
        return float(self.taus[item])

    @property
    def end(self) -> float:
        return float(self.taus[-1])
