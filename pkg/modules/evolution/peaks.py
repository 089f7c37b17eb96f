"""
Выбор момента первого пика временного ряда.
"""
import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

logger = logging.getLogger(__name__)

DEFAULT_NOISE_FLOOR = 1e-9


@dataclass(frozen=True)
class PeakResult:
    """Момент и значение пика; interior=False означает глобальный максимум без внутреннего пика."""

    tau: float
    value: float
    interior: bool
    index: int


def _parabola_vertex(x: np.ndarray, y: np.ndarray):
    """Вершина параболы через три точки (сетка может быть неравномерной)."""
    x0, x1, x2 = x
    y0, y1, y2 = y
    denom = (x0 - x1) * (x0 - x2) * (x1 - x2)
    a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom
    b = (x2 ** 2 * (y0 - y1) + x1 ** 2 * (y2 - y0) + x0 ** 2 * (y1 - y2)) / denom
    c = (x1 * x2 * (x1 - x2) * y0 + x2 * x0 * (x2 - x0) * y1 + x0 * x1 * (x0 - x1) * y2) / denom
    if a >= 0:
        return x1, y1
    vertex = -b / (2 * a)
    vertex = min(max(vertex, x0), x2)
    return vertex, max(a * vertex ** 2 + b * vertex + c, y1)


def first_peak(
    taus: Sequence[float], values: Sequence[float], noise_floor: float = DEFAULT_NOISE_FLOOR
) -> PeakResult:
    """
    Первый внутренний локальный максимум ряда.

    Строгий максимум уточняется параболой через соседние точки; у плато
    выбирается самая ранняя точка. Значения по модулю ниже noise_floor
    считаются нулём. Если внутреннего максимума нет, возвращается первый
    глобальный максимум с interior=False.

    Raises:
        ValueError: меньше трёх точек, нечисловые значения или невозрастающие τ
    """
    x = np.asarray(taus, dtype=np.float64)
    y = np.asarray(values, dtype=np.float64).copy()
    if x.size < 3 or x.size != y.size:
        raise ValueError("Для поиска пика нужен ряд не короче трёх точек")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("Ряд содержит нечисловые значения")
    if np.any(np.diff(x) <= 0):
        raise ValueError("Моменты времени ряда должны строго возрастать")
    y[np.abs(y) < noise_floor] = 0.0

    i = 1
    while i < y.size - 1:
        if y[i] > y[i - 1]:
            end = i
            while end + 1 < y.size and y[end + 1] == y[i]:
                end += 1
            if end + 1 < y.size and y[end + 1] < y[i]:
                if end == i:
                    tau, value = _parabola_vertex(x[i - 1:i + 2], y[i - 1:i + 2])
                    return PeakResult(float(tau), float(value), True, i)
                return PeakResult(float(x[i]), float(y[i]), True, i)
            i = end + 1
        else:
            i += 1

    index = int(np.argmax(y))
    logger.warning("Внутренний пик не найден, взят глобальный максимум при τ=%.4g", x[index])
    return PeakResult(float(x[index]), float(y[index]), False, index)
