"""
Операции над плотностями квадратуры на равномерной сетке.
"""
import logging

import numpy as np
from scipy.interpolate import CubicSpline

from modules.core.errors import GridTooNarrowError
from modules.measures.quadrature import QuadraturePdf

logger = logging.getLogger(__name__)

SHOT_NOISE = 0.5


def variance_to_db(variance: float) -> float:
    """Сжатие в дБ относительно дробового шума 1/2: 10·log₁₀(V/0.5)."""
    return float(10.0 * np.log10(variance / SHOT_NOISE))


class GridFunction:
    """Кубический сплайн плотности, равный нулю вне сетки."""

    def __init__(self, pdf: QuadraturePdf):
        self.grid = pdf.grid
        self._spline = CubicSpline(pdf.grid, pdf.density)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        inside = (x >= self.grid[0]) & (x <= self.grid[-1])
        values = np.zeros_like(x)
        values[inside] = self._spline(x[inside])
        return np.clip(values, 0.0, None)


def normalised(grid: np.ndarray, values: np.ndarray) -> QuadraturePdf:
    """
    Нормированная плотность.

    Raises:
        GridTooNarrowError: интеграл не положителен или не конечен
    """
    dx = grid[1] - grid[0]
    total = float(np.sum(values) * dx)
    if not np.isfinite(total) or total <= 0:
        raise GridTooNarrowError("Не удалось нормировать плотность: интеграл не положителен")
    return QuadraturePdf(grid, values / total)


def refine_maximum(pdf: QuadraturePdf, margin: int = 1) -> float:
    """
    Положение глобального максимума с параболическим уточнением.

    Raises:
        GridTooNarrowError: максимум ближе margin точек к краю сетки
    """
    index = int(np.argmax(pdf.density))
    if index < margin or index > pdf.grid.size - 1 - margin:
        raise GridTooNarrowError(f"Максимум плотности на краю сетки (x={pdf.grid[index]:.3g})")
    y0, y1, y2 = pdf.density[index - 1:index + 2]
    denom = y0 - 2.0 * y1 + y2
    shift = 0.0 if denom >= 0 else 0.5 * (y0 - y2) / denom
    return float(pdf.grid[index] + shift * pdf.dx)
