"""
Функция Вигнера одной моды в фоковском базисе (разложение по полиномам Лагерра).

Соглашение: W вакуума = e^{-(x²+p²)}/π, ∫W dx dp = 1, W(0,0) для |1⟩ равно -1/π.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

from modules.core.errors import InvalidModeError
from modules.fock.states import DensityMatrix

logger = logging.getLogger(__name__)

DEFAULT_POINTS = 201
DEFAULT_HALF_WIDTH = 6.0
COARSE_TOL = 1e-3
ELEMENT_CUTOFF = 1e-14


@dataclass(frozen=True)
class WignerMinimum:
    value: float
    normalisation: float
    coarse: bool


def wigner_function(rho: DensityMatrix, x: np.ndarray, p: np.ndarray) -> np.ndarray:
    """W на сетке x × p (массив формы (len(x), len(p)))."""
    if rho.space.num_modes != 1:
        raise InvalidModeError("Функция Вигнера вычисляется для одной моды")
    matrix = rho.dense()
    xx, pp = np.meshgrid(np.asarray(x, dtype=np.float64), np.asarray(p, dtype=np.float64), indexing="ij")
    r2 = xx ** 2 + pp ** 2
    envelope = np.exp(-r2) / np.pi
    z = xx - 1j * pp
    total = np.zeros_like(r2)
    for m, n in zip(*np.nonzero(np.abs(np.tril(matrix)) > ELEMENT_CUTOFF)):
        k = m - n
        log_norm = 0.5 * (k * np.log(2.0) + gammaln(n + 1) - gammaln(m + 1))
        kernel = (-1) ** n * np.exp(log_norm) * z ** k * eval_genlaguerre(n, k, 2.0 * r2)
        contribution = matrix[m, n] * kernel
        total += contribution.real if k == 0 else 2.0 * contribution.real
    return envelope * total


def wigner_grid(
    rho: DensityMatrix, points: int = DEFAULT_POINTS, half_width: float = DEFAULT_HALF_WIDTH
) -> np.ndarray:
    """Сетка ±half_width, расширенная до точки поворота старшего заселённого уровня."""
    populated = np.flatnonzero(rho.diagonal() > 1e-10)
    highest = int(populated.max()) if populated.size else 0
    needed = np.sqrt(2.0 * highest + 1.0) + 2.0
    if needed > half_width:
        logger.warning("Сетка функции Вигнера расширена с ±%.3g до ±%.3g", half_width, needed)
        half_width = float(needed)
    return np.linspace(-half_width, half_width, points)


def wigner_min(
    rho: DensityMatrix, grid: Optional[Tuple[np.ndarray, np.ndarray]] = None, tol: float = COARSE_TOL
) -> WignerMinimum:
    """
    Минимум функции Вигнера на сетке и её нормировка на той же сетке.

    coarse=True, если нормировка отличается от 1 больше чем на tol.
    """
    if grid is None:
        axis = wigner_grid(rho)
        grid = (axis, axis)
    x, p = (np.asarray(g, dtype=np.float64) for g in grid)
    values = wigner_function(rho, x, p)
    normalisation = float(values.sum() * (x[1] - x[0]) * (p[1] - p[0]))
    coarse = abs(normalisation - 1.0) > tol
    if coarse:
        logger.warning("Сетка функции Вигнера слишком грубая: нормировка %.6f", normalisation)
    return WignerMinimum(float(values.min()), normalisation, coarse)
