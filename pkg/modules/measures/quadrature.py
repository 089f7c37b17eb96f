"""
Плотность вероятности обобщённой квадратуры X_θ по фоковской матрице плотности.

Единицы безразмерные: q = (b + b†)/√2, дисперсия вакуума 1/2.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from modules.core.errors import GridTooNarrowError, InvalidModeError
from modules.fock.operations import moments
from modules.fock.states import DensityMatrix

logger = logging.getLogger(__name__)

NORMALISATION_TOL = 1e-6
DEFAULT_POINTS = 4096
DEFAULT_HALF_WIDTH = 10.0
SIGMA_SPAN = 6.0


@dataclass(frozen=True, eq=False)
class QuadraturePdf:
    """Значения плотности на равномерной сетке."""

    grid: np.ndarray
    density: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=np.float64).ravel()
        density = np.asarray(self.density, dtype=np.float64).ravel()
        if grid.size < 3 or grid.size != density.size:
            raise GridTooNarrowError("Сетка плотности должна содержать не меньше трёх точек")
        steps = np.diff(grid)
        if np.any(steps <= 0) or np.max(np.abs(steps - steps[0])) > 1e-9 * max(1.0, abs(steps[0])):
            raise GridTooNarrowError("Сетка плотности должна быть равномерной и возрастающей")
        if np.any(density < 0):
            raise GridTooNarrowError("Плотность вероятности отрицательна")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "density", density)

    @property
    def dx(self) -> float:
        return float(self.grid[1] - self.grid[0])

    @property
    def total(self) -> float:
        return float(np.sum(self.density) * self.dx)

    @property
    def mean(self) -> float:
        return float(np.sum(self.grid * self.density) * self.dx / self.total)

    @property
    def variance(self) -> float:
        mean = self.mean
        return float(np.sum((self.grid - mean) ** 2 * self.density) * self.dx / self.total)

    def check_normalisation(self, tol: float = NORMALISATION_TOL) -> None:
        if abs(self.total - 1.0) > tol:
            raise GridTooNarrowError(
                f"Нормировка плотности на сетке [{self.grid[0]:.3g}, {self.grid[-1]:.3g}] равна {self.total:.8f}"
            )


def hermite_functions(count: int, x: np.ndarray) -> np.ndarray:
    """
    Собственные функции осциллятора ψ_0..ψ_{count-1} на точках x (устойчивая рекурсия).
    """
    x = np.asarray(x, dtype=np.float64)
    psi = np.zeros((count, x.size))
    psi[0] = np.pi ** -0.25 * np.exp(-0.5 * x ** 2)
    if count > 1:
        psi[1] = np.sqrt(2.0) * x * psi[0]
    for n in range(1, count - 1):
        psi[n + 1] = np.sqrt(2.0 / (n + 1)) * x * psi[n] - np.sqrt(n / (n + 1)) * psi[n - 1]
    return psi


def default_grid(
    rho: DensityMatrix,
    theta: float = 0.0,
    points: int = DEFAULT_POINTS,
    half_width: float = DEFAULT_HALF_WIDTH,
    widen: bool = True,
) -> np.ndarray:
    """Равномерная сетка ±half_width, при необходимости расширенная до ±6σ и точки поворота."""
    if widen:
        mean, variance = moments(rho, 0, theta)
        highest = int(np.max(np.flatnonzero(rho.diagonal() > 1e-14), initial=0))
        needed = max(
            abs(mean) + SIGMA_SPAN * np.sqrt(max(variance, 0.0)),
            np.sqrt(2.0 * highest + 1.0) + 2.0,
        )
        if needed > half_width:
            logger.warning("Сетка квадратуры расширена с ±%.3g до ±%.3g", half_width, needed)
            half_width = float(needed)
    return np.linspace(-half_width, half_width, points)


def quadrature_pdf(
    rho: DensityMatrix,
    theta: float = 0.0,
    grid: Optional[np.ndarray] = None,
    check: bool = True,
) -> QuadraturePdf:
    """
    P(x) = Σ ρ_mn e^{i(n-m)θ/2} ψ_m(x) ψ_n(x).

    Raises:
        InvalidModeError: состояние не одномодовое
        GridTooNarrowError: нормировка на сетке отличается от 1 больше чем на 1e-6
    """
    if rho.space.num_modes != 1:
        raise InvalidModeError("Плотность квадратуры определена для одной моды")
    if grid is None:
        grid = default_grid(rho, theta)
    matrix = rho.dense()
    d = matrix.shape[0]
    index = np.arange(d)
    phased = matrix * np.exp(0.5j * theta * (index[None, :] - index[:, None]))
    psi = hermite_functions(d, grid)
    density = np.real(np.einsum("mx,mn,nx->x", psi, phased, psi, optimize=True))
    density = np.clip(density, 0.0, None)
    pdf = QuadraturePdf(grid, density)
    if check:
        pdf.check_normalisation()
    return pdf
