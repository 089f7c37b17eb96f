"""
Ковариационная матрица квадратур и гауссова логарифмическая негативность.

Порядок квадратур (x_1, p_1, x_2, p_2, ...), x = (a + a†)/√2, p = (a - a†)/(i√2);
у вакуума σ = I/2.
"""
import logging
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np
import scipy.linalg as la

from modules.core.errors import InvalidModeError, NonPhysicalStateError
from modules.fock.operations import AnyState
from modules.fock.operators import ladder
from modules.fock.space import ModeIndex
from .negativity import DEFAULT_BASE, log_in_base

logger = logging.getLogger(__name__)

UNCERTAINTY_TOL = 1e-8


def symplectic_form(num_modes: int) -> np.ndarray:
    return np.kron(np.eye(num_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """Симметризованные вторые моменты σ_ij = ½⟨{R_i, R_j}⟩ - ⟨R_i⟩⟨R_j⟩ и средние ⟨R_i⟩."""

    matrix: np.ndarray
    means: np.ndarray
    modes: Tuple[str, ...]

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=np.float64)
        if matrix.shape != (2 * len(self.modes), 2 * len(self.modes)):
            raise InvalidModeError("Размер ковариационной матрицы не соответствует числу мод")
        object.__setattr__(self, "matrix", 0.5 * (matrix + matrix.T))
        object.__setattr__(self, "means", np.asarray(self.means, dtype=np.float64))

    def uncertainty_margin(self) -> float:
        """Наименьшее собственное значение σ + iΩ/2."""
        omega = symplectic_form(len(self.modes))
        return float(la.eigvalsh(self.matrix + 0.5j * omega)[0])

    def validate(self, tol: float = UNCERTAINTY_TOL) -> None:
        margin = self.uncertainty_margin()
        if margin < -tol:
            raise NonPhysicalStateError(f"Нарушено соотношение неопределённостей: {margin:.3e}")

    def submatrix(self, modes: Sequence[str]) -> "CovarianceMatrix":
        positions = [self.modes.index(m) for m in modes]
        rows = np.array([[2 * p, 2 * p + 1] for p in positions]).ravel()
        return CovarianceMatrix(self.matrix[np.ix_(rows, rows)], self.means[rows], tuple(modes))


def _expect(state: AnyState, operator) -> complex:
    return complex(state.expectation(operator))


def covariance(state: AnyState, modes: Iterable[ModeIndex], check: bool = True) -> CovarianceMatrix:
    """
    Ковариационная матрица выбранных мод по нормально упорядоченным моментам.

    Raises:
        NonPhysicalStateError: матрица нарушает соотношение неопределённостей
    """
    space = state.space
    positions = space.positions(modes)
    if not positions:
        raise InvalidModeError("Не выбрано ни одной моды")
    lowering = [ladder(space, p) for p in positions]
    count = len(positions)
    sigma = np.zeros((2 * count, 2 * count))
    means = np.zeros(2 * count)

    for i, a in enumerate(lowering):
        mean_a = _expect(state, a)
        number = _expect(state, a.dag() @ a).real
        square = _expect(state, a @ a)
        means[2 * i] = np.sqrt(2.0) * mean_a.real
        means[2 * i + 1] = np.sqrt(2.0) * mean_a.imag
        sigma[2 * i, 2 * i] = square.real + number + 0.5
        sigma[2 * i + 1, 2 * i + 1] = -square.real + number + 0.5
        sigma[2 * i, 2 * i + 1] = sigma[2 * i + 1, 2 * i] = square.imag

    for i in range(count):
        for j in range(i + 1, count):
            a, b = lowering[i], lowering[j]
            ab = _expect(state, a @ b)
            adag_b = _expect(state, a.dag() @ b)
            sigma[2 * i, 2 * j] = ab.real + adag_b.real
            sigma[2 * i + 1, 2 * j + 1] = -ab.real + adag_b.real
            sigma[2 * i, 2 * j + 1] = ab.imag + adag_b.imag
            sigma[2 * i + 1, 2 * j] = ab.imag - adag_b.imag
            sigma[2 * j:2 * j + 2, 2 * i:2 * i + 2] = sigma[2 * i:2 * i + 2, 2 * j:2 * j + 2].T

    sigma -= np.outer(means, means)
    cm = CovarianceMatrix(sigma, means, tuple(space.mode_names[p] for p in positions))
    if check:
        cm.validate()
    return cm


def symplectic_eigenvalues(matrix: np.ndarray) -> np.ndarray:
    """Симплектические собственные значения (модули собственных значений iΩσ, без повторов)."""
    omega = symplectic_form(matrix.shape[0] // 2)
    values = np.sort(np.abs(la.eigvals(1j * omega @ matrix)))
    return values[::2]


def gaussian_log_negativity(
    cm: CovarianceMatrix, part: Iterable[ModeIndex], base: float = DEFAULT_BASE
) -> float:
    """
    Гауссова LN: Σ max(0, -log(2ν̃)) по симплектическим собственным значениям
    частично транспонированной ковариационной матрицы (смена знака p у мод part).
    """
    part = list(part)
    names = [cm.modes[m] if isinstance(m, int) else m for m in part]
    unknown = [m for m in names if m not in cm.modes]
    if unknown or not names or len(set(names)) == len(cm.modes):
        raise InvalidModeError("Разбиение должно делить моды ковариационной матрицы на две непустые части")
    flip = np.ones(2 * len(cm.modes))
    for name in names:
        flip[2 * cm.modes.index(name) + 1] = -1.0
    transposed = flip[:, None] * cm.matrix * flip[None, :]
    nu = symplectic_eigenvalues(transposed)
    return float(sum(max(0.0, -log_in_base(2.0 * v, base)) for v in nu))
