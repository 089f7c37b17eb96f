"""
Операторы в усечённом пространстве Фока.

Матрицы хранятся в scipy.sparse (CSR) либо как плотные массивы numpy.
"""
import logging
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
import scipy.sparse as sp

from modules.core.errors import InvalidModeError
from .space import FockSpace, ModeIndex

logger = logging.getLogger(__name__)

MatrixLike = Union[np.ndarray, sp.spmatrix]

HERMITIAN_TOL = 1e-12


def _as_matrix(elements: MatrixLike) -> MatrixLike:
    if sp.issparse(elements):
        return sp.csr_matrix(elements, dtype=np.complex128)
    return np.asarray(elements, dtype=np.complex128)


def max_abs(matrix: MatrixLike) -> float:
    """Максимальный модуль элемента (для плотных и разреженных матриц)."""
    if sp.issparse(matrix):
        data = matrix.tocoo().data
        return float(np.max(np.abs(data))) if data.size else 0.0
    return float(np.max(np.abs(matrix))) if matrix.size else 0.0


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Комплексная квадратная матрица, привязанная к пространству Фока."""

    space: FockSpace
    elements: MatrixLike
    hermitian: bool = False

    def __post_init__(self):
        elements = _as_matrix(self.elements)
        if elements.shape != (self.space.dim, self.space.dim):
            raise InvalidModeError(
                f"Размер матрицы {elements.shape} не совпадает с размерностью {self.space}"
            )
        object.__setattr__(self, "elements", elements)

    @property
    def is_sparse(self) -> bool:
        return sp.issparse(self.elements)

    def dag(self) -> "OperatorMatrix":
        return OperatorMatrix(self.space, self.elements.conj().T, self.hermitian)

    def dense(self) -> np.ndarray:
        if self.is_sparse:
            return self.elements.toarray()
        return np.array(self.elements)

    def sparse(self) -> sp.csr_matrix:
        if self.is_sparse:
            return self.elements
        return sp.csr_matrix(self.elements)

    def hermiticity_error(self) -> float:
        """max |H - H†| поэлементно."""
        return max_abs(self.elements - self.elements.conj().T)

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return self.hermiticity_error() <= tol

    def _check_space(self, other: "OperatorMatrix") -> None:
        if other.space != self.space:
            raise InvalidModeError(f"Операторы заданы в разных пространствах: {self.space} и {other.space}")

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check_space(other)
        return OperatorMatrix(
            self.space, self.elements + other.elements, self.hermitian and other.hermitian
        )

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check_space(other)
        return OperatorMatrix(
            self.space, self.elements - other.elements, self.hermitian and other.hermitian
        )

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check_space(other)
        return OperatorMatrix(self.space, self.elements @ other.elements)

    def scaled(self, factor: complex) -> "OperatorMatrix":
        keeps_hermitian = self.hermitian and complex(factor).imag == 0.0
        return OperatorMatrix(self.space, self.elements * factor, keeps_hermitian)

    def power(self, exponent: int) -> "OperatorMatrix":
        if exponent < 0:
            raise ValueError("Отрицательная степень оператора не поддерживается")
        result = identity(self.space)
        for _ in range(exponent):
            result = result @ self
        return result

    def commutator(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check_space(other)
        return OperatorMatrix(
            self.space, self.elements @ other.elements - other.elements @ self.elements
        )

    def assert_hermitian(self, tol: float = HERMITIAN_TOL) -> "OperatorMatrix":
        """Проверяет эрмитовость и возвращает копию с поднятым флагом."""
        error = self.hermiticity_error()
        if error > tol:
            raise ValueError(f"Оператор не эрмитов: max|H - H†| = {error:.3e}")
        return OperatorMatrix(self.space, self.elements, True)


def _local_annihilation(dim: int) -> sp.csr_matrix:
    values = np.sqrt(np.arange(1, dim, dtype=np.float64))
    return sp.diags(values, offsets=1, shape=(dim, dim), format="csr", dtype=np.complex128)


def embed_local(space: FockSpace, mode: ModeIndex, local: MatrixLike) -> OperatorMatrix:
    """Встраивает однмодовый оператор в полное пространство (тождество на остальных модах)."""
    pos = space.position(mode)
    d = space.mode_dims[pos]
    if local.shape != (d, d):
        raise InvalidModeError(f"Локальный оператор {local.shape} не совпадает с размерностью моды {d}")
    left = int(np.prod(space.mode_dims[:pos], dtype=np.int64))
    right = int(np.prod(space.mode_dims[pos + 1:], dtype=np.int64))
    matrix = sp.kron(
        sp.kron(sp.identity(left, dtype=np.complex128, format="csr"), sp.csr_matrix(local)),
        sp.identity(right, dtype=np.complex128, format="csr"),
        format="csr",
    )
    return OperatorMatrix(space, matrix)


def ladder(space: FockSpace, mode: ModeIndex) -> OperatorMatrix:
    """Оператор уничтожения моды, встроенный в полное пространство; dag() даёт оператор рождения."""
    pos = space.position(mode)
    return embed_local(space, pos, _local_annihilation(space.mode_dims[pos]))


def number_operator(space: FockSpace, mode: ModeIndex) -> OperatorMatrix:
    """Оператор числа квантов k†k (диагональный)."""
    pos = space.position(mode)
    local = sp.diags(
        np.arange(space.mode_dims[pos], dtype=np.float64), format="csr", dtype=np.complex128
    )
    return OperatorMatrix(space, embed_local(space, pos, local).elements, True)


def weighted_number(space: FockSpace, weights: Sequence[float]) -> OperatorMatrix:
    """Диагональный оператор Σ w_k k†k."""
    if len(weights) != space.num_modes:
        raise InvalidModeError(
            f"Ожидалось {space.num_modes} весов, получено {len(weights)}"
        )
    table = space.occupation_table()
    diagonal = np.asarray(weights, dtype=np.float64) @ table
    return OperatorMatrix(space, sp.diags(diagonal.astype(np.complex128), format="csr"), True)


def identity(space: FockSpace) -> OperatorMatrix:
    return OperatorMatrix(space, sp.identity(space.dim, dtype=np.complex128, format="csr"), True)


def zero(space: FockSpace) -> OperatorMatrix:
    return OperatorMatrix(space, sp.csr_matrix((space.dim, space.dim), dtype=np.complex128), True)


def below_top_level_indices(space: FockSpace) -> np.ndarray:
    """Базисные индексы, в которых ни одна мода не находится на верхнем уровне усечения."""
    table = space.occupation_table()
    tops = np.asarray(space.mode_dims, dtype=np.int64)[:, None] - 1
    mask = np.all(table < tops, axis=0)
    return np.flatnonzero(mask)
