"""
Частичный след, частичное транспонирование, редуцированные состояния и
моменты квадратур.
"""
import logging
from typing import Iterable, List, Tuple, Union

import numpy as np
import scipy.sparse as sp

from modules.core.errors import InvalidModeError, InvalidStateError
from .operators import OperatorMatrix
from .space import FockSpace, ModeIndex
from .states import DensityMatrix, StateVector, ThermalEnsemble

logger = logging.getLogger(__name__)

# Редуцированные матрицы до этой размерности возвращаются плотными
DENSE_REDUCED_LIMIT = 512

AnyState = Union[StateVector, ThermalEnsemble, DensityMatrix]


def _split_positions(space: FockSpace, keep: Iterable[ModeIndex]) -> Tuple[List[int], List[int]]:
    keep_pos = space.positions(keep)
    if not keep_pos:
        raise InvalidModeError("Набор сохраняемых мод пуст")
    rest_pos = [p for p in range(space.num_modes) if p not in keep_pos]
    return keep_pos, rest_pos


def _sub_index(multi: Tuple[np.ndarray, ...], positions: List[int], dims: Tuple[int, ...]) -> np.ndarray:
    if not positions:
        return np.zeros_like(multi[0])
    return np.ravel_multi_index(
        tuple(multi[p] for p in positions), tuple(dims[p] for p in positions)
    )


def _finish(space: FockSpace, matrix: sp.csr_matrix, check: bool) -> DensityMatrix:
    if space.dim <= DENSE_REDUCED_LIMIT:
        return DensityMatrix(space, matrix.toarray(), check=check)
    return DensityMatrix(space, matrix, check=check)


def partial_trace(rho: DensityMatrix, keep: Iterable[ModeIndex], check: bool = True) -> DensityMatrix:
    """
    Частичный след по всем модам, кроме keep.

    Raises:
        InvalidModeError: keep пуст или содержит необъявленные моды
    """
    space = rho.space
    keep_pos, rest_pos = _split_positions(space, keep)
    sub = space.subspace(keep_pos)
    if not rest_pos:
        return DensityMatrix(sub, rho.elements, check=check)

    if rho.is_sparse:
        coo = rho.elements.tocoo()
        rows = np.unravel_index(coo.row, space.mode_dims)
        cols = np.unravel_index(coo.col, space.mode_dims)
        mask = np.ones(coo.nnz, dtype=bool)
        for p in rest_pos:
            mask &= rows[p] == cols[p]
        new_rows = _sub_index(tuple(r[mask] for r in rows), keep_pos, space.mode_dims)
        new_cols = _sub_index(tuple(c[mask] for c in cols), keep_pos, space.mode_dims)
        reduced = sp.coo_matrix(
            (coo.data[mask], (new_rows, new_cols)), shape=(sub.dim, sub.dim)
        ).tocsr()
        return _finish(sub, reduced, check)

    dims = space.mode_dims
    tensor = rho.elements.reshape(dims + dims)
    m = space.num_modes
    order = keep_pos + rest_pos + [m + p for p in keep_pos] + [m + p for p in rest_pos]
    rest_dim = int(np.prod([dims[p] for p in rest_pos]))
    blocks = tensor.transpose(order).reshape(sub.dim, rest_dim, sub.dim, rest_dim)
    return DensityMatrix(sub, np.einsum("ijkj->ik", blocks), check=check)


def partial_transpose(rho: DensityMatrix, transpose_modes: Iterable[ModeIndex]) -> OperatorMatrix:
    """
    Частичное транспонирование по указанным модам.

    Результат эрмитов, его след равен 1, собственные значения могут быть
    отрицательными. Повторное применение возвращает исходную матрицу.
    """
    space = rho.space
    positions = space.positions(transpose_modes)
    if not positions:
        return OperatorMatrix(space, rho.elements, True)

    if rho.is_sparse:
        coo = rho.elements.tocoo()
        rows = list(np.unravel_index(coo.row, space.mode_dims))
        cols = list(np.unravel_index(coo.col, space.mode_dims))
        for p in positions:
            rows[p], cols[p] = cols[p], rows[p]
        new_rows = np.ravel_multi_index(tuple(rows), space.mode_dims)
        new_cols = np.ravel_multi_index(tuple(cols), space.mode_dims)
        matrix = sp.coo_matrix((coo.data, (new_rows, new_cols)), shape=coo.shape).tocsr()
        return OperatorMatrix(space, matrix, True)

    dims = space.mode_dims
    m = space.num_modes
    axes = list(range(2 * m))
    for p in positions:
        axes[p], axes[m + p] = axes[m + p], axes[p]
    tensor = rho.elements.reshape(dims + dims).transpose(axes)
    return OperatorMatrix(space, tensor.reshape(space.dim, space.dim), True)


def _reshaped_component(
    state: StateVector, keep_pos: List[int], rest_pos: List[int], keep_dim: int, rest_dim: int
) -> sp.csc_matrix:
    """Амплитуды компоненты как матрица M (keep × rest): ρ_keep = M M†."""
    space = state.space
    idx, amp = state.support()
    multi = np.unravel_index(idx, space.mode_dims)
    rows = _sub_index(multi, keep_pos, space.mode_dims)
    cols = _sub_index(multi, rest_pos, space.mode_dims)
    return sp.csc_matrix((amp, (rows, cols)), shape=(keep_dim, rest_dim))


def reduce(state: AnyState, keep: Iterable[ModeIndex], check: bool = True) -> DensityMatrix:
    """
    Редуцированная матрица плотности мод keep.

    Для чистых состояний и ансамблей считается как Σ w M M† без построения
    полной матрицы плотности.
    """
    if isinstance(state, DensityMatrix):
        return partial_trace(state, keep, check=check)
    if isinstance(state, StateVector):
        state = ThermalEnsemble.pure(state)
    if not isinstance(state, ThermalEnsemble):
        raise InvalidStateError(f"Неподдерживаемый тип состояния: {type(state).__name__}")

    space = state.space
    keep_pos, rest_pos = _split_positions(space, keep)
    sub = space.subspace(keep_pos)
    rest_dim = int(np.prod([space.mode_dims[p] for p in rest_pos])) if rest_pos else 1
    blocks = [
        np.sqrt(weight) * _reshaped_component(component, keep_pos, rest_pos, sub.dim, rest_dim)
        for weight, component in state.components
    ]
    stacked = sp.hstack(blocks, format="csr")
    return _finish(sub, (stacked @ stacked.conj().T).tocsr(), check)


def local_ladder(dim: int) -> np.ndarray:
    """Плотный оператор уничтожения одной моды."""
    return np.diag(np.sqrt(np.arange(1, dim, dtype=np.float64)), k=1).astype(np.complex128)


def single_mode(state: AnyState, mode: ModeIndex) -> DensityMatrix:
    """Редуцированная матрица одной моды в плотном виде."""
    if isinstance(state, DensityMatrix) and state.space.num_modes == 1:
        return state
    return reduce(state, [mode])


def ladder_moments(rho: DensityMatrix) -> Tuple[complex, float, complex]:
    """Нормально упорядоченные моменты одной моды: ⟨b⟩, ⟨b†b⟩, ⟨b²⟩."""
    matrix = rho.dense()
    a = local_ladder(matrix.shape[0])
    mean_b = np.trace(matrix @ a)
    number = float(np.real(np.trace(matrix @ a.conj().T @ a)))
    mean_b2 = np.trace(matrix @ a @ a)
    return complex(mean_b), number, complex(mean_b2)


def moments(state: AnyState, mode: ModeIndex, theta: float) -> Tuple[float, float]:
    """
    Среднее и дисперсия обобщённой квадратуры X_θ = (b e^{-iθ/2} + b† e^{iθ/2})/√2.

    Вакуум даёт дисперсию 1/2 (дробовой шум).
    """
    rho = single_mode(state, mode)
    mean_b, number, mean_b2 = ladder_moments(rho)
    phase = np.exp(-0.5j * theta)
    mean = np.sqrt(2.0) * np.real(phase * mean_b)
    second = np.real(phase ** 2 * mean_b2) + number + 0.5
    return float(mean), float(second - mean ** 2)
