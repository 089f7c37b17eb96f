"""
Общие утилиты линейной алгебры: точные собственные значения по блокам
и матричная экспонента по секторам.
"""
import logging
from typing import List

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

logger = logging.getLogger(__name__)

# Ниже этого размера плотное разложение дешевле поиска компонент связности
DENSE_EIGVALS_LIMIT = 1024
# Порог, при котором отдельный блок логируется как крупный
LARGE_BLOCK_WARNING = 6000


def block_components(matrix) -> List[np.ndarray]:
    """
    Разбивает индексы матрицы на компоненты связности графа ненулевых элементов.

    Каждая компонента задаёт инвариантный блок: после перестановки индексов
    матрица становится блочно-диагональной.
    """
    pattern = sp.csr_matrix(matrix, copy=True)
    pattern.eliminate_zeros()
    pattern = sp.csr_matrix(
        (np.ones(pattern.nnz, dtype=np.int8), pattern.indices, pattern.indptr),
        shape=pattern.shape,
    )
    count, labels = connected_components(pattern, directed=False)
    order = np.argsort(labels, kind="stable")
    boundaries = np.flatnonzero(np.diff(labels[order])) + 1
    return np.split(order, boundaries) if count > 1 else [order]


def block_eigvalsh(matrix) -> np.ndarray:
    """
    Все собственные значения эрмитовой матрицы (плотной или разреженной).

    Разложение точное: для разреженных матриц диагонализуется каждый блок
    компоненты связности отдельно (scipy.linalg.eigvalsh).
    """
    n = matrix.shape[0]
    if n == 0:
        return np.zeros(0)
    if not sp.issparse(matrix):
        if n <= DENSE_EIGVALS_LIMIT:
            return la.eigvalsh(np.asarray(matrix))
        matrix = sp.csr_matrix(matrix)

    csr = sp.csr_matrix(matrix)
    values = []
    for block in block_components(csr):
        if block.size == 1:
            values.append(np.real(csr[block[0], block[0]]) * np.ones(1))
            continue
        if block.size > LARGE_BLOCK_WARNING:
            logger.warning("Крупный блок при диагонализации: %d состояний", block.size)
        sub = csr[block][:, block].toarray()
        values.append(la.eigvalsh(sub))
    return np.sort(np.concatenate(values))


def sector_expm(generator, labels: np.ndarray, sectors=None) -> sp.csr_matrix:
    """
    exp(generator) для генератора, не связывающего разные значения labels.

    Args:
        generator: квадратная матрица (плотная или разреженная)
        labels: метка сектора для каждого базисного индекса
        sectors: необязательный список меток, для которых нужна экспонента;
            на остальных индексах результат равен нулю

    Returns:
        Разреженная матрица exp(generator) в исходном порядке индексов
    """
    csr = sp.csr_matrix(generator)
    labels = np.asarray(labels)
    wanted = np.unique(labels) if sectors is None else np.asarray(sorted(set(sectors)))
    rows, cols, data = [], [], []
    for label in wanted:
        idx = np.flatnonzero(labels == label)
        if idx.size == 0:
            continue
        block = la.expm(csr[idx][:, idx].toarray())
        r, c = np.meshgrid(idx, idx, indexing="ij")
        rows.append(r.ravel())
        cols.append(c.ravel())
        data.append(block.ravel())
        logger.debug("Сектор %s: экспонента блока %d×%d", label, idx.size, idx.size)
    n = csr.shape[0]
    if not rows:
        return sp.csr_matrix((n, n), dtype=np.complex128)
    result = sp.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n),
    ).tocsr()
    result.eliminate_zeros()
    return result
