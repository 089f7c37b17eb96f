"""
Усечение по заряду: сужение операторов и матриц плотности на базисные
состояния с зарядом не выше заданной границы.
"""
import logging
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from modules.core.errors import ConfigError, InvalidModeError
from modules.fock.operators import OperatorMatrix
from modules.fock.space import FockSpace
from modules.fock.states import DensityMatrix

logger = logging.getLogger(__name__)


class ChargeTruncation:
    """Подпространство {n : w_i · n <= bound_i для всех зарядов i}."""

    def __init__(self, space: FockSpace, weights: Sequence[Sequence[int]], bounds: Sequence[int]):
        if len(weights) != len(bounds) or not weights:
            raise ConfigError("Для усечения нужны веса зарядов и границы одинаковой длины")
        self.space = space
        self.weights = np.asarray(weights, dtype=np.int64).reshape(len(weights), space.num_modes)
        self.bounds = np.asarray(bounds, dtype=np.int64)
        values = self.weights @ space.occupation_table()
        self.indices = np.flatnonzero(np.all(values <= self.bounds[:, None], axis=0))
        logger.debug(
            "Усечение по заряду %s <= %s: %d из %d состояний",
            self.weights.tolist(),
            self.bounds.tolist(),
            self.indices.size,
            space.dim,
        )

    @property
    def dim(self) -> int:
        return self.indices.size

    def restrict_operator(self, operator: OperatorMatrix) -> sp.csr_matrix:
        if operator.space != self.space:
            raise InvalidModeError("Оператор задан в другом пространстве")
        return operator.sparse()[self.indices][:, self.indices].tocsr()

    def restrict_density(self, rho: DensityMatrix) -> np.ndarray:
        """Плотная подматрица ρ; вес вне подпространства должен быть пренебрежимо мал."""
        if rho.space != self.space:
            raise InvalidModeError("Матрица плотности задана в другом пространстве")
        sub = rho.sparse()[self.indices][:, self.indices].toarray()
        lost = 1.0 - float(np.real(np.trace(sub)))
        if lost > 1e-10:
            logger.warning("Усечение по заряду отбрасывает вес %.3e", lost)
        return sub

    def embed(self, matrix: np.ndarray, check: bool = True) -> DensityMatrix:
        """Подматрица -> разреженная DensityMatrix полного пространства."""
        coo = sp.coo_matrix(matrix)
        full = sp.coo_matrix(
            (coo.data, (self.indices[coo.row], self.indices[coo.col])),
            shape=(self.space.dim, self.space.dim),
        ).tocsr()
        return DensityMatrix(self.space, full, check=check)
