"""
Разбиение пространства на оболочки сохраняющегося заряда.

Гамильтониан не связывает базисные состояния с разными значениями заряда,
поэтому эволюция блочно-диагональна: каждый сектор диагонализуется один
раз и переиспользуется для всех моментов времени и всех компонент ансамбля.
"""
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from modules.core.errors import InvalidModeError
from modules.fock.operators import OperatorMatrix, max_abs
from modules.fock.states import DensityMatrix, StateVector

logger = logging.getLogger(__name__)

ChargeLike = Optional[Union[OperatorMatrix, Sequence[OperatorMatrix]]]

DEFAULT_MAX_DENSE_SECTOR = 1500


def _charge_values(charge: ChargeLike, dim: int) -> np.ndarray:
    """Значения зарядов на базисных состояниях: массив (dim, число зарядов)."""
    if charge is None:
        return np.zeros((dim, 1), dtype=np.int64)
    charges = [charge] if isinstance(charge, OperatorMatrix) else list(charge)
    columns = []
    for k in charges:
        if max_abs(k.sparse() - sp.diags(k.sparse().diagonal())) > 0:
            raise InvalidModeError("Заряд должен быть диагональным в фоковском базисе")
        columns.append(np.rint(np.real(k.sparse().diagonal())).astype(np.int64))
    return np.column_stack(columns)


@dataclass
class Sector:
    """Сектор: значение заряда, базисные индексы и (лениво) спектральное разложение."""

    charge: Tuple[int, ...]
    indices: np.ndarray
    block: sp.csr_matrix
    eigenvalues: Optional[np.ndarray] = None
    eigenvectors: Optional[np.ndarray] = None

    @property
    def size(self) -> int:
        return self.indices.size

    @property
    def diagonalised(self) -> bool:
        return self.eigenvalues is not None


class ShellDecomposition:
    """
    Секторы заряда гамильтониана.

    Без заряда всё пространство - один сектор. Секторы размером больше
    max_dense_sector не диагонализуются: для них используется expm_multiply.
    """

    def __init__(
        self,
        hamiltonian: OperatorMatrix,
        charge: ChargeLike = None,
        max_dense_sector: int = DEFAULT_MAX_DENSE_SECTOR,
        threads: int = 1,
    ):
        self.hamiltonian = hamiltonian
        self.space = hamiltonian.space
        self.max_dense_sector = max_dense_sector
        self.threads = max(1, int(threads))
        values = _charge_values(charge, self.space.dim)
        keys, self.labels = np.unique(values, axis=0, return_inverse=True)
        self.labels = np.asarray(self.labels).ravel()
        self.charges = [tuple(int(x) for x in key) for key in keys]
        self._csr = hamiltonian.sparse()
        self._sectors: Dict[int, Sector] = {}
        self._lock = threading.Lock()
        logger.debug("Разбиение %s на %d секторов", self.space, len(self.charges))

    def __len__(self) -> int:
        return len(self.charges)

    def sector(self, label: int) -> Sector:
        """Сектор по номеру; подматрица и разложение строятся при первом обращении."""
        with self._lock:
            found = self._sectors.get(label)
            if found is None:
                indices = np.flatnonzero(self.labels == label)
                block = self._csr[indices][:, indices].tocsr()
                found = Sector(self.charges[label], indices, block)
                self._sectors[label] = found
        if not found.diagonalised and found.size <= self.max_dense_sector:
            self._diagonalise(found)
        return found

    def _diagonalise(self, sector: Sector) -> None:
        eigenvalues, eigenvectors = la.eigh(sector.block.toarray())
        with self._lock:
            if sector.eigenvalues is None:
                sector.eigenvectors = eigenvectors
                sector.eigenvalues = eigenvalues
        logger.debug("Сектор %s: диагонализован блок %d", sector.charge, sector.size)

    def prepare(self, labels: Iterable[int]) -> None:
        """Диагонализует указанные секторы заранее, параллельно по потокам."""
        labels = sorted(set(int(l) for l in labels))
        if self.threads == 1 or len(labels) < 2:
            for label in labels:
                self.sector(label)
            return
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            list(pool.map(self.sector, labels))

    @property
    def sectors(self) -> List[Sector]:
        """Все секторы (строит подматрицы; крупные секторы не диагонализуются)."""
        return [self.sector(label) for label in range(len(self.charges))]

    def closure_error(self) -> float:
        """max |H_ij| по парам индексов из разных секторов."""
        coo = self._csr.tocoo()
        mask = self.labels[coo.row] != self.labels[coo.col]
        return float(np.max(np.abs(coo.data[mask]))) if np.any(mask) else 0.0

    def track(self, state: StateVector, tau0: float = 0.0) -> "ComponentTrack":
        if state.space != self.space:
            raise InvalidModeError("Состояние и гамильтониан заданы в разных пространствах")
        return ComponentTrack(self, state, tau0)

    def propagate_density(self, rho: DensityMatrix, tau: float) -> DensityMatrix:
        """U ρ U† для плотного ρ малой размерности (проверочный путь)."""
        dense = self.hamiltonian.dense()
        unitary = la.expm(-1j * tau * dense)
        return DensityMatrix(self.space, unitary @ rho.dense() @ unitary.conj().T)


class ComponentTrack:
    """
    Траектория одной чистой компоненты.

    Для диагонализованных секторов состояние в момент τ вычисляется напрямую;
    для крупных секторов вектор продвигается шагами, поэтому моменты времени
    должны запрашиваться по возрастанию.
    """

    def __init__(self, shells: ShellDecomposition, state: StateVector, tau0: float):
        self.shells = shells
        self.space = state.space
        idx, amp = state.support()
        by_label: Dict[int, List[int]] = {}
        for position, label in enumerate(shells.labels[idx]):
            by_label.setdefault(int(label), []).append(position)
        shells.prepare(by_label.keys())

        self._parts = []
        for label, positions in sorted(by_label.items()):
            sector = shells.sector(label)
            local = np.zeros(sector.size, dtype=np.complex128)
            local[np.searchsorted(sector.indices, idx[positions])] = amp[positions]
            if sector.diagonalised:
                coefficients = sector.eigenvectors.conj().T @ local
                self._parts.append([sector, coefficients, None])
            else:
                self._parts.append([sector, None, local])
        self._tau = tau0
        self._tau0 = tau0

    def at(self, tau: float) -> StateVector:
        if tau < self._tau and any(part[1] is None for part in self._parts):
            raise ValueError("Моменты времени для крупных секторов должны возрастать")
        indices, amplitudes = [], []
        for part in self._parts:
            sector, coefficients, vector = part
            if coefficients is not None:
                phases = np.exp(-1j * sector.eigenvalues * (tau - self._tau0))
                local = sector.eigenvectors @ (phases * coefficients)
            else:
                if tau > self._tau:
                    vector = expm_multiply(-1j * (tau - self._tau) * sector.block, vector)
                    part[2] = vector
                local = vector
            indices.append(sector.indices)
            amplitudes.append(local)
        self._tau = tau
        return StateVector(self.space, np.concatenate(amplitudes), np.concatenate(indices))
