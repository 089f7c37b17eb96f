"""
Унитарная эволюция ансамблей чистых компонент.
"""
import logging
from typing import Iterator, List, Tuple

import numpy as np

from modules.core.errors import NonPhysicalStateError, TruncationError
from modules.fock.operators import HERMITIAN_TOL, OperatorMatrix, below_top_level_indices
from modules.fock.states import ThermalEnsemble
from .grid import TimeGrid
from .shells import DEFAULT_MAX_DENSE_SECTOR, ChargeLike, ShellDecomposition

logger = logging.getLogger(__name__)

LEAK_TOL = 1e-8


def _top_level_mask(space) -> np.ndarray:
    mask = np.ones(space.dim, dtype=bool)
    mask[below_top_level_indices(space)] = False
    return mask


def _top_population(ensemble: ThermalEnsemble, mask: np.ndarray) -> float:
    return ensemble.diagonal_expectation(mask.astype(np.float64))


class EnsembleTrajectory:
    """
    Унитарная траектория ансамбля с общим разбиением на секторы.

    Моменты времени можно запрашивать в любом порядке: при возврате назад
    траектории компонент перезапускаются из τ = 0, разложения секторов
    переиспользуются.
    """

    def __init__(
        self,
        hamiltonian: OperatorMatrix,
        init: ThermalEnsemble,
        charge: ChargeLike = None,
        max_dense_sector: int = DEFAULT_MAX_DENSE_SECTOR,
        threads: int = 1,
    ):
        error = hamiltonian.hermiticity_error()
        if error > HERMITIAN_TOL:
            raise NonPhysicalStateError(f"Гамильтониан не эрмитов: max|H - H†| = {error:.3e}")
        self.init = init
        self.shells = ShellDecomposition(hamiltonian, charge, max_dense_sector=max_dense_sector, threads=threads)
        self._tracks = self._start()
        self._last = 0.0

    def _start(self):
        return [self.shells.track(state) for _, state in self.init.components]

    def at(self, tau: float) -> ThermalEnsemble:
        if tau == 0.0:
            return self.init
        if tau < self._last:
            self._tracks = self._start()
        self._last = tau
        return self.init.with_states([track.at(tau) for track in self._tracks])


def iter_unitary_evolve(
    hamiltonian: OperatorMatrix,
    init: ThermalEnsemble,
    grid: TimeGrid,
    charge: ChargeLike = None,
    max_dense_sector: int = DEFAULT_MAX_DENSE_SECTOR,
    threads: int = 1,
    leak_tol: float = LEAK_TOL,
) -> Iterator[Tuple[float, ThermalEnsemble]]:
    """
    Эволюция |ψ(τ)⟩ = exp(-iHτ)|ψ(0)⟩ для каждой компоненты ансамбля, по точкам сетки.

    С зарядом эволюция блочно-диагональна по секторам; без заряда рост
    заселённости верхних фоковских уровней сверх leak_tol считается выходом
    за усечение.

    Raises:
        NonPhysicalStateError: гамильтониан не эрмитов
        TruncationError: утечка за усечение (только без заряда)
    """
    trajectory = EnsembleTrajectory(hamiltonian, init, charge, max_dense_sector, threads)
    mask = None if charge is not None else _top_level_mask(init.space)
    baseline = _top_population(init, mask) if mask is not None else 0.0

    for tau in grid:
        ensemble = trajectory.at(tau)
        if mask is not None:
            leaked = _top_population(ensemble, mask) - baseline
            if leaked > leak_tol:
                raise TruncationError(
                    f"Утечка за усечение {init.space} при τ={tau:.4g}: заселённость верхних уровней выросла на {leaked:.3e}"
                )
        yield tau, ensemble


def unitary_evolve(
    hamiltonian: OperatorMatrix,
    init: ThermalEnsemble,
    grid: TimeGrid,
    charge: ChargeLike = None,
    **kwargs,
) -> List[ThermalEnsemble]:
    """Список ансамблей для всех точек сетки."""
    return [ensemble for _, ensemble in iter_unitary_evolve(hamiltonian, init, grid, charge, **kwargs)]
