"""
Интегрирование уравнения Линдблада

    dρ/dτ = -i[H, ρ] + Σ (L ρ L† - ½{L†L, ρ})

методом Рунге-Кутты 4-го порядка с фиксированным шагом и делением шага
пополам на каждом интервале сетки, пока результаты с шагами h и h/2 не
совпадут с точностью tol.
"""
import logging
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp

from modules.core.errors import ConvergenceError, InvalidModeError, TruncationError
from modules.fock.operators import OperatorMatrix
from modules.fock.states import DensityMatrix
from .grid import TimeGrid
from .truncation import ChargeTruncation

logger = logging.getLogger(__name__)

DEFAULT_STEP = 0.01
DEFAULT_MIN_STEP = 1e-6
DEFAULT_TOL = 1e-6
POSITIVITY_TOL = 1e-5


class _Generator:
    """Правая часть уравнения в виде -i(H_eff ρ - ρ H_eff†) + Σ L ρ L†."""

    def __init__(self, hamiltonian: sp.csr_matrix, jumps: Sequence[sp.csr_matrix]):
        decay = sp.csr_matrix(hamiltonian.shape, dtype=np.complex128)
        for jump in jumps:
            decay = decay + jump.conj().T @ jump
        self.effective = (hamiltonian - 0.5j * decay).tocsr()
        self.effective_dag = self.effective.conj().T.tocsr()
        self.jumps = [j.tocsr() for j in jumps]
        self.jumps_dag = [j.conj().T.tocsr() for j in jumps]

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        result = -1j * (self.effective @ rho - (self.effective_dag.T @ rho.T).T)
        for jump, jump_dag in zip(self.jumps, self.jumps_dag):
            result += jump @ (jump_dag.T @ rho.T).T
        return result

    def rk4(self, rho: np.ndarray, h: float, steps: int) -> np.ndarray:
        for _ in range(steps):
            k1 = self(rho)
            k2 = self(rho + 0.5 * h * k1)
            k3 = self(rho + 0.5 * h * k2)
            k4 = self(rho + h * k3)
            rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            rho = 0.5 * (rho + rho.conj().T)
        return rho


def iter_lindblad_evolve(
    hamiltonian: OperatorMatrix,
    jumps: Sequence[OperatorMatrix],
    rho0: DensityMatrix,
    grid: TimeGrid,
    step: float = DEFAULT_STEP,
    min_step: float = DEFAULT_MIN_STEP,
    tol: float = DEFAULT_TOL,
    positivity_tol: float = POSITIVITY_TOL,
    truncation: Optional[ChargeTruncation] = None,
) -> Iterator[Tuple[float, DensityMatrix]]:
    """
    Матрица плотности в точках сетки.

    ρ0 задаёт состояние при τ = 0; точки сетки до первой выдачи
    интегрируются от нуля.

    Raises:
        ConvergenceError: шаг уменьшился ниже min_step
        TruncationError: собственное значение ρ меньше -positivity_tol
    """
    space = rho0.space
    for op in [hamiltonian, *jumps]:
        if op.space != space:
            raise InvalidModeError("Операторы и начальное состояние заданы в разных пространствах")

    if truncation is not None:
        generator = _Generator(
            truncation.restrict_operator(hamiltonian), [truncation.restrict_operator(j) for j in jumps]
        )
        rho = truncation.restrict_density(rho0).astype(np.complex128)
    else:
        generator = _Generator(hamiltonian.sparse(), [j.sparse() for j in jumps])
        rho = rho0.dense()

    substeps = 1
    tau = 0.0
    for target in grid:
        interval = target - tau
        if interval > 0:
            substeps = max(substeps, int(np.ceil(interval / step - 1e-12)))
            while True:
                h = interval / substeps
                if h / 2 < min_step:
                    raise ConvergenceError(
                        f"Шаг интегрирования Линдблада меньше {min_step:g} на интервале [{tau:.4g}, {target:.4g}]"
                    )
                coarse = generator.rk4(rho, h, substeps)
                fine = generator.rk4(rho, h / 2, 2 * substeps)
                difference = float(np.max(np.abs(coarse - fine)))
                if difference < tol:
                    rho = fine
                    break
                substeps *= 2
                logger.debug("Шаг Линдблада уменьшен до %.3g (расхождение %.3e)", interval / substeps, difference)
            tau = target

        smallest = float(la.eigvalsh(rho)[0]) if rho.shape[0] else 0.0
        if smallest < -positivity_tol:
            raise TruncationError(
                f"Матрица плотности потеряла положительность при τ={target:.4g}: λ_min = {smallest:.3e}"
            )
        if truncation is not None:
            yield target, truncation.embed(rho, check=False)
        else:
            yield target, DensityMatrix(space, rho.copy(), check=False)


def lindblad_evolve(
    hamiltonian: OperatorMatrix,
    jumps: Sequence[OperatorMatrix],
    rho0: DensityMatrix,
    grid: TimeGrid,
    **kwargs,
) -> List[DensityMatrix]:
    """Список матриц плотности для всех точек сетки."""
    return [rho for _, rho in iter_lindblad_evolve(hamiltonian, jumps, rho0, grid, **kwargs)]
