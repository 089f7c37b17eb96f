"""
Логарифмическая негативность и потенциал запутанности.
"""
import logging
import math
from typing import Iterable

import numpy as np
import scipy.sparse as sp
from scipy.special import gammaln

from modules.core.errors import InvalidModeError, TruncationError
from modules.fock.linalg import block_eigvalsh, sector_expm
from modules.fock.operations import partial_transpose
from modules.fock.operators import OperatorMatrix
from modules.fock.space import FockSpace, ModeIndex
from modules.fock.states import DensityMatrix, StateVector, ThermalEnsemble

logger = logging.getLogger(__name__)

DEFAULT_BASE = 2.0
# Предел размерности удвоенного пространства (мода ⊗ вспомогательная мода)
MAX_DOUBLED_DIM = 40000


def log_in_base(value: float, base: float = DEFAULT_BASE) -> float:
    return float(np.log(value) / np.log(base))


def trace_norm(operator: OperatorMatrix) -> float:
    """Σ|λ| эрмитовой матрицы по точным блочным собственным значениям."""
    return float(np.sum(np.abs(block_eigvalsh(operator.elements))))


def log_negativity(rho: DensityMatrix, part: Iterable[ModeIndex], base: float = DEFAULT_BASE) -> float:
    """
    Логарифмическая негативность разбиения (part | остальные моды).

    Raises:
        InvalidModeError: part пуст или совпадает со всеми модами
    """
    positions = rho.space.positions(part)
    if not positions or len(positions) == rho.space.num_modes:
        raise InvalidModeError("Разбиение должно делить моды на две непустые части")
    norm = trace_norm(partial_transpose(rho, positions))
    return max(0.0, log_in_base(norm, base))


def _beamsplitter_columns(dim: int) -> sp.csr_matrix:
    """
    Столбцы U_BS = exp(π/4 (c†A - cA†)) на входах |n⟩_A|0⟩_c, n < dim.

    Экспонента считается точно по секторам полного числа квантов n_A + n_c < dim,
    которые целиком помещаются в усечение dim × dim.
    """
    doubled = FockSpace((dim, dim), ("A", "c"))
    a = sp.diags(np.sqrt(np.arange(1, dim, dtype=np.float64)), offsets=1, format="csr")
    eye = sp.identity(dim, format="csr")
    mode_a = sp.kron(a, eye, format="csr")
    mode_c = sp.kron(eye, a, format="csr")
    generator = (np.pi / 4) * (mode_c.T @ mode_a - mode_c @ mode_a.T)
    totals = doubled.occupation_table().sum(axis=0)
    unitary = sector_expm(generator, totals, sectors=range(dim))
    inputs = np.array([doubled.flat_index((n, 0)) for n in range(dim)])
    return unitary[:, inputs].tocsr()


def entanglement_potential(
    rho: DensityMatrix, base: float = DEFAULT_BASE, max_doubled_dim: int = MAX_DOUBLED_DIM
) -> float:
    """
    Потенциал запутанности одномодового состояния: LN выхода 50:50 светоделителя
    с вакуумом во второй входной моде.

    Raises:
        InvalidModeError: состояние не одномодовое
        TruncationError: удвоенная размерность превышает max_doubled_dim
    """
    if rho.space.num_modes != 1:
        raise InvalidModeError("Потенциал запутанности определён для одной моды")
    dim = rho.space.dim
    if dim * dim > max_doubled_dim:
        raise TruncationError(f"Удвоенная размерность {dim * dim} превышает предел {max_doubled_dim}")
    columns = _beamsplitter_columns(dim)
    output = columns @ rho.sparse() @ columns.conj().T
    doubled = FockSpace((dim, dim), ("A", "c"))
    return log_negativity(DensityMatrix(doubled, output.tocsr(), check=False), ["c"], base)


def squeezed_vacuum(variance: float, dim: int) -> StateVector:
    """
    Сжатый вакуум с дисперсией x-квадратуры variance в усечении dim.

    Амплитуды чётных уровней: (-tanh r)^n √((2n)!) / (2^n n!) / √(cosh r), r = -½ ln(2V).
    """
    if not 0 < variance:
        raise ValueError(f"Дисперсия должна быть положительной: {variance}")
    r = -0.5 * math.log(2.0 * variance)
    space = FockSpace((dim,))
    if r == 0:
        return StateVector.basis(space, (0,))
    n = np.arange((dim + 1) // 2)
    log_magnitude = (
        0.5 * gammaln(2 * n + 1) - n * math.log(2.0) - gammaln(n + 1) + n * math.log(math.tanh(abs(r)))
    )
    amplitudes = np.exp(log_magnitude) * np.sign(-r) ** n
    leaked = 1.0 - float(np.sum(amplitudes ** 2)) / math.cosh(r)
    if leaked > 1e-8:
        raise TruncationError(f"Сжатый вакуум не помещается в усечение {dim}: потеря {leaked:.3e}")
    return StateVector.normalized(space, amplitudes, 2 * n)


def squeezed_vacuum_ep(variance: float, dim: int = 60, base: float = DEFAULT_BASE) -> float:
    """Потенциал запутанности сжатого вакуума с заданной дисперсией x-квадратуры."""
    rho = ThermalEnsemble.pure(squeezed_vacuum(variance, dim)).to_density_matrix()
    return entanglement_potential(rho, base)
