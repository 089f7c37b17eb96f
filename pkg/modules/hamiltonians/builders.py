"""
Построение матриц гамильтонианов и операторов скачков.
"""
import logging
from typing import List

import numpy as np
import scipy.sparse as sp

from modules.core.errors import InvalidModeError
from modules.fock.operators import HERMITIAN_TOL, OperatorMatrix, embed_local, number_operator, zero
from modules.fock.space import FockSpace
from .specs import HamiltonianSpec, HamiltonianTerm, LindbladSpec

logger = logging.getLogger(__name__)


def _check_modes(spec: HamiltonianSpec, space: FockSpace) -> None:
    missing = [m for m in spec.modes if m not in space.mode_names]
    if missing:
        raise InvalidModeError(
            f"Гамильтониан '{spec.kind}' использует моды {', '.join(missing)}, "
            f"которых нет в {space}"
        )


def _local_monomial(dim: int, raise_power: int, lower_power: int) -> sp.csr_matrix:
    """(k†)^p k^q на одной моде."""
    a = sp.diags(np.sqrt(np.arange(1, dim, dtype=np.float64)), offsets=1, shape=(dim, dim), format="csr")
    result = sp.identity(dim, format="csr")
    for _ in range(raise_power):
        result = result @ a.T
    for _ in range(lower_power):
        result = result @ a
    return result


def _term_matrix(term: HamiltonianTerm, space: FockSpace) -> OperatorMatrix:
    if term.number:
        mode = term.raising[0][0]
        return number_operator(space, mode).scaled(term.coupling)

    raising = dict(term.raising)
    lowering = dict(term.lowering)
    monomial = None
    for mode in term.modes:
        pos = space.position(mode)
        local = _local_monomial(space.mode_dims[pos], raising.get(mode, 0), lowering.get(mode, 0))
        factor = embed_local(space, pos, local)
        monomial = factor if monomial is None else monomial @ factor
    monomial = monomial.scaled(term.coupling)
    return OperatorMatrix(space, monomial.elements + monomial.elements.conj().T, True)


def build(spec: HamiltonianSpec, space: FockSpace) -> OperatorMatrix:
    """
    Матрица гамильтониана в пространстве space.

    Raises:
        InvalidModeError: спецификация ссылается на моды, отсутствующие в space
    """
    _check_modes(spec, space)
    hamiltonian = zero(space)
    for term in spec.terms:
        hamiltonian = hamiltonian + _term_matrix(term, space)
    hamiltonian = hamiltonian.assert_hermitian(HERMITIAN_TOL)
    logger.debug(
        "Гамильтониан %s в %s: %d ненулевых элементов",
        spec.kind,
        space,
        hamiltonian.sparse().nnz,
    )
    return hamiltonian


def jump_operators(spec: LindbladSpec, space: FockSpace) -> List[OperatorMatrix]:
    """
    Операторы скачков: √(λ_k(1+n̄_th))·k и √(λ_k n̄_th)·k† для каждой затухающей моды.

    Моды, не объявленные в space, пропускаются; при n̄_th = 0 остаётся
    только оператор понижения.
    """
    jumps: List[OperatorMatrix] = []
    for mode, rate in spec.rates:
        if mode not in space.mode_names:
            logger.debug("Мода '%s' отсутствует в пространстве, затухание пропущено", mode)
            continue
        if rate == 0:
            continue
        lowering = embed_local(space, mode, _local_monomial(space.mode_dims[space.position(mode)], 0, 1))
        jumps.append(lowering.scaled(np.sqrt(rate * (1.0 + spec.nbar_th))))
        if spec.nbar_th > 0:
            jumps.append(lowering.dag().scaled(np.sqrt(rate * spec.nbar_th)))
    return jumps
