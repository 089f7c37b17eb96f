"""
Сохраняющиеся заряды K = Σ w_k k†k гамильтонианов в приближении вращающейся волны.

Веса w ищутся как неотрицательные целые векторы, ортогональные изменениям
чисел заполнения всех одночленов гамильтониана. Из найденных кандидатов
жадно набирается линейно независимый базис, начиная с наименьших.
"""
import itertools
import logging
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from modules.core.errors import ConfigError, InvalidModeError
from modules.fock.operators import OperatorMatrix, weighted_number
from modules.fock.space import FockSpace
from .specs import HamiltonianSpec

logger = logging.getLogger(__name__)

Weights = Tuple[int, ...]


def _exponent_changes(spec: HamiltonianSpec, names: Tuple[str, ...]) -> np.ndarray:
    changes = [t.exponent_change(names) for t in spec.interaction_terms]
    if not changes:
        return np.zeros((0, len(names)), dtype=np.int64)
    return np.array(changes, dtype=np.int64)


def charge_weights(spec: HamiltonianSpec, space: FockSpace) -> List[Weights]:
    """
    Базис целочисленных весов сохраняющихся зарядов в порядке мод space.

    Пустой список означает, что точного заряда нет.
    """
    missing = [m for m in spec.modes if m not in space.mode_names]
    if missing:
        raise InvalidModeError(f"Моды {', '.join(missing)} отсутствуют в {space}")
    names = space.mode_names
    changes = _exponent_changes(spec, names)
    bound = max([2] + [t.max_power() for t in spec.interaction_terms])
    expected_rank = space.num_modes - (np.linalg.matrix_rank(changes) if changes.size else 0)

    candidates = []
    for weights in itertools.product(range(bound + 1), repeat=space.num_modes):
        if not any(weights):
            continue
        if changes.size and np.any(changes @ np.array(weights) != 0):
            continue
        candidates.append(weights)
    candidates.sort(key=lambda w: (sum(w), tuple(-x for x in w)))

    basis: List[Weights] = []
    for weights in candidates:
        trial = np.array(basis + [weights], dtype=np.float64)
        if np.linalg.matrix_rank(trial) == len(basis) + 1:
            basis.append(tuple(int(x) for x in weights))
        if len(basis) == expected_rank:
            break
    if len(basis) < expected_rank:
        logger.debug(
            "Для %s найдено %d неотрицательных зарядов из %d возможных", spec.kind, len(basis), expected_rank
        )
    return basis


def conserved_charge(
    spec: HamiltonianSpec, space: FockSpace
) -> Optional[Union[OperatorMatrix, Tuple[OperatorMatrix, ...]]]:
    """
    Сохраняющийся заряд как диагональный OperatorMatrix.

    Returns:
        OperatorMatrix при одном заряде, кортеж при нескольких, None если заряда нет
    """
    basis = charge_weights(spec, space)
    if not basis:
        return None
    charges = tuple(weighted_number(space, w) for w in basis)
    return charges[0] if len(charges) == 1 else charges


def charge_labels(space: FockSpace, basis: Sequence[Weights]) -> np.ndarray:
    """Значения зарядов для каждого базисного состояния: массив (dim, число зарядов)."""
    weights = np.asarray(basis, dtype=np.int64).reshape(len(basis), space.num_modes)
    return (weights @ space.occupation_table()).T


def required_dims(
    basis: Sequence[Weights], max_charges: Sequence[int], names: Sequence[str]
) -> Tuple[int, ...]:
    """
    Минимальные размерности мод, при которых все оболочки с зарядами до
    max_charges помещаются в усечение целиком.

    Raises:
        ConfigError: мода не ограничена ни одним зарядом
    """
    if len(basis) != len(max_charges):
        raise ConfigError("Число зарядов и число максимальных значений не совпадают")
    dims = []
    for pos, name in enumerate(names):
        caps = [k // w[pos] for w, k in zip(basis, max_charges) if w[pos] > 0]
        if not caps:
            raise ConfigError(f"Заселённость моды '{name}' не ограничена сохраняющимися зарядами")
        dims.append(int(min(caps)) + 1)
    return tuple(dims)
