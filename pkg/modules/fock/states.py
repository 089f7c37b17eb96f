"""
Состояния в усечённом пространстве Фока и их приготовление.

StateVector хранит амплитуды либо полным вектором, либо парой
(индексы носителя, амплитуды): тепловые смеси состоят из базисных
состояний, и полный вектор для каждой компоненты не нужен.
"""
import itertools
import logging
from dataclasses import dataclass, field
from functools import reduce
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp
from scipy.special import gammaln

from modules.core.errors import InvalidModeError, InvalidStateError, NonPhysicalStateError, TruncationError
from .linalg import block_eigvalsh
from .operators import MatrixLike, OperatorMatrix, max_abs
from .space import FockSpace, ModeIndex

logger = logging.getLogger(__name__)

NORM_TOL = 1e-10
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-8
POSITIVITY_TOL = 1e-8
DEFAULT_EPS_TAIL = 1e-6


@dataclass(frozen=True, eq=False)
class StateVector:
    """Чистое состояние. indices=None означает полный вектор амплитуд."""

    space: FockSpace
    amplitudes: np.ndarray
    indices: Optional[np.ndarray] = None

    def __post_init__(self):
        amplitudes = np.asarray(self.amplitudes, dtype=np.complex128).ravel()
        if self.indices is None:
            if amplitudes.size != self.space.dim:
                raise InvalidStateError(
                    f"Длина вектора {amplitudes.size} не совпадает с размерностью {self.space.dim}"
                )
        else:
            indices = np.asarray(self.indices, dtype=np.int64).ravel()
            if indices.size != amplitudes.size:
                raise InvalidStateError("Число индексов носителя не совпадает с числом амплитуд")
            if indices.size and (indices.min() < 0 or indices.max() >= self.space.dim):
                raise InvalidStateError("Индекс носителя вне пространства")
            object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "amplitudes", amplitudes)
        norm_error = abs(self.norm_squared() - 1.0)
        if norm_error > NORM_TOL:
            raise InvalidStateError(f"Состояние не нормировано: |‖ψ‖² - 1| = {norm_error:.3e}")

    @classmethod
    def normalized(cls, space: FockSpace, amplitudes, indices=None) -> "StateVector":
        """Создаёт состояние, предварительно нормируя амплитуды."""
        amplitudes = np.asarray(amplitudes, dtype=np.complex128)
        norm = np.linalg.norm(amplitudes)
        if norm == 0:
            raise InvalidStateError("Нулевой вектор нельзя нормировать")
        return cls(space, amplitudes / norm, indices)

    @classmethod
    def basis(cls, space: FockSpace, occupations: Sequence[int]) -> "StateVector":
        """Фоковское состояние |n_1, ..., n_M⟩."""
        return cls(space, np.ones(1), np.array([space.flat_index(occupations)]))

    @property
    def is_sparse(self) -> bool:
        return self.indices is not None

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def dense(self) -> np.ndarray:
        if self.indices is None:
            return self.amplitudes.copy()
        vector = np.zeros(self.space.dim, dtype=np.complex128)
        np.add.at(vector, self.indices, self.amplitudes)
        return vector

    def support(self, atol: float = 0.0) -> Tuple[np.ndarray, np.ndarray]:
        """(индексы, амплитуды) ненулевых компонент."""
        if self.indices is None:
            idx = np.flatnonzero(np.abs(self.amplitudes) > atol)
            return idx, self.amplitudes[idx]
        mask = np.abs(self.amplitudes) > atol
        return self.indices[mask], self.amplitudes[mask]

    def expectation(self, operator: OperatorMatrix) -> complex:
        if operator.space != self.space:
            raise InvalidModeError("Оператор и состояние заданы в разных пространствах")
        if not self.is_sparse:
            return complex(np.vdot(self.amplitudes, operator.elements @ self.amplitudes))
        idx, amp = self.support()
        column = sp.csc_matrix((amp, (idx, np.zeros(idx.size, dtype=np.int64))), shape=(self.space.dim, 1))
        return complex((column.conj().T @ (operator.sparse() @ column)).toarray()[0, 0])

    def diagonal_expectation(self, diagonal: np.ndarray) -> float:
        """⟨ψ|D|ψ⟩ для диагонального оператора, заданного своей диагональю."""
        idx, amp = self.support()
        return float(np.sum(np.abs(amp) ** 2 * np.asarray(diagonal)[idx]).real)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Матрица плотности; elements плотная или scipy.sparse."""

    space: FockSpace
    elements: MatrixLike
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        if sp.issparse(self.elements):
            elements = sp.csr_matrix(self.elements, dtype=np.complex128)
        else:
            elements = np.asarray(self.elements, dtype=np.complex128)
        if elements.shape != (self.space.dim, self.space.dim):
            raise InvalidStateError(
                f"Размер матрицы плотности {elements.shape} не совпадает с {self.space}"
            )
        object.__setattr__(self, "elements", elements)
        if self.check:
            self.validate()

    def validate(
        self,
        hermitian_tol: float = HERMITIAN_TOL,
        trace_tol: float = TRACE_TOL,
        positivity_tol: float = POSITIVITY_TOL,
    ) -> None:
        """Проверяет эрмитовость, след и положительность."""
        asym = max_abs(self.elements - self.elements.conj().T)
        if asym > hermitian_tol:
            raise NonPhysicalStateError(f"Матрица плотности не эрмитова: {asym:.3e}")
        trace_error = abs(self.trace() - 1.0)
        if trace_error > trace_tol:
            raise NonPhysicalStateError(f"След матрицы плотности отличается от 1 на {trace_error:.3e}")
        smallest = self.min_eigenvalue()
        if smallest < -positivity_tol:
            raise NonPhysicalStateError(f"Отрицательное собственное значение {smallest:.3e}")

    @property
    def is_sparse(self) -> bool:
        return sp.issparse(self.elements)

    def trace(self) -> float:
        return float(np.real(self.elements.diagonal().sum()))

    def diagonal(self) -> np.ndarray:
        return np.real(np.asarray(self.elements.diagonal())).ravel()

    def dense(self) -> np.ndarray:
        if self.is_sparse:
            return self.elements.toarray()
        return np.array(self.elements)

    def sparse(self) -> sp.csr_matrix:
        return self.elements if self.is_sparse else sp.csr_matrix(self.elements)

    def eigenvalues(self) -> np.ndarray:
        return block_eigvalsh(self.elements)

    def min_eigenvalue(self) -> float:
        values = self.eigenvalues()
        return float(values.min()) if values.size else 0.0

    def expectation(self, operator: OperatorMatrix) -> complex:
        if operator.space != self.space:
            raise InvalidModeError("Оператор и состояние заданы в разных пространствах")
        product = operator.elements @ self.elements
        return complex(product.diagonal().sum())


@dataclass(frozen=True, eq=False)
class ThermalEnsemble:
    """Взвешенная смесь чистых компонент."""

    space: FockSpace
    components: Tuple[Tuple[float, StateVector], ...]

    def __post_init__(self):
        components = tuple((float(w), s) for w, s in self.components)
        if not components:
            raise InvalidStateError("Ансамбль не содержит компонент")
        weights = np.array([w for w, _ in components])
        if np.any(weights < 0):
            raise InvalidStateError("Веса ансамбля должны быть неотрицательными")
        if abs(weights.sum() - 1.0) > NORM_TOL:
            raise InvalidStateError(f"Сумма весов ансамбля {weights.sum():.12f} != 1")
        for _, state in components:
            if state.space != self.space:
                raise InvalidStateError("Компонента ансамбля задана в другом пространстве")
        object.__setattr__(self, "components", components)

    @classmethod
    def pure(cls, state: StateVector) -> "ThermalEnsemble":
        return cls(state.space, ((1.0, state),))

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.components])

    @property
    def states(self) -> List[StateVector]:
        return [s for _, s in self.components]

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self) -> Iterator[Tuple[float, StateVector]]:
        return iter(self.components)

    def with_states(self, states: Sequence[StateVector]) -> "ThermalEnsemble":
        """Ансамбль с теми же весами и новыми компонентами (например, после эволюции)."""
        if len(states) != len(self.components):
            raise InvalidStateError("Число новых компонент не совпадает с числом весов")
        space = states[0].space if states else self.space
        return ThermalEnsemble(space, tuple(zip(self.weights, states)))

    def diagonal_expectation(self, diagonal: np.ndarray) -> float:
        return float(sum(w * s.diagonal_expectation(diagonal) for w, s in self.components))

    def expectation(self, operator: OperatorMatrix) -> complex:
        return complex(sum(w * s.expectation(operator) for w, s in self.components))

    def to_density_matrix(self, sparse: Optional[bool] = None) -> DensityMatrix:
        """Σ w |ψ⟩⟨ψ|; по умолчанию разреженная, если все компоненты разреженные."""
        columns = []
        for weight, state in self.components:
            idx, amp = state.support()
            columns.append(
                sp.csc_matrix(
                    (np.sqrt(weight) * amp, (idx, np.zeros(idx.size, dtype=np.int64))),
                    shape=(self.space.dim, 1),
                )
            )
        stacked = sp.hstack(columns, format="csr")
        rho = stacked @ stacked.conj().T
        if sparse is None:
            sparse = all(s.is_sparse for s in self.states)
        return DensityMatrix(self.space, rho if sparse else rho.toarray())


@dataclass(frozen=True)
class StatePrep:
    """
    Описание приготовления одной моды.

    kind: ground | fock | thermal | coherent | prcs
    """

    kind: str = "ground"
    n: int = 0
    nbar: float = 0.0
    amplitude: float = 0.0
    phase: float = 0.0

    KINDS = ("ground", "fock", "thermal", "coherent", "prcs")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise InvalidStateError(f"Неизвестный тип приготовления '{self.kind}'")
        if self.kind == "fock" and (int(self.n) != self.n or self.n < 0):
            raise InvalidStateError(f"Число квантов должно быть целым >= 0: {self.n}")
        if self.kind in ("thermal", "prcs") and not self.nbar >= 0:
            raise InvalidStateError(f"Средняя заселённость должна быть >= 0: {self.nbar}")
        if self.kind == "coherent" and not self.amplitude >= 0:
            raise InvalidStateError(f"|α| должно быть >= 0: {self.amplitude}")

    @classmethod
    def ground(cls) -> "StatePrep":
        return cls("ground")

    @classmethod
    def fock(cls, n: int) -> "StatePrep":
        return cls("fock", n=int(n))

    @classmethod
    def thermal(cls, nbar: float) -> "StatePrep":
        return cls("thermal", nbar=float(nbar))

    @classmethod
    def coherent(cls, amplitude: float, phase: float = 0.0) -> "StatePrep":
        return cls("coherent", amplitude=float(amplitude), phase=float(phase))

    @classmethod
    def prcs(cls, mu: float) -> "StatePrep":
        """Фазово-рандомизированное когерентное состояние с |α|² = mu."""
        return cls("prcs", nbar=float(mu))

    @property
    def mean_occupation(self) -> float:
        if self.kind == "fock":
            return float(self.n)
        if self.kind == "coherent":
            return self.amplitude ** 2
        return self.nbar if self.kind in ("thermal", "prcs") else 0.0

    def label(self) -> str:
        if self.kind == "fock":
            return f"fock({self.n})"
        if self.kind == "coherent":
            return f"coherent(|α|={self.amplitude:g}, φ={self.phase:g})"
        if self.kind in ("thermal", "prcs"):
            return f"{self.kind}({self.nbar:g})"
        return "ground"


def thermal_weights(nbar: float, count: int) -> np.ndarray:
    """p_k = n̄^k / (1+n̄)^{k+1}, k = 0..count-1 (без перенормировки)."""
    k = np.arange(count, dtype=np.float64)
    if nbar == 0:
        return (k == 0).astype(np.float64)
    return np.exp(k * np.log(nbar) - (k + 1) * np.log1p(nbar))


def poisson_weights(mu: float, count: int) -> np.ndarray:
    """e^{-μ} μ^n / n!, n = 0..count-1."""
    k = np.arange(count, dtype=np.float64)
    if mu == 0:
        return (k == 0).astype(np.float64)
    return np.exp(-mu + k * np.log(mu) - gammaln(k + 1))


def tail_cutoff(weights: np.ndarray, eps_tail: float) -> int:
    """Число сохраняемых уровней: до первого индекса с накопленным весом >= 1 - eps_tail."""
    cumulative = np.cumsum(weights)
    reached = np.flatnonzero(cumulative >= 1.0 - eps_tail)
    if reached.size == 0:
        raise TruncationError(
            f"Усечения {weights.size} недостаточно: накопленный вес {cumulative[-1]:.10f} < 1 - {eps_tail:g}"
        )
    return int(reached[0]) + 1


def required_levels(prep: StatePrep, eps_tail: float = DEFAULT_EPS_TAIL, limit: int = 4096) -> int:
    """Минимальная размерность моды, при которой приготовление проходит отсечку хвоста."""
    if prep.kind == "ground":
        return 1
    if prep.kind == "fock":
        return prep.n + 1
    mean = prep.mean_occupation
    if prep.kind == "thermal":
        weights = thermal_weights(mean, limit)
    else:
        weights = poisson_weights(mean, limit)
    return tail_cutoff(weights, eps_tail)


LocalComponent = Tuple[float, np.ndarray, np.ndarray]


def _mode_components(prep: StatePrep, dim: int, eps_tail: float) -> List[LocalComponent]:
    """Компоненты одной моды: (вес, индексы, амплитуды)."""
    if prep.kind == "ground":
        return [(1.0, np.array([0]), np.ones(1, dtype=np.complex128))]
    if prep.kind == "fock":
        if prep.n >= dim:
            raise TruncationError(f"Фоковское состояние |{prep.n}⟩ не помещается в усечение {dim}")
        return [(1.0, np.array([prep.n]), np.ones(1, dtype=np.complex128))]
    if prep.kind in ("thermal", "prcs"):
        law = thermal_weights if prep.kind == "thermal" else poisson_weights
        weights = law(prep.nbar, dim)
        keep = tail_cutoff(weights, eps_tail)
        weights = weights[:keep] / weights[:keep].sum()
        return [
            (float(w), np.array([k]), np.ones(1, dtype=np.complex128))
            for k, w in enumerate(weights)
        ]
    # coherent: нормированное усечённое разложение α^n/√(n!)
    mu = prep.amplitude ** 2
    keep = tail_cutoff(poisson_weights(mu, dim), eps_tail)
    n = np.arange(keep)
    magnitudes = np.sqrt(poisson_weights(mu, keep))
    amplitudes = magnitudes * np.exp(1j * prep.phase * n)
    amplitudes /= np.linalg.norm(amplitudes)
    return [(1.0, n, amplitudes)]


def prepare(
    space: FockSpace,
    preps: Mapping[ModeIndex, StatePrep],
    eps_tail: float = DEFAULT_EPS_TAIL,
    as_density: bool = False,
) -> Union[ThermalEnsemble, DensityMatrix]:
    """
    Приготовление произведения состояний мод.

    Args:
        space: пространство
        preps: приготовление для каждой моды (по имени или индексу);
            не указанные моды находятся в вакууме
        eps_tail: допустимый отброшенный вес хвоста распределения
        as_density: вернуть матрицу плотности вместо ансамбля

    Returns:
        ThermalEnsemble (или DensityMatrix при as_density=True)

    Raises:
        InvalidStateError: некорректное приготовление
        TruncationError: усечение не достигает 1 - eps_tail
    """
    per_mode: List[List[LocalComponent]] = []
    by_position: Dict[int, StatePrep] = {space.position(m): p for m, p in preps.items()}
    for pos, dim in enumerate(space.mode_dims):
        prep = by_position.get(pos, StatePrep.ground())
        try:
            per_mode.append(_mode_components(prep, dim, eps_tail))
        except TruncationError as e:
            raise TruncationError(f"Мода '{space.mode_names[pos]}': {e}") from e

    components = []
    for combo in itertools.product(*per_mode):
        weight = float(np.prod([c[0] for c in combo]))
        grids = np.meshgrid(*[c[1] for c in combo], indexing="ij")
        indices = np.ravel_multi_index(tuple(g.ravel() for g in grids), space.mode_dims)
        amplitudes = reduce(np.kron, [c[2] for c in combo])
        components.append((weight, StateVector.normalized(space, amplitudes, indices)))

    total = sum(w for w, _ in components)
    ensemble = ThermalEnsemble(space, tuple((w / total, s) for w, s in components))
    logger.debug("Приготовлено %d компонент в %s", len(ensemble), space)
    return ensemble.to_density_matrix() if as_density else ensemble


def _product_space(spaces: Sequence[FockSpace], names: Optional[Sequence[str]]) -> FockSpace:
    dims = tuple(d for s in spaces for d in s.mode_dims)
    if names is None:
        merged = tuple(n for s in spaces for n in s.mode_names)
        names = merged if len(set(merged)) == len(merged) else ()
    return FockSpace(dims, tuple(names))


def tensor(*states, names: Optional[Sequence[str]] = None):
    """
    Тензорное произведение состояний одного типа.

    Для StateVector возвращает StateVector, для DensityMatrix - DensityMatrix.
    Имена мод объединяются; при совпадении назначаются имена по умолчанию.
    """
    if not states:
        raise InvalidStateError("Нужно хотя бы одно состояние")
    space = _product_space([s.space for s in states], names)
    if all(isinstance(s, StateVector) for s in states):
        supports = [s.support() for s in states]
        local_dims = [s.space.dim for s in states]
        grids = np.meshgrid(*[idx for idx, _ in supports], indexing="ij")
        indices = np.ravel_multi_index(tuple(g.ravel() for g in grids), local_dims)
        amplitudes = reduce(np.kron, [amp for _, amp in supports])
        return StateVector(space, amplitudes, indices)
    if all(isinstance(s, DensityMatrix) for s in states):
        if any(s.is_sparse for s in states):
            elements = reduce(lambda x, y: sp.kron(x, y, format="csr"), [s.sparse() for s in states])
        else:
            elements = reduce(np.kron, [s.dense() for s in states])
        return DensityMatrix(space, elements)
    raise InvalidStateError("tensor поддерживает только однотипные состояния")
