"""
Распределение чисел заполнения P_k = ⟨k|ρ|k⟩.
"""
from dataclasses import dataclass

import numpy as np

from modules.core.errors import NonPhysicalStateError
from modules.fock.operations import AnyState, single_mode
from modules.fock.space import ModeIndex

NEGATIVE_TOL = 1e-12
SUM_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class PhononDistribution:
    probabilities: np.ndarray

    def __post_init__(self):
        p = np.real(np.asarray(self.probabilities, dtype=np.complex128)).astype(np.float64).ravel()
        if np.any(p < -NEGATIVE_TOL):
            raise NonPhysicalStateError(f"Отрицательная вероятность {p.min():.3e}")
        p = np.clip(p, 0.0, None)
        if abs(p.sum() - 1.0) > SUM_TOL:
            raise NonPhysicalStateError(f"Сумма вероятностей {p.sum():.10f} != 1")
        p.setflags(write=False)
        object.__setattr__(self, "probabilities", p)

    def __len__(self) -> int:
        return self.probabilities.size

    def __getitem__(self, k: int) -> float:
        return float(self.probabilities[k]) if 0 <= k < self.probabilities.size else 0.0

    @property
    def mean(self) -> float:
        return float(np.arange(self.probabilities.size) @ self.probabilities)

    @property
    def odd_population(self) -> float:
        return float(self.probabilities[1::2].sum())

    def padded(self, size: int) -> np.ndarray:
        out = np.zeros(max(size, self.probabilities.size))
        out[: self.probabilities.size] = self.probabilities
        return out


def phonon_distribution(state: AnyState, mode: ModeIndex) -> PhononDistribution:
    """Распределение чисел заполнения одной моды."""
    return PhononDistribution(single_mode(state, mode).diagonal())
