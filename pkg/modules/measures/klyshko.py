"""
Критерий неклассичности Клышко по трём соседним вероятностям.

B(n) = (n+2) P_n P_{n+2} - (n+1) P_{n+1}²  обращается в ноль на пуассоновской
статистике; B(n) < 0 свидетельствует о неклассичности.
"""
from dataclasses import dataclass
from typing import List

import numpy as np

from .distributions import PhononDistribution

DEFAULT_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class KlyshkoReport:
    values: np.ndarray
    violations: np.ndarray
    tol: float = DEFAULT_TOL

    @property
    def violated_at(self) -> List[int]:
        return [int(n) for n in np.flatnonzero(self.violations)]

    @property
    def any_violation(self) -> bool:
        return bool(np.any(self.violations))

    @property
    def strongest(self) -> float:
        """Наименьшее значение B(n) (самое сильное нарушение)."""
        return float(self.values.min()) if self.values.size else 0.0


def klyshko(distribution: PhononDistribution, tol: float = DEFAULT_TOL) -> KlyshkoReport:
    p = distribution.padded(len(distribution) + 2)
    count = max(len(distribution) - 1, 1)
    n = np.arange(count)
    values = (n + 2) * p[n] * p[n + 2] - (n + 1) * p[n + 1] ** 2
    return KlyshkoReport(values, values < -tol, tol)
