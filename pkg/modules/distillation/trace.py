"""
Записи шагов дистилляции.
"""
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from modules.measures.quadrature import QuadraturePdf
from .pdf_ops import variance_to_db


@dataclass(frozen=True)
class DistillationStep:
    step: int
    copies: int
    conditioning: float
    variance: float
    squeezing_db: float
    branch: str = "universal"

    @classmethod
    def record(cls, step: int, conditioning: float, variance: float, branch: str = "universal") -> "DistillationStep":
        if not (np.isfinite(variance) and variance > 0):
            raise ValueError(f"Дисперсия на шаге {step} должна быть конечной и положительной: {variance}")
        return cls(step, 2 ** step, float(conditioning), float(variance), variance_to_db(variance), branch)


@dataclass
class DistillationTrace:
    """Последовательность шагов одного метода (шаг 0 - исходная плотность)."""

    method: str
    steps: List[DistillationStep] = field(default_factory=list)
    final_pdf: Optional[QuadraturePdf] = field(default=None, repr=False, compare=False)
    pdfs: List[QuadraturePdf] = field(default_factory=list, repr=False, compare=False)

    @property
    def variances(self) -> np.ndarray:
        return np.array([s.variance for s in self.steps])

    @property
    def best_variance(self) -> float:
        return float(self.variances.min())

    def to_rows(self) -> List[Dict[str, Any]]:
        return [dict(asdict(s), method=self.method) for s in self.steps]
