"""
Величины, запрашиваемые в сценариях (EP_b, LN_bc, gaussian_LN_bc, odd_b, sv_EP_b).
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from modules.core.errors import NoDistillableSqueezingError
from modules.distillation import asymptotic_limit
from modules.fock import DensityMatrix, reduce
from modules.measures import (
    covariance,
    default_grid,
    entanglement_potential,
    gaussian_log_negativity,
    log_negativity,
    phonon_distribution,
    quadrature_pdf,
    squeezed_vacuum_ep,
)
from .validators import MEASURE

logger = logging.getLogger(__name__)

# Величины, которые считаются вдоль траектории (у sv_EP нет временного ряда)
SERIES_KINDS = ("EP", "LN", "gaussian_LN", "odd")
LOG_KINDS = ("EP", "LN", "gaussian_LN", "sv_EP")


@dataclass(frozen=True)
class Quantity:
    name: str
    kind: str
    modes: Tuple[str, ...]

    @classmethod
    def parse(cls, name: str) -> "Quantity":
        match = MEASURE.match(name)
        if not match:
            raise ValueError(f"Некорректное имя величины {name!r}")
        kind, letters = match.groups()
        return cls(name, kind, tuple(letters))

    @property
    def is_series(self) -> bool:
        return self.kind in SERIES_KINDS

    @property
    def is_logarithmic(self) -> bool:
        return self.kind in LOG_KINDS


def parse_quantities(names: Iterable[str]) -> List[Quantity]:
    return [Quantity.parse(n) for n in names]


class QuantityEvaluator:
    """
    Вычисление набора величин для одного состояния.

    Редуцированные матрицы плотности строятся один раз на вызов evaluate
    и переиспользуются величинами с теми же модами.
    """

    def __init__(
        self,
        quantities: Iterable[Quantity],
        base: float,
        max_doubled_dim: int,
        quadrature_points: int = 4096,
        quadrature_half_width: float = 10.0,
        check: bool = False,
    ):
        self.quantities = list(quantities)
        self.base = base
        self.max_doubled_dim = int(max_doubled_dim)
        self.quadrature_points = int(quadrature_points)
        self.quadrature_half_width = float(quadrature_half_width)
        self.check = check

    def evaluate(self, state, only: Optional[Iterable[str]] = None) -> Dict[str, float]:
        wanted = set(only) if only is not None else None
        reduced: Dict[Tuple[str, ...], DensityMatrix] = {}

        def reduced_state(modes: Tuple[str, ...]) -> DensityMatrix:
            if modes not in reduced:
                reduced[modes] = reduce(state, list(modes), check=self.check)
            return reduced[modes]

        values: Dict[str, float] = {}
        for quantity in self.quantities:
            if wanted is not None and quantity.name not in wanted:
                continue
            values[quantity.name] = self._value(quantity, reduced_state)
        return values

    def _value(self, quantity: Quantity, reduced_state) -> float:
        modes = quantity.modes
        if quantity.kind == "EP":
            return entanglement_potential(reduced_state(modes), self.base, self.max_doubled_dim)
        if quantity.kind == "LN":
            return log_negativity(reduced_state(modes), [modes[0]], self.base)
        if quantity.kind == "gaussian_LN":
            cm = covariance(reduced_state(modes), list(modes), check=False)
            return gaussian_log_negativity(cm, [modes[0]], self.base)
        if quantity.kind == "odd":
            return phonon_distribution(reduced_state(modes), modes[0]).odd_population
        return self.squeezed_reference(reduced_state(modes))

    def squeezed_reference(self, rho: DensityMatrix) -> float:
        """EP сжатого вакуума с дисперсией предела универсальной дистилляции (NaN без сжатия)."""
        grid = default_grid(rho, 0.0, self.quadrature_points, self.quadrature_half_width)
        pdf = quadrature_pdf(rho, 0.0, grid)
        try:
            limit = asymptotic_limit(pdf, require_squeezing=True)
        except NoDistillableSqueezingError as e:
            logger.info("Сжатие не дистиллируется: %s", e)
            return math.nan
        return squeezed_vacuum_ep(limit, base=self.base)


def alternate_base(value: float, base: float) -> Tuple[str, float]:
    """Значение логарифмической величины в другом основании: (суффикс колонки, значение)."""
    if base == 2.0:
        return "base_e", value * math.log(2.0)
    return "base_2", value / math.log(2.0)
