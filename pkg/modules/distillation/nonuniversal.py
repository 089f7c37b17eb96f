"""
Неуниверсальная дистилляция: точка условия c выбирается на каждом шаге так,
чтобы минимизировать дисперсию P_out(x) ∝ P((x+c)/√2)·P((x-c)/√2).
"""
import logging
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from modules.core.errors import GridTooNarrowError
from modules.measures.quadrature import QuadraturePdf
from .pdf_ops import GridFunction, normalised, refine_maximum
from .trace import DistillationStep, DistillationTrace
from .universal import SQRT2, universal_distill

logger = logging.getLogger(__name__)

SCAN_POINTS = 257
IMPROVEMENT_TOL = 1e-10


def _conditioned(pdf: QuadraturePdf, function: GridFunction, c: float) -> QuadraturePdf:
    values = function((pdf.grid + c) / SQRT2) * function((pdf.grid - c) / SQRT2)
    return normalised(pdf.grid, values)


def _variance_at(pdf: QuadraturePdf, function: GridFunction, c: float) -> float:
    try:
        with np.errstate(under="ignore", over="ignore", invalid="ignore"):
            variance = _conditioned(pdf, function, c).variance
    except GridTooNarrowError:
        return np.inf
    return variance if np.isfinite(variance) and variance > 0 else np.inf


def _recentred(pdf: QuadraturePdf) -> QuadraturePdf:
    """Сдвиг плотности так, чтобы максимум оказался в нуле."""
    centre = refine_maximum(pdf)
    return normalised(pdf.grid, GridFunction(pdf)(pdf.grid + centre))


def optimal_conditioning(pdf: QuadraturePdf, c_max: Optional[float] = None) -> Tuple[float, float]:
    """
    Точка условия c >= 0 с наименьшей дисперсией после шага (произведение симметрично по c).

    Returns:
        (c, дисперсия); c = 0 сохраняется, если выигрыш не превышает 1e-10
    """
    function = GridFunction(pdf)
    c_max = float(pdf.grid[-1]) if c_max is None else c_max
    scan = np.linspace(0.0, c_max, SCAN_POINTS)
    variances = np.array([_variance_at(pdf, function, c) for c in scan])
    best = int(np.argmin(variances))
    c_best, v_best = float(scan[best]), float(variances[best])
    if 0 < best < scan.size - 1 and np.isfinite(v_best):
        result = minimize_scalar(
            lambda c: _variance_at(pdf, function, c),
            bracket=(scan[best - 1], scan[best], scan[best + 1]),
            method="golden",
        )
        if result.fun < v_best:
            c_best, v_best = float(result.x), float(result.fun)
    if not variances[0] - v_best > IMPROVEMENT_TOL:
        return 0.0, float(variances[0])
    return c_best, v_best


def nonuniversal_distill(pdf: QuadraturePdf, steps: int) -> DistillationTrace:
    """
    Дисперсия после k = 0..steps шагов с оптимизацией точки условия.

    Параллельно ведётся универсальная ветвь: если на шаге она даёт меньшую
    дисперсию, дальнейшие шаги продолжаются с её плотности.
    """
    if steps < 1:
        raise ValueError("Число шагов дистилляции должно быть >= 1")
    universal = universal_distill(pdf, steps, keep_pdfs=True)

    trace = DistillationTrace("nonuniversal")
    trace.steps.append(DistillationStep.record(0, 0.0, pdf.variance, "nonuniversal"))
    current = pdf
    for step in range(1, steps + 1):
        c, variance = optimal_conditioning(current)
        reference = universal.steps[step]
        if np.isfinite(variance) and variance <= reference.variance:
            current = _recentred(_conditioned(current, GridFunction(current), c))
            trace.steps.append(DistillationStep.record(step, c, variance, "nonuniversal"))
        else:
            current = universal.pdfs[step]
            trace.steps.append(
                DistillationStep.record(step, reference.conditioning, reference.variance, "universal")
            )
        logger.debug(
            "Неуниверсальная дистилляция: шаг %d, c=%.4g, V=%.6g",
            step,
            trace.steps[-1].conditioning,
            trace.steps[-1].variance,
        )
    trace.final_pdf = current
    return trace
