"""
Универсальная дистилляция сжатия: на каждом шаге плотность центрируется в
глобальном максимуме и заменяется на P(x/√2)², что соответствует
смешиванию двух копий на светоделителе 50:50 и условию x = 0 на втором выходе.
"""
import logging

import numpy as np
from scipy.interpolate import CubicSpline

from modules.core.errors import GridTooNarrowError, NoDistillableSqueezingError
from modules.measures.quadrature import QuadraturePdf
from .pdf_ops import SHOT_NOISE, GridFunction, normalised, refine_maximum
from .trace import DistillationStep, DistillationTrace

logger = logging.getLogger(__name__)

SQRT2 = np.sqrt(2.0)
LOCAL_POINTS = 8


def universal_step(pdf: QuadraturePdf):
    """Один шаг: (новая плотность, положение максимума, по которому центрировали)."""
    centre = refine_maximum(pdf)
    function = GridFunction(pdf)
    values = function(centre + pdf.grid / SQRT2) ** 2
    return normalised(pdf.grid, values), centre


def universal_distill(pdf: QuadraturePdf, steps: int, keep_pdfs: bool = False) -> DistillationTrace:
    """
    Дисперсия после k = 0..steps шагов (2^k копий).

    Args:
        pdf: исходная плотность (шаг 0)
        steps: число шагов
        keep_pdfs: сохранить плотности всех шагов в trace.pdfs

    Raises:
        GridTooNarrowError: максимум на краю сетки или сбой нормировки
    """
    if steps < 1:
        raise ValueError("Число шагов дистилляции должно быть >= 1")
    trace = DistillationTrace("universal")
    trace.steps.append(DistillationStep.record(0, 0.0, pdf.variance))
    current = pdf
    if keep_pdfs:
        trace.pdfs.append(pdf)
    for step in range(1, steps + 1):
        current, centre = universal_step(current)
        trace.steps.append(DistillationStep.record(step, centre, current.variance))
        if keep_pdfs:
            trace.pdfs.append(current)
        logger.debug("Универсальная дистилляция: шаг %d, V=%.6g", step, current.variance)
    trace.final_pdf = current
    return trace


def log_curvature(pdf: QuadraturePdf) -> float:
    """Вторая производная ln P в уточнённом максимуме (пятиточечная разность)."""
    index = int(np.argmax(pdf.density))
    if index < LOCAL_POINTS or index > pdf.grid.size - 1 - LOCAL_POINTS:
        raise GridTooNarrowError("Максимум плотности слишком близко к краю сетки")
    window = slice(index - LOCAL_POINTS, index + LOCAL_POINTS + 1)
    local = pdf.density[window]
    if np.any(local <= 0):
        raise NoDistillableSqueezingError("Плотность обращается в ноль рядом с максимумом")
    spline = CubicSpline(pdf.grid[window], np.log(local))
    centre = refine_maximum(pdf)
    h = pdf.dx
    f = spline(centre + h * np.arange(-2, 3))
    return float((-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h ** 2))


def asymptotic_limit(pdf: QuadraturePdf, require_squeezing: bool = False) -> float:
    """
    Предел универсальной дистилляции V∞ = -1 / (d² ln P / dx²) в максимуме.

    Args:
        pdf: плотность квадратуры
        require_squeezing: считать отсутствием сжатия также V∞ >= 1/2
            (нет сжатия ниже дробового шума)

    Raises:
        NoDistillableSqueezingError: кривизна ln P в максимуме неотрицательна
            или, при require_squeezing, V∞ >= 1/2
        GridTooNarrowError: максимум у края сетки
    """
    curvature = log_curvature(pdf)
    if curvature >= 0:
        raise NoDistillableSqueezingError(
            f"Неотрицательная кривизна ln P в максимуме ({curvature:.4g}): сжатие не дистиллируется"
        )
    limit = -1.0 / curvature
    if require_squeezing and limit >= SHOT_NOISE:
        raise NoDistillableSqueezingError(
            f"Нет сжатия ниже дробового шума: V∞ = {limit:.4g} >= {SHOT_NOISE}"
        )
    return limit
