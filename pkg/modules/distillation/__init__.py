"""
Дистилляция сжатия по плотностям квадратуры.
"""
from .pdf_ops import SHOT_NOISE, GridFunction, normalised, refine_maximum, variance_to_db
from .trace import DistillationStep, DistillationTrace
from .universal import asymptotic_limit, log_curvature, universal_distill, universal_step
from .nonuniversal import nonuniversal_distill, optimal_conditioning

__all__ = [
    "SHOT_NOISE",
    "GridFunction",
    "normalised",
    "refine_maximum",
    "variance_to_db",
    "DistillationStep",
    "DistillationTrace",
    "asymptotic_limit",
    "log_curvature",
    "universal_distill",
    "universal_step",
    "nonuniversal_distill",
    "optimal_conditioning",
]
