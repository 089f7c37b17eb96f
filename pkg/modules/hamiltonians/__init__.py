"""
Гамильтонианы, их сохраняющиеся заряды и операторы скачков.
"""
from .specs import KINDS, HamiltonianSpec, HamiltonianTerm, LindbladSpec
from .builders import build, jump_operators
from .charges import charge_labels, charge_weights, conserved_charge, required_dims

__all__ = [
    "KINDS",
    "HamiltonianSpec",
    "HamiltonianTerm",
    "LindbladSpec",
    "build",
    "jump_operators",
    "charge_labels",
    "charge_weights",
    "conserved_charge",
    "required_dims",
]
