"""
Модель данных усечённого пространства Фока.
"""
from .space import FockSpace, ModeIndex
from .operators import (
    OperatorMatrix,
    below_top_level_indices,
    embed_local,
    identity,
    ladder,
    number_operator,
    weighted_number,
)
from .states import (
    DensityMatrix,
    StatePrep,
    StateVector,
    ThermalEnsemble,
    prepare,
    required_levels,
    tensor,
    thermal_weights,
    poisson_weights,
)
from .operations import ladder_moments, moments, partial_trace, partial_transpose, reduce, single_mode
from .linalg import block_eigvalsh, sector_expm

__all__ = [
    "FockSpace",
    "ModeIndex",
    "OperatorMatrix",
    "below_top_level_indices",
    "embed_local",
    "identity",
    "ladder",
    "number_operator",
    "weighted_number",
    "DensityMatrix",
    "StatePrep",
    "StateVector",
    "ThermalEnsemble",
    "prepare",
    "required_levels",
    "tensor",
    "thermal_weights",
    "poisson_weights",
    "ladder_moments",
    "moments",
    "partial_trace",
    "partial_transpose",
    "reduce",
    "single_mode",
    "block_eigvalsh",
    "sector_expm",
]
