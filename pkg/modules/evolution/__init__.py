"""
Эволюция во времени: унитарная по оболочкам заряда и по уравнению Линдблада.
"""
from .grid import TimeGrid
from .shells import ComponentTrack, Sector, ShellDecomposition
from .truncation import ChargeTruncation
from .unitary import EnsembleTrajectory, iter_unitary_evolve, unitary_evolve
from .lindblad import iter_lindblad_evolve, lindblad_evolve
from .peaks import PeakResult, first_peak

__all__ = [
    "TimeGrid",
    "ComponentTrack",
    "Sector",
    "ShellDecomposition",
    "ChargeTruncation",
    "EnsembleTrajectory",
    "iter_unitary_evolve",
    "unitary_evolve",
    "iter_lindblad_evolve",
    "lindblad_evolve",
    "PeakResult",
    "first_peak",
]
