"""
Меры запутанности и неклассичности.
"""
from .distributions import PhononDistribution, phonon_distribution
from .klyshko import KlyshkoReport, klyshko
from .negativity import (
    entanglement_potential,
    log_in_base,
    log_negativity,
    squeezed_vacuum,
    squeezed_vacuum_ep,
    trace_norm,
)
from .quadrature import QuadraturePdf, default_grid, hermite_functions, quadrature_pdf
from .gaussian import CovarianceMatrix, covariance, gaussian_log_negativity, symplectic_eigenvalues
from .wigner import WignerMinimum, wigner_function, wigner_grid, wigner_min

__all__ = [
    "PhononDistribution",
    "phonon_distribution",
    "KlyshkoReport",
    "klyshko",
    "entanglement_potential",
    "log_in_base",
    "log_negativity",
    "squeezed_vacuum",
    "squeezed_vacuum_ep",
    "trace_norm",
    "QuadraturePdf",
    "default_grid",
    "hermite_functions",
    "quadrature_pdf",
    "CovarianceMatrix",
    "covariance",
    "gaussian_log_negativity",
    "symplectic_eigenvalues",
    "WignerMinimum",
    "wigner_function",
    "wigner_grid",
    "wigner_min",
]
