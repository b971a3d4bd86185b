"""Well-balanced augmented Roe solvers for linear nonconservative systems
U_t + A(x) U_x = S(U) in one space dimension."""

from .errors import ConfigurationError, NumericalFailure, ResonantSource
from .fluctuation import FluctuationSolver, intermediate_states, solve_interface
from .grid import BoundarySpec, Dirichlet, Extrapolate, FieldState, Grid, build_grid
from .linalg import EigenDecomposition, SingularMatrix
from .unbalanced import UnbalancedSolver

__version__ = "0.1.0"

__all__ = [
    "BoundarySpec",
    "ConfigurationError",
    "Dirichlet",
    "EigenDecomposition",
    "Extrapolate",
    "FieldState",
    "FluctuationSolver",
    "Grid",
    "NumericalFailure",
    "ResonantSource",
    "SingularMatrix",
    "UnbalancedSolver",
    "build_grid",
    "intermediate_states",
    "solve_interface",
]
