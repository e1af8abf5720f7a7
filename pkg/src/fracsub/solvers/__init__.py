"""
Time-marching solvers for the 1D and 2D subdiffusion problems.
"""

from .solver1d import (
    Diagnostic,
    Grid1D,
    Problem1D,
    RobinCondition,
    SolutionHistory,
    Solver1D,
    assemble_level,
    constant,
    solve,
    step,
    validate_compatibility,
)
from .solver2d import (
    Grid2D,
    Problem2D,
    SolutionHistory2D,
    Solver2D,
    assemble_level_2d,
    solve_2d,
    validate_compatibility_2d,
)

__all__ = [
    'Diagnostic',
    'Grid1D',
    'Problem1D',
    'RobinCondition',
    'SolutionHistory',
    'Solver1D',
    'assemble_level',
    'constant',
    'solve',
    'step',
    'validate_compatibility',
    'Grid2D',
    'Problem2D',
    'SolutionHistory2D',
    'Solver2D',
    'assemble_level_2d',
    'solve_2d',
    'validate_compatibility_2d',
]
