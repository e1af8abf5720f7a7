"""fracsub - finite-difference solvers for multi-term time-fractional subdiffusion with memory."""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    ExpressionError,
    FracsubError,
    ShapeError,
    SingularSystemError,
    SolverError,
)
from .solvers import Grid1D, Grid2D, Problem1D, Problem2D, RobinCondition, solve, solve_2d
from .verification import ExampleCase, ExampleId, run_case

__all__ = [
    '__version__',
    'ConfigError',
    'ConvergenceError',
    'DomainError',
    'ExpressionError',
    'FracsubError',
    'ShapeError',
    'SingularSystemError',
    'SolverError',
    'Grid1D',
    'Grid2D',
    'Problem1D',
    'Problem2D',
    'RobinCondition',
    'solve',
    'solve_2d',
    'ExampleCase',
    'ExampleId',
    'run_case',
]
