"""
Manufactured-solution verification: example catalog, error reports,
convergence studies and the numeric residual check.
"""

from .catalog import (
    EXAMPLE_CATALOG,
    ExampleCase,
    ExampleDefinition,
    ExampleId,
    build_problem,
    cases_for,
    exact,
    forcing,
    get_definition,
)
from .mms import ConvergenceRow, ErrorReport, RefinementAxis, convergence_study, run_case
from .residual import ResidualReport, require_consistent_forcing, residual_check

__all__ = [
    'EXAMPLE_CATALOG',
    'ExampleCase',
    'ExampleDefinition',
    'ExampleId',
    'build_problem',
    'cases_for',
    'exact',
    'forcing',
    'get_definition',
    'ConvergenceRow',
    'ErrorReport',
    'RefinementAxis',
    'convergence_study',
    'run_case',
    'ResidualReport',
    'require_consistent_forcing',
    'residual_check',
]
