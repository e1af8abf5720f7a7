#!/usr/bin/env python3
# SPDX-License-Identifier: MIT
# Copyright (c) 2025 fracsub contributors
"""
Error measurement against the manufactured solutions.

The error gimel is max |u - u_N| over every node of the space-time mesh,
level 0 included.
"""

import logging
import math
import time
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Union

import numpy as np

from ..errors import DomainError
from ..solvers.solver1d import Grid1D, SolutionHistory, solve
from ..solvers.solver2d import Grid2D, SolutionHistory2D, solve_2d
from .catalog import ExampleCase

logger = logging.getLogger(__name__)

Grid = Union[Grid1D, Grid2D]


@dataclass
class ErrorReport:
    """Outcome of one manufactured-solution run."""
    case: str
    nu1: float
    nu2: float
    gimel: float
    level_errors: np.ndarray = field(repr=False)
    grid: Dict[str, float]
    richardson: bool
    seconds: float
    T: float
    rho2: Optional[float] = None
    reference: Optional[float] = None

    @property
    def ratio_to_reference(self) -> Optional[float]:
        if not self.reference:
            return None
        return self.gimel / self.reference

    def to_row(self) -> Dict[str, object]:
        """Flat row for the table CSV."""
        row = {"nu1": self.nu1, "nu2": self.nu2, "gimel": self.gimel}
        row.update(self.grid)
        row.update({"richardson": self.richardson, "seconds": self.seconds})
        if self.rho2 is not None:
            row.update({"rho2": self.rho2, "T": self.T})
        if self.reference is not None:
            row["reference"] = self.reference
        return row

    def to_dict(self) -> Dict[str, object]:
        data = asdict(self)
        data["level_errors"] = self.level_errors.tolist()
        return data


def grid_summary(grid: Grid) -> Dict[str, float]:
    if isinstance(grid, Grid2D):
        return {"Kx": grid.Kx, "Ky": grid.Ky, "J": grid.J}
    return {"K": grid.K, "J": grid.J}


def level_errors(
    case: ExampleCase, history: Union[SolutionHistory, SolutionHistory2D]
) -> np.ndarray:
    """max_k |u(x_k, sigma_j) - u^j_k| for each level j."""
    grid = history.grid
    errors = np.empty(history.levels + 1)
    if isinstance(grid, Grid2D):
        X, Y = grid.mesh()
        for j, t in enumerate(grid.t[:history.levels + 1]):
            errors[j] = np.max(np.abs(case.exact(X, Y, t) - history.values[j]))
    else:
        x = grid.x
        for j, t in enumerate(grid.t[:history.levels + 1]):
            errors[j] = np.max(np.abs(case.exact(x, t) - history.values[j]))
    return errors


def solve_case(case: ExampleCase, grid: Optional[Grid] = None, richardson: bool = True):
    grid = grid or case.default_grid()
    problem = case.build_problem()
    if case.dimension == 2:
        if not isinstance(grid, Grid2D):
            raise DomainError(f"{case.id.value} is two-dimensional, got a 1D grid")
        return solve_2d(problem, grid, richardson)
    if not isinstance(grid, Grid1D):
        raise DomainError(f"{case.id.value} is one-dimensional, got a 2D grid")
    return solve(problem, grid, richardson)


def run_case(
    case: ExampleCase, grid: Optional[Grid] = None, richardson: bool = True
) -> ErrorReport:
    """
    Solve a catalog case and measure gimel on every mesh node.

    Args:
        case: manufactured problem
        grid: mesh; the case's default grid when omitted
        richardson: combine marches with J and 2J steps
    """
    grid = grid or case.default_grid()
    started = time.perf_counter()
    history = solve_case(case, grid, richardson)
    errors = level_errors(case, history)
    seconds = time.perf_counter() - started
    report = ErrorReport(
        case=case.id.value,
        nu1=case.nu1,
        nu2=case.nu2,
        gimel=float(np.max(errors)),
        level_errors=errors,
        grid=grid_summary(grid),
        richardson=richardson,
        seconds=seconds,
        T=case.T,
        rho2=case.rho2,
        reference=case.reference_gimel,
    )
    logger.info(
        f"{case.label}: gimel={report.gimel:.4e} (reference {report.reference}) in {seconds:.2f}s"
    )
    return report


class RefinementAxis(Enum):
    TIME = "time"
    SPACE = "space"


@dataclass
class ConvergenceRow:
    grid: Dict[str, float]
    step: float
    gimel: float
    order: float


def _refine(grid: Grid, axis: RefinementAxis) -> Grid:
    return grid.refined_time() if axis is RefinementAxis.TIME else grid.refined_space()


def _step(grid: Grid, axis: RefinementAxis) -> float:
    if axis is RefinementAxis.TIME:
        return grid.sigma
    return grid.hx if isinstance(grid, Grid2D) else grid.h


def convergence_study(
    case: ExampleCase,
    base_grid: Grid,
    refinements: int,
    axis: Union[str, RefinementAxis] = RefinementAxis.TIME,
    richardson: bool = False,
) -> List[ConvergenceRow]:
    """
    Halve the step of one axis repeatedly; order_i = log2(gimel_{i-1} / gimel_i).

    The first row is the base grid and carries order NaN.
    """
    if refinements < 2:
        raise DomainError(f"a convergence study needs at least 2 grids, got {refinements}")
    axis = RefinementAxis(axis)
    rows: List[ConvergenceRow] = []
    grid = base_grid
    for i in range(refinements):
        report = run_case(case, grid, richardson)
        order = math.nan
        if rows and report.gimel > 0 and rows[-1].gimel > 0:
            order = math.log2(rows[-1].gimel / report.gimel)
        rows.append(ConvergenceRow(grid_summary(grid), _step(grid, axis), report.gimel, order))
        logger.info(
            f"{case.label} {axis.value} step {rows[-1].step:.4g}: "
            f"gimel={report.gimel:.4e} order={order:.3f}"
        )
        grid = _refine(grid, axis)
    return rows
