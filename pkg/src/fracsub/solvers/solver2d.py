#!/usr/bin/env python3
# SPDX-License-Identifier: MIT
# Copyright (c) 2025 fracsub contributors
"""
Implicit five-point solver for the two-dimensional problem

    rho1 D^nu1 u - rho2 D^nu2 u - a1 u_xx - a2 u_yy + d1 u_x + d2 u_y
        - K * (b1 u_xx + b2 u_yy) = f      on (0, Lx) x (0, Ly)

with u = 0 on x = 0, Lx and either u_y = 0 (default) or u = 0 on y = 0, Ly.

Unknowns are the nodes not pinned by a Dirichlet edge, numbered row-major
(x fastest), so the per-level matrix is banded with half-bandwidth Kx - 1.
Histories are stored as values[j, l, k] = u(x_k, y_l, sigma_j).
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, List

import numpy as np

from ..errors import DomainError, ShapeError
from ..numerics.fracops import MemoryKernel, ZeroKernel, richardson_combine
from ..numerics.linalg import BandedSystem, solve_banded
from .base import TimeMarcher, evaluate_field, require_positive
from .solver1d import COMPATIBILITY_TOL, Diagnostic

logger = logging.getLogger(__name__)

Y_BOUNDARIES = ("neumann", "dirichlet")


@dataclass(frozen=True)
class Problem2D:
    """
    Data of the 2D problem. rho1(x, y) and u0(x, y); every other coefficient
    is a vectorised function of (x, y, t).
    """
    nu1: float
    nu2: float
    rho1: Callable
    rho2: Callable
    a1: Callable
    a2: Callable
    d1: Callable
    d2: Callable
    b1: Callable
    b2: Callable
    f: Callable
    u0: Callable
    kernel: MemoryKernel = field(default_factory=ZeroKernel)
    Lx: float = 1.0
    Ly: float = 1.0
    T: float = 1.0
    y_boundary: str = "neumann"
    name: str = "problem2d"

    def __post_init__(self):
        if not 0.0 < self.nu2 < self.nu1 <= 1.0:
            raise DomainError(
                f"orders must satisfy 0 < nu2 < nu1 <= 1, got nu1={self.nu1}, nu2={self.nu2}"
            )
        if not (self.Lx > 0 and self.Ly > 0 and self.T > 0):
            raise DomainError(f"Lx, Ly, T must be > 0, got {self.Lx}, {self.Ly}, {self.T}")
        if self.y_boundary not in Y_BOUNDARIES:
            raise DomainError(f"y_boundary must be one of {Y_BOUNDARIES}, got '{self.y_boundary}'")


@dataclass(frozen=True)
class Grid2D:
    Kx: int
    Ky: int
    J: int
    Lx: float = 1.0
    Ly: float = 1.0
    T: float = 1.0

    def __post_init__(self):
        if self.Kx < 2 or self.Ky < 2:
            raise DomainError(f"Kx and Ky must be >= 2, got {self.Kx}, {self.Ky}")
        if self.J < 1:
            raise DomainError(f"J must be >= 1, got {self.J}")

    @classmethod
    def for_problem(cls, problem: Problem2D, Kx: int, Ky: int, J: int) -> "Grid2D":
        return cls(Kx, Ky, J, problem.Lx, problem.Ly, problem.T)

    @property
    def hx(self) -> float:
        return self.Lx / self.Kx

    @property
    def hy(self) -> float:
        return self.Ly / self.Ky

    @property
    def sigma(self) -> float:
        return self.T / self.J

    @property
    def x(self) -> np.ndarray:
        return self.hx * np.arange(self.Kx + 1)

    @property
    def y(self) -> np.ndarray:
        return self.hy * np.arange(self.Ky + 1)

    @property
    def t(self) -> np.ndarray:
        return self.sigma * np.arange(self.J + 1)

    def mesh(self):
        """X, Y of shape (Ky+1, Kx+1)."""
        return np.meshgrid(self.x, self.y, indexing="xy")

    def refined_time(self) -> "Grid2D":
        return Grid2D(self.Kx, self.Ky, 2 * self.J, self.Lx, self.Ly, self.T)

    def refined_space(self) -> "Grid2D":
        return Grid2D(2 * self.Kx, 2 * self.Ky, self.J, self.Lx, self.Ly, self.T)


@dataclass
class SolutionHistory2D:
    """values[j, l, k] for j = 0..J, l = 0..Ky, k = 0..Kx."""
    grid: Grid2D
    values: np.ndarray
    richardson: bool = False
    seconds: float = 0.0

    def __post_init__(self):
        g = self.grid
        if self.values.shape[1:] != (g.Ky + 1, g.Kx + 1) or self.values.shape[0] > g.J + 1:
            expected = (g.J + 1, g.Ky + 1, g.Kx + 1)
            raise ShapeError(f"history shape {self.values.shape} does not fit grid {expected}")

    @property
    def levels(self) -> int:
        return self.values.shape[0] - 1

    @property
    def final(self) -> np.ndarray:
        return self.values[-1]

    def level(self, j: int) -> np.ndarray:
        return self.values[j]


def validate_compatibility_2d(
    p: Problem2D, g: Grid2D, tol: float = COMPATIBILITY_TOL
) -> List[Diagnostic]:
    """u0 must vanish on the Dirichlet edges and have u0_y = 0 on Neumann edges."""
    X, Y = g.mesh()
    diagnostics = []
    try:
        u0 = np.broadcast_to(np.asarray(p.u0(X, Y), dtype=float), X.shape)
        edges = {"x=0": u0[:, 0], f"x={p.Lx:g}": u0[:, -1]}
        if p.y_boundary == "dirichlet":
            edges.update({"y=0": u0[0, :], f"y={p.Ly:g}": u0[-1, :]})
        for location, values in edges.items():
            worst = float(np.max(np.abs(values)))
            if worst > tol:
                diagnostics.append(Diagnostic(location, "u0 = 0", worst))
        if p.y_boundary == "neumann":
            step = 1e-3
            x = g.x
            for location, y0, direction in (("y=0", 0.0, 1), (f"y={p.Ly:g}", p.Ly, -1)):
                h = direction * step
                v = [
                    np.broadcast_to(np.asarray(p.u0(x, y0 + i * h), dtype=float), x.shape)
                    for i in range(5)
                ]
                du = (-25 * v[0] + 48 * v[1] - 36 * v[2] + 16 * v[3] - 3 * v[4]) / (12 * h)
                worst = float(np.max(np.abs(du)))
                if worst > tol:
                    diagnostics.append(Diagnostic(location, "u0_y = 0", worst))
    except Exception as exc:  # diagnostics only
        logger.warning(f"2D compatibility check could not run: {exc}")
    for diag in diagnostics:
        logger.warning(f"compatibility: {diag}")
    return diagnostics


class Solver2D(TimeMarcher):
    """Marches the 2D scheme; one banded LU per level."""

    def __init__(self, problem: Problem2D, grid: Grid2D):
        """
        Args:
            problem: equation data
            grid: mesh matching the problem's Lx, Ly, T
        """
        if not (np.isclose(grid.Lx, problem.Lx) and np.isclose(grid.Ly, problem.Ly)
                and np.isclose(grid.T, problem.T)):
            raise DomainError("grid extents do not match the problem")
        super().__init__(problem.nu1, problem.nu2, problem.kernel, problem.T, grid.J)
        self.problem = problem
        self.grid = grid
        self.neumann_y = problem.y_boundary == "neumann"
        self.rows = slice(0, grid.Ky + 1) if self.neumann_y else slice(1, grid.Ky)
        self.cols = slice(1, grid.Kx)
        self.nx = grid.Kx - 1
        self.ny = grid.Ky + 1 if self.neumann_y else grid.Ky - 1
        X, Y = grid.mesh()
        self.X, self.Y = X, Y
        self.Xb, self.Yb = X[self.rows, self.cols], Y[self.rows, self.cols]
        self.coords = (self.Xb, self.Yb)

        self.full = np.zeros((grid.J + 1, grid.Ky + 1, grid.Kx + 1))
        self.full[0] = evaluate_field("u0", problem.u0, (X, Y), (X, Y), level=0)
        # unknown block history
        self.u = np.array(self.full[:, self.rows, self.cols])
        self.u0 = self.u[0].copy()
        self.rho1 = evaluate_field("rho1", problem.rho1, (self.Xb, self.Yb), self.coords, level=0)
        require_positive("rho1", self.rho1, self.coords, level=0)
        self.bv = np.zeros_like(self.u)
        if self.has_memory:
            self.bv[0] = self._memory_product(0)

    def _second_differences(self, u_full: np.ndarray):
        """u_xx and u_yy on the unknown block; Neumann edges reflect u_{k,-1} = u_{k,1}."""
        hx, hy = self.grid.hx, self.grid.hy
        if self.neumann_y:
            ext = np.concatenate((u_full[1:2], u_full, u_full[-2:-1]), axis=0)
        else:
            ext = u_full
        vxx = (u_full[:, :-2] - 2 * u_full[:, 1:-1] + u_full[:, 2:])[self.rows] / hx ** 2
        vyy = (ext[:-2] - 2 * ext[1:-1] + ext[2:])[:, self.cols] / hy ** 2
        return vxx, vyy

    def _memory_product(self, m: int, b=None) -> np.ndarray:
        t = self.time(m)
        if b is None:
            b1 = evaluate_field("b1", self.problem.b1, (self.Xb, self.Yb, t), self.coords, m)
            b2 = evaluate_field("b2", self.problem.b2, (self.Xb, self.Yb, t), self.coords, m)
        else:
            b1, b2 = b
        vxx, vyy = self._second_differences(self.full[m])
        return b1 * vxx + b2 * vyy

    def assemble(self, j: int) -> BandedSystem:
        """Banded system of level j+1 in the row-major numbering of the unknown block."""
        p = self.problem
        g = self.grid
        t = self.time(j + 1)
        lvl = j + 1
        args = (self.Xb, self.Yb, t)
        a1 = evaluate_field("a1", p.a1, args, self.coords, lvl)
        a2 = evaluate_field("a2", p.a2, args, self.coords, lvl)
        require_positive("a1", a1, self.coords, lvl, t)
        require_positive("a2", a2, self.coords, lvl, t)
        d1 = evaluate_field("d1", p.d1, args, self.coords, lvl)
        d2 = evaluate_field("d2", p.d2, args, self.coords, lvl)
        rho2 = evaluate_field("rho2", p.rho2, args, self.coords, lvl)
        f = evaluate_field("f", p.f, args, self.coords, lvl)

        A1, A2 = a1 / g.hx ** 2, a2 / g.hy ** 2
        D1, D2 = d1 / (2 * g.hx), d2 / (2 * g.hy)
        diag, rhs = self.fractional_terms(j, self.rho1, rho2)
        diag = diag + 2 * A1 + 2 * A2
        west, east = -A1 - D1, -A1 + D1
        south, north = -A2 - D2, -A2 + D2
        rhs = rhs + f
        if self.has_memory:
            b1 = evaluate_field("b1", p.b1, args, self.coords, lvl)
            b2 = evaluate_field("b2", p.b2, args, self.coords, lvl)
            self._b_next = (b1, b2)
            M1 = b1 * self.kappa0 / (2 * g.hx ** 2)
            M2 = b2 * self.kappa0 / (2 * g.hy ** 2)
            diag = diag + 2 * M1 + 2 * M2
            west, east = west - M1, east - M1
            south, north = south - M2, north - M2
            rhs = rhs + self.memory_rhs(j)

        # homogeneous Dirichlet x-edges: neighbours outside the block are zero
        west[:, 0] = 0.0
        east[:, -1] = 0.0
        if self.neumann_y:
            north[0] += south[0]
            south[0] = 0.0
            south[-1] += north[-1]
            north[-1] = 0.0
        else:
            south[0] = 0.0
            north[-1] = 0.0

        n, nx = self.nx * self.ny, self.nx
        ab = np.zeros((2 * nx + 1, n))
        ab[nx] = diag.ravel()
        ab[nx - 1, 1:] = east.ravel()[:-1]
        ab[nx + 1, :-1] = west.ravel()[1:]
        # for nx == 1 these rows coincide with the y-neighbour rows; x-neighbours are zero then
        ab[0, nx:] = north.ravel()[:-nx]
        ab[2 * nx, :-nx] = south.ravel()[nx:]
        return BandedSystem(n=n, p=nx, ab=ab, rhs=rhs.ravel())

    def step(self, j: int) -> np.ndarray:
        system = self.assemble(j)
        block = solve_banded(system).reshape(self.ny, self.nx)
        self.u[j + 1] = block
        self.full[j + 1, self.rows, self.cols] = block
        if self.has_memory:
            self.bv[j + 1] = self._memory_product(j + 1, self._b_next)
        return self.full[j + 1]

    def load(self, hist: SolutionHistory2D, j: int):
        """Adopt levels 0..j of an existing history (same grid)."""
        if hist.levels < j:
            raise ShapeError(f"history holds {hist.levels} levels, level {j} requested")
        self.full[:j + 1] = hist.values[:j + 1]
        self.u[:j + 1] = self.full[:j + 1, self.rows, self.cols]
        if self.has_memory:
            for m in range(1, j + 1):
                self.bv[m] = self._memory_product(m)
        self.levels_done = j

    def history(self) -> SolutionHistory2D:
        return SolutionHistory2D(self.grid, self.full[:self.levels_done + 1].copy())

    def march(self) -> np.ndarray:
        super().march()
        return self.full


def assemble_level_2d(p: Problem2D, g: Grid2D, hist: SolutionHistory2D, j: int) -> BandedSystem:
    """Assemble the level j+1 system from levels 0..j of ``hist``."""
    solver = Solver2D(p, g)
    solver.load(hist, j)
    return solver.assemble(j)


def initial_history_2d(p: Problem2D, g: Grid2D) -> SolutionHistory2D:
    return Solver2D(p, g).history()


def solve_2d(p: Problem2D, g: Grid2D, richardson: bool = True) -> SolutionHistory2D:
    """March the 2D scheme; Richardson combines the J and 2J marches level by level."""
    started = time.perf_counter()
    validate_compatibility_2d(p, g)
    values = Solver2D(p, g).march()
    if richardson:
        fine = Solver2D(p, g.refined_time()).march()
        values = richardson_combine(values, fine[::2], order=1)
    seconds = time.perf_counter() - started
    logger.info(
        f"solved {p.name}: Kx={g.Kx} Ky={g.Ky} J={g.J} nu1={p.nu1:g} nu2={p.nu2:g} "
        f"y={p.y_boundary} richardson={'on' if richardson else 'off'} in {seconds:.2f}s"
    )
    return SolutionHistory2D(g, values, richardson=richardson, seconds=seconds)
