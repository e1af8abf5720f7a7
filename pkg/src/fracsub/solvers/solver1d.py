#!/usr/bin/env python3
# SPDX-License-Identifier: MIT
# Copyright (c) 2025 fracsub contributors
"""
Implicit finite-difference solver for the one-dimensional problem

    rho1(x) D^nu1 u - rho2(x,t) D^nu2 u - a(x,t) u_xx + d(x,t) u_x - K * (b u_xx) = f
    u(x, 0) = u0(x)
    c1 u_x(0,t) + c2 u(0,t) = phi1(t),   c3 u_x(L,t) + c4 u(L,t) = phi2(t)

on the mesh x_k = k h, sigma_j = j sigma. Both Caputo derivatives use GL sums,
the memory integral uses the trapezoid rule with exact kernel integrals and
the boundary conditions are closed with one fictitious node on each side.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np
import pandas as pd

from ..errors import DomainError, ShapeError
from ..numerics.fracops import MemoryKernel, ZeroKernel, richardson_combine
from ..numerics.linalg import TridiagonalSystem, solve_tridiagonal
from .base import TimeMarcher, evaluate_field, require_positive

logger = logging.getLogger(__name__)

# compatibility residuals below this are not reported
COMPATIBILITY_TOL = 1e-6
_DIFF_STEP = 1e-3


def constant(value: float) -> Callable:
    """Vectorised constant coefficient."""
    value = float(value)

    def _const(*args):
        return value

    _const.__name__ = f"const_{value:g}"
    return _const


@dataclass(frozen=True)
class RobinCondition:
    """c_dx * u_x + c_u * u = phi(t) at one end; c_dx = 0 is a Dirichlet end."""
    c_dx: float
    c_u: float
    phi: Callable = field(default_factory=lambda: constant(0.0))

    def __post_init__(self):
        if self.c_dx == 0 and self.c_u == 0:
            raise DomainError("boundary condition needs c_dx != 0 or c_u != 0")

    @property
    def is_dirichlet(self) -> bool:
        return self.c_dx == 0

    def value(self, t: float) -> float:
        return float(np.asarray(self.phi(t), dtype=float))

    @classmethod
    def neumann(cls, phi: Optional[Callable] = None) -> "RobinCondition":
        return cls(1.0, 0.0, phi or constant(0.0))

    @classmethod
    def dirichlet(cls, phi: Optional[Callable] = None) -> "RobinCondition":
        return cls(0.0, 1.0, phi or constant(0.0))


@dataclass(frozen=True)
class Problem1D:
    """
    Data of the 1D problem. Coefficients are vectorised callables:
    rho1(x), u0(x) and rho2, a, d, b, f as functions of (x, t).
    """
    nu1: float
    nu2: float
    rho1: Callable
    rho2: Callable
    a: Callable
    d: Callable
    b: Callable
    f: Callable
    u0: Callable
    left: RobinCondition
    right: RobinCondition
    kernel: MemoryKernel = field(default_factory=ZeroKernel)
    L: float = 1.0
    T: float = 1.0
    name: str = "problem"

    def __post_init__(self):
        if not 0.0 < self.nu2 < self.nu1 <= 1.0:
            raise DomainError(
                f"orders must satisfy 0 < nu2 < nu1 <= 1, got nu1={self.nu1}, nu2={self.nu2}"
            )
        if not self.L > 0:
            raise DomainError(f"domain length must be > 0, got {self.L}")
        if not self.T > 0:
            raise DomainError(f"final time must be > 0, got {self.T}")


@dataclass(frozen=True)
class Grid1D:
    """Uniform space-time mesh with K intervals in x and J steps in t."""
    K: int
    J: int
    L: float = 1.0
    T: float = 1.0

    def __post_init__(self):
        if self.K < 2:
            raise DomainError(f"K must be >= 2, got {self.K}")
        if self.J < 1:
            raise DomainError(f"J must be >= 1, got {self.J}")

    @classmethod
    def for_problem(cls, problem: Problem1D, K: int, J: int) -> "Grid1D":
        return cls(K=K, J=J, L=problem.L, T=problem.T)

    @property
    def h(self) -> float:
        return self.L / self.K

    @property
    def sigma(self) -> float:
        return self.T / self.J

    @property
    def x(self) -> np.ndarray:
        return self.h * np.arange(self.K + 1)

    @property
    def t(self) -> np.ndarray:
        return self.sigma * np.arange(self.J + 1)

    def refined_time(self) -> "Grid1D":
        return Grid1D(self.K, 2 * self.J, self.L, self.T)

    def refined_space(self) -> "Grid1D":
        return Grid1D(2 * self.K, self.J, self.L, self.T)


@dataclass
class SolutionHistory:
    """u^j_k for j = 0..J (rows) and k = 0..K (columns)."""
    grid: Grid1D
    values: np.ndarray
    richardson: bool = False
    seconds: float = 0.0

    def __post_init__(self):
        expected = (self.grid.J + 1, self.grid.K + 1)
        if self.values.shape[1:] != expected[1:] or self.values.shape[0] > expected[0]:
            raise ShapeError(f"history shape {self.values.shape} does not fit grid {expected}")

    @property
    def levels(self) -> int:
        return self.values.shape[0] - 1

    @property
    def final(self) -> np.ndarray:
        return self.values[-1]

    def level(self, j: int) -> np.ndarray:
        return self.values[j]

    def to_frame(self) -> pd.DataFrame:
        """Rows indexed by t, columns by the x nodes."""
        frame = pd.DataFrame(self.values, columns=self.grid.x)
        frame.index = pd.Index(self.grid.t[:self.values.shape[0]], name="t")
        return frame


@dataclass(frozen=True)
class Diagnostic:
    """A violated compatibility condition at t = 0."""
    location: str
    condition: str
    magnitude: float

    def __str__(self) -> str:
        return f"{self.location}: {self.condition} violated by {self.magnitude:.3e}"


def _endpoint_derivative(func: Callable, x0: float, direction: int) -> float:
    """Fourth-order one-sided first derivative stepping into the domain."""
    h = direction * _DIFF_STEP
    pts = x0 + h * np.arange(5)
    v = np.asarray(func(pts), dtype=float) * np.ones(5)
    return float((-25 * v[0] + 48 * v[1] - 36 * v[2] + 16 * v[3] - 3 * v[4]) / (12 * h))


def validate_compatibility(p: Problem1D, tol: float = COMPATIBILITY_TOL) -> List[Diagnostic]:
    """
    Check the boundary data against u0 at t = 0; never raises.

    Dirichlet ends need c_u u0 = phi(0); Robin ends need c_dx u0' + c_u u0 = phi(0).
    """
    diagnostics = []
    for location, x0, bc, direction in (("x=0", 0.0, p.left, 1), (f"x={p.L:g}", p.L, p.right, -1)):
        try:
            u_end = float(np.asarray(p.u0(np.array([x0])), dtype=float).ravel()[0])
            phi0 = bc.value(0.0)
            if bc.is_dirichlet:
                residual = bc.c_u * u_end - phi0
                condition = "c_u*u0 = phi(0)"
            else:
                du = _endpoint_derivative(p.u0, x0, direction)
                residual = bc.c_dx * du + bc.c_u * u_end - phi0
                condition = "c_dx*u0' + c_u*u0 = phi(0)"
        except Exception as exc:  # diagnostics only
            logger.warning(f"compatibility check at {location} could not run: {exc}")
            continue
        if abs(residual) > tol:
            diag = Diagnostic(location, condition, abs(residual))
            logger.warning(f"compatibility: {diag}")
            diagnostics.append(diag)
    return diagnostics


class Solver1D(TimeMarcher):
    """Marches the 1D scheme level by level on one grid."""

    def __init__(self, problem: Problem1D, grid: Grid1D):
        """
        Args:
            problem: equation data
            grid: mesh; its L and T must match the problem
        """
        if not (np.isclose(grid.L, problem.L) and np.isclose(grid.T, problem.T)):
            raise DomainError(
                f"grid (L={grid.L}, T={grid.T}) does not match problem "
                f"(L={problem.L}, T={problem.T})"
            )
        super().__init__(problem.nu1, problem.nu2, problem.kernel, problem.T, grid.J)
        self.problem = problem
        self.grid = grid
        self.h = grid.h
        self.x = grid.x
        self.coords = (self.x,)
        self.rho1 = evaluate_field("rho1", problem.rho1, (self.x,), self.coords, level=0)
        require_positive("rho1", self.rho1, self.coords, level=0)
        self.u = np.zeros((grid.J + 1, grid.K + 1))
        self.u[0] = evaluate_field("u0", problem.u0, (self.x,), self.coords, level=0)
        self.u0 = self.u[0].copy()
        self.bv = np.zeros_like(self.u)
        if self.has_memory:
            self.bv[0] = self._memory_product(0)

    # ---- boundary closure ----

    def _ghosts(self, u: np.ndarray, t: float):
        """Fictitious values u_{-1}, u_{K+1} consistent with the boundary conditions at t."""
        h = self.h
        left, right = self.problem.left, self.problem.right
        if left.is_dirichlet:
            g_left = 2 * u[0] - u[1]
        else:
            g_left = u[1] - (2 * h / left.c_dx) * (left.value(t) - left.c_u * u[0])
        if right.is_dirichlet:
            g_right = 2 * u[-1] - u[-2]
        else:
            g_right = u[-2] + (2 * h / right.c_dx) * (right.value(t) - right.c_u * u[-1])
        return g_left, g_right

    def second_difference(self, u: np.ndarray, t: float) -> np.ndarray:
        """(u_{k-1} - 2 u_k + u_{k+1}) / h^2 at every node, ghosts from the BCs."""
        g_left, g_right = self._ghosts(u, t)
        ext = np.concatenate(([g_left], u, [g_right]))
        return (ext[:-2] - 2 * ext[1:-1] + ext[2:]) / self.h ** 2

    def _memory_product(self, m: int, b: Optional[np.ndarray] = None) -> np.ndarray:
        t = self.time(m)
        if b is None:
            b = evaluate_field("b", self.problem.b, (self.x, t), self.coords, level=m)
        return b * self.second_difference(self.u[m], t)

    # ---- assembly ----

    def assemble(self, j: int) -> TridiagonalSystem:
        """Tridiagonal system for level j+1 given levels 0..j."""
        p = self.problem
        x, h, t = self.x, self.h, self.time(j + 1)
        lvl = j + 1
        a = evaluate_field("a", p.a, (x, t), self.coords, lvl)
        require_positive("a", a, self.coords, lvl, t)
        d = evaluate_field("d", p.d, (x, t), self.coords, lvl)
        rho2 = evaluate_field("rho2", p.rho2, (x, t), self.coords, lvl)
        f = evaluate_field("f", p.f, (x, t), self.coords, lvl)

        A = a / h ** 2
        D = d / (2 * h)
        diag, rhs = self.fractional_terms(j, self.rho1, rho2)
        diag = diag + 2 * A
        low = -A - D
        up = -A + D
        rhs = rhs + f
        if self.has_memory:
            b = evaluate_field("b", p.b, (x, t), self.coords, lvl)
            self._b_next = b
            M = b * self.kappa0 / (2 * h ** 2)
            diag = diag + 2 * M
            low = low - M
            up = up - M
            rhs = rhs + self.memory_rhs(j)

        self._close_boundaries(diag, low, up, rhs, t)
        return TridiagonalSystem(sub=low[1:], diag=diag, sup=up[:-1], rhs=rhs)

    def _close_boundaries(self, diag, low, up, rhs, t):
        h = self.h
        left, right = self.problem.left, self.problem.right
        if left.is_dirichlet:
            diag[0], up[0], rhs[0] = 1.0, 0.0, left.value(t) / left.c_u
        else:
            # u_{-1} = u_1 - (2h/c1)(phi1 - c2 u_0)
            l0 = low[0]
            up[0] += l0
            diag[0] += l0 * 2 * h * left.c_u / left.c_dx
            rhs[0] += l0 * 2 * h * left.value(t) / left.c_dx
        if right.is_dirichlet:
            diag[-1], low[-1], rhs[-1] = 1.0, 0.0, right.value(t) / right.c_u
        else:
            # u_{K+1} = u_{K-1} + (2h/c3)(phi2 - c4 u_K)
            uk = up[-1]
            low[-1] += uk
            diag[-1] -= uk * 2 * h * right.c_u / right.c_dx
            rhs[-1] -= uk * 2 * h * right.value(t) / right.c_dx

    def step(self, j: int) -> np.ndarray:
        system = self.assemble(j)
        self.u[j + 1] = solve_tridiagonal(system)
        if self.has_memory:
            self.bv[j + 1] = self._memory_product(j + 1, self._b_next)
        return self.u[j + 1]

    def load(self, hist: SolutionHistory, j: int):
        """Adopt levels 0..j of an existing history (same grid)."""
        if hist.levels < j:
            raise ShapeError(f"history holds {hist.levels} levels, level {j} requested")
        self.u[:j + 1] = hist.values[:j + 1]
        if self.has_memory:
            for m in range(1, j + 1):
                self.bv[m] = self._memory_product(m)
        self.levels_done = j

    def history(self) -> SolutionHistory:
        return SolutionHistory(self.grid, self.u[:self.levels_done + 1].copy())


def assemble_level(p: Problem1D, g: Grid1D, hist: SolutionHistory, j: int) -> TridiagonalSystem:
    """Assemble the level j+1 system from levels 0..j of ``hist``."""
    solver = Solver1D(p, g)
    solver.load(hist, j)
    return solver.assemble(j)


def step(p: Problem1D, g: Grid1D, hist: SolutionHistory, j: int) -> np.ndarray:
    """Values of level j+1 from levels 0..j of ``hist``."""
    solver = Solver1D(p, g)
    solver.load(hist, j)
    return solver.step(j).copy()


def initial_history(p: Problem1D, g: Grid1D) -> SolutionHistory:
    return Solver1D(p, g).history()


def _march(p: Problem1D, g: Grid1D) -> np.ndarray:
    solver = Solver1D(p, g)
    return solver.march()


def solve(p: Problem1D, g: Grid1D, richardson: bool = True) -> SolutionHistory:
    """
    March levels 1..J. With Richardson on, the march is repeated with 2J steps
    and coinciding levels are combined as 2 u_fine - u_coarse.
    """
    started = time.perf_counter()
    validate_compatibility(p)
    values = _march(p, g)
    if richardson:
        fine = _march(p, g.refined_time())
        values = richardson_combine(values, fine[::2], order=1)
    seconds = time.perf_counter() - started
    logger.info(
        f"solved {p.name}: K={g.K} J={g.J} nu1={p.nu1:g} nu2={p.nu2:g} "
        f"richardson={'on' if richardson else 'off'} in {seconds:.2f}s"
    )
    return SolutionHistory(g, values, richardson=richardson, seconds=seconds)
