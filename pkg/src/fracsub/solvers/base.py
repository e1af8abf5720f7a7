#!/usr/bin/env python3
# SPDX-License-Identifier: MIT
# Copyright (c) 2025 fracsub contributors
"""
Shared machinery of the implicit time marchers.

A marcher owns the dense history of its unknowns (levels 0..J), the GL weight
tables of both orders and the lag table of the memory kernel. Each level
j+1 is produced from levels 0..j by one linear solve.
"""

import logging
import time
from abc import ABC, abstractmethod
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from ..errors import FracsubError, SolverError
from ..numerics.fracops import (
    MemoryKernel,
    caputo_history,
    endpoint_weight,
    gl_weights,
    lag_integrals,
    memory_explicit,
)

logger = logging.getLogger(__name__)


def evaluate_field(
    name: str,
    func: Callable,
    args: Sequence,
    coords: Tuple[np.ndarray, ...],
    level: Optional[int] = None,
) -> np.ndarray:
    """
    Evaluate a coefficient on a node set and broadcast it to the node shape.

    Args:
        name: coefficient name used in error messages
        func: vectorised callable
        args: positional arguments (node arrays and, if time dependent, the time)
        coords: node coordinate arrays, all of the node shape
        level: time level being assembled

    Raises:
        SolverError: evaluation failed or produced non-finite values; the
            message names the first offending node
    """
    shape = np.shape(coords[0])
    try:
        with np.errstate(all="ignore"):
            values = np.array(np.broadcast_to(np.asarray(func(*args), dtype=float), shape))
    except SolverError:
        raise
    except (FracsubError, ArithmeticError, ValueError, TypeError) as exc:
        raise SolverError(f"evaluating {name} failed: {exc}", level=level) from exc
    bad = ~np.isfinite(values)
    if bad.any():
        idx = tuple(np.argwhere(bad)[0])
        raise SolverError(f"{name} is not finite", level=level, node=_node(coords, idx, args))
    return values


def require_positive(name: str, values: np.ndarray, coords, level: Optional[int] = None, t=None):
    bad = ~(values > 0)
    if bad.any():
        idx = tuple(np.argwhere(bad)[0])
        node = tuple(float(c[idx]) for c in coords)
        if t is not None:
            node = node + (float(t),)
        raise SolverError(f"{name} must be positive, got {values[idx]:.6g}", level=level, node=node)


def _node(coords, idx, args) -> Tuple[float, ...]:
    node = tuple(float(c[idx]) for c in coords)
    # trailing scalar argument is the time
    if args and np.ndim(args[-1]) == 0:
        node = node + (float(args[-1]),)
    return node


class TimeMarcher(ABC):
    """
    Base class of the 1D and 2D marchers.

    Subclasses fill ``self.u`` (levels, *node_shape) and ``self.bv`` (the
    products b v entering the memory sum) and implement ``step``.
    """

    def __init__(self, nu1: float, nu2: float, kernel: MemoryKernel, T: float, J: int):
        """
        Args:
            nu1: leading fractional order
            nu2: second fractional order
            kernel: memory kernel descriptor
            T: final time
            J: number of time steps
        """
        self.nu1 = nu1
        self.nu2 = nu2
        self.kernel = kernel
        self.J = J
        self.sigma = T / J
        self.w1 = gl_weights(nu1, J + 1)
        self.w2 = gl_weights(nu2, J + 1)
        self.has_memory = not kernel.is_zero
        self.lags = lag_integrals(kernel, self.sigma, J + 1)
        self.kappa0 = endpoint_weight(self.lags) if self.has_memory else 0.0
        self.u: np.ndarray
        self.bv: np.ndarray
        self.u0: np.ndarray
        self.levels_done = 0

    def time(self, j: int) -> float:
        return j * self.sigma

    def fractional_terms(self, j: int, rho1: np.ndarray, rho2: np.ndarray):
        """
        Split the two discrete Caputo sums at level j+1 into the u^{j+1}
        coefficient and the known right-hand side part.
        """
        past = self.u[:j + 1]
        s1 = caputo_history(past, self.u0, self.w1)
        s2 = caputo_history(past, self.u0, self.w2)
        alpha1 = rho1 * self.sigma ** (-self.nu1)
        alpha2 = rho2 * self.sigma ** (-self.nu2)
        diag = alpha1 - alpha2
        rhs = alpha1 * (self.u0 - s1) - alpha2 * (self.u0 - s2)
        return diag, rhs

    def memory_rhs(self, j: int) -> np.ndarray:
        """Known part of the trapezoid memory sum at level j."""
        return memory_explicit(self.bv[:j + 1], self.lags, j)

    @abstractmethod
    def step(self, j: int) -> np.ndarray:
        """Compute level j+1 from levels 0..j and store it."""

    def march(self) -> np.ndarray:
        """Run all remaining levels; returns the full history array."""
        started = time.perf_counter()
        for j in range(self.levels_done, self.J):
            try:
                self.step(j)
            except SolverError as exc:
                if exc.level is None:
                    raise SolverError(str(exc), level=j + 1) from exc
                raise
            except FracsubError as exc:
                raise SolverError(f"{type(exc).__name__}: {exc}", level=j + 1) from exc
            self.levels_done = j + 1
            logger.debug(f"level {j + 1}/{self.J} done, max|u|={np.max(np.abs(self.u[j + 1])):.6g}")
        logger.debug(f"march of {self.J} levels took {time.perf_counter() - started:.3f}s")
        return self.u
