#!/usr/bin/env python3
# SPDX-License-Identifier: MIT
# Copyright (c) 2025 fracsub contributors
"""
Numeric residual of the continuous operator applied to an exact solution.

Substitutes the closed-form solution of a catalog case into the equation and
compares with the forcing at random interior points:

- Caputo derivatives as (1/Gamma(1-nu)) d/dt of the weakly singular integral
  of (t-s)^(-nu) (u(s) - u(0)), computed by scipy's algebraic-weight
  quadrature and a five-point time derivative
- spatial derivatives by fourth-order central differences
- the memory convolution by algebraic-weight quadrature for power and omega
  kernels, adaptive quadrature otherwise
"""

import logging
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Tuple

import numpy as np
from scipy import integrate

from ..numerics.fracops import CallableKernel, MemoryKernel, OmegaKernel, PowerKernel
from ..errors import SolverError
from ..numerics.special import gamma
from .catalog import ExampleCase

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-6
_SPACE_STEP = 1e-3
_QUAD = {"epsabs": 1e-13, "epsrel": 1e-12, "limit": 500}


@dataclass(frozen=True)
class ResidualSample:
    point: Tuple[float, ...]
    forcing: float
    operator: float

    @property
    def residual(self) -> float:
        return abs(self.operator - self.forcing)

    def passes(self, tol: float) -> bool:
        return self.residual <= tol


@dataclass
class ResidualReport:
    case: str
    samples: List[ResidualSample]
    tol: float

    @property
    def passed(self) -> bool:
        return all(s.passes(self.tol) for s in self.samples)

    @property
    def worst(self) -> ResidualSample:
        return max(self.samples, key=lambda s: s.residual)


def _d1(g: Callable[[float], float], z: float, h: float) -> float:
    return (g(z - 2 * h) - 8 * g(z - h) + 8 * g(z + h) - g(z + 2 * h)) / (12 * h)


def _d2(g: Callable[[float], float], z: float, h: float) -> float:
    return (-g(z - 2 * h) + 16 * g(z - h) - 30 * g(z) + 16 * g(z + h) - g(z + 2 * h)) / (12 * h * h)


def caputo_numeric(u: Callable[[float], float], nu: float, t: float) -> float:
    """Caputo derivative of order nu in (0, 1] of a scalar function of time at t > 0."""
    if nu == 1.0:
        return _d1(u, t, 1e-3 * t)
    u_start = u(0.0)

    def weakly_singular(tau: float) -> float:
        value, _ = integrate.quad(
            lambda s: u(s) - u_start, 0.0, tau, weight="alg", wvar=(0.0, -nu), **_QUAD
        )
        return value

    return _d1(weakly_singular, t, 1e-3 * t) / gamma(1.0 - nu)


def _kernel_weight(kernel: MemoryKernel) -> Optional[Tuple[float, float]]:
    """(factor, p) with K(t) = factor * t^(-p), or None for other kernels."""
    if isinstance(kernel, PowerKernel):
        return kernel.coefficient, kernel.exponent
    if isinstance(kernel, OmegaKernel):
        return 1.0 / gamma(kernel.theta), 1.0 - kernel.theta
    return None


def convolution_numeric(kernel: MemoryKernel, g: Callable[[float], float], t: float) -> float:
    """Integral of K(t - s) g(s) over (0, t)."""
    if kernel.is_zero:
        return 0.0
    weight = _kernel_weight(kernel)
    if weight is not None:
        factor, p = weight
        value, _ = integrate.quad(g, 0.0, t, weight="alg", wvar=(0.0, -p), **_QUAD)
        return factor * value
    if isinstance(kernel, CallableKernel):
        value, _ = integrate.quad(lambda s: float(kernel(t - s)) * g(s), 0.0, t, **_QUAD)
        return value
    raise TypeError(f"unsupported kernel {kernel!r}")


def operator_1d(case: ExampleCase, x: float, t: float) -> float:
    """rho1 D^nu1 u - rho2 D^nu2 u - a u_xx + d u_x - K * (b u_xx) at (x, t)."""
    data = case.data()
    c = data.coefficients
    u = data.exact
    h = _SPACE_STEP

    def u_t(s):
        return float(u(x, s))

    def u_xx(s):
        return _d2(lambda z: float(u(z, s)), x, h)

    value = (
        float(c["rho1"](x)) * caputo_numeric(u_t, case.nu1, t)
        - float(c["rho2"](x, t)) * caputo_numeric(u_t, case.nu2, t)
        - float(c["a"](x, t)) * u_xx(t)
        + float(c["d"](x, t)) * _d1(lambda z: float(u(z, t)), x, h)
    )
    if not data.kernel.is_zero:
        value -= convolution_numeric(data.kernel, lambda s: float(c["b"](x, s)) * u_xx(s), t)
    return value


def operator_2d(case: ExampleCase, x: float, y: float, t: float) -> float:
    """Two-dimensional counterpart of operator_1d."""
    data = case.data()
    c = data.coefficients
    u = data.exact
    h = _SPACE_STEP

    def u_t(s):
        return float(u(x, y, s))

    def u_xx(s):
        return _d2(lambda z: float(u(z, y, s)), x, h)

    def u_yy(s):
        return _d2(lambda z: float(u(x, z, s)), y, h)

    value = (
        float(c["rho1"](x, y)) * caputo_numeric(u_t, case.nu1, t)
        - float(c["rho2"](x, y, t)) * caputo_numeric(u_t, case.nu2, t)
        - float(c["a1"](x, y, t)) * u_xx(t)
        - float(c["a2"](x, y, t)) * u_yy(t)
        + float(c["d1"](x, y, t)) * _d1(lambda z: float(u(z, y, t)), x, h)
        + float(c["d2"](x, y, t)) * _d1(lambda z: float(u(x, z, t)), y, h)
    )
    if not data.kernel.is_zero:
        value -= convolution_numeric(
            data.kernel,
            lambda s: float(c["b1"](x, y, s)) * u_xx(s) + float(c["b2"](x, y, s)) * u_yy(s),
            t,
        )
    return value


def residual_check(
    case: ExampleCase,
    points: int = 20,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
) -> ResidualReport:
    """
    Compare the operator applied to the exact solution with the forcing.

    Points are drawn uniformly from [0.05, 0.95] in space and [0.1 T, T] in time.
    """
    rng = np.random.default_rng(seed)
    samples = []
    for _ in range(points):
        t = float(rng.uniform(0.1 * case.T, case.T))
        if case.dimension == 2:
            x, y = (float(v) for v in rng.uniform(0.05, 0.95, size=2))
            point = (x, y, t)
            lhs = operator_2d(case, x, y, t)
        else:
            x = float(rng.uniform(0.05, 0.95))
            point = (x, t)
            lhs = operator_1d(case, x, t)
        samples.append(ResidualSample(point, float(case.forcing(*point)), lhs))
    report = ResidualReport(case.label, samples, tol)
    worst = report.worst
    level = logging.INFO if report.passed else logging.WARNING
    logger.log(level, f"residual check {case.label}: worst {worst.residual:.3e} at {worst.point}")
    return report


def require_consistent_forcing(
    cases: Iterable[ExampleCase],
    points: int = 20,
    tol: float = DEFAULT_TOL,
) -> List[ResidualReport]:
    """Run the residual check on every case; raise SolverError on the first failure."""
    reports = []
    for case in cases:
        report = residual_check(case, points=points, tol=tol)
        if not report.passed:
            worst = report.worst
            raise SolverError(
                f"forcing of {case.label} does not match the operator: "
                f"residual {worst.residual:.3e} > {tol:g}",
                node=worst.point,
            )
        reports.append(report)
    return reports
