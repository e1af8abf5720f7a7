#!/usr/bin/env python3
# SPDX-License-Identifier: MIT
# Copyright (c) 2025 fracsub contributors
"""
Discrete fractional-in-time operators.

- Grunwald-Letnikov weights rho_m = (-1)^m C(nu, m) and the discrete Caputo sum
- Richardson extrapolation of two time steps
- memory kernel descriptors and the per-step kernel integrals K_{m,j}
- the trapezoid memory sum sum_m (b^m v^m + b^{m+1} v^{m+1}) K_{m,j} / 2

All tables are immutable numpy arrays and can be shared between threads.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np
from scipy import integrate

from ..errors import DomainError, ShapeError
from .special import gamma

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


def _frozen(values: np.ndarray) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


def _like(t, result: np.ndarray) -> ArrayLike:
    return float(result) if np.ndim(t) == 0 else result


# ========== Grunwald-Letnikov weights ==========

@dataclass(frozen=True)
class GLWeightTable:
    """Weights rho_0..rho_M of the GL approximation of order nu."""
    nu: float
    weights: np.ndarray

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, m):
        return self.weights[m]

    @property
    def horizon(self) -> int:
        return len(self.weights) - 1

    def partial_sums(self) -> np.ndarray:
        return np.cumsum(self.weights)


def gl_weights(nu: float, M: int) -> GLWeightTable:
    """
    Compute GL weights by the recurrence rho_m = rho_{m-1} (1 - (nu+1)/m).

    Args:
        nu: fractional order in (0, 1]
        M: horizon, weights rho_0..rho_M are returned
    """
    if not 0.0 < nu <= 1.0:
        raise DomainError(f"GL weights need 0 < nu <= 1, got {nu}")
    if M < 0:
        raise DomainError(f"GL horizon must be >= 0, got {M}")
    m = np.arange(1, M + 1, dtype=float)
    weights = np.concatenate(([1.0], np.cumprod(1.0 - (nu + 1.0) / m)))
    return GLWeightTable(nu=float(nu), weights=_frozen(weights))


@dataclass(frozen=True)
class NodeHistory:
    """Values u^0..u^J at one spatial node; u^0 equals the initial datum."""
    values: np.ndarray
    u0: float

    def __post_init__(self):
        values = _frozen(self.values)
        object.__setattr__(self, "values", values)
        if len(values) == 0:
            raise ShapeError("node history is empty")
        if values[0] != self.u0:
            raise ShapeError(f"history starts at {values[0]!r}, initial value is {self.u0!r}")

    @classmethod
    def sample(
        cls, func: Callable[[np.ndarray], np.ndarray], sigma: float, levels: int
    ) -> "NodeHistory":
        """History of a function of time on sigma_j = j sigma, j = 0..levels."""
        values = np.asarray(func(sigma * np.arange(levels + 1)), dtype=float)
        return cls(values=values, u0=float(values[0]))

    @property
    def level(self) -> int:
        return len(self.values) - 1


def discrete_caputo(h: NodeHistory, w: GLWeightTable, sigma: float) -> float:
    """
    Discrete Caputo derivative at the newest level j+1 of the history:
    sigma^(-nu) sum_{m=0}^{j+1} (u^{j+1-m} - u_0) rho_m.
    """
    if not sigma > 0:
        raise DomainError(f"time step must be positive, got {sigma}")
    n = len(h.values)
    if len(w) < n:
        raise ShapeError(f"GL table covers m <= {w.horizon}, history needs m <= {n - 1}")
    diffs = h.values[::-1] - h.u0
    return float(sigma ** (-w.nu) * np.dot(diffs, w.weights[:n]))


def caputo_history(past: np.ndarray, u0: np.ndarray, w: GLWeightTable) -> np.ndarray:
    """
    Explicit part of the discrete Caputo sum at level j+1, node by node.

    Args:
        past: levels 0..j, shape (j+1, ...)
        u0: initial values, shape past.shape[1:]
        w: GL weights covering m <= j+1

    Returns:
        sum_{m=1}^{j+1} (u^{j+1-m} - u_0) rho_m  (without the sigma^(-nu) factor)
    """
    levels = past.shape[0]
    if len(w) < levels + 1:
        raise ShapeError(f"GL table covers m <= {w.horizon}, need m <= {levels}")
    coef = w.weights[1:levels + 1][::-1]
    return np.tensordot(coef, past - u0, axes=(0, 0))


def richardson_combine(coarse: ArrayLike, fine: ArrayLike, order: int = 1) -> ArrayLike:
    """
    Combine results at steps sigma and sigma/2 with leading error O(sigma^order).

    Returns:
        (2^order * fine - coarse) / (2^order - 1)
    """
    if order < 1:
        raise DomainError(f"Richardson order must be >= 1, got {order}")
    factor = 2.0 ** order
    fine = np.asarray(fine, dtype=float)
    coarse = np.asarray(coarse, dtype=float)
    result = (factor * fine - coarse) / (factor - 1.0)
    return float(result) if result.ndim == 0 else result


def caputo_power(q: float, nu: float, t: ArrayLike) -> ArrayLike:
    """Caputo derivative of order nu of t^q (q > 0): Gamma(q+1) t^(q-nu) / Gamma(q+1-nu)."""
    t_arr = np.asarray(t, dtype=float)
    if q == 0:
        result = np.zeros_like(t_arr)
    else:
        result = gamma(q + 1.0) / gamma(q + 1.0 - nu) * t_arr ** (q - nu)
    return float(result) if result.ndim == 0 else result


# ========== Memory kernels ==========

class MemoryKernel(ABC):
    """Descriptor of a memory kernel K(t), t > 0."""

    @abstractmethod
    def __call__(self, t: ArrayLike) -> ArrayLike:
        """Kernel values."""

    @abstractmethod
    def integral(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Integral of K over [a, b], elementwise, 0 <= a <= b."""

    @property
    def is_zero(self) -> bool:
        return False

    def describe(self) -> str:
        return type(self).__name__


@dataclass(frozen=True)
class ZeroKernel(MemoryKernel):
    """K = 0: no memory term."""

    def __call__(self, t):
        return _like(t, np.zeros_like(np.asarray(t, dtype=float)))

    def integral(self, a, b):
        return np.zeros(np.broadcast(np.asarray(a), np.asarray(b)).shape)

    @property
    def is_zero(self) -> bool:
        return True

    def describe(self) -> str:
        return "0"


@dataclass(frozen=True)
class PowerKernel(MemoryKernel):
    """K(t) = c t^(-p), integrable for p < 1."""
    coefficient: float = 1.0
    exponent: float = 0.0

    def __post_init__(self):
        if self.exponent >= 1.0:
            raise DomainError(f"kernel t^(-{self.exponent}) is not integrable at 0 (needs p < 1)")

    def __call__(self, t):
        return _like(t, self.coefficient * np.asarray(t, dtype=float) ** (-self.exponent))

    def integral(self, a, b):
        q = 1.0 - self.exponent
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        return self.coefficient * (b ** q - a ** q) / q

    @property
    def is_zero(self) -> bool:
        return self.coefficient == 0.0

    def describe(self) -> str:
        return f"{self.coefficient:g}*t^(-{self.exponent:g})"


@dataclass(frozen=True)
class OmegaKernel(MemoryKernel):
    """K = omega_theta(t) = t^(theta-1) / Gamma(theta)."""
    theta: float

    def __post_init__(self):
        if not self.theta > 0:
            raise DomainError(f"omega kernel needs theta > 0, got {self.theta}")

    def __call__(self, t):
        return _like(t, np.asarray(t, dtype=float) ** (self.theta - 1.0) / gamma(self.theta))

    def integral(self, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        return (b ** self.theta - a ** self.theta) / gamma(self.theta + 1.0)

    def describe(self) -> str:
        return f"omega_{self.theta:g}"


@dataclass(frozen=True)
class CallableKernel(MemoryKernel):
    """Generic kernel: a vectorised callable plus an integrability flag."""
    func: Callable[[ArrayLike], ArrayLike]
    integrable: bool = True
    label: str = "K(t)"

    def __post_init__(self):
        if not self.integrable:
            raise DomainError(f"kernel {self.label} is declared non-integrable")

    def __call__(self, t):
        return self.func(t)

    def integral(self, a, b):
        a_arr, b_arr = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
        out = np.empty(a_arr.shape)
        for idx in np.ndindex(a_arr.shape):
            lo, hi = a_arr[idx], b_arr[idx]
            if hi <= lo:
                out[idx] = 0.0
                continue
            value, _ = integrate.quad(
                lambda s: float(self.func(s)), lo, hi, epsabs=1e-12, limit=200
            )
            out[idx] = value
        return out

    def describe(self) -> str:
        return self.label


@dataclass(frozen=True)
class MemoryQuadrature:
    """Kernel integrals K_{m,j}, m = 0..j, for one level j."""
    sigma: float
    level: int
    weights: np.ndarray
    lags: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.weights)


def lag_integrals(kernel: MemoryKernel, sigma: float, count: int) -> np.ndarray:
    """kappa_n = integral of K over [n sigma, (n+1) sigma], n = 0..count-1."""
    if not sigma > 0:
        raise DomainError(f"time step must be positive, got {sigma}")
    if kernel.is_zero:
        return _frozen(np.zeros(count))
    edges = sigma * np.arange(count + 1, dtype=float)
    return _frozen(kernel.integral(edges[:-1], edges[1:]))


def kernel_quadrature(kernel: MemoryKernel, sigma: float, j: int) -> MemoryQuadrature:
    """
    K_{m,j} = integral over [sigma_m, sigma_{m+1}] of K(sigma_{j+1} - s) ds, m = 0..j.

    K_{m,j} depends on j - m only, so the lag table kappa is computed once and reversed.
    """
    if j < 0:
        raise DomainError(f"level must be >= 0, got {j}")
    lags = lag_integrals(kernel, sigma, j + 1)
    return MemoryQuadrature(sigma=float(sigma), level=j, weights=_frozen(lags[::-1]), lags=lags)


def memory_term(dxx_history: np.ndarray, b_history: np.ndarray, q: MemoryQuadrature) -> ArrayLike:
    """
    Trapezoid memory sum at level j: sum_{m=0}^{j} (b^m v^m + b^{m+1} v^{m+1}) K_{m,j} / 2.

    Args:
        dxx_history: second differences / h^2 at levels 0..j+1 (leading axis is the level)
        b_history: coefficient b at the same levels
        q: quadrature at level j
    """
    v = np.asarray(dxx_history, dtype=float)
    b = np.asarray(b_history, dtype=float)
    if v.shape != b.shape:
        raise ShapeError(f"v history {v.shape} and b history {b.shape} differ")
    if v.shape[0] != q.level + 2:
        raise ShapeError(f"histories need {q.level + 2} levels, got {v.shape[0]}")
    w = b * v
    result = 0.5 * np.tensordot(q.weights, w[:-1] + w[1:], axes=(0, 0))
    return float(result) if np.ndim(result) == 0 else result


def memory_explicit(past: np.ndarray, lags: np.ndarray, j: int) -> np.ndarray:
    """
    Known part of the memory sum at level j, i.e. everything but the b^{j+1} v^{j+1} K_{j,j}/2 end.

    Args:
        past: products b^m v^m for m = 0..j, leading axis is the level
        lags: kappa table covering n <= j
    """
    if past.shape[0] != j + 1:
        raise ShapeError(f"memory history needs {j + 1} levels, got {past.shape[0]}")
    kappa = lags[:j + 1]
    coef = kappa[::-1].copy()           # K_{m,j} = kappa_{j-m}
    coef[1:] += kappa[::-1][:-1]        # K_{m-1,j} = kappa_{j-m+1}
    return 0.5 * np.tensordot(coef, past, axes=(0, 0))


def endpoint_weight(lags: np.ndarray) -> float:
    """K_{j,j} = kappa_0, the weight of the implicit trapezoid end."""
    return float(lags[0]) if len(lags) else 0.0


def kernel_from_name(kind: str, nu1: Optional[float] = None, **params) -> MemoryKernel:
    """Build a kernel descriptor from a short name (zero | power | omega)."""
    kind = kind.lower()
    if kind == "zero":
        return ZeroKernel()
    if kind == "power":
        coefficient = float(params.get("coefficient", 1.0))
        return PowerKernel(coefficient, float(params.get("exponent", 0.0)))
    if kind == "omega":
        theta = params.get("theta")
        if theta is None:
            if nu1 is None:
                raise DomainError("omega kernel needs theta or nu1")
            theta = 1.0 - nu1
        return OmegaKernel(float(theta))
    raise DomainError(f"unknown kernel type '{kind}'")
