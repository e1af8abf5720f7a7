#!/usr/bin/env python3
# SPDX-License-Identifier: MIT
# Copyright (c) 2025 fracsub contributors
"""
Special functions used by the schemes and the manufactured solutions.

- gamma: Euler Gamma (scipy), with poles reported as DomainError
- omega: the Riemann-Liouville kernel t^(theta-1)/Gamma(theta)
- mittag_leffler: two-parameter Mittag-Leffler function on the real line

Mittag-Leffler evaluation strategy:
- double-precision power series summed with math.fsum when the terms neither
  cancel badly nor overflow
- mpmath power series with the working precision raised by the size of the
  largest term otherwise
- the algebraic asymptotic expansion on the negative axis once
  |z|^(1/alpha) >= ASYMPTOTIC_THRESHOLD
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple, Union

import mpmath
import numpy as np
from scipy import special as sp

from ..errors import ConvergenceError, DomainError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# z > 0 with z^(1/alpha) above this overflows double precision (E ~ exp(z^(1/alpha))/alpha)
OVERFLOW_EXPONENT = 700.0
# On the negative axis the asymptotic expansion is used past this |z|^(1/alpha)
ASYMPTOTIC_THRESHOLD = 50.0

_MAX_DOUBLE_TERMS = 20000
_MAX_MP_TERMS = 200000
_MAX_ASYMPTOTIC_TERMS = 2000
_GAMMA_ARG_LIMIT = 170.0


@dataclass(frozen=True)
class MLParams:
    """Parameters (alpha, beta) of E_{alpha,beta}."""
    alpha: float
    beta: float = 1.0

    def __post_init__(self):
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise DomainError(f"Mittag-Leffler alpha must be > 0, got {self.alpha}")
        if not (self.beta > 0 and math.isfinite(self.beta)):
            raise DomainError(f"Mittag-Leffler beta must be > 0, got {self.beta}")


def _is_pole(x: np.ndarray) -> np.ndarray:
    return (x <= 0) & (np.floor(x) == x)


def gamma(x: ArrayLike) -> ArrayLike:
    """
    Euler Gamma function.

    Args:
        x: scalar or array, no entry a nonpositive integer

    Returns:
        Gamma(x), same shape as x
    """
    arr = np.asarray(x, dtype=float)
    if np.any(_is_pole(arr)):
        bad = arr[_is_pole(arr)].ravel()[0]
        raise DomainError(f"Gamma has a pole at x={bad:g}")
    result = sp.gamma(arr)
    return float(result) if np.ndim(x) == 0 else result


def omega(theta: float, t: ArrayLike) -> ArrayLike:
    """
    Riemann-Liouville kernel omega_theta(t) = t^(theta-1) / Gamma(theta).

    Args:
        theta: order, > 0
        t: time(s), > 0
    """
    if not theta > 0:
        raise DomainError(f"omega requires theta > 0, got {theta}")
    arr = np.asarray(t, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("omega requires t > 0")
    result = arr ** (theta - 1.0) / sp.gamma(theta)
    return float(result) if np.ndim(t) == 0 else result


def _peak_term(alpha: float, beta: float, z: float) -> Tuple[int, float]:
    """Index and log10 magnitude of the largest series term |z|^k / Gamma(alpha k + beta)."""
    s = abs(z) ** (1.0 / alpha)
    n = int((s + 20.0) / alpha) + 20
    if n > 10_000_000:
        raise ConvergenceError(
            f"Mittag-Leffler series for alpha={alpha}, z={z} needs more than {n} terms"
        )
    k = np.arange(n, dtype=float)
    logs = k * math.log(abs(z)) - sp.gammaln(alpha * k + beta)
    idx = int(np.argmax(logs))
    return idx, float(logs[idx] / math.log(10.0))


def _series_double(alpha: float, beta: float, z: float, k_peak: int):
    """Compensated double-precision series; None if Gamma would overflow first."""
    terms = []
    running = 0.0
    zk = 1.0
    for k in range(_MAX_DOUBLE_TERMS):
        arg = alpha * k + beta
        if arg > _GAMMA_ARG_LIMIT:
            return None
        term = zk * sp.rgamma(arg)
        terms.append(term)
        running += term
        if k > k_peak and abs(term) < 1e-17 * max(1.0, abs(running)):
            return math.fsum(terms)
        zk *= z
        if not math.isfinite(zk):
            return None
    return None


def _series_mp(alpha: float, beta: float, z: float, k_peak: int, peak_log10: float) -> float:
    dps = 30 + int(math.ceil(max(0.0, peak_log10)))
    with mpmath.workdps(dps):
        a, b, zz = mpmath.mpf(alpha), mpmath.mpf(beta), mpmath.mpf(z)
        tol = mpmath.mpf(10) ** (-25)
        total = mpmath.mpf(0)
        zk = mpmath.mpf(1)
        for k in range(_MAX_MP_TERMS):
            term = zk * mpmath.rgamma(a * k + b)
            total += term
            if k > k_peak and abs(term) < tol * max(1, abs(total)):
                return float(total)
            zk *= zz
    raise ConvergenceError(
        f"Mittag-Leffler series did not converge for alpha={alpha}, beta={beta}, z={z}"
    )


def _asymptotic_negative(alpha: float, beta: float, z: float) -> float:
    """E_{a,b}(z) ~ -sum_{k>=1} z^(-k) / Gamma(b - a k) for z -> -inf, 0 < a < 2."""
    terms = []
    inv = 1.0 / z
    zk = 1.0
    growing = 0
    prev = math.inf
    for k in range(1, _MAX_ASYMPTOTIC_TERMS):
        zk *= inv
        term = -zk * sp.rgamma(beta - alpha * k)
        size = abs(term)
        if size == 0.0:
            continue
        if size > prev:
            growing += 1
            if growing >= 3:
                break
        else:
            growing = 0
        prev = size
        terms.append(term)
        if size < 1e-18 * max(1.0, abs(math.fsum(terms))):
            return math.fsum(terms)
    if not terms:
        return 0.0
    logger.debug(f"asymptotic expansion truncated at optimal term for alpha={alpha}, z={z}")
    return math.fsum(terms)


@lru_cache(maxsize=65536)
def _mittag_leffler_scalar(alpha: float, beta: float, z: float) -> float:
    if z == 0.0:
        return float(sp.rgamma(beta))
    if not math.isfinite(z):
        raise DomainError(f"Mittag-Leffler argument must be finite, got {z}")
    s = abs(z) ** (1.0 / alpha)
    if z > 0 and s > OVERFLOW_EXPONENT:
        raise ConvergenceError(
            f"E_{{{alpha},{beta}}}({z}) exceeds the double overflow bound "
            f"(z^(1/alpha) = {s:.3g} > {OVERFLOW_EXPONENT})"
        )
    if z < 0 and s >= ASYMPTOTIC_THRESHOLD and alpha < 2.0:
        return _asymptotic_negative(alpha, beta, z)

    k_peak, peak_log10 = _peak_term(alpha, beta, z)
    if z > 0 or peak_log10 <= 0.0:
        value = _series_double(alpha, beta, z, k_peak)
        if value is not None:
            return value
    return _series_mp(alpha, beta, z, k_peak, peak_log10)


def mittag_leffler(p: MLParams, z: ArrayLike) -> ArrayLike:
    """
    Two-parameter Mittag-Leffler function E_{alpha,beta}(z) = sum z^k / Gamma(alpha k + beta).

    Args:
        p: (alpha, beta) parameters
        z: real scalar or array

    Returns:
        E_{alpha,beta}(z), same shape as z

    Raises:
        ConvergenceError: z beyond the overflow bound or series not converging
    """
    if np.ndim(z) == 0:
        return _mittag_leffler_scalar(float(p.alpha), float(p.beta), float(z))
    arr = np.asarray(z, dtype=float)
    out = np.empty_like(arr)
    for idx, value in np.ndenumerate(arr):
        out[idx] = _mittag_leffler_scalar(float(p.alpha), float(p.beta), float(value))
    return out


def ml1(alpha: float, z: ArrayLike) -> ArrayLike:
    """One-parameter Mittag-Leffler function E_alpha(z) = E_{alpha,1}(z)."""
    return mittag_leffler(MLParams(alpha, 1.0), z)


def ml2(alpha: float, beta: float, z: ArrayLike) -> ArrayLike:
    """Two-parameter Mittag-Leffler function E_{alpha,beta}(z); shorthand for ``mittag_leffler``."""
    return mittag_leffler(MLParams(alpha, beta), z)
