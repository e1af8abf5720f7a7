#!/usr/bin/env python3
# SPDX-License-Identifier: MIT
# Copyright (c) 2025 fracsub contributors
"""
The aggregated kernel N(t) = rho1 omega_{1-nu1}(t) - rho2 omega_{1-nu2}(t).

N is positive near t = 0 and, for rho2 > 0, changes sign exactly once at
t* = [rho1 Gamma(1-nu2) / (rho2 Gamma(1-nu1))]^(1/(nu1-nu2)).
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from ..errors import DomainError
from .special import gamma

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KernelSpec:
    """Scalar coefficients and orders of N."""
    rho1: float
    rho2: float
    nu1: float
    nu2: float

    def __post_init__(self):
        if not self.rho1 > 0:
            raise DomainError(f"rho1 must be > 0, got {self.rho1}")
        if not 0.0 < self.nu2 < self.nu1 <= 1.0:
            raise DomainError(
                f"orders must satisfy 0 < nu2 < nu1 <= 1, got nu1={self.nu1}, nu2={self.nu2}"
            )

    @property
    def local_leading_term(self) -> bool:
        """True when nu1 = 1: the rho1 term is a Dirac mass and drops out of N for t > 0."""
        return self.nu1 == 1.0


def kernel_n(spec: KernelSpec, t):
    """
    Evaluate N(t) for t > 0 (scalar or array).

    At nu1 = 1 only the -rho2 omega_{1-nu2} part is returned.
    """
    arr = np.asarray(t, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("kernel N is defined for t > 0 only")
    second = spec.rho2 * arr ** (-spec.nu2) / gamma(1.0 - spec.nu2)
    if spec.local_leading_term:
        result = -second
    else:
        result = spec.rho1 * arr ** (-spec.nu1) / gamma(1.0 - spec.nu1) - second
    return float(result) if np.ndim(t) == 0 else result


def sign_change_time(spec: KernelSpec) -> Optional[float]:
    """Unique zero t* of N, or None when N keeps its sign (rho2 <= 0 or nu1 = 1)."""
    if spec.rho2 <= 0 or spec.local_leading_term:
        return None
    ratio = spec.rho1 * gamma(1.0 - spec.nu2) / (spec.rho2 * gamma(1.0 - spec.nu1))
    return float(ratio ** (1.0 / (spec.nu1 - spec.nu2)))


@dataclass(frozen=True)
class KernelProfile:
    """Uniform samples of N on (0, T] and, separately, its sign change if inside (0, T]."""
    spec: KernelSpec
    T: float
    rows: Tuple[Tuple[float, float], ...]
    sign_change: Optional[float] = None

    def to_frame(self, annotate: bool = True) -> pd.DataFrame:
        """Columns t, N, kind; the t* row (N = 0) is appended with kind 'sign_change'."""
        frame = pd.DataFrame(list(self.rows), columns=["t", "N"])
        frame["kind"] = "sample"
        if annotate and self.sign_change is not None:
            extra = pd.DataFrame([{"t": self.sign_change, "N": 0.0, "kind": "sign_change"}])
            frame = pd.concat([frame, extra], ignore_index=True)
        return frame

    @property
    def negative_tail(self) -> bool:
        return bool(self.rows) and self.rows[-1][1] < 0


def kernel_profile(spec: KernelSpec, T: float, samples: int) -> KernelProfile:
    """
    Sample N at t_i = i T / samples, i = 1..samples.

    Args:
        spec: kernel coefficients
        T: horizon, > 0
        samples: number of rows, >= 2
    """
    if samples < 2:
        raise DomainError(f"kernel profile needs at least 2 samples, got {samples}")
    if not T > 0:
        raise DomainError(f"horizon T must be > 0, got {T}")
    t = T * np.arange(1, samples + 1) / samples
    values = np.atleast_1d(kernel_n(spec, t))
    t_star = sign_change_time(spec)
    if t_star is not None and t_star > T:
        t_star = None
    logger.debug(f"kernel profile {spec} on (0, {T}]: t*={t_star}")
    return KernelProfile(
        spec=spec,
        T=float(T),
        rows=tuple(zip(t.tolist(), values.tolist())),
        sign_change=t_star,
    )


class KernelPreset(Enum):
    """The two plotted sign-changing configurations (rho1 taken as 1 + x^2)."""
    WEAK = "weak"
    STRONG = "strong"


PRESET_DATA: Dict[KernelPreset, Dict[str, float]] = {
    KernelPreset.WEAK: {"rho2": 0.5, "nu1": 0.90, "nu2": 0.45},
    KernelPreset.STRONG: {"rho2": 2.2, "nu1": 0.80, "nu2": 0.40},
}

PRESET_HORIZONS: Tuple[float, ...] = (0.1, 0.7)


def preset_spec(preset: KernelPreset, x: float = 0.0) -> KernelSpec:
    """KernelSpec of a preset with rho1 = 1 + x^2 sampled at x."""
    data = PRESET_DATA[KernelPreset(preset)]
    return KernelSpec(rho1=1.0 + x * x, **data)


def preset_profiles(
    preset: KernelPreset, samples: int = 200, x: float = 0.0
) -> List[KernelProfile]:
    spec = preset_spec(preset, x)
    return [kernel_profile(spec, T, samples) for T in PRESET_HORIZONS]
