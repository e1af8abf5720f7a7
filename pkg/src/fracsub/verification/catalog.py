#!/usr/bin/env python3
# SPDX-License-Identifier: MIT
# Copyright (c) 2025 fracsub contributors
"""
Manufactured-solution catalog.

Each entry pairs a closed-form solution with the coefficients, kernel,
boundary data and forcing that make it an exact solution of the 1D or 2D
problem. Reference errors are the published max-norm errors on the default
grids (1D: K=1000, J=100; 2D: Kx=Ky=J=100) with Richardson extrapolation.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from ..errors import DomainError
from ..numerics.fracops import OmegaKernel, PowerKernel, ZeroKernel
from ..numerics.special import gamma, ml1, ml2
from ..solvers.solver1d import Grid1D, Problem1D, RobinCondition, constant
from ..solvers.solver2d import Grid2D, Problem2D

logger = logging.getLogger(__name__)

PI = np.pi


class ExampleId(Enum):
    """Catalog identifiers."""
    EX1I = "ex1i"
    EX1II = "ex1ii"
    EX1EXT = "ex1ext"
    EX2 = "ex2"
    EX3 = "ex3"
    EX4 = "ex4"


@dataclass
class ExampleDefinition:
    """Static description of one catalog entry."""
    id: ExampleId
    description: str
    dimension: int
    T: float
    nu2_divisor: float
    nu1_values: Tuple[float, ...]
    reference: Dict = field(default_factory=dict)
    variants: Tuple[Tuple[float, float], ...] = ()

    def reference_gimel(
        self, nu1: float, rho2: Optional[float] = None, T: Optional[float] = None
    ) -> Optional[float]:
        key = round(nu1, 6) if not self.variants else (round(nu1, 6), rho2, T)
        return self.reference.get(key)


def _table(nu1_values, values) -> Dict[float, float]:
    return {round(nu, 6): v for nu, v in zip(nu1_values, values)}


_TENTHS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
_EX2_NU1 = (0.15, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75, 0.85, 0.95)
_EXT_NU1 = (0.6, 0.7, 0.8, 0.9)
# (rho2, T) columns of the sign-changing kernel table
_EXT_VARIANTS = ((0.5, 0.1), (0.5, 0.7), (2.2, 0.1), (2.2, 0.7))
_EXT_VALUES = {
    0.6: (1.7643e-04, 8.6293e-04, 3.5257e-04, 4.0691e-02),
    0.7: (8.0630e-05, 4.9315e-04, 1.3883e-04, 1.1322e-02),
    0.8: (3.1975e-05, 2.5790e-04, 5.7888e-05, 4.3900e-03),
    0.9: (1.4874e-05, 2.1302e-04, 3.8448e-05, 2.0862e-03),
}


EXAMPLE_CATALOG: Dict[ExampleId, ExampleDefinition] = {

    ExampleId.EX1I: ExampleDefinition(
        id=ExampleId.EX1I,
        description="1D, K = t^(-1/3), Neumann ends, rho2 = 1+(t+1)(x+0.01), nu2 = nu1/2",
        dimension=1, T=0.1, nu2_divisor=2.0, nu1_values=_TENTHS,
        reference=_table(_TENTHS, (1.6544e-02, 4.2775e-03, 2.1238e-03, 1.0632e-03, 5.1204e-04,
                                   2.3459e-04, 9.9984e-05, 3.8166e-05, 2.1979e-05)),
    ),

    ExampleId.EX1II: ExampleDefinition(
        id=ExampleId.EX1II,
        description="1D, K = t^(-1/3), Neumann ends, rho2 = (x-0.5)^3, nu2 = nu1/3",
        dimension=1, T=0.1, nu2_divisor=3.0, nu1_values=_TENTHS,
        reference=_table(_TENTHS, (8.7910e-04, 1.4009e-04, 3.6891e-04, 3.5521e-04, 2.4190e-04,
                                   1.3600e-04, 6.5636e-05, 2.6783e-05, 1.1683e-05)),
    ),

    ExampleId.EX1EXT: ExampleDefinition(
        id=ExampleId.EX1EXT,
        description=("1D, as ex1i with constant rho2 in {0.5, 2.2} and T in {0.1, 0.7} "
                     "(sign-changing N)"),
        dimension=1, T=0.1, nu2_divisor=2.0, nu1_values=_EXT_NU1,
        reference={(nu, rho2, T): _EXT_VALUES[nu][i]
                   for nu in _EXT_NU1 for i, (rho2, T) in enumerate(_EXT_VARIANTS)},
        variants=_EXT_VARIANTS,
    ),

    ExampleId.EX2: ExampleDefinition(
        id=ExampleId.EX2,
        description="1D, K = omega_{1-nu1}, Neumann ends, rho2 = t sin(2 pi x), T = 1",
        dimension=1, T=1.0, nu2_divisor=2.0, nu1_values=_EX2_NU1,
        reference=_table(_EX2_NU1, (7.4473e-04, 1.2041e-03, 1.1158e-03, 6.5545e-04, 2.5780e-04,
                                    2.1305e-04, 2.6327e-04, 2.7676e-04, 1.7288e-04)),
    ),

    ExampleId.EX3: ExampleDefinition(
        id=ExampleId.EX3,
        description="1D, no memory, Robin end at x=0 with Mittag-Leffler data, T = 1",
        dimension=1, T=1.0, nu2_divisor=2.0, nu1_values=_TENTHS,
        reference=_table(_TENTHS, (4.6741e-03, 3.3408e-03, 1.9065e-03, 8.0956e-04, 3.3009e-04,
                                   2.2661e-04, 1.7038e-04, 1.1417e-04, 4.6430e-05)),
    ),

    ExampleId.EX4: ExampleDefinition(
        id=ExampleId.EX4,
        description="2D, Dirichlet in x, Neumann in y, K = omega_{1-nu1}, T = 1",
        dimension=2, T=1.0, nu2_divisor=2.0, nu1_values=_TENTHS,
        reference=_table(_TENTHS, (6.4793e-04, 7.8800e-04, 5.6016e-04, 3.4389e-04, 3.1859e-04,
                                   3.2473e-04, 3.3240e-04, 3.0207e-04, 1.8727e-04)),
    ),
}


def get_definition(example: Union[str, ExampleId]) -> ExampleDefinition:
    try:
        return EXAMPLE_CATALOG[ExampleId(example)]
    except ValueError:
        names = ", ".join(e.value for e in ExampleId)
        raise DomainError(f"unknown example '{example}', expected one of: {names}") from None


@dataclass(frozen=True)
class ExampleCase:
    """
    One concrete manufactured problem.

    Args:
        id: catalog entry
        nu1: leading order
        nu2: second order; defaults to nu1 / nu2_divisor of the entry
        T: final time; defaults to the entry's T
        rho2: constant rho2 (only for ex1ext)
    """
    id: ExampleId
    nu1: float
    nu2: Optional[float] = None
    T: Optional[float] = None
    rho2: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "id", ExampleId(self.id))
        definition = EXAMPLE_CATALOG[self.id]
        if self.nu2 is None:
            object.__setattr__(self, "nu2", self.nu1 / definition.nu2_divisor)
        if self.T is None:
            object.__setattr__(self, "T", definition.T)
        if self.id is ExampleId.EX1EXT and self.rho2 is None:
            raise DomainError("ex1ext needs a constant rho2 (0.5 or 2.2 in the reference table)")
        if not 0.0 < self.nu2 < self.nu1 <= 1.0:
            raise DomainError(
                f"orders must satisfy 0 < nu2 < nu1 <= 1, got nu1={self.nu1}, nu2={self.nu2}"
            )

    @property
    def definition(self) -> ExampleDefinition:
        return EXAMPLE_CATALOG[self.id]

    @property
    def dimension(self) -> int:
        return self.definition.dimension

    @property
    def label(self) -> str:
        extra = f"_rho2={self.rho2:g}_T={self.T:g}" if self.rho2 is not None else ""
        return f"{self.id.value}_nu1={self.nu1:g}{extra}"

    @property
    def reference_gimel(self) -> Optional[float]:
        return self.definition.reference_gimel(self.nu1, self.rho2, self.T)

    def default_grid(self) -> Union[Grid1D, Grid2D]:
        if self.dimension == 2:
            return Grid2D(100, 100, 100, 1.0, 1.0, self.T)
        return Grid1D(1000, 100, 1.0, self.T)

    def data(self) -> "CaseData":
        return _case_data(self)

    def exact(self, *point):
        return self.data().exact(*point)

    def forcing(self, *point):
        return self.data().f(*point)

    def build_problem(self) -> Union[Problem1D, Problem2D]:
        return self.data().problem(self)


def cases_for(
    example: Union[str, ExampleId], nu1_values: Optional[List[float]] = None
) -> List[ExampleCase]:
    """All cases of one table: one per nu1 (and per (rho2, T) column for ex1ext)."""
    definition = get_definition(example)
    nus = tuple(nu1_values) if nu1_values else definition.nu1_values
    if definition.variants:
        return [
            ExampleCase(definition.id, nu, rho2=rho2, T=T)
            for nu in nus
            for rho2, T in definition.variants
        ]
    return [ExampleCase(definition.id, nu) for nu in nus]


# ========== coefficient sets ==========

@dataclass(frozen=True)
class CaseData:
    """Closures of one case; 1D closures take (x, t), 2D closures (x, y, t)."""
    coefficients: Dict[str, Callable]
    exact: Callable
    f: Callable
    kernel: object
    left: Optional[RobinCondition] = None
    right: Optional[RobinCondition] = None

    def problem(self, case: ExampleCase) -> Union[Problem1D, Problem2D]:
        c = self.coefficients
        if case.dimension == 2:
            return Problem2D(
                nu1=case.nu1, nu2=case.nu2, rho1=c["rho1"], rho2=c["rho2"],
                a1=c["a1"], a2=c["a2"], d1=c["d1"], d2=c["d2"], b1=c["b1"], b2=c["b2"],
                f=self.f, u0=c["u0"], kernel=self.kernel, T=case.T, name=case.label,
            )
        return Problem1D(
            nu1=case.nu1, nu2=case.nu2, rho1=c["rho1"], rho2=c["rho2"], a=c["a"], d=c["d"],
            b=c["b"], f=self.f, u0=c["u0"], left=self.left, right=self.right,
            kernel=self.kernel, L=1.0, T=case.T, name=case.label,
        )


def _example1(case: ExampleCase) -> CaseData:
    nu1, nu2 = case.nu1, case.nu2
    g1 = gamma(1.0 + nu1)
    g12 = gamma(1.0 + nu1 - nu2)
    # integral of (t-s)^(-1/3) s^(1/3) ds over (0, t) equals t pi / (3 sin(pi/3))
    beta_term = PI / (3.0 * np.sin(PI / 3.0))

    if case.id is ExampleId.EX1I:
        def rho2(x, t):
            return 1.0 + (t + 1.0) * (x + 0.01)
    elif case.id is ExampleId.EX1II:
        def rho2(x, t):
            return (x - 0.5) ** 3
    else:
        rho2 = constant(case.rho2)

    def exact(x, t):
        return np.cos(PI * x) + t ** nu1 / g1

    def f(x, t):
        return (
            PI ** 2
            * (np.cos(PI * x / 4) + t + 1.5 * t ** (2.0 / 3.0) * np.sin(PI * x) + t * beta_term)
            * np.cos(PI * x)
            - (x + t) * PI * np.sin(PI * x)
            - rho2(x, t) * t ** (nu1 - nu2) / g12
            + 1.0 + x ** 2
        )

    coefficients = {
        "rho1": lambda x: 1.0 + x ** 2,
        "rho2": rho2,
        "a": lambda x, t: np.cos(PI * x / 4) + t,
        "d": lambda x, t: x + t,
        "b": lambda x, t: t ** (1.0 / 3.0) + np.sin(PI * x),
        "u0": lambda x: np.cos(PI * x),
    }
    return CaseData(coefficients, exact, f, PowerKernel(1.0, 1.0 / 3.0),
                    RobinCondition.neumann(), RobinCondition.neumann())


def _example2(case: ExampleCase) -> CaseData:
    nu1, nu2 = case.nu1, case.nu2
    g1 = gamma(1.0 + nu1)
    g2m = gamma(2.0 - nu1)
    g3m = gamma(3.0 - nu1)
    h2 = gamma(2.0 - nu2)
    h12 = gamma(1.0 + nu1 - nu2)

    def exact(x, t):
        return (1.0 + t + t ** nu1) * np.cos(PI * x)

    def f(x, t):
        bracket = (
            (1.0 + x) * g1
            + PI ** 2 * (1.0 + t ** nu1)
            + PI ** 2 * t * (1.0 + g1)
            + (1.0 + x + PI ** 2) * t ** (1.0 - nu1) / g2m
            + PI ** 2 * t ** (2.0 - nu1) / g3m
            - (t ** (2.0 - nu2) / h2 + g1 * t ** (1.0 + nu1 - nu2) / h12) * np.sin(2 * PI * x)
        )
        return np.cos(PI * x) * bracket

    coefficients = {
        "rho1": lambda x: 1.0 + x,
        "rho2": lambda x, t: t * np.sin(2 * PI * x),
        "a": constant(1.0),
        "d": constant(0.0),
        "b": constant(1.0),
        "u0": lambda x: np.cos(PI * x),
    }
    return CaseData(coefficients, exact, f, OmegaKernel(1.0 - nu1),
                    RobinCondition.neumann(), RobinCondition.neumann())


def _example3(case: ExampleCase) -> CaseData:
    nu1, nu2 = case.nu1, case.nu2
    inv_g = 1.0 / gamma(1.0 - nu2)

    def e1(t):
        return ml1(nu1, np.asarray(t, dtype=float) ** nu1)

    def exact(x, t):
        return (2 * x - x ** 2) * e1(t)

    def f(x, t):
        w = 2 * x - x ** 2
        e = e1(t)
        e2 = ml2(nu1, 1.0 - nu2, np.asarray(t, dtype=float) ** nu1)
        return (
            e * (
                w * (2.0 + np.sin(2 * PI * x))
                + 2 * (x + 1) * (t + 1)
                + x * (2 - 2 * x) * np.sin(t)
            )
            - t ** (1.0 - nu2) * np.cos(2 * PI * x) * w * (e2 - inv_g)
        )

    coefficients = {
        "rho1": lambda x: 2.0 + np.sin(2 * PI * x),
        "rho2": lambda x, t: t * np.cos(2 * PI * x),
        "a": lambda x, t: (x + 1) * (t + 1),
        "d": lambda x, t: x * np.sin(t),
        "b": constant(0.0),
        "u0": lambda x: 2 * x - x ** 2,
    }
    left = RobinCondition(1.0, -2.0, lambda t: 2.0 * e1(t))
    return CaseData(coefficients, exact, f, ZeroKernel(), left, RobinCondition.neumann())


def _example4(case: ExampleCase) -> CaseData:
    nu1, nu2 = case.nu1, case.nu2
    g1 = gamma(1.0 + nu1)
    g2m = gamma(2.0 - nu1)
    g3m = gamma(3.0 - nu1)
    h2 = gamma(2.0 - nu2)
    h12 = gamma(1.0 + nu1 - nu2)

    def cc(x, y):
        return np.cos(PI * x / 4) * np.cos(PI * y / 4)

    def exact(x, y, t):
        return (1.0 + t + t ** nu1) * np.sin(PI * x) * np.cos(PI * y)

    def rho2(x, y, t):
        return 1.0 + (t + 1.0) * (x + y + 0.01)

    def f(x, y, t):
        g = 1.0 + t + t ** nu1
        # a1 + a2 = 3 (cos(pi x/4) cos(pi y/4) + t)
        bracket = (
            (1.0 + x ** 2 + y ** 2) * (g1 + t ** (1.0 - nu1) / g2m)
            - rho2(x, y, t) * (t ** (1.0 - nu2) / h2 + t ** (nu1 - nu2) * g1 / h12)
            + 3 * PI ** 2 * g * (t + cc(x, y))
            + 4 * PI ** 2 * (t * g1 + t ** (1.0 - nu1) / g2m + t ** (2.0 - nu1) / g3m)
        )
        return (
            bracket * np.sin(PI * x) * np.cos(PI * y)
            + PI * g * ((x + y) * np.cos(PI * (x + y)) + t * np.cos(PI * (x - y)))
        )

    coefficients = {
        "rho1": lambda x, y: 1.0 + x ** 2 + y ** 2,
        "rho2": rho2,
        "a1": lambda x, y, t: cc(x, y) + t,
        "a2": lambda x, y, t: 2 * cc(x, y) + 2 * t,
        "d1": lambda x, y, t: x + y + t,
        "d2": lambda x, y, t: x + y - t,
        "b1": lambda x, y, t: x + y + 1.0,
        "b2": lambda x, y, t: 3.0 - x - y,
        "u0": lambda x, y: np.sin(PI * x) * np.cos(PI * y),
    }
    return CaseData(coefficients, exact, f, OmegaKernel(1.0 - nu1))


_BUILDERS: Dict[ExampleId, Callable[[ExampleCase], CaseData]] = {
    ExampleId.EX1I: _example1,
    ExampleId.EX1II: _example1,
    ExampleId.EX1EXT: _example1,
    ExampleId.EX2: _example2,
    ExampleId.EX3: _example3,
    ExampleId.EX4: _example4,
}


@lru_cache(maxsize=256)
def _case_data(case: ExampleCase) -> CaseData:
    return _BUILDERS[case.id](case)


def exact(case: ExampleCase, point: Tuple[float, ...]):
    """Closed-form solution at (x, t) or (x, y, t)."""
    return case.exact(*point)


def forcing(case: ExampleCase, point: Tuple[float, ...]):
    """Right-hand side f at (x, t) or (x, y, t)."""
    return case.forcing(*point)


def build_problem(case: ExampleCase) -> Union[Problem1D, Problem2D]:
    return case.build_problem()
