#!/usr/bin/env python3
# SPDX-License-Identifier: MIT
# Copyright (c) 2025 fracsub contributors
"""
Run configuration: YAML documents validated by pydantic models.

A config has four sections::

    problem:
      dimension: 1            # 1 or 2
      nu1: 0.5
      nu2_rule: half          # or nu2: 0.25
      T: 0.1
      coefficients:
        rho1: "1 + x^2"
        f: "gamma(1+nu1)*(x^2+1) - ..."
        u0: "0"
      kernel: {type: omega}   # zero | power | omega
      left:  {c_dx: 1, c_u: 0, phi: "0"}
      right: {c_dx: 1, c_u: 0, phi: "0"}
    grid: {K: 1000, J: 100}
    solver: {richardson: true}
    metadata: {name: my-run}

Coefficients are strings in the expression language of ``fracsub.exprparse``;
``nu1`` and ``nu2`` are available in every expression as constants.
"""

import hashlib
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Literal, Mapping, Optional, Tuple, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .errors import ConfigError, DomainError, ExpressionError
from .exprparse import CompiledExpression, compile_expression
from .numerics.fracops import MemoryKernel, kernel_from_name
from .solvers.solver1d import Grid1D, Problem1D, RobinCondition
from .solvers.solver2d import Grid2D, Problem2D

logger = logging.getLogger(__name__)

OUT_DIR_ENV = "FRACSUB_OUT_DIR"
DEFAULT_OUT_DIR = "results"

NU2_RULES: Dict[str, float] = {"half": 2.0, "third": 3.0}

# ========== expression signatures ==========

SIGNATURES_1D: Dict[str, Tuple[str, ...]] = {
    "rho1": ("x",),
    "u0": ("x",),
    "rho2": ("x", "t"),
    "a": ("x", "t"),
    "d": ("x", "t"),
    "b": ("x", "t"),
    "f": ("x", "t"),
}

SIGNATURES_2D: Dict[str, Tuple[str, ...]] = {
    "rho1": ("x", "y"),
    "u0": ("x", "y"),
    "rho2": ("x", "y", "t"),
    "a1": ("x", "y", "t"),
    "a2": ("x", "y", "t"),
    "d1": ("x", "y", "t"),
    "d2": ("x", "y", "t"),
    "b1": ("x", "y", "t"),
    "b2": ("x", "y", "t"),
    "f": ("x", "y", "t"),
}

# coefficients that may be left out of a config
DEFAULTS_1D: Dict[str, str] = {"rho1": "1", "rho2": "0", "a": "1", "d": "0", "b": "0"}
DEFAULTS_2D: Dict[str, str] = {
    "rho1": "1", "rho2": "0", "a1": "1", "a2": "1",
    "d1": "0", "d2": "0", "b1": "0", "b2": "0",
}


def nu2_divisor(rule: Union[str, float]) -> float:
    """Divisor of a nu2 rule: 'half', 'third' or a number d (nu2 = nu1 / d)."""
    if isinstance(rule, str) and rule.lower() in NU2_RULES:
        return NU2_RULES[rule.lower()]
    try:
        divisor = float(rule)
    except (TypeError, ValueError):
        raise ConfigError(
            f"unknown nu2 rule '{rule}', expected half, third or a divisor > 1",
            key="problem.nu2_rule",
        ) from None
    if not divisor > 1.0:
        raise ConfigError(f"nu2 divisor must be > 1, got {divisor:g}", key="problem.nu2_rule")
    return divisor


# ========== sections ==========

class BoundarySection(BaseModel):
    """c_dx u_x + c_u u = phi(t) at one end of the interval."""
    model_config = ConfigDict(extra="forbid")

    c_dx: float = 0.0
    c_u: float = 1.0
    phi: str = "0"

    @model_validator(mode="after")
    def _not_both_zero(self) -> "BoundarySection":
        if self.c_dx == 0 and self.c_u == 0:
            raise ValueError("c_dx and c_u cannot both be zero")
        return self


class KernelSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    type: Literal["zero", "power", "omega"] = "zero"
    theta: Optional[float] = Field(default=None, gt=0)
    coefficient: float = 1.0
    exponent: float = Field(default=0.0, lt=1)


class ProblemSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dimension: Literal[1, 2] = 1
    nu1: float = Field(gt=0, le=1)
    nu2: Optional[float] = Field(default=None, gt=0)
    nu2_rule: Optional[str] = None
    L: float = Field(default=1.0, gt=0)
    Lx: float = Field(default=1.0, gt=0)
    Ly: float = Field(default=1.0, gt=0)
    T: float = Field(default=1.0, gt=0)
    coefficients: Dict[str, str] = Field(default_factory=dict)
    kernel: KernelSection = Field(default_factory=KernelSection)
    left: BoundarySection = Field(default_factory=BoundarySection)
    right: BoundarySection = Field(default_factory=BoundarySection)
    y_boundary: Literal["neumann", "dirichlet"] = "neumann"

    @model_validator(mode="after")
    def _check_orders(self) -> "ProblemSection":
        if self.nu2 is not None and self.nu2_rule is not None:
            raise ValueError("give either nu2 or nu2_rule, not both")
        nu1, nu2 = self.orders
        if not 0.0 < nu2 < nu1 <= 1.0:
            raise ValueError(f"orders must satisfy 0 < nu2 < nu1 <= 1, got nu1={nu1}, nu2={nu2}")
        signatures = self.signatures
        unknown = sorted(set(self.coefficients) - set(signatures))
        if unknown:
            raise ValueError(
                f"unknown coefficient '{unknown[0]}', expected one of: {', '.join(signatures)}"
            )
        missing = [k for k in ("f", "u0") if k not in self.coefficients]
        if missing:
            raise ValueError(f"coefficient '{missing[0]}' is required")
        return self

    @property
    def orders(self) -> Tuple[float, float]:
        if self.nu2 is not None:
            return self.nu1, self.nu2
        rule = self.nu2_rule or "half"
        try:
            return self.nu1, self.nu1 / nu2_divisor(rule)
        except ConfigError as exc:
            raise ValueError(str(exc)) from None

    @property
    def signatures(self) -> Dict[str, Tuple[str, ...]]:
        return SIGNATURES_2D if self.dimension == 2 else SIGNATURES_1D

    def expressions(self) -> Dict[str, str]:
        """Every coefficient source, defaults filled in."""
        defaults = DEFAULTS_2D if self.dimension == 2 else DEFAULTS_1D
        merged = dict(defaults)
        merged.update(self.coefficients)
        return merged


class GridSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    K: int = Field(default=1000, ge=2)
    Kx: int = Field(default=100, ge=2)
    Ky: int = Field(default=100, ge=2)
    J: int = Field(default=100, ge=1)


class SolverSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    richardson: bool = True
    output_dir: Optional[str] = None
    profile: bool = False


class MetadataSection(BaseModel):
    model_config = ConfigDict(extra="allow")

    name: str = "run"
    description: Optional[str] = None


class RunConfig(BaseModel):
    """A validated run configuration."""
    model_config = ConfigDict(extra="forbid")

    problem: ProblemSection
    grid: GridSection = Field(default_factory=GridSection)
    solver: SolverSection = Field(default_factory=SolverSection)
    metadata: MetadataSection = Field(default_factory=MetadataSection)

    @property
    def dimension(self) -> int:
        return self.problem.dimension

    @property
    def name(self) -> str:
        return self.metadata.name


# ========== loading ==========

def _validation_error(exc: ValidationError) -> ConfigError:
    first = exc.errors()[0]
    key = ".".join(str(part) for part in first.get("loc", ())) or None
    message = first.get("msg", str(exc))
    if message.startswith("Value error, "):
        message = message[len("Value error, "):]
    return ConfigError(message, key=key)


def parse_config(data: Mapping[str, Any]) -> RunConfig:
    """
    Validate a config mapping and check every expression compiles.

    Raises:
        ConfigError: naming the offending key (and byte offset for expressions)
    """
    if not isinstance(data, Mapping):
        raise ConfigError("config must be a mapping with a 'problem' section")
    try:
        config = RunConfig.model_validate(dict(data))
    except ValidationError as exc:
        raise _validation_error(exc) from None
    compile_coefficients(config)
    return config


def load_config(path: Union[str, Path]) -> RunConfig:
    """Read and validate a YAML run config."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        offset = mark.index if mark is not None else None
        detail = getattr(exc, "problem", None) or exc
        raise ConfigError(f"invalid YAML in {path}: {detail}", offset=offset) from None
    config = parse_config(data or {})
    logger.info(f"loaded config {path} ({config.name}, {config.dimension}D)")
    return config


def apply_overrides(config: RunConfig, **sections: Mapping[str, Any]) -> RunConfig:
    """
    Return a re-validated copy with section values replaced, e.g.
    ``apply_overrides(config, grid={"K": 200})``. None values are ignored.
    """
    data = config.model_dump()
    for section, values in sections.items():
        if section not in data:
            raise ConfigError(f"unknown config section '{section}'")
        for key, value in values.items():
            if value is not None:
                data[section][key] = value
    if "nu2_rule" in sections.get("problem", {}) and sections["problem"]["nu2_rule"] is not None:
        data["problem"]["nu2"] = None
    return parse_config(data)


def canonical_hash(data: Mapping[str, Any]) -> str:
    """sha256 of sorted, whitespace-free JSON."""
    canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def config_hash(config: RunConfig) -> str:
    return canonical_hash(config.model_dump(mode="json"))


def output_root(
    flag: Optional[Union[str, Path]] = None, config: Optional[RunConfig] = None
) -> Path:
    """--out flag, then $FRACSUB_OUT_DIR, then solver.output_dir, then ./results."""
    if flag:
        return Path(flag)
    env = os.environ.get(OUT_DIR_ENV)
    if env:
        return Path(env)
    if config is not None and config.solver.output_dir:
        return Path(config.solver.output_dir)
    return Path(DEFAULT_OUT_DIR)


# ========== problem construction ==========

def _compile(
    source: str, signature: Tuple[str, ...], parameters: Dict[str, float], key: str
) -> CompiledExpression:
    try:
        return compile_expression(source, signature, parameters, key=key)
    except ExpressionError as exc:
        raise ConfigError(exc.message, key=key, offset=exc.offset) from exc


def compile_coefficients(config: RunConfig) -> Dict[str, CompiledExpression]:
    """Compile every coefficient and boundary datum of ``config``."""
    problem = config.problem
    nu1, nu2 = problem.orders
    parameters = {"nu1": nu1, "nu2": nu2}
    compiled = {
        name: _compile(source, problem.signatures[name], parameters, f"problem.coefficients.{name}")
        for name, source in problem.expressions().items()
    }
    if problem.dimension == 1:
        compiled["left.phi"] = _compile(problem.left.phi, ("t",), parameters, "problem.left.phi")
        compiled["right.phi"] = _compile(problem.right.phi, ("t",), parameters, "problem.right.phi")
    return compiled


def build_kernel(config: RunConfig) -> MemoryKernel:
    section = config.problem.kernel
    params: Dict[str, float] = {"coefficient": section.coefficient, "exponent": section.exponent}
    if section.theta is not None:
        params["theta"] = section.theta
    try:
        return kernel_from_name(section.type, config.problem.nu1, **params)
    except DomainError as exc:
        raise ConfigError(str(exc), key="problem.kernel") from None


def build_problem(config: RunConfig) -> Union[Problem1D, Problem2D]:
    """Compile the expressions of ``config`` into a Problem1D or Problem2D."""
    p = config.problem
    nu1, nu2 = p.orders
    c = compile_coefficients(config)
    kernel = build_kernel(config)
    try:
        if p.dimension == 2:
            return Problem2D(
                nu1=nu1, nu2=nu2, rho1=c["rho1"], rho2=c["rho2"],
                a1=c["a1"], a2=c["a2"], d1=c["d1"], d2=c["d2"], b1=c["b1"], b2=c["b2"],
                f=c["f"], u0=c["u0"], kernel=kernel, Lx=p.Lx, Ly=p.Ly, T=p.T,
                y_boundary=p.y_boundary, name=config.name,
            )
        return Problem1D(
            nu1=nu1, nu2=nu2, rho1=c["rho1"], rho2=c["rho2"], a=c["a"], d=c["d"], b=c["b"],
            f=c["f"], u0=c["u0"],
            left=RobinCondition(p.left.c_dx, p.left.c_u, c["left.phi"]),
            right=RobinCondition(p.right.c_dx, p.right.c_u, c["right.phi"]),
            kernel=kernel, L=p.L, T=p.T, name=config.name,
        )
    except DomainError as exc:
        raise ConfigError(str(exc), key="problem") from None


def build_grid(config: RunConfig) -> Union[Grid1D, Grid2D]:
    p, g = config.problem, config.grid
    if p.dimension == 2:
        return Grid2D(g.Kx, g.Ky, g.J, p.Lx, p.Ly, p.T)
    return Grid1D(g.K, g.J, p.L, p.T)
