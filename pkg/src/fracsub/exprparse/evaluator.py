#!/usr/bin/env python3
# SPDX-License-Identifier: MIT
# Copyright (c) 2025 fracsub contributors
"""
Constant folding, printing and evaluation of expression ASTs.

Evaluation is vectorised: bindings may be numpy arrays and the result
broadcasts like numpy arithmetic. Floating point exceptions follow IEEE
(1/0 = inf) instead of raising.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import ExpressionError
from ..numerics import special
from .nodes import Binary, Call, Const, Expr, Neg, Number, Var, free_variables, walk
from .parser import parse

logger = logging.getLogger(__name__)

Value = Union[float, np.ndarray]

_BINARY: Dict[str, Callable[[Value, Value], Value]] = {
    "+": np.add,
    "-": np.subtract,
    "*": np.multiply,
    "/": np.divide,
    "^": np.power,
}

_CONSTANTS: Dict[str, float] = {"pi": math.pi}


def _scalar(value: Value, func: str, position: int) -> float:
    arr = np.asarray(value, dtype=float)
    if arr.size != 1:
        raise ExpressionError(f"argument {position} of {func} must be a scalar parameter")
    return float(arr.reshape(()))


def _ml1(alpha, z):
    return special.ml1(_scalar(alpha, "ml1", 1), z)


def _ml2(alpha, beta, z):
    return special.ml2(_scalar(alpha, "ml2", 1), _scalar(beta, "ml2", 2), z)


def _omega(theta, t):
    return special.omega(_scalar(theta, "omega", 1), t)


_FUNCTIONS: Dict[str, Callable[..., Value]] = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "ln": np.log,
    "abs": np.abs,
    "sqrt": np.sqrt,
    "gamma": special.gamma,
    "omega": _omega,
    "ml1": _ml1,
    "ml2": _ml2,
}


def evaluate(ast: Expr, bindings: Optional[Mapping[str, Value]] = None) -> Value:
    """
    Evaluate an AST in IEEE double precision.

    Raises:
        ExpressionError: unbound variable
        DomainError, ConvergenceError: from the special functions
    """
    bindings = bindings or {}
    with np.errstate(all="ignore"):
        result = _eval(ast, bindings)
    if np.ndim(result) == 0:
        return float(result)
    return result


def _eval(node: Expr, env: Mapping[str, Value]) -> Value:
    if isinstance(node, Number):
        return np.float64(node.value)
    if isinstance(node, Var):
        if node.name not in env:
            raise ExpressionError(f"unbound variable '{node.name}'", offset=node.offset)
        value = env[node.name]
        return np.asarray(value, dtype=float) if np.ndim(value) else np.float64(value)
    if isinstance(node, Const):
        return np.float64(_CONSTANTS[node.name])
    if isinstance(node, Neg):
        return np.negative(_eval(node.operand, env))
    if isinstance(node, Binary):
        return _BINARY[node.op](_eval(node.left, env), _eval(node.right, env))
    if isinstance(node, Call):
        args = [_eval(arg, env) for arg in node.args]
        return _FUNCTIONS[node.func](*args)
    raise TypeError(f"not an expression node: {node!r}")


def fold(ast: Expr) -> Expr:
    """Replace variable-free subtrees by their value when it is finite."""
    if isinstance(ast, (Number, Var)):
        return ast
    if isinstance(ast, Const):
        return Number(_CONSTANTS[ast.name], ast.offset)
    if isinstance(ast, Neg):
        node: Expr = Neg(fold(ast.operand), ast.offset)
    elif isinstance(ast, Binary):
        node = Binary(ast.op, fold(ast.left), fold(ast.right), ast.offset)
    else:
        node = Call(ast.func, tuple(fold(a) for a in ast.args), ast.offset)
    if free_variables(node):
        return node
    try:
        value = evaluate(node)
    except (ArithmeticError, ValueError):
        return node
    if isinstance(value, float) and math.isfinite(value):
        return Number(value, ast.offset)
    return node


def _format_number(value: float) -> str:
    if math.isnan(value):
        return "(0/0)"
    if math.isinf(value):
        return "(1/0)" if value > 0 else "(-(1/0))"
    text = repr(float(value))
    return f"({text})" if value < 0 or text.startswith("-") else text


def format_expr(ast: Expr) -> str:
    """Fully parenthesised source text that parses back to an equal-valued AST."""
    if isinstance(ast, Number):
        return _format_number(ast.value)
    if isinstance(ast, (Var, Const)):
        return ast.name
    if isinstance(ast, Neg):
        return f"(-{format_expr(ast.operand)})"
    if isinstance(ast, Binary):
        return f"({format_expr(ast.left)}{ast.op}{format_expr(ast.right)})"
    if isinstance(ast, Call):
        return f"{ast.func}({','.join(format_expr(a) for a in ast.args)})"
    raise TypeError(f"not an expression node: {ast!r}")


@dataclass(frozen=True)
class CompiledExpression:
    """
    A parsed and folded expression bound to a positional signature.

    Calling it with arrays for the signature variables returns an array of
    their broadcast shape; parameters (e.g. nu1, nu2) are fixed at compile time.
    """
    source: str
    ast: Expr
    signature: Tuple[str, ...]
    parameters: Mapping[str, float] = field(default_factory=dict)
    key: Optional[str] = None

    @property
    def variables(self) -> FrozenSet[str]:
        return free_variables(self.ast)

    def __call__(self, *args: Value) -> Value:
        if len(args) != len(self.signature):
            raise TypeError(
                f"{self.key or self.source} takes {len(self.signature)} arguments, "
                f"got {len(args)}"
            )
        env = dict(self.parameters)
        env.update(zip(self.signature, args))
        try:
            value = evaluate(self.ast, env)
        except ExpressionError as exc:
            raise exc.with_key(self.key) if self.key else exc
        shape = np.broadcast(*[np.asarray(a) for a in args]).shape if args else ()
        if shape:
            return np.broadcast_to(value, shape)
        return value


def compile_expression(
    src: Union[str, bytes],
    signature: Sequence[str],
    parameters: Optional[Mapping[str, float]] = None,
    key: Optional[str] = None,
) -> CompiledExpression:
    """
    Parse, check and fold ``src`` for use as a coefficient f(*signature).

    Raises:
        ExpressionError: parse failure, or a variable neither in the signature
            nor among the parameters (tagged with ``key``)
    """
    parameters = dict(parameters or {})
    allowed = set(signature) | set(parameters)
    try:
        ast = parse(src)
        unbound = free_variables(ast) - allowed
        if unbound:
            name = sorted(unbound)[0]
            offset = next(n.offset for n in _vars(ast) if n.name == name)
            raise ExpressionError(
                f"variable '{name}' is not available here",
                offset=offset,
                expected=frozenset(allowed),
            )
    except ExpressionError as exc:
        raise exc.with_key(key) if key else exc
    # parameters are constants from here on
    folded = fold(_substitute(ast, parameters))
    text = src.decode("utf-8") if isinstance(src, bytes) else src
    return CompiledExpression(text, folded, tuple(signature), parameters, key)


def _vars(ast: Expr):
    return (n for n in walk(ast) if isinstance(n, Var))


def _substitute(ast: Expr, values: Mapping[str, float]) -> Expr:
    if isinstance(ast, Var) and ast.name in values:
        return Number(float(values[ast.name]), ast.offset)
    if isinstance(ast, Neg):
        return Neg(_substitute(ast.operand, values), ast.offset)
    if isinstance(ast, Binary):
        left = _substitute(ast.left, values)
        return Binary(ast.op, left, _substitute(ast.right, values), ast.offset)
    if isinstance(ast, Call):
        return Call(ast.func, tuple(_substitute(a, values) for a in ast.args), ast.offset)
    return ast
