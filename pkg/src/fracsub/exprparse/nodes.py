#!/usr/bin/env python3
# SPDX-License-Identifier: MIT
# Copyright (c) 2025 fracsub contributors
"""
AST node types of the coefficient expression language.

Nodes are immutable; ``offset`` (byte position in the source) is kept for
error messages and ignored by equality.
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, Tuple, Union

VARIABLES: FrozenSet[str] = frozenset({"x", "y", "t", "nu1", "nu2"})
CONSTANTS: FrozenSet[str] = frozenset({"pi"})

# name -> arity
FUNCTIONS: Dict[str, int] = {
    "sin": 1,
    "cos": 1,
    "exp": 1,
    "ln": 1,
    "abs": 1,
    "sqrt": 1,
    "gamma": 1,
    "omega": 2,
    "ml1": 2,
    "ml2": 3,
}

BINARY_OPERATORS: Tuple[str, ...] = ("+", "-", "*", "/", "^")


@dataclass(frozen=True)
class Number:
    value: float
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Var:
    name: str
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Const:
    name: str
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Call:
    func: str
    args: Tuple["Expr", ...]
    offset: int = field(default=0, compare=False)


Expr = Union[Number, Var, Const, Neg, Binary, Call]


def children(node: Expr) -> Tuple[Expr, ...]:
    if isinstance(node, Neg):
        return (node.operand,)
    if isinstance(node, Binary):
        return (node.left, node.right)
    if isinstance(node, Call):
        return node.args
    return ()


def walk(node: Expr) -> Iterator[Expr]:
    """Pre-order traversal (iterative)."""
    stack = [node]
    while stack:
        current = stack.pop()
        yield current
        stack.extend(reversed(children(current)))


def free_variables(node: Expr) -> FrozenSet[str]:
    return frozenset(n.name for n in walk(node) if isinstance(n, Var))
