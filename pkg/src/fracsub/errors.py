#!/usr/bin/env python3
# SPDX-License-Identifier: MIT
# Copyright (c) 2025 fracsub contributors
"""
Exception hierarchy for fracsub.

Every error derives from a built-in exception so callers can keep catching
ValueError / ArithmeticError where that is all they care about.
"""

from typing import FrozenSet, Optional, Tuple


class FracsubError(Exception):
    """Base class for all fracsub errors."""


class DomainError(FracsubError, ValueError):
    """Argument outside the domain of a function or operator."""


class ShapeError(FracsubError, ValueError):
    """Length or shape mismatch between discrete operands."""


class ConvergenceError(FracsubError, ArithmeticError):
    """An evaluation strategy could not certify its tolerance."""


class SingularSystemError(FracsubError, ArithmeticError):
    """Zero pivot met while factoring a linear system."""

    def __init__(self, message: str, row: Optional[int] = None):
        super().__init__(message)
        self.row = row

    def __reduce__(self):
        return (type(self), (self.args[0], self.row))


class ExpressionError(FracsubError, ValueError):
    """Tokenizer, parser or evaluator failure in a coefficient expression."""

    def __init__(
        self,
        message: str,
        offset: Optional[int] = None,
        expected: Optional[FrozenSet[str]] = None,
        key: Optional[str] = None,
    ):
        self.message = message
        self.offset = offset
        self.expected = frozenset(expected or ())
        self.key = key
        super().__init__(self._render())

    def __reduce__(self):
        return (type(self), (self.message, self.offset, self.expected, self.key))

    def _render(self) -> str:
        parts = []
        if self.key:
            parts.append(f"{self.key}: ")
        parts.append(self.message)
        if self.offset is not None:
            parts.append(f" (at byte {self.offset})")
        if self.expected:
            parts.append(f"; expected one of: {', '.join(sorted(self.expected))}")
        return "".join(parts)

    def with_key(self, key: str) -> "ExpressionError":
        return ExpressionError(self.message, self.offset, self.expected, key)


class ConfigError(FracsubError, ValueError):
    """Invalid run configuration."""

    def __init__(self, message: str, key: Optional[str] = None, offset: Optional[int] = None):
        self.key = key
        self.offset = offset
        prefix = f"{key}: " if key else ""
        suffix = f" (at byte {offset})" if offset is not None else ""
        super().__init__(f"{prefix}{message}{suffix}")
        self.message = message

    def __reduce__(self):
        return (type(self), (self.message, self.key, self.offset))


class SolverError(FracsubError, RuntimeError):
    """Failure during a time march; carries the level and, if known, the node."""

    def __init__(
        self,
        message: str,
        level: Optional[int] = None,
        node: Optional[Tuple[float, ...]] = None,
    ):
        self.level = level
        self.node = node
        details = []
        if level is not None:
            details.append(f"level {level}")
        if node is not None:
            details.append("node (" + ", ".join(f"{c:.6g}" for c in node) + ")")
        suffix = f" [{'; '.join(details)}]" if details else ""
        super().__init__(f"{message}{suffix}")
        self.message = message

    def __reduce__(self):
        return (type(self), (self.message, self.level, self.node))


# Errors the CLI reports as numerical failures (exit code 3).
NUMERICAL_ERRORS = (SolverError, SingularSystemError, ConvergenceError, DomainError, ShapeError)
