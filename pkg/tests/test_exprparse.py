#!/usr/bin/env python3
# SPDX-License-Identifier: MIT
# Copyright (c) 2025 fracsub contributors
"""
Tests for the coefficient expression language.
"""

import math
import os
import sys
import unittest

import numpy as np
from scipy import special as sp

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from fracsub.errors import DomainError, ExpressionError
from fracsub.exprparse import (
    Binary,
    Call,
    Const,
    Neg,
    Number,
    Var,
    compile_expression,
    evaluate,
    fold,
    format_expr,
    parse,
    tokenize,
)


def value(src, **bindings):
    return evaluate(parse(src), bindings)


class TestTokenizer(unittest.TestCase):

    def test_kinds_and_offsets(self):
        tokens = tokenize("2.5e-3 * x")
        self.assertEqual([t.kind for t in tokens], ["number", "op", "name", "end"])
        self.assertEqual([t.offset for t in tokens], [0, 7, 9, 10])

    def test_leading_dot_number(self):
        self.assertEqual(value(".5 + 1."), 1.5)

    def test_non_ascii_offset_is_in_bytes(self):
        with self.assertRaises(ExpressionError) as ctx:
            parse("t + é")
        self.assertEqual(ctx.exception.offset, 4)

    def test_invalid_utf8(self):
        with self.assertRaises(ExpressionError) as ctx:
            parse(b"x+\xff")
        self.assertEqual(ctx.exception.offset, 2)
        self.assertIn("UTF-8", str(ctx.exception))


class TestGrammar(unittest.TestCase):
    """Precedence and associativity."""

    def test_precedence(self):
        self.assertEqual(value("1+2*3"), 7.0)
        self.assertEqual(value("(1+2)*3"), 9.0)
        self.assertEqual(value("8/2/2"), 2.0)
        self.assertEqual(value("5-2-1"), 2.0)

    def test_power_is_right_associative(self):
        self.assertEqual(value("2^3^2"), 512.0)

    def test_power_binds_tighter_than_unary_minus(self):
        self.assertEqual(value("-2^2"), -4.0)
        self.assertEqual(value("(-2)^2"), 4.0)
        self.assertEqual(value("2^-1"), 0.5)
        self.assertEqual(value("--3"), 3.0)

    def test_ast_shape(self):
        ast = parse("x + t*2")
        self.assertEqual(ast, Binary("+", Var("x"), Binary("*", Var("t"), Number(2.0))))

    def test_functions_and_constants(self):
        self.assertAlmostEqual(value("sin(pi/2) + cos(0)"), 2.0)
        self.assertAlmostEqual(value("gamma(5) + sqrt(16) + abs(-1) + ln(exp(2))"), 31.0)
        self.assertAlmostEqual(value("omega(0.5, 4)"), 0.5 / math.sqrt(math.pi))
        self.assertAlmostEqual(value("ml1(0.5, -x)", x=1.0) / sp.erfcx(1.0), 1.0, places=12)
        self.assertAlmostEqual(value("ml2(1, 2, 0)"), 1.0)


class TestSyntaxErrors(unittest.TestCase):
    """Errors carry byte offsets and expected tokens."""

    def assert_error(self, src, offset, fragment=None):
        with self.assertRaises(ExpressionError) as ctx:
            parse(src)
        self.assertEqual(ctx.exception.offset, offset)
        if fragment:
            self.assertIn(fragment, str(ctx.exception))
        return ctx.exception

    def test_implicit_multiplication(self):
        self.assert_error("(t+1)(x+1)", 5, "implicit multiplication")
        self.assert_error("2x", 1, "implicit multiplication")
        self.assert_error("x(1)", 1, "implicit multiplication")

    def test_unknown_identifier(self):
        err = self.assert_error("1 + z", 4, "unknown identifier 'z'")
        self.assertIn("x", err.expected)

    def test_unknown_function(self):
        self.assert_error("foo(1)", 0, "unknown function 'foo'")

    def test_arity(self):
        self.assert_error("ml1(0.5)", 0, "takes 2 arguments, got 1")
        self.assert_error("sin(1, 2)", 0, "takes 1 argument, got 2")

    def test_incomplete(self):
        err = self.assert_error("1+", 2, "end of input")
        self.assertIn("number", err.expected)
        self.assert_error("(1+2", 4, "expected ')'")
        self.assert_error("x)", 1, "unmatched ')'")
        self.assert_error("", 0)

    def test_nesting_limit(self):
        with self.assertRaises(ExpressionError):
            parse("(" * 500 + "1" + ")" * 500)

    def test_nesting_within_limit(self):
        self.assertEqual(value("(" * 50 + "1" + ")" * 50), 1.0)


class TestEvaluation(unittest.TestCase):

    def test_ieee_semantics(self):
        self.assertEqual(value("1/0"), math.inf)
        self.assertTrue(math.isnan(value("0/0")))

    def test_unbound_variable(self):
        with self.assertRaises(ExpressionError):
            value("x + 1")

    def test_broadcasting(self):
        x = np.linspace(0.0, 1.0, 4)
        result = value("x*t + 1", x=x, t=2.0)
        np.testing.assert_allclose(result, 2 * x + 1)

    def test_special_function_domain(self):
        with self.assertRaises(DomainError):
            value("gamma(0)")


class TestFoldAndFormat(unittest.TestCase):

    def test_fold_constant_subtrees(self):
        folded = fold(parse("2*pi + x"))
        self.assertEqual(folded, Binary("+", Number(2 * math.pi), Var("x")))

    def test_fold_keeps_non_finite(self):
        self.assertIsInstance(fold(parse("1/0")), Binary)

    def test_format_parses_back(self):
        env = {"x": 0.37, "t": 0.81, "nu1": 0.6}
        for src in ("-2^2", "x - -t", "2^3^2*x", "t^(nu1-1)/gamma(nu1)", "ml1(nu1, -t^nu1)",
                    "-(x+t)*(x-t)"):
            ast = parse(src)
            again = parse(format_expr(ast))
            self.assertEqual(evaluate(again, env), evaluate(ast, env), src)
            folded = fold(ast)
            self.assertEqual(evaluate(parse(format_expr(folded)), env), evaluate(folded, env), src)

    def test_format_of_non_finite_numbers(self):
        self.assertEqual(format_expr(Number(math.inf)), "(1/0)")
        self.assertEqual(evaluate(parse(format_expr(Number(-math.inf)))), -math.inf)


class TestCompile(unittest.TestCase):

    def test_signature_and_broadcast(self):
        f = compile_expression("x*t", ("x", "t"))
        x = np.array([0.0, 0.5, 1.0])
        np.testing.assert_allclose(f(x, 2.0), [0.0, 1.0, 2.0])
        self.assertEqual(f(0.5, 2.0), 1.0)

    def test_constant_broadcasts_to_nodes(self):
        f = compile_expression("2", ("x", "t"))
        self.assertEqual(f(np.zeros(4), 0.3).shape, (4,))

    def test_parameters_are_folded(self):
        f = compile_expression("t^nu1", ("x", "t"), parameters={"nu1": 0.5})
        self.assertEqual(f.variables, frozenset({"t"}))
        self.assertAlmostEqual(f(0.0, 4.0), 2.0)

    def test_variable_outside_signature(self):
        with self.assertRaises(ExpressionError) as ctx:
            compile_expression("1 + y", ("x", "t"), key="problem.coefficients.f")
        self.assertEqual(ctx.exception.key, "problem.coefficients.f")
        self.assertEqual(ctx.exception.offset, 4)
        self.assertTrue(str(ctx.exception).startswith("problem.coefficients.f: "))

    def test_parse_error_is_keyed(self):
        with self.assertRaises(ExpressionError) as ctx:
            compile_expression("(t+1)(x+1)", ("x", "t"), key="problem.coefficients.a")
        self.assertEqual(ctx.exception.key, "problem.coefficients.a")
        self.assertEqual(ctx.exception.offset, 5)

    def test_wrong_argument_count(self):
        f = compile_expression("x", ("x", "t"))
        with self.assertRaises(TypeError):
            f(1.0)

FRAGMENTS = ("x", "t", "y", "nu1", "pi", "2", "0.5", "1e3", ".7", "+", "-", "*", "/", "^",
             "(", ")", ",", " ", "sin", "gamma", "ml1", "omega", "z")
NODE_TYPES = (Binary, Call, Const, Neg, Number, Var)


class TestRandomInputs(unittest.TestCase):
    """Seeded random sources and bindings."""

    def setUp(self):
        self.rng = np.random.default_rng(42)

    def random_source(self):
        if self.rng.random() < 0.5:
            size = int(self.rng.integers(0, 40))
            return self.rng.integers(0, 256, size=size, dtype=np.uint8).tobytes()
        picks = self.rng.integers(0, len(FRAGMENTS), size=int(self.rng.integers(1, 14)))
        return "".join(FRAGMENTS[i] for i in picks).encode("utf-8")

    def test_parser_never_fails_unexpectedly(self):
        parsed = 0
        for _ in range(3000):
            data = self.random_source()
            try:
                ast = parse(data)
            except ExpressionError as exc:
                self.assertTrue(0 <= exc.offset <= len(data), data)
                continue
            parsed += 1
            self.assertIsInstance(ast, NODE_TYPES)
            self.assertIsInstance(parse(format_expr(ast)), NODE_TYPES)
        self.assertGreater(parsed, 0)

    def test_format_round_trip_over_random_bindings(self):
        sources = (
            "-x^2 + 3*x*t - 1/(1+t)",
            "2^-x^2 - -t",
            "exp(-t)*cos(pi*x) + sin(x)/(t+0.5)",
            "t^(nu1-1)/gamma(nu1) * abs(x)",
            "ml1(nu1, -t^nu1) * (1 - x/2)",
            "omega(1-nu1, t) + sqrt(abs(x))*ln(t)",
        )
        env = {
            "x": self.rng.uniform(-2.0, 2.0, size=1000),
            "t": self.rng.uniform(0.01, 3.0, size=1000),
            "nu1": float(self.rng.uniform(0.1, 0.9)),
        }
        for src in sources:
            ast = parse(src)
            with self.subTest(src=src):
                for tree in (ast, fold(ast)):
                    again = parse(format_expr(tree))
                    np.testing.assert_array_equal(evaluate(again, env), evaluate(tree, env))


if __name__ == '__main__':
    unittest.main()
