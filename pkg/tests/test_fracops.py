#!/usr/bin/env python3
# SPDX-License-Identifier: MIT
# Copyright (c) 2025 fracsub contributors
"""
Tests for the discrete fractional operators and memory quadrature.
"""

import math
import os
import sys
import unittest

import numpy as np
from scipy import special as sp

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from fracsub.errors import DomainError, ShapeError
from fracsub.numerics.fracops import (
    CallableKernel,
    NodeHistory,
    OmegaKernel,
    PowerKernel,
    ZeroKernel,
    caputo_history,
    caputo_power,
    discrete_caputo,
    endpoint_weight,
    gl_weights,
    kernel_from_name,
    kernel_quadrature,
    lag_integrals,
    memory_explicit,
    memory_term,
    richardson_combine,
)


class TestGLWeights(unittest.TestCase):
    """Grunwald-Letnikov weight identities."""

    def test_matches_binomials(self):
        for nu in (0.1, 0.45, 0.9):
            w = gl_weights(nu, 12)
            m = np.arange(13)
            expected = (-1.0) ** m * sp.binom(nu, m)
            np.testing.assert_allclose(w.weights, expected, rtol=1e-12, atol=1e-15)

    def test_first_weights(self):
        w = gl_weights(0.3, 3)
        self.assertEqual(w[0], 1.0)
        self.assertAlmostEqual(w[1], -0.3)
        self.assertAlmostEqual(w[2], -0.3 * 0.7 / 2)

    def test_partial_sums(self):
        # sum_{m<=M} rho_m = (-1)^M C(nu-1, M)
        for nu in (0.2, 0.5, 0.85):
            w = gl_weights(nu, 1000)
            M = np.arange(1001)
            expected = (-1.0) ** M * sp.binom(nu - 1.0, M)
            np.testing.assert_allclose(w.partial_sums(), expected, atol=1e-10)

    def test_sign_pattern(self):
        w = gl_weights(0.6, 50).weights
        self.assertGreater(w[0], 0)
        self.assertTrue(np.all(w[1:] < 0))

    def test_order_one(self):
        w = gl_weights(1.0, 5).weights
        np.testing.assert_array_equal(w, [1.0, -1.0, 0.0, 0.0, 0.0, 0.0])

    def test_horizon_and_immutability(self):
        w = gl_weights(0.5, 7)
        self.assertEqual(w.horizon, 7)
        self.assertEqual(len(w), 8)
        with self.assertRaises(ValueError):
            w.weights[0] = 2.0

    def test_invalid(self):
        with self.assertRaises(DomainError):
            gl_weights(0.0, 5)
        with self.assertRaises(DomainError):
            gl_weights(1.2, 5)
        with self.assertRaises(DomainError):
            gl_weights(0.5, -1)


class TestDiscreteCaputo(unittest.TestCase):
    """GL approximation of the Caputo derivative."""

    def test_backward_difference_at_order_one(self):
        h = NodeHistory(np.array([0.0, 0.1, 0.3]), 0.0)
        self.assertAlmostEqual(discrete_caputo(h, gl_weights(1.0, 2), 0.1), 2.0, places=12)

    def test_constant_history(self):
        h = NodeHistory(np.full(20, 3.5), 3.5)
        self.assertEqual(discrete_caputo(h, gl_weights(0.4, 19), 0.05), 0.0)

    def test_converges_for_linear_function(self):
        nu, J = 0.5, 1000
        sigma = 1.0 / J
        h = NodeHistory.sample(lambda t: t, sigma, J)
        value = discrete_caputo(h, gl_weights(nu, J), sigma)
        self.assertAlmostEqual(value, caputo_power(1.0, nu, 1.0), delta=5e-3)

    def test_richardson_improves_accuracy(self):
        nu, J = 0.6, 200
        exact = caputo_power(2.0, nu, 1.0)
        coarse_sigma, fine_sigma = 1.0 / J, 0.5 / J
        coarse = discrete_caputo(NodeHistory.sample(lambda t: t ** 2, coarse_sigma, J),
                                 gl_weights(nu, J), coarse_sigma)
        fine = discrete_caputo(NodeHistory.sample(lambda t: t ** 2, fine_sigma, 2 * J),
                               gl_weights(nu, 2 * J), fine_sigma)
        combined = richardson_combine(coarse, fine)
        self.assertLess(abs(combined - exact), 0.2 * abs(fine - exact))

    def test_history_must_start_at_initial_value(self):
        with self.assertRaises(ShapeError):
            NodeHistory(np.array([1.0, 2.0]), 0.0)
        with self.assertRaises(ShapeError):
            NodeHistory(np.array([]), 0.0)

    def test_table_too_short(self):
        h = NodeHistory(np.zeros(10), 0.0)
        with self.assertRaises(ShapeError):
            discrete_caputo(h, gl_weights(0.5, 4), 0.1)

    def test_nonpositive_step(self):
        with self.assertRaises(DomainError):
            discrete_caputo(NodeHistory(np.zeros(3), 0.0), gl_weights(0.5, 3), 0.0)

    def test_caputo_history_splits_the_sum(self):
        rng = np.random.default_rng(3)
        values = np.concatenate(([0.7], rng.normal(size=9)))
        w = gl_weights(0.35, 9)
        sigma = 0.01
        full = discrete_caputo(NodeHistory(values, 0.7), w, sigma)
        explicit = caputo_history(values[:-1, None], np.array([0.7]), w)[0]
        self.assertAlmostEqual(full, sigma ** -0.35 * ((values[-1] - 0.7) + explicit), places=10)


class TestRichardsonAndPowers(unittest.TestCase):

    def test_combine(self):
        self.assertEqual(richardson_combine(1.0, 2.0), 3.0)
        self.assertAlmostEqual(richardson_combine(1.0, 2.0, order=2), 7.0 / 3.0)
        np.testing.assert_allclose(richardson_combine(np.ones(3), np.full(3, 2.0)), np.full(3, 3.0))

    def test_combine_order(self):
        with self.assertRaises(DomainError):
            richardson_combine(1.0, 1.0, order=0)

    def test_caputo_power(self):
        self.assertAlmostEqual(caputo_power(2.0, 0.5, 1.0), 2.0 / math.gamma(2.5), places=13)
        self.assertEqual(caputo_power(0.0, 0.5, 2.0), 0.0)
        self.assertAlmostEqual(caputo_power(0.5, 0.5, 3.0), math.gamma(1.5), places=13)


class TestMemoryKernels(unittest.TestCase):
    """Kernel descriptors and their exact step integrals."""

    def test_power_kernel(self):
        k = PowerKernel(2.0, 0.5)
        self.assertAlmostEqual(k(4.0), 1.0)
        self.assertAlmostEqual(float(k.integral(0.0, 1.0)), 4.0)

    def test_power_kernel_not_integrable(self):
        with self.assertRaises(DomainError):
            PowerKernel(1.0, 1.0)

    def test_omega_kernel(self):
        k = OmegaKernel(0.5)
        self.assertAlmostEqual(float(k.integral(0.0, 0.25)), 0.5 / math.gamma(1.5), places=13)
        with self.assertRaises(DomainError):
            OmegaKernel(0.0)

    def test_callable_kernel_quadrature(self):
        k = CallableKernel(lambda t: np.exp(-np.asarray(t)), label="exp(-t)")
        self.assertAlmostEqual(float(k.integral(0.0, 1.0)), 1.0 - math.exp(-1.0), places=11)
        self.assertEqual(k.describe(), "exp(-t)")
        with self.assertRaises(DomainError):
            CallableKernel(lambda t: 1.0 / t, integrable=False)

    def test_zero_kernel(self):
        k = ZeroKernel()
        self.assertTrue(k.is_zero)
        np.testing.assert_array_equal(lag_integrals(k, 0.1, 4), np.zeros(4))

    def test_quadrature_additivity(self):
        for kernel in (OmegaKernel(0.3), PowerKernel(1.0, 1.0 / 3.0),
                       CallableKernel(lambda t: np.cos(t))):
            lags = lag_integrals(kernel, 0.01, 50)
            total = float(kernel.integral(0.0, 0.5))
            self.assertAlmostEqual(float(np.sum(lags)), total, places=10)

    def test_kernel_quadrature_reverses_lags(self):
        q = kernel_quadrature(OmegaKernel(0.4), 0.1, 5)
        self.assertEqual(len(q), 6)
        np.testing.assert_array_equal(q.weights, q.lags[::-1])
        self.assertEqual(endpoint_weight(q.lags), q.weights[-1])

    def test_kernel_from_name(self):
        self.assertIsInstance(kernel_from_name("zero"), ZeroKernel)
        self.assertAlmostEqual(kernel_from_name("omega", nu1=0.4).theta, 0.6)
        self.assertEqual(kernel_from_name("power", exponent=0.25), PowerKernel(1.0, 0.25))
        with self.assertRaises(DomainError):
            kernel_from_name("gaussian")
        with self.assertRaises(DomainError):
            kernel_from_name("omega")


class TestMemoryTerm(unittest.TestCase):
    """Trapezoid memory sums."""

    def setUp(self):
        rng = np.random.default_rng(11)
        self.j = 6
        self.v = rng.normal(size=(self.j + 2, 4))
        self.b = rng.uniform(0.5, 2.0, size=(self.j + 2, 4))
        self.q = kernel_quadrature(PowerKernel(1.0, 1.0 / 3.0), 0.05, self.j)

    def test_matches_direct_sum(self):
        w = self.b * self.v
        expected = sum(0.5 * (w[m] + w[m + 1]) * self.q.weights[m] for m in range(self.j + 1))
        np.testing.assert_allclose(memory_term(self.v, self.b, self.q), expected, rtol=1e-13)

    def test_explicit_plus_endpoint(self):
        w = self.b * self.v
        explicit = memory_explicit(w[:self.j + 1], self.q.lags, self.j)
        total = explicit + 0.5 * endpoint_weight(self.q.lags) * w[self.j + 1]
        np.testing.assert_allclose(total, memory_term(self.v, self.b, self.q), rtol=1e-12)

    def test_shape_checks(self):
        with self.assertRaises(ShapeError):
            memory_term(self.v, self.b[:, :3], self.q)
        with self.assertRaises(ShapeError):
            memory_term(self.v[:-1], self.b[:-1], self.q)
        with self.assertRaises(ShapeError):
            memory_explicit(self.v[:3], self.q.lags, self.j)

    def test_zero_kernel_gives_zero(self):
        q = kernel_quadrature(ZeroKernel(), 0.05, self.j)
        np.testing.assert_array_equal(memory_term(self.v, self.b, q), np.zeros(4))


if __name__ == '__main__':
    unittest.main()
