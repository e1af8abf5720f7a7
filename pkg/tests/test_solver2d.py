#!/usr/bin/env python3
# SPDX-License-Identifier: MIT
# Copyright (c) 2025 fracsub contributors
"""
Tests for the two-dimensional marcher.
"""

import dataclasses
import os
import sys
import unittest

import numpy as np

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from fracsub.errors import DomainError, SolverError
from fracsub.numerics.fracops import OmegaKernel
from fracsub.solvers import (
    Grid1D,
    Grid2D,
    Problem1D,
    Problem2D,
    RobinCondition,
    SolutionHistory2D,
    assemble_level_2d,
    constant,
    solve,
    solve_2d,
    validate_compatibility_2d,
)
from fracsub.verification import ExampleCase, ExampleId, run_case

PI = np.pi


def symmetric_problem(**overrides) -> Problem2D:
    """Data invariant under x <-> y, zero on every edge."""
    base = Problem2D(
        nu1=0.6,
        nu2=0.3,
        rho1=lambda x, y: 1.0 + x * y,
        rho2=lambda x, y, t: 0.2 * x * y * t,
        a1=constant(1.0),
        a2=constant(1.0),
        d1=constant(0.0),
        d2=constant(0.0),
        b1=lambda x, y, t: 1.0 + x + y,
        b2=lambda x, y, t: 1.0 + x + y,
        f=lambda x, y, t: np.sin(PI * x) * np.sin(PI * y) * (1.0 + x + y),
        u0=lambda x, y: np.sin(PI * x) * np.sin(PI * y),
        kernel=OmegaKernel(0.4),
        T=0.5,
        y_boundary="dirichlet",
    )
    return dataclasses.replace(base, **overrides)


class TestReduction(unittest.TestCase):
    """y-independent data with Neumann y-edges reproduces the 1D solution."""

    def test_slices_match_1d(self):
        kernel = OmegaKernel(0.5)
        p1 = Problem1D(
            nu1=0.8, nu2=0.4,
            rho1=lambda x: 1.0 + x,
            rho2=lambda x, t: 0.3 * x * t,
            a=lambda x, t: 1.0 + x * t,
            d=lambda x, t: x - 0.5,
            b=lambda x, t: 1.0 + x,
            f=lambda x, t: np.sin(PI * x) * (1.0 + t),
            u0=lambda x: np.sin(PI * x),
            left=RobinCondition.dirichlet(), right=RobinCondition.dirichlet(),
            kernel=kernel, T=0.5,
        )
        p2 = Problem2D(
            nu1=0.8, nu2=0.4,
            rho1=lambda x, y: 1.0 + x,
            rho2=lambda x, y, t: 0.3 * x * t,
            a1=lambda x, y, t: 1.0 + x * t,
            a2=lambda x, y, t: 2.0 + y,
            d1=lambda x, y, t: x - 0.5,
            d2=constant(0.0),
            b1=lambda x, y, t: 1.0 + x,
            b2=lambda x, y, t: 1.0 + y,
            f=lambda x, y, t: np.sin(PI * x) * (1.0 + t),
            u0=lambda x, y: np.sin(PI * x) + 0.0 * y,
            kernel=kernel, T=0.5,
        )
        h1 = solve(p1, Grid1D(20, 10, T=0.5), richardson=False)
        h2 = solve_2d(p2, Grid2D(20, 4, 10, T=0.5), richardson=False)
        for row in range(5):
            np.testing.assert_allclose(h2.values[1:, row, 1:-1], h1.values[1:, 1:-1], atol=1e-9)


class TestSymmetry(unittest.TestCase):

    def setUp(self):
        self.hist = solve_2d(symmetric_problem(), Grid2D(12, 12, 6, T=0.5))

    def test_transpose_symmetry(self):
        for level in self.hist.values:
            np.testing.assert_allclose(level, level.T, atol=1e-10)

    def test_dirichlet_edges_stay_zero(self):
        v = self.hist.values[1:]
        for edge in (v[:, :, 0], v[:, :, -1], v[:, 0, :], v[:, -1, :]):
            np.testing.assert_array_equal(edge, 0.0)

    def test_history_shape(self):
        self.assertIsInstance(self.hist, SolutionHistory2D)
        self.assertEqual(self.hist.values.shape, (7, 13, 13))
        self.assertEqual(self.hist.levels, 6)
        self.assertTrue(self.hist.richardson)


class TestAssembly(unittest.TestCase):

    def test_level_system_reproduces_solution(self):
        p = symmetric_problem(y_boundary="neumann", u0=lambda x, y: np.sin(PI * x) * np.cos(PI * y))
        g = Grid2D(6, 5, 4, T=0.5)
        hist = solve_2d(p, g, richardson=False)
        system = assemble_level_2d(p, g, hist, 1)
        self.assertEqual(system.p, g.Kx - 1)
        self.assertEqual(system.n, (g.Kx - 1) * (g.Ky + 1))
        block = hist.values[2, :, 1:-1].ravel()
        np.testing.assert_allclose(system.matvec(block), system.rhs, atol=1e-9)


class TestConvergence(unittest.TestCase):

    def test_error_decreases_under_refinement(self):
        case = ExampleCase(ExampleId.EX4, 0.5)
        coarse = run_case(case, Grid2D(8, 8, 8))
        fine = run_case(case, Grid2D(16, 16, 16))
        self.assertLess(fine.gimel, coarse.gimel)
        self.assertEqual(fine.grid, {"Kx": 16, "Ky": 16, "J": 16})


class TestValidation(unittest.TestCase):

    def test_nonpositive_diffusion(self):
        p = symmetric_problem(a1=constant(-1.0))
        with self.assertRaises(SolverError) as ctx:
            solve_2d(p, Grid2D(6, 6, 3, T=0.5), richardson=False)
        self.assertEqual(ctx.exception.level, 1)

    def test_invalid_y_boundary(self):
        with self.assertRaises(DomainError):
            symmetric_problem(y_boundary="periodic")

    def test_invalid_grid(self):
        with self.assertRaises(DomainError):
            Grid2D(1, 4, 4)
        with self.assertRaises(DomainError):
            Grid2D(4, 4, 0)

    def test_compatibility(self):
        g = Grid2D(10, 10, 2, T=0.5)
        self.assertEqual(validate_compatibility_2d(symmetric_problem(), g), [])
        p = symmetric_problem(y_boundary="neumann", u0=lambda x, y: np.sin(PI * x) * y)
        locations = [d.location for d in validate_compatibility_2d(p, g)]
        self.assertIn("y=0", locations)
        self.assertIn("y=1", locations)


if __name__ == '__main__':
    unittest.main()
