#!/usr/bin/env python3
# SPDX-License-Identifier: MIT
# Copyright (c) 2025 fracsub contributors
"""
Tests for the one-dimensional time marcher.
"""

import dataclasses
import os
import sys
import unittest

import numpy as np

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from fracsub.errors import DomainError, ShapeError, SolverError
from fracsub.numerics.fracops import OmegaKernel, PowerKernel, ZeroKernel
from fracsub.solvers import (
    Grid1D,
    Problem1D,
    RobinCondition,
    SolutionHistory,
    Solver1D,
    assemble_level,
    constant,
    solve,
    step,
    validate_compatibility,
)
from fracsub.verification import ExampleCase, ExampleId, run_case

PI = np.pi


def make_problem(**overrides) -> Problem1D:
    """Memory problem with Dirichlet zero ends and smooth coefficients."""
    base = Problem1D(
        nu1=0.7,
        nu2=0.35,
        rho1=lambda x: 1.0 + x,
        rho2=lambda x, t: 0.3 * x * (1.0 + t),
        a=lambda x, t: 1.0 + x * t,
        d=lambda x, t: x - 0.5,
        b=lambda x, t: 1.0 + x,
        f=lambda x, t: np.sin(PI * x) * (1.0 + t),
        u0=lambda x: np.sin(PI * x),
        left=RobinCondition.dirichlet(),
        right=RobinCondition.dirichlet(),
        kernel=OmegaKernel(0.5),
        T=0.5,
    )
    return dataclasses.replace(base, **overrides)


def backward_euler_oracle(K, J, T):
    """Dense backward Euler for u_t - (1+x) u_xx + 0.5 u_x = sin(x) + t, u = 0 at both ends."""
    h, sigma = 1.0 / K, T / J
    x = h * np.arange(K + 1)
    u = np.sin(PI * x)
    out = [u.copy()]
    for j in range(J):
        t = (j + 1) * sigma
        A = (1.0 + x) / h ** 2
        D = 0.5 / (2 * h)
        M = np.zeros((K + 1, K + 1))
        rhs = np.zeros(K + 1)
        M[0, 0] = M[K, K] = 1.0
        for k in range(1, K):
            M[k, k - 1] = -A[k] - D
            M[k, k] = 1.0 / sigma + 2 * A[k]
            M[k, k + 1] = -A[k] + D
            rhs[k] = u[k] / sigma + np.sin(x[k]) + t
        u = np.linalg.solve(M, rhs)
        out.append(u.copy())
    return np.array(out)


class TestClassicalLimit(unittest.TestCase):
    """nu1 = 1 with rho2 = 0 and no memory is backward Euler."""

    def test_matches_backward_euler(self):
        p = Problem1D(
            nu1=1.0, nu2=0.5,
            rho1=constant(1.0), rho2=constant(0.0),
            a=lambda x, t: 1.0 + x, d=constant(0.5), b=constant(0.0),
            f=lambda x, t: np.sin(x) + t,
            u0=lambda x: np.sin(PI * x),
            left=RobinCondition.dirichlet(), right=RobinCondition.dirichlet(),
            kernel=ZeroKernel(), T=0.5,
        )
        g = Grid1D(20, 10, T=0.5)
        hist = solve(p, g, richardson=False)
        np.testing.assert_allclose(hist.values, backward_euler_oracle(20, 10, 0.5), atol=1e-12)


class TestSchemeProperties(unittest.TestCase):
    """Structural properties of the discrete solution."""

    def test_linearity_in_forcing(self):
        g = Grid1D(30, 8, T=0.5)
        zero = constant(0.0)
        f1 = lambda x, t: np.sin(PI * x) * t
        f2 = lambda x, t: x * (1.0 - x)
        u1 = solve(make_problem(u0=zero, f=f1), g).values
        u2 = solve(make_problem(u0=zero, f=f2), g).values
        u12 = solve(make_problem(u0=zero, f=lambda x, t: f1(x, t) + f2(x, t)), g).values
        np.testing.assert_allclose(u12, u1 + u2, atol=1e-12)

    def test_mirror_symmetry(self):
        p = make_problem(
            rho1=lambda x: 1.0 + (x - 0.5) ** 2,
            rho2=lambda x, t: 0.3 * t * np.cos(2 * PI * x),
            a=lambda x, t: 1.0 + (x - 0.5) ** 2,
            d=constant(0.0),
            b=constant(1.0),
            f=lambda x, t: t * np.cos(PI * x) ** 2,
            u0=lambda x: np.cos(2 * PI * x),
            left=RobinCondition.neumann(),
            right=RobinCondition.neumann(),
        )
        hist = solve(p, Grid1D(40, 10, T=0.5))
        np.testing.assert_allclose(hist.values, hist.values[:, ::-1], atol=1e-10)

    def test_constant_state_is_preserved(self):
        p = make_problem(
            f=constant(0.0),
            u0=constant(2.5),
            left=RobinCondition.neumann(),
            right=RobinCondition.neumann(),
            kernel=PowerKernel(1.0, 1.0 / 3.0),
        )
        hist = solve(p, Grid1D(16, 6, T=0.5))
        np.testing.assert_allclose(hist.values, 2.5, rtol=1e-12)

    def test_linear_profile_with_robin_ends(self):
        # u = 1 + x: u_x + (-2) u = -1 at x = 0 and u_x + u = 3 at x = 1
        p = make_problem(
            f=lambda x, t: x - 0.5,
            u0=lambda x: 1.0 + x,
            left=RobinCondition(1.0, -2.0, constant(-1.0)),
            right=RobinCondition(1.0, 1.0, constant(3.0)),
            kernel=PowerKernel(1.0, 1.0 / 3.0),
        )
        g = Grid1D(10, 5, T=0.5)
        hist = solve(p, g)
        np.testing.assert_allclose(hist.values, np.broadcast_to(1.0 + g.x, hist.values.shape),
                                   atol=1e-11)

    def test_richardson_combination(self):
        p = make_problem()
        g = Grid1D(20, 5, T=0.5)
        coarse = solve(p, g, richardson=False).values
        fine = solve(p, g.refined_time(), richardson=False).values
        combined = solve(p, g, richardson=True)
        self.assertTrue(combined.richardson)
        np.testing.assert_allclose(combined.values, 2 * fine[::2] - coarse, atol=1e-13)

    def test_error_decreases_with_time_step(self):
        case = ExampleCase(ExampleId.EX2, 0.55)
        coarse = run_case(case, Grid1D(100, 10), richardson=False)
        fine = run_case(case, Grid1D(100, 40), richardson=False)
        self.assertLess(fine.gimel, coarse.gimel)


class TestStepping(unittest.TestCase):
    """Level-by-level entry points."""

    def setUp(self):
        self.p = make_problem()
        self.g = Grid1D(20, 6, T=0.5)
        self.hist = solve(self.p, self.g, richardson=False)

    def test_step_matches_march(self):
        for j in (0, 3, 5):
            np.testing.assert_allclose(step(self.p, self.g, self.hist, j), self.hist.values[j + 1],
                                       rtol=1e-12, atol=1e-14)

    def test_step_from_partial_history(self):
        partial = SolutionHistory(self.g, self.hist.values[:4].copy())
        np.testing.assert_allclose(step(self.p, self.g, partial, 3), self.hist.values[4],
                                   rtol=1e-12, atol=1e-14)
        with self.assertRaises(ShapeError):
            step(self.p, self.g, partial, 4)

    def test_assemble_level_reproduces_solution(self):
        system = assemble_level(self.p, self.g, self.hist, 2)
        np.testing.assert_allclose(system.matvec(self.hist.values[3]), system.rhs, atol=1e-9)
        self.assertEqual(system.n, self.g.K + 1)

    def test_history_frame(self):
        frame = self.hist.to_frame()
        self.assertEqual(frame.shape, (self.g.J + 1, self.g.K + 1))
        self.assertEqual(frame.index.name, "t")
        np.testing.assert_allclose(frame.columns.to_numpy(dtype=float), self.g.x)

    def test_dirichlet_ends_pinned(self):
        np.testing.assert_array_equal(self.hist.values[1:, 0], 0.0)
        np.testing.assert_array_equal(self.hist.values[1:, -1], 0.0)


class TestFailures(unittest.TestCase):
    """Invalid data and failing coefficients."""

    def test_non_finite_forcing_names_level_and_node(self):
        def f(x, t):
            return np.full_like(x, np.nan) if t > 0.5 else np.zeros_like(x)

        p = make_problem(f=f, T=1.0)
        with self.assertRaises(SolverError) as ctx:
            solve(p, Grid1D(10, 4), richardson=False)
        self.assertEqual(ctx.exception.level, 3)
        self.assertAlmostEqual(ctx.exception.node[-1], 0.75)
        self.assertIn("f", str(ctx.exception))

    def test_nonpositive_rho1(self):
        p = make_problem(rho1=lambda x: x - 0.5)
        with self.assertRaises(SolverError):
            solve(p, Grid1D(10, 4, T=0.5))

    def test_nonpositive_diffusion(self):
        p = make_problem(a=constant(-1.0))
        with self.assertRaises(SolverError) as ctx:
            solve(p, Grid1D(10, 4, T=0.5), richardson=False)
        self.assertEqual(ctx.exception.level, 1)

    def test_invalid_orders(self):
        with self.assertRaises(DomainError):
            make_problem(nu1=0.4, nu2=0.6)
        with self.assertRaises(DomainError):
            make_problem(nu2=0.0)

    def test_invalid_boundary(self):
        with self.assertRaises(DomainError):
            RobinCondition(0.0, 0.0)

    def test_invalid_grid(self):
        with self.assertRaises(DomainError):
            Grid1D(1, 10)
        with self.assertRaises(DomainError):
            Grid1D(10, 0)

    def test_grid_must_match_problem(self):
        with self.assertRaises(DomainError):
            Solver1D(make_problem(), Grid1D(10, 4, T=1.0))


class TestCompatibility(unittest.TestCase):
    """Boundary data against the initial datum; diagnostics only."""

    def test_compatible_data(self):
        self.assertEqual(validate_compatibility(make_problem()), [])

    def test_dirichlet_mismatch(self):
        p = make_problem(left=RobinCondition.dirichlet(constant(1.0)))
        diagnostics = validate_compatibility(p)
        self.assertEqual(len(diagnostics), 1)
        self.assertEqual(diagnostics[0].location, "x=0")
        self.assertAlmostEqual(diagnostics[0].magnitude, 1.0)

    def test_neumann_mismatch(self):
        p = make_problem(u0=lambda x: x, left=RobinCondition.neumann(),
                         right=RobinCondition.neumann())
        diagnostics = validate_compatibility(p)
        self.assertEqual([d.location for d in diagnostics], ["x=0", "x=1"])
        for d in diagnostics:
            self.assertAlmostEqual(d.magnitude, 1.0, places=6)

    def test_solve_still_runs(self):
        p = make_problem(left=RobinCondition.dirichlet(constant(1.0)))
        hist = solve(p, Grid1D(10, 3, T=0.5), richardson=False)
        np.testing.assert_array_equal(hist.values[1:, 0], 1.0)


if __name__ == '__main__':
    unittest.main()
