#!/usr/bin/env python3
# SPDX-License-Identifier: MIT
# Copyright (c) 2025 fracsub contributors
"""
Tests for CSV and manifest export.
"""

import json
import math
import os
import shutil
import sys
import tempfile
import unittest
from pathlib import Path

import numpy as np
import pandas as pd

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from fracsub.export import (
    MANIFEST_NAME,
    ResultExporter,
    library_versions,
    write_history_2d,
    write_history_csv,
    write_manifest,
    write_profile_csv,
    write_table_csv,
)
from fracsub.numerics.kernels import KernelSpec, kernel_profile
from fracsub.solvers import Grid1D, Grid2D, SolutionHistory, SolutionHistory2D
from fracsub.verification import ExampleId
from fracsub.verification.mms import ConvergenceRow, ErrorReport


def third_history():
    grid = Grid1D(4, 2, T=0.5)
    return SolutionHistory(grid, np.full((3, 5), 1.0 / 3.0))


class TestResultExporter(unittest.TestCase):
    """ResultExporter writes under its output directory."""

    def setUp(self):
        self.tmpdir = tempfile.mkdtemp()
        self.exporter = ResultExporter(Path(self.tmpdir) / "out")

    def tearDown(self):
        shutil.rmtree(self.tmpdir, ignore_errors=True)

    def test_creates_directory(self):
        self.assertTrue((Path(self.tmpdir) / "out").is_dir())

    def test_history_csv(self):
        path = self.exporter.write_history_csv(third_history())
        lines = path.read_text().splitlines()
        self.assertEqual(lines[0], "t,0,0.25,0.5,0.75,1")
        self.assertEqual(len(lines), 4)
        self.assertIn("0.33333333333333331", lines[1])
        frame = pd.read_csv(path, index_col=0)
        np.testing.assert_array_equal(frame.to_numpy(), np.full((3, 5), 1.0 / 3.0))

    def test_no_carriage_returns(self):
        path = self.exporter.write_history_csv(third_history())
        self.assertNotIn(b"\r", path.read_bytes())

    def test_profile_at_final(self):
        hist = third_history()
        path = self.exporter.write_profile_at_final(hist, exact=lambda x, t: x + t)
        frame = pd.read_csv(path)
        self.assertEqual(list(frame.columns), ["x", "u", "exact"])
        np.testing.assert_allclose(frame["exact"], hist.grid.x + 0.5)
        frame = pd.read_csv(self.exporter.write_profile_at_final(hist, filename="bare.csv"))
        self.assertEqual(list(frame.columns), ["x", "u"])

    def test_history_2d(self):
        grid = Grid2D(2, 3, 1)
        values = np.arange(2 * 4 * 3, dtype=float).reshape(2, 4, 3)
        directory = self.exporter.write_history_2d(
            SolutionHistory2D(grid, values, richardson=True), parameters={"nu1": 0.5}
        )
        self.assertEqual(directory.name, "solution")
        self.assertEqual(sorted(p.name for p in directory.iterdir()),
                         ["level_0000.csv", "level_0001.csv", MANIFEST_NAME])
        level = pd.read_csv(directory / "level_0001.csv", index_col=0)
        self.assertEqual(level.index.name, "y")
        np.testing.assert_array_equal(level.to_numpy(), values[1])
        manifest = json.loads((directory / MANIFEST_NAME).read_text())
        self.assertEqual(manifest["grid"]["Kx"], 2)
        self.assertEqual([lvl["t"] for lvl in manifest["levels"]], [0.0, 1.0])
        self.assertEqual(manifest["parameters"], {"nu1": 0.5})
        self.assertTrue(manifest["richardson"])
        self.assertIn("versions", manifest)

    def test_table_csv(self):
        report = ErrorReport(
            case="ex2", nu1=0.5, nu2=0.25, gimel=1.5e-4, level_errors=np.zeros(3),
            grid={"K": 10, "J": 2}, richardson=True, seconds=0.1, T=1.0, reference=2.5e-4,
        )
        frame = pd.read_csv(self.exporter.write_table_csv([report, report]))
        self.assertEqual(len(frame), 2)
        self.assertEqual(list(frame.columns[:3]), ["nu1", "nu2", "gimel"])
        self.assertEqual(frame["gimel"].iloc[0], 1.5e-4)

    def test_convergence_csv(self):
        rows = [
            ConvergenceRow({"K": 10, "J": 4}, 0.25, 1e-2, math.nan),
            ConvergenceRow({"K": 10, "J": 8}, 0.125, 5e-3, 1.0),
        ]
        frame = pd.read_csv(self.exporter.write_convergence_csv(rows))
        self.assertEqual(list(frame.columns), ["K", "J", "step", "gimel", "order"])
        self.assertTrue(math.isnan(frame["order"].iloc[0]))
        self.assertEqual(frame["order"].iloc[1], 1.0)

    def test_kernel_profile_csv(self):
        profile = kernel_profile(KernelSpec(rho1=1.0, rho2=2.2, nu1=0.8, nu2=0.4), 0.7, 5)
        frame = pd.read_csv(self.exporter.write_profile_csv(profile))
        self.assertEqual(len(frame), 6)
        self.assertEqual(list(frame["kind"]), ["sample"] * 5 + ["sign_change"])

    def test_manifest_serialises_numpy(self):
        path = self.exporter.write_manifest({
            "array": np.arange(3),
            "scalar": np.float64(1.5),
            "path": Path("a") / "b",
            "example": ExampleId.EX2,
        })
        document = json.loads(path.read_text())
        self.assertEqual(document["array"], [0, 1, 2])
        self.assertEqual(document["scalar"], 1.5)
        self.assertEqual(document["path"], os.path.join("a", "b"))
        self.assertEqual(document["example"], "ex2")
        self.assertIn("created", document)


class TestPathHelpers(unittest.TestCase):

    def setUp(self):
        self.tmpdir = Path(tempfile.mkdtemp())

    def tearDown(self):
        shutil.rmtree(self.tmpdir, ignore_errors=True)

    def test_helpers_create_parents(self):
        path = write_history_csv(third_history(), self.tmpdir / "a" / "sol.csv")
        self.assertTrue(path.exists())
        profile = kernel_profile(KernelSpec(rho1=1.0, rho2=0.5, nu1=0.9, nu2=0.45), 0.1, 4)
        self.assertTrue(write_profile_csv(profile, self.tmpdir / "b" / "k.csv").exists())
        self.assertTrue(write_manifest(self.tmpdir / "c" / "m.json", {"x": 1}).exists())
        report = ErrorReport(
            case="ex3", nu1=0.5, nu2=0.25, gimel=1e-3, level_errors=np.zeros(2),
            grid={"K": 4, "J": 1}, richardson=False, seconds=0.0, T=1.0,
        )
        self.assertTrue(write_table_csv([report], self.tmpdir / "d" / "t.csv").exists())
        hist = SolutionHistory2D(Grid2D(2, 2, 1), np.zeros((2, 3, 3)))
        directory = write_history_2d(hist, self.tmpdir / "e" / "sol2d")
        self.assertEqual(directory, self.tmpdir / "e" / "sol2d")
        self.assertTrue((directory / MANIFEST_NAME).exists())

    def test_versions(self):
        versions = library_versions()
        for name in ("python", "numpy", "scipy", "pandas"):
            self.assertIn(name, versions)
        self.assertNotEqual(versions["numpy"], "unknown")


if __name__ == '__main__':
    unittest.main()
