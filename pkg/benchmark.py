#!/usr/bin/env python3
# SPDX-License-Identifier: MIT
# Copyright (c) 2025 fracsub contributors
"""
Performance Benchmark Suite

Benchmarks:
- Mittag-Leffler evaluation (double series, mpmath fallback, asymptotic tail)
- Tridiagonal (Thomas) and banded (LAPACK) level solves
- Time-march scaling in J (the Caputo and memory histories make it O(J^2))
- Richardson overhead (coarse + fine march)
- 2D march on the catalog example
- One row of every reproduction table (reduced grids, or the published ones with --full)
"""

import sys
import time
from pathlib import Path
from typing import Callable, Dict, List
import statistics
import json

import numpy as np

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from fracsub.numerics.linalg import BandedSystem, TridiagonalSystem, solve_banded, solve_tridiagonal
from fracsub.numerics.special import ml1, ml2
from fracsub.solvers import Grid1D, Grid2D
from fracsub.verification import ExampleCase, ExampleId, run_case


def _timings(func: Callable, iterations: int) -> List[float]:
    times = []
    for _ in range(iterations):
        start = time.perf_counter()
        func()
        times.append(time.perf_counter() - start)
    return times


def _summary(times: List[float]) -> Dict:
    summary = {
        'mean_ms': statistics.mean(times) * 1000,
        'median_ms': statistics.median(times) * 1000,
    }
    if len(times) >= 20:
        summary['p95_ms'] = statistics.quantiles(times, n=20)[18] * 1000
    return summary


class PerformanceBenchmark:
    """Performance benchmarking suite"""

    def __init__(self, nu1: float = 0.5, quick: bool = False, full: bool = False):
        """
        Args:
            nu1: leading order used by the solver benchmarks
            quick: smaller grids and fewer iterations
            full: table rows on the published grids
        """
        self.nu1 = nu1
        self.quick = quick
        self.full = full
        self.results = {}

    def benchmark_mittag_leffler(self, iterations: int = 50) -> Dict:
        """Benchmark E_alpha and E_alpha,beta on the three evaluation paths"""
        print(f"\nBenchmarking Mittag-Leffler ({iterations} iterations)...")

        z_small = np.linspace(-5.0, 5.0, 200)
        z_large = np.linspace(-200.0, -50.0, 200)
        cases = {
            'series_ml1': lambda: ml1(0.5, z_small),
            'series_ml2': lambda: ml2(0.7, 1.3, z_small),
            'large_negative_ml1': lambda: ml1(0.5, z_large),
            'large_positive_ml2': lambda: ml2(0.9, 1.0, np.linspace(20.0, 60.0, 50)),
        }

        results = {}
        for name, func in cases.items():
            results[name] = _summary(_timings(func, iterations))
            print(f"  {name:20s} {results[name]['mean_ms']:.3f}ms avg per 200 points")

        return results

    def benchmark_linear_solves(self, iterations: int = 100) -> Dict:
        """Benchmark the tridiagonal and banded level solves"""
        print(f"\nBenchmarking Linear Solves ({iterations} iterations)...")

        rng = np.random.default_rng(0)
        results = {}

        for n in (101, 1001, 10001):
            system = TridiagonalSystem(
                sub=-np.ones(n - 1), diag=4.0 + rng.random(n),
                sup=-np.ones(n - 1), rhs=rng.random(n),
            )
            results[f'thomas_n={n}'] = _summary(_timings(lambda: solve_tridiagonal(system),
                                                         iterations))
            print(f"  Thomas n={n:<6d}      {results[f'thomas_n={n}']['mean_ms']:.3f}ms avg")

        for K in (20, 50, 100):
            p = K - 1
            n = (K - 1) * (K + 1)
            ab = np.zeros((2 * p + 1, n))
            ab[p] = 4.0 + rng.random(n)
            ab[p - 1, 1:] = -1.0
            ab[p + 1, :-1] = -1.0
            ab[0, p:] = -1.0
            ab[2 * p, :-p] = -1.0
            system = BandedSystem(n, p, ab, rng.random(n))
            label = f'banded_K={K}'
            repeats = max(5, iterations // 10)
            results[label] = _summary(_timings(lambda: solve_banded(system), repeats))
            print(f"  banded n={n:<6d} p={p:<4d} {results[label]['mean_ms']:.3f}ms avg")

        return results

    def benchmark_march_scaling(self) -> Dict:
        """Benchmark 1D march time against J; doubling J should roughly quadruple it"""
        levels = (20, 40, 80) if self.quick else (50, 100, 200, 400)
        print(f"\nBenchmarking 1D March Scaling (J = {', '.join(map(str, levels))})...")

        case = ExampleCase(ExampleId.EX2, self.nu1)
        results = {}
        previous = None
        for J in levels:
            report = run_case(case, Grid1D(100, J), richardson=False)
            entry = {'seconds': report.seconds, 'gimel': report.gimel}
            if previous:
                entry['growth'] = report.seconds / previous if previous > 0 else float('nan')
            results[f'J={J}'] = entry
            growth = f", x{entry['growth']:.2f}" if 'growth' in entry else ""
            print(f"  J={J:<5d} {report.seconds:.3f}s, gimel={report.gimel:.3e}{growth}")
            previous = report.seconds

        return results

    def benchmark_richardson(self) -> Dict:
        """Benchmark Richardson on and off at equal J"""
        J = 40 if self.quick else 160
        print(f"\nBenchmarking Richardson Overhead (K=100, J={J})...")

        case = ExampleCase(ExampleId.EX2, self.nu1)
        plain = run_case(case, Grid1D(100, J), richardson=False)
        extrapolated = run_case(case, Grid1D(100, J), richardson=True)

        results = {
            'off': {'seconds': plain.seconds, 'gimel': plain.gimel},
            'on': {'seconds': extrapolated.seconds, 'gimel': extrapolated.gimel},
            'overhead': extrapolated.seconds / plain.seconds if plain.seconds > 0 else float('nan'),
        }

        print(f"  off: {plain.seconds:.3f}s, gimel={plain.gimel:.3e}")
        print(f"  on:  {extrapolated.seconds:.3f}s, gimel={extrapolated.gimel:.3e}")
        print(f"  overhead: {results['overhead']:.2f}x")

        return results

    def benchmark_2d(self) -> Dict:
        """Benchmark the 2D march on ex4"""
        size = 10 if self.quick else 20
        print(f"\nBenchmarking 2D March (Kx=Ky=J={size})...")

        report = run_case(ExampleCase(ExampleId.EX4, self.nu1), Grid2D(size, size, size),
                          richardson=False)
        results = {'seconds': report.seconds, 'gimel': report.gimel,
                   'unknowns': (size - 1) * (size + 1)}

        print(f"  {results['unknowns']} unknowns per level: "
              f"{report.seconds:.3f}s, gimel={report.gimel:.3e}")

        return results

    def benchmark_table_rows(self) -> Dict:
        """Time one row of every reproduction table, reduced grids unless full"""
        mode = 'full' if self.full else 'reduced'
        print(f"\nBenchmarking Table Rows ({mode} grids, nu1={self.nu1})...")

        cases = [
            ExampleCase(ExampleId.EX1I, self.nu1),
            ExampleCase(ExampleId.EX1II, self.nu1),
            ExampleCase(ExampleId.EX1EXT, max(self.nu1, 0.6), rho2=2.2, T=0.7),
            ExampleCase(ExampleId.EX2, self.nu1),
            ExampleCase(ExampleId.EX3, self.nu1),
            ExampleCase(ExampleId.EX4, self.nu1),
        ]

        results = {}
        for case in cases:
            grid = case.default_grid()
            if not self.full:
                if case.dimension == 2:
                    grid = Grid2D(20, 20, 20, 1.0, 1.0, case.T)
                else:
                    grid = Grid1D(200, 20, 1.0, case.T)
            report = run_case(case, grid)
            results[case.label] = {
                'seconds': report.seconds,
                'gimel': report.gimel,
                'reference': report.reference,
            }
            reference = ""
            if report.reference is not None and self.full:
                reference = f" (reference {report.reference:.4e})"
            print(f"  {case.label:32s} {report.seconds:.3f}s, gimel={report.gimel:.4e}{reference}")

        return results

    def run_all_benchmarks(self) -> Dict:
        """Run all performance benchmarks"""
        print("="*60)
        print("  fracsub - Performance Benchmark Suite")
        print("="*60)

        iterations = 10 if self.quick else 50
        stages = [
            ('mittag_leffler', lambda: self.benchmark_mittag_leffler(iterations=iterations)),
            ('linear_solves', lambda: self.benchmark_linear_solves(iterations=iterations * 2)),
            ('march_scaling', self.benchmark_march_scaling),
            ('richardson', self.benchmark_richardson),
            ('two_dimensional', self.benchmark_2d),
            ('table_rows', self.benchmark_table_rows),
        ]

        results = {}
        for name, stage in stages:
            try:
                results[name] = stage()
            except Exception as e:
                print(f"  {name} benchmark failed: {e}")
                results[name] = {'error': str(e)}

        print("\n" + "="*60)
        print("  Benchmark Complete!")
        print("="*60)

        return results

    def save_results(self, filename: str = "benchmark_results.json"):
        """Save benchmark results to file"""
        with open(filename, 'w') as f:
            json.dump(self.results, f, indent=2)
        print(f"\nResults saved to {filename}")


def main():
    """Run performance benchmarks"""
    import argparse

    parser = argparse.ArgumentParser(description="fracsub Performance Benchmarks")
    parser.add_argument('--nu1', type=float, default=0.5,
                       help='Leading fractional order for the solver benchmarks')
    parser.add_argument('--quick', action='store_true',
                       help='Smaller grids and fewer iterations')
    parser.add_argument('--full', action='store_true',
                       help='Run table rows on the published grids (minutes per row)')
    parser.add_argument('--output', type=str, default='benchmark_results.json',
                       help='Output file for results')

    args = parser.parse_args()

    if not 0.0 < args.nu1 <= 1.0:
        print(f"nu1 must lie in (0, 1], got {args.nu1}")
        return 1

    benchmark = PerformanceBenchmark(args.nu1, quick=args.quick, full=args.full)
    results = benchmark.run_all_benchmarks()
    benchmark.results = results
    benchmark.save_results(args.output)

    return 0


if __name__ == '__main__':
    sys.exit(main())
