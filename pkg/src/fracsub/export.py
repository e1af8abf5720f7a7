#!/usr/bin/env python3
# SPDX-License-Identifier: MIT
# Copyright (c) 2025 fracsub contributors
"""
Result exporter for fracsub.

Writes solution histories, error tables and kernel profiles as CSV
('.' decimal separator, 17 significant digits) plus JSON run manifests.
"""

import json
import logging
import platform
from datetime import datetime
from enum import Enum
from importlib import metadata
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Union

import numpy as np
import pandas as pd

from .numerics.kernels import KernelProfile
from .solvers.solver1d import SolutionHistory
from .solvers.solver2d import SolutionHistory2D
from .verification.mms import ConvergenceRow, ErrorReport

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
MANIFEST_NAME = "manifest.json"

_VERSIONED = ("fracsub", "numpy", "scipy", "pandas", "mpmath", "pydantic", "click")


def _label(value: float) -> str:
    return FLOAT_FORMAT % value


def _jsonable(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, Enum):
        return value.value
    raise TypeError(f"not JSON serialisable: {type(value).__name__}")


def library_versions() -> Dict[str, str]:
    versions = {"python": platform.python_version()}
    for name in _VERSIONED:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = "unknown"
    return versions


class ResultExporter:
    """
    Export solver results under one output directory.

    Every write goes through pandas with a fixed float format so files are
    reproducible byte for byte across runs and locales.
    """

    def __init__(self, output_dir: Union[str, Path] = "results"):
        """
        Initialize exporter.

        Args:
            output_dir: Directory for exported files (created if missing)
        """
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        logger.debug(f"ResultExporter initialized, output_dir: {self.output_dir}")

    def path(self, filename: Union[str, Path]) -> Path:
        filepath = self.output_dir / filename
        filepath.parent.mkdir(parents=True, exist_ok=True)
        return filepath

    def _write_frame(
        self, frame: pd.DataFrame, filename: Union[str, Path], index: bool = False
    ) -> Path:
        filepath = self.path(filename)
        frame.to_csv(filepath, index=index, float_format=FLOAT_FORMAT, lineterminator="\n")
        logger.info(f"Exported {len(frame)} rows to {filepath}")
        return filepath

    def write_history_csv(self, history: SolutionHistory, filename: str = "solution.csv") -> Path:
        """Header t, x_0..x_K; one row per time level."""
        frame = history.to_frame()
        frame.columns = [_label(x) for x in frame.columns]
        return self._write_frame(frame, filename, index=True)

    def write_profile_at_final(
        self, history: SolutionHistory, exact=None, filename: str = "profile.csv"
    ) -> Path:
        """Numerical (and, if given, exact) solution at t = T against x."""
        grid = history.grid
        frame = pd.DataFrame({"x": grid.x, "u": history.final})
        if exact is not None:
            frame["exact"] = np.broadcast_to(exact(grid.x, grid.t[history.levels]), grid.x.shape)
        return self._write_frame(frame, filename)

    def write_history_2d(
        self,
        history: SolutionHistory2D,
        directory: str = "solution",
        parameters: Optional[Dict[str, Any]] = None,
    ) -> Path:
        """
        One CSV grid per level (rows y, columns x) and a manifest.json with
        the level times, the grid and ``parameters``.
        """
        grid = history.grid
        columns = [_label(x) for x in grid.x]
        index = pd.Index([_label(y) for y in grid.y], name="y")
        levels = []
        for j in range(history.levels + 1):
            name = f"level_{j:04d}.csv"
            frame = pd.DataFrame(history.values[j], columns=columns, index=index)
            frame.to_csv(self.path(Path(directory) / name), float_format=FLOAT_FORMAT,
                         lineterminator="\n")
            levels.append({"level": j, "t": float(grid.t[j]), "file": name})
        manifest = {
            "grid": {
                "Kx": grid.Kx, "Ky": grid.Ky, "J": grid.J,
                "Lx": grid.Lx, "Ly": grid.Ly, "T": grid.T,
            },
            "richardson": history.richardson,
            "levels": levels,
            "parameters": parameters or {},
        }
        target = self.write_manifest(manifest, Path(directory) / MANIFEST_NAME)
        logger.info(f"Exported {len(levels)} 2D levels to {target.parent}")
        return target.parent

    def write_table_csv(self, reports: Iterable[ErrorReport], filename: str = "table.csv") -> Path:
        frame = pd.DataFrame([report.to_row() for report in reports])
        return self._write_frame(frame, filename)

    def write_convergence_csv(
        self, rows: Iterable[ConvergenceRow], filename: str = "convergence.csv"
    ) -> Path:
        records = []
        for row in rows:
            record = dict(row.grid)
            record.update({"step": row.step, "gimel": row.gimel, "order": row.order})
            records.append(record)
        return self._write_frame(pd.DataFrame(records), filename)

    def write_profile_csv(
        self, profile: KernelProfile, filename: str = "kernel_profile.csv"
    ) -> Path:
        """(t, N, kind) rows, the sign change appended as kind 'sign_change'."""
        return self._write_frame(profile.to_frame(annotate=True), filename)

    def write_manifest(
        self, payload: Dict[str, Any], filename: Union[str, Path] = MANIFEST_NAME
    ) -> Path:
        """JSON manifest; library versions and a timestamp are added to ``payload``."""
        filepath = self.path(filename)
        document = {
            "created": datetime.now().isoformat(),
            "versions": library_versions(),
        }
        document.update(payload)
        with open(filepath, "w", encoding="utf-8") as f:
            json.dump(document, f, indent=2, sort_keys=True, default=_jsonable)
            f.write("\n")
        logger.debug(f"Wrote manifest {filepath}")
        return filepath


# ========== path-based helpers ==========

def write_history_csv(history: SolutionHistory, path: Union[str, Path]) -> Path:
    path = Path(path)
    return ResultExporter(path.parent).write_history_csv(history, path.name)


def write_history_2d(
    history: SolutionHistory2D,
    directory: Union[str, Path],
    parameters: Optional[Dict[str, Any]] = None,
) -> Path:
    directory = Path(directory)
    return ResultExporter(directory.parent).write_history_2d(history, directory.name, parameters)


def write_table_csv(reports: Iterable[ErrorReport], path: Union[str, Path]) -> Path:
    path = Path(path)
    return ResultExporter(path.parent).write_table_csv(reports, path.name)


def write_profile_csv(profile: KernelProfile, path: Union[str, Path]) -> Path:
    path = Path(path)
    return ResultExporter(path.parent).write_profile_csv(profile, path.name)


def write_manifest(path: Union[str, Path], payload: Dict[str, Any]) -> Path:
    path = Path(path)
    return ResultExporter(path.parent).write_manifest(payload, path.name)
