#!/usr/bin/env python3
# SPDX-License-Identifier: MIT
# Copyright (c) 2025 fracsub contributors
"""
Direct solvers for the per-level linear systems.

- TridiagonalSystem / solve_tridiagonal: Thomas algorithm (1D scheme)
- BandedSystem / solve_banded: LAPACK gbsv, LU with partial pivoting inside
  the band (2D five-point scheme)

Banded storage follows LAPACK/scipy: ab[p + i - j, j] = A[i, j].
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack

from ..errors import ShapeError, SingularSystemError

logger = logging.getLogger(__name__)

_PIVOT_EPS = 1e-14


@dataclass
class TridiagonalSystem:
    """A x = rhs with A given by its three diagonals."""
    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        self.sub = np.asarray(self.sub, dtype=float)
        self.diag = np.asarray(self.diag, dtype=float)
        self.sup = np.asarray(self.sup, dtype=float)
        self.rhs = np.asarray(self.rhs, dtype=float)
        n = len(self.diag)
        if n == 0:
            raise ShapeError("tridiagonal system is empty")
        if len(self.sub) != n - 1 or len(self.sup) != n - 1:
            raise ShapeError(
                f"off-diagonals need {n - 1} entries, got sub={len(self.sub)} sup={len(self.sup)}"
            )
        if len(self.rhs) != n:
            raise ShapeError(f"rhs has {len(self.rhs)} entries, system has {n} unknowns")

    @property
    def n(self) -> int:
        return len(self.diag)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = self.diag * x
        y[1:] += self.sub * x[:-1]
        y[:-1] += self.sup * x[1:]
        return y

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.sub, -1) + np.diag(self.sup, 1)

    def to_banded(self) -> "BandedSystem":
        ab = np.zeros((3, self.n))
        ab[0, 1:] = self.sup
        ab[1, :] = self.diag
        ab[2, :-1] = self.sub
        return BandedSystem(n=self.n, p=1, ab=ab, rhs=self.rhs.copy())


def solve_tridiagonal(s: TridiagonalSystem) -> np.ndarray:
    """
    Thomas algorithm without pivoting.

    Raises:
        SingularSystemError: an elimination pivot vanishes (relative to the row scale)
    """
    n = s.n
    c = np.empty(n)
    d = np.empty(n)
    scale = max(float(np.max(np.abs(s.diag))), 1e-300)

    denom = s.diag[0]
    if abs(denom) <= _PIVOT_EPS * scale:
        raise SingularSystemError("zero pivot in tridiagonal solve at row 0", row=0)
    c[0] = s.sup[0] / denom if n > 1 else 0.0
    d[0] = s.rhs[0] / denom
    for i in range(1, n):
        denom = s.diag[i] - s.sub[i - 1] * c[i - 1]
        if abs(denom) <= _PIVOT_EPS * scale:
            raise SingularSystemError(f"zero pivot in tridiagonal solve at row {i}", row=i)
        c[i] = s.sup[i] / denom if i < n - 1 else 0.0
        d[i] = (s.rhs[i] - s.sub[i - 1] * d[i - 1]) / denom

    x = np.empty(n)
    x[-1] = d[-1]
    for i in range(n - 2, -1, -1):
        x[i] = d[i] - c[i] * x[i + 1]
    return x


@dataclass
class BandedSystem:
    """
    A x = rhs with symmetric half-bandwidth p.

    Args:
        n: number of unknowns
        p: half-bandwidth (lower = upper = p)
        ab: (2p+1, n) banded storage
        rhs: right-hand side, length n
    """
    n: int
    p: int
    ab: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        self.ab = np.asarray(self.ab, dtype=float)
        self.rhs = np.asarray(self.rhs, dtype=float)
        if self.p < 0:
            raise ShapeError(f"half-bandwidth must be >= 0, got {self.p}")
        if self.ab.shape != (2 * self.p + 1, self.n):
            expected = (2 * self.p + 1, self.n)
            raise ShapeError(f"banded storage must be {expected}, got {self.ab.shape}")
        if self.rhs.shape != (self.n,):
            raise ShapeError(f"rhs must have {self.n} entries, got {self.rhs.shape}")

    @classmethod
    def from_dense(cls, a: np.ndarray, rhs: np.ndarray, p: int) -> "BandedSystem":
        a = np.asarray(a, dtype=float)
        n = a.shape[0]
        ab = np.zeros((2 * p + 1, n))
        for offset in range(-p, p + 1):
            # offset = i - j
            diag = np.diagonal(a, -offset)
            if offset >= 0:
                ab[p + offset, :n - offset] = diag
            else:
                ab[p + offset, -offset:] = diag
        return cls(n=n, p=p, ab=ab, rhs=np.asarray(rhs, dtype=float))

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for offset in range(-self.p, self.p + 1):
            if offset >= 0:
                vals = self.ab[self.p + offset, :self.n - offset]
            else:
                vals = self.ab[self.p + offset, -offset:]
            a += np.diag(vals, -offset)
        return a

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = np.zeros(self.n)
        for offset in range(-self.p, self.p + 1):
            if offset >= 0:
                y[offset:] += self.ab[self.p + offset, :self.n - offset] * x[:self.n - offset]
            else:
                y[:offset] += self.ab[self.p + offset, -offset:] * x[-offset:]
        return y


def solve_banded(s: BandedSystem) -> np.ndarray:
    """
    Banded LU with partial pivoting (LAPACK dgbsv).

    Raises:
        SingularSystemError: exactly zero pivot, with the 0-based row index
    """
    p = s.p
    # gbsv needs p extra rows above the band for fill-in
    ab = np.zeros((3 * p + 1, s.n))
    ab[p:, :] = s.ab
    _, _, x, info = lapack.dgbsv(p, p, ab, s.rhs.copy(), overwrite_ab=True, overwrite_b=True)
    if info > 0:
        raise SingularSystemError(f"zero pivot in banded solve at row {info - 1}", row=info - 1)
    if info < 0:
        raise ShapeError(f"illegal argument {-info} passed to dgbsv")
    if not np.all(np.isfinite(x)):
        raise SingularSystemError("banded solve produced non-finite values")
    return x
