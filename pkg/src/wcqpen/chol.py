"""Incremental Cholesky factorization of a ridge-augmented Gram matrix.

Maintains the upper factor R with R^T R = C^T C + diag(ridge) while columns
of C are appended and removed, so the active-set solver pays O(k^2) per
update instead of O(k^3) per refactorization.  Column removal restores
triangularity with Givens rotations (a rank-one update, numerically safe);
a fresh factorization is the fallback whenever an update degenerates.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.linalg import solve_triangular

from .exceptions import RankError

# Pivots smaller than sqrt(RANK_RTOL * diag) are treated as rank deficiencies.
RANK_RTOL = 1e-12


def _rank_one_update(R: np.ndarray, v: np.ndarray) -> None:
    """In-place update of upper R so that R^T R gains v v^T."""
    k = R.shape[0]
    v = v.copy()
    for i in range(k):
        a, b = R[i, i], v[i]
        r = math.hypot(a, b)
        if r == 0.0:
            continue
        c, s = a / r, b / r
        R[i, i] = r
        if i + 1 < k:
            row = R[i, i + 1:].copy()
            R[i, i + 1:] = c * row + s * v[i + 1:]
            v[i + 1:] = -s * row + c * v[i + 1:]


class CholGram:
    """Upper-triangular factor of C^T C + diag(ridge) under column edits."""

    def __init__(self, n_rows: int):
        self.n_rows = n_rows
        self.columns: list[np.ndarray] = []
        self.ridges: list[float] = []
        self.R = np.zeros((0, 0))

    @property
    def size(self) -> int:
        return len(self.columns)

    def gram(self) -> np.ndarray:
        """The matrix currently factorized (recomputed from stored columns)."""
        k = self.size
        if k == 0:
            return np.zeros((0, 0))
        C = np.column_stack(self.columns)
        return C.T @ C + np.diag(self.ridges)

    def bulk_set(self, columns, ridges) -> None:
        """Replace all columns at once and factorize in one shot."""
        self.columns = [np.asarray(c, dtype=float).ravel() for c in columns]
        self.ridges = [float(r) for r in ridges]
        self.refactorize()

    def add_column(self, col: np.ndarray, ridge: float) -> None:
        """Append a column; O(k^2) via one triangular solve.

        Raises
        ------
        RankError
            If the new pivot is not safely positive (dependent column with
            zero ridge).
        """
        col = np.asarray(col, dtype=float).ravel()
        if col.shape[0] != self.n_rows:
            raise ValueError(f"column has {col.shape[0]} rows, expected {self.n_rows}")
        k = self.size
        diag = float(col @ col) + ridge
        if k == 0:
            if diag <= 0.0 or diag <= RANK_RTOL * max(1.0, float(col @ col)):
                raise RankError(0)
            self.columns.append(col)
            self.ridges.append(ridge)
            self.R = np.array([[math.sqrt(diag)]])
            return
        cross = np.array([float(c @ col) for c in self.columns])
        w = solve_triangular(self.R, cross, trans="T", lower=False)
        d2 = diag - float(w @ w)
        if d2 <= RANK_RTOL * max(1.0, diag):
            raise RankError(k)
        newR = np.zeros((k + 1, k + 1))
        newR[:k, :k] = self.R
        newR[:k, k] = w
        newR[k, k] = math.sqrt(d2)
        self.columns.append(col)
        self.ridges.append(ridge)
        self.R = newR

    def remove_column(self, idx: int) -> None:
        """Remove column ``idx``; trailing block fixed by a rank-one update."""
        k = self.size
        if not (0 <= idx < k):
            raise IndexError(idx)
        row_tail = self.R[idx, idx + 1:].copy()
        newR = np.zeros((k - 1, k - 1))
        newR[:idx, :idx] = self.R[:idx, :idx]
        newR[:idx, idx:] = self.R[:idx, idx + 1:]
        newR[idx:, idx:] = self.R[idx + 1:, idx + 1:]
        _rank_one_update(newR[idx:, idx:], row_tail)
        del self.columns[idx]
        del self.ridges[idx]
        self.R = newR

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """Solve (C^T C + diag(ridge)) z = rhs by two triangular solves."""
        rhs = np.asarray(rhs, dtype=float).ravel()
        if self.size == 0:
            return np.zeros(0)
        z = solve_triangular(self.R, rhs, trans="T", lower=False)
        return solve_triangular(self.R, z, lower=False)

    def refactorize(self) -> None:
        """Rebuild the factor from scratch (guards against drift)."""
        G = self.gram()
        if G.shape[0] == 0:
            self.R = np.zeros((0, 0))
            return
        try:
            L = np.linalg.cholesky(G)
        except np.linalg.LinAlgError as exc:
            raise RankError(-1, f"Gram matrix not positive definite: {exc}") from exc
        self.R = L.T.copy()

    def residual(self) -> float:
        """Relative reconstruction error ||R^T R - G|| / (1 + ||G||)."""
        G = self.gram()
        if G.shape[0] == 0:
            return 0.0
        err = np.linalg.norm(self.R.T @ self.R - G)
        return float(err / (1.0 + np.linalg.norm(G)))
