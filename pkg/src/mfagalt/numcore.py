"""Weighted-metric PCA engine.

``PCA(Z, C, M)`` diagonalizes ``Z^T M Z C`` with axes normalized so that
``U^T C U = I``. The operator is not symmetric, so the congruent problem
``C^{1/2} Z^T M Z C^{1/2}`` is solved instead, restricted to the range of C
(where the analysis lives when C is singular), and mapped back with
``C^{-1/2}``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotPSD, ZeroEigenvalue

DEFAULT_REL_TOL = 1e-10


@dataclass(frozen=True)
class MetricMatrix:
    values: np.ndarray
    rank: int
    pseudo_inverse: np.ndarray
    inverse_sqrt: np.ndarray
    sqrt: np.ndarray
    # orthonormal basis of range(C) and the matching eigenvalues
    range_basis: np.ndarray
    range_eigenvalues: np.ndarray
    rel_tol: float = DEFAULT_REL_TOL

    @property
    def size(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class EigenBasis:
    eigenvalues: np.ndarray
    axes: np.ndarray
    metric: MetricMatrix
    total_inertia: float

    @property
    def n_axes(self) -> int:
        return len(self.eigenvalues)

    def truncate(self, n: int) -> "EigenBasis":
        return EigenBasis(self.eigenvalues[:n], self.axes[:, :n], self.metric, self.total_inertia)

    def nonnull(self, tol: float | None = None) -> "EigenBasis":
        """Drop axes whose eigenvalue is numerically zero."""
        lam = self.eigenvalues
        if lam.size == 0:
            return self
        if tol is None:
            tol = max(1e-12, 1e-10 * lam[0])
        return self.truncate(int(np.count_nonzero(lam > tol)))


@dataclass(frozen=True)
class StandardizedTable:
    values: np.ndarray
    row_weights: np.ndarray
    column_metric: MetricMatrix

    def __post_init__(self):
        Z = np.asarray(self.values, dtype=float)
        m = np.asarray(self.row_weights, dtype=float)
        if Z.ndim != 2 or m.shape != (Z.shape[0],):
            raise DimensionMismatch(f"Z {Z.shape} vs row weights {m.shape}")
        if Z.shape[1] != self.column_metric.size:
            raise DimensionMismatch(f"Z has {Z.shape[1]} columns, metric is {self.column_metric.size}")
        if np.any(m <= 0):
            raise ValueError("row weights must be strictly positive")
        object.__setattr__(self, "values", Z)
        object.__setattr__(self, "row_weights", m)


def psd_pseudo_inverse(C, rel_tol: float = DEFAULT_REL_TOL) -> MetricMatrix:
    C = np.atleast_2d(np.asarray(C, dtype=float))
    if C.shape[0] != C.shape[1]:
        raise DimensionMismatch(f"metric must be square, got {C.shape}")
    scale = max(1.0, float(np.abs(C).max(initial=0.0)))
    if np.abs(C - C.T).max(initial=0.0) > 1e-12 * scale:
        raise NotPSD("metric is not symmetric")
    C = (C + C.T) / 2
    w, V = np.linalg.eigh(C)
    lam_max = w.max(initial=0.0)
    cutoff = rel_tol * lam_max
    if w.min(initial=0.0) < -cutoff:
        raise NotPSD(f"metric has negative eigenvalue {w.min():.3e} (largest {lam_max:.3e})")
    keep = (w >= cutoff) & (w > 0)
    R, wr = V[:, keep], w[keep]
    return MetricMatrix(
        values=C,
        rank=int(keep.sum()),
        pseudo_inverse=(R / wr) @ R.T,
        inverse_sqrt=(R / np.sqrt(wr)) @ R.T,
        sqrt=(R * np.sqrt(wr)) @ R.T,
        range_basis=R,
        range_eigenvalues=wr,
        rel_tol=rel_tol,
    )


def _fix_signs(U: np.ndarray) -> np.ndarray:
    # Largest |entry| of each axis made positive; argmax picks the lowest index on ties.
    U = U.copy()
    for s in range(U.shape[1]):
        j = int(np.argmax(np.abs(U[:, s])))
        if U[j, s] < 0:
            U[:, s] = -U[:, s]
    return U


def generalized_pca(Z: StandardizedTable, S_max: int | None = None) -> EigenBasis:
    metric = Z.column_metric
    R, wr = metric.range_basis, metric.range_eigenvalues
    S = metric.rank if S_max is None else min(int(S_max), metric.rank)
    if S_max is not None and S_max < 1:
        raise ValueError("S_max must be >= 1")

    Y = (Z.values @ R) * np.sqrt(wr)
    B = Y.T @ (Z.row_weights[:, None] * Y)
    B = (B + B.T) / 2
    lam, vecs = np.linalg.eigh(B)
    order = np.argsort(-lam, kind="stable")[:S]
    lam = np.clip(lam[order], 0.0, None)
    U = R @ (vecs[:, order] / np.sqrt(wr)[:, None])
    return EigenBasis(lam, _fix_signs(U), metric, float(np.trace(B)))


def row_factors(Z: StandardizedTable, basis: EigenBasis) -> np.ndarray:
    if basis.axes.shape[0] != Z.values.shape[1]:
        raise DimensionMismatch("axes do not match Z columns")
    return Z.values @ basis.metric.values @ basis.axes


def column_factors(Z, row_weights, F, eigenvalues) -> np.ndarray:
    """Transition from row factors to column factors, ``Z^T M F Lambda^{-1/2}``."""
    Z = Z.values if isinstance(Z, StandardizedTable) else np.asarray(Z, dtype=float)
    m = np.asarray(row_weights, dtype=float)
    lam = np.asarray(eigenvalues, dtype=float)
    if F.shape != (Z.shape[0], lam.size) or m.shape != (Z.shape[0],):
        raise DimensionMismatch("Z, row weights, F and eigenvalues are inconsistent")
    if np.any(lam < 1e-12):
        raise ZeroEigenvalue(f"retained eigenvalue below 1e-12: {lam.min():.3e}")
    return Z.T @ (m[:, None] * F) / np.sqrt(lam)


def row_cos2(Z: StandardizedTable, F: np.ndarray) -> np.ndarray:
    """Squared cosines of the rows: F^2 over the squared C-norm of each row of Z."""
    norms = np.einsum("jk,kl,jl->j", Z.values, Z.column_metric.values, Z.values)
    out = np.zeros_like(F)
    ok = norms > 1e-300
    out[ok] = F[ok] ** 2 / norms[ok, None]
    return out


def row_contributions(row_weights, F, eigenvalues) -> np.ndarray:
    """Percent contribution of each row to each axis."""
    return 100.0 * np.asarray(row_weights)[:, None] * F**2 / np.asarray(eigenvalues)
