"""Single-sample CA-GALT: the generalized aggregated lexical table and its PCA."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .context import ContextualTable
from .corpus import LexicalTable, compute_weights
from .errors import Misalignment
from .numcore import (
    DEFAULT_REL_TOL,
    EigenBasis,
    MetricMatrix,
    StandardizedTable,
    column_factors,
    generalized_pca,
    psd_pseudo_inverse,
    row_contributions,
    row_cos2,
    row_factors,
)


@dataclass(frozen=True)
class Galt:
    """Words x variables table ``Q = P^T X`` with its weights."""

    values: np.ndarray
    word_weights: np.ndarray
    respondent_weights: np.ndarray
    sample_total: int
    words: tuple
    columns: tuple


@dataclass(frozen=True)
class CaGaltResult:
    basis: EigenBasis
    word_coords: np.ndarray
    variable_coords: np.ndarray
    contributions: np.ndarray
    cos2: np.ndarray
    variable_cos2: np.ndarray
    total_inertia: float
    table: StandardizedTable
    galt: Galt

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.basis.eigenvalues

    @property
    def inertia_shares(self) -> np.ndarray:
        return 100.0 * self.eigenvalues / self.total_inertia


def build_galt(lex: LexicalTable, ctx: ContextualTable) -> Galt:
    if tuple(lex.respondent_ids) != tuple(ctx.respondent_ids):
        raise Misalignment("lexical and contextual tables do not list the same respondents in the same order")
    w = compute_weights(lex)
    Q = np.asarray(lex.counts.T @ ctx.values) / lex.grand_total
    return Galt(Q, w.word_weights, w.respondent_weights, lex.grand_total, lex.words, ctx.columns)


def covariance_metric(X: np.ndarray, respondent_weights, rel_tol: float = DEFAULT_REL_TOL) -> MetricMatrix:
    """``C = X^T D X`` and its pseudo-inverse."""
    d = np.asarray(respondent_weights, dtype=float)
    C = X.T @ (d[:, None] * X)
    return psd_pseudo_inverse((C + C.T) / 2, rel_tol)


def standardize(Q: np.ndarray, word_weights, metric: MetricMatrix, pca_weights=None) -> StandardizedTable:
    """Double standardization ``Z = M^{-1} Q C^-``.

    ``pca_weights`` are the row weights of the PCA when they differ from the
    weights used to standardize (the balanced weights of MFA-GALT).
    """
    m = np.asarray(word_weights, dtype=float)
    Z = (Q / m[:, None]) @ metric.pseudo_inverse
    return StandardizedTable(Z, m if pca_weights is None else np.asarray(pca_weights, dtype=float), metric)


def solve_pca(Z: StandardizedTable, S_max: int | None = None):
    """Run PCA(Z, C, M) and return (basis, F, G, variable_cos2), null axes dropped."""
    full = generalized_pca(Z).nonnull()
    basis = full if S_max is None else full.truncate(S_max)
    F = row_factors(Z, basis)
    G = column_factors(Z, Z.row_weights, F, basis.eigenvalues)
    G_full = full.axes * np.sqrt(full.eigenvalues)
    norms = (G_full**2).sum(axis=1)
    var_cos2 = np.divide(G**2, norms[:, None], out=np.zeros_like(G), where=norms[:, None] > 1e-300)
    return basis, F, G, var_cos2


def ca_galt(
    lex: LexicalTable,
    ctx: ContextualTable,
    S_max: int | None = None,
    metric_override: MetricMatrix | None = None,
    rel_tol: float = DEFAULT_REL_TOL,
) -> CaGaltResult:
    if not ctx.centered:
        raise ValueError("contextual table must be centered under the respondent weights")
    galt = build_galt(lex, ctx)
    if metric_override is None:
        metric = covariance_metric(ctx.values, galt.respondent_weights, rel_tol)
    else:
        if metric_override.size != ctx.K:
            raise Misalignment(f"metric is {metric_override.size}x{metric_override.size}, K = {ctx.K}")
        metric = metric_override
    Z = standardize(galt.values, galt.word_weights, metric)
    basis, F, G, var_cos2 = solve_pca(Z, S_max)
    return CaGaltResult(
        basis=basis,
        word_coords=F,
        variable_coords=G,
        contributions=row_contributions(Z.row_weights, F, basis.eigenvalues),
        cos2=row_cos2(Z, F),
        variable_cos2=var_cos2,
        total_inertia=basis.total_inertia,
        table=Z,
        galt=galt,
    )
