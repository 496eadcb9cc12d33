"""MFA-GALT: multiple factor analysis of several GALTs sharing the same variables.

Two steps. Each sample's GALT is first analyzed on its own, in the metric C
computed from all respondents. Its word weights are then divided by the
first eigenvalue of that separate analysis so every set has top axial
inertia 1, and a global PCA(Z, C, M_lambda) is run on the stacked tables.

Weight conventions
------------------
Global word weights are the per-sample weights resized by N_l / N, and the
resized GALTs are stacked. Standardizing with these weights,
``Z = M^{-1} Q C^-``, leaves each block equal to the sample's own ``Z_l``
(the resizing cancels). The balanced weights of block l are
``M_l / lambda_1^l``, which is the block of M divided by the first eigenvalue
of the set as it sits in the global table (``N_l / N * lambda_1^l``). Only
the row weights change under balancing; Z does not.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ca_galt import Galt, build_galt, covariance_metric, solve_pca, standardize
from .context import ContextualTable
from .corpus import LexicalTable
from .errors import DegenerateSample, EmptyCategory, Misalignment, UnknownSample
from .numcore import (
    DEFAULT_REL_TOL,
    EigenBasis,
    MetricMatrix,
    StandardizedTable,
    generalized_pca,
    row_contributions,
    row_cos2,
)


@dataclass(frozen=True)
class MultiSample:
    samples: tuple
    names: tuple = ()

    def __post_init__(self):
        samples = tuple((lex, ctx) for lex, ctx in self.samples)
        if len(samples) < 2:
            raise ValueError("MFA-GALT needs at least two samples")
        cols = samples[0][1].columns
        for lex, ctx in samples:
            if ctx.columns != cols:
                raise Misalignment("contextual tables do not share the same columns")
            if not ctx.centered:
                raise ValueError("contextual tables must be centered by sample")
            if tuple(lex.respondent_ids) != tuple(ctx.respondent_ids):
                raise Misalignment("lexical and contextual rows differ")
        names = tuple(self.names) or tuple(f"sample{l + 1}" for l in range(len(samples)))
        if len(names) != len(samples) or len(set(names)) != len(names):
            raise ValueError("sample names must be unique, one per sample")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "names", names)

    @property
    def L(self) -> int:
        return len(self.samples)

    @property
    def totals(self) -> np.ndarray:
        return np.array([lex.grand_total for lex, _ in self.samples], dtype=float)

    @property
    def columns(self) -> tuple:
        return self.samples[0][1].columns


@dataclass(frozen=True)
class GlobalWeights:
    respondent_weights: np.ndarray
    word_weights: np.ndarray
    reweighted_words: np.ndarray
    # standalone first eigenvalue of each sample, PCA(Z_l, C, M_l)
    first_eigenvalues: np.ndarray
    # the same set's first eigenvalue under the resized global weights
    block_first_eigenvalues: np.ndarray


@dataclass(frozen=True)
class GlobalAssembly:
    respondent_weights: np.ndarray
    word_weights: np.ndarray
    metric: MetricMatrix
    Q: np.ndarray
    X: np.ndarray
    fractions: np.ndarray
    galts: tuple
    word_slices: tuple
    respondent_slices: tuple


@dataclass(frozen=True)
class MfaGaltResult:
    basis: EigenBasis
    word_coords: np.ndarray
    word_sample: np.ndarray
    words: tuple
    columns: tuple
    sample_names: tuple
    variable_coords: np.ndarray
    partial_coords: np.ndarray
    group_coords: np.ndarray
    rv: np.ndarray
    contributions: np.ndarray
    cos2: np.ndarray
    variable_cos2: np.ndarray
    inertia_total: float
    weights: GlobalWeights
    table: StandardizedTable
    word_slices: tuple
    galts: tuple

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.basis.eigenvalues

    @property
    def inertia_shares(self) -> np.ndarray:
        return 100.0 * self.eigenvalues / self.inertia_total

    def sample_index(self, sample) -> int:
        if isinstance(sample, (int, np.integer)):
            if not 0 <= sample < len(self.sample_names):
                raise UnknownSample(f"no sample #{sample}")
            return int(sample)
        try:
            return self.sample_names.index(sample)
        except ValueError:
            raise UnknownSample(f"no sample named {sample!r}") from None


def _slices(sizes) -> tuple:
    edges = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    return tuple(slice(a, b) for a, b in zip(edges[:-1], edges[1:]))


def assemble_global(samples: MultiSample, rel_tol: float = DEFAULT_REL_TOL) -> GlobalAssembly:
    galts = tuple(build_galt(lex, ctx) for lex, ctx in samples.samples)
    frac = samples.totals / samples.totals.sum()
    D = np.concatenate([g.respondent_weights * f for g, f in zip(galts, frac)])
    M = np.concatenate([g.word_weights * f for g, f in zip(galts, frac)])
    X = np.vstack([ctx.values for _, ctx in samples.samples])
    Q = np.vstack([g.values * f for g, f in zip(galts, frac)])
    return GlobalAssembly(
        respondent_weights=D,
        word_weights=M,
        metric=covariance_metric(X, D, rel_tol),
        Q=Q,
        X=X,
        fractions=frac,
        galts=galts,
        word_slices=_slices([len(g.words) for g in galts]),
        respondent_slices=_slices([len(g.respondent_weights) for g in galts]),
    )


def _first_eigenvalue(Z: StandardizedTable) -> float:
    return float(generalized_pca(Z, 1).eigenvalues[0]) if Z.column_metric.rank else 0.0


def separate_analyses(samples: MultiSample | Sequence[Galt], metric: MetricMatrix) -> np.ndarray:
    """First eigenvalue of PCA(Z_l, C, M_l) for each sample, in the shared metric."""
    if isinstance(samples, MultiSample):
        galts = [build_galt(lex, ctx) for lex, ctx in samples.samples]
        names = samples.names
    else:
        galts = list(samples)
        names = [f"sample{l + 1}" for l in range(len(galts))]
    out = []
    for name, g in zip(names, galts):
        lam = _first_eigenvalue(standardize(g.values, g.word_weights, metric))
        if lam < 1e-12:
            raise DegenerateSample(f"{name}: first eigenvalue {lam:.3e} of the separate analysis is null")
        out.append(lam)
    return np.array(out)


def mfa_galt(
    samples: MultiSample,
    S_max: int | None = None,
    rel_tol: float = DEFAULT_REL_TOL,
) -> MfaGaltResult:
    asm = assemble_global(samples, rel_tol)
    C = asm.metric
    lam1 = separate_analyses(asm.galts, C)
    block_lam1 = asm.fractions * lam1
    m_lambda = asm.word_weights.copy()
    for sl, lam in zip(asm.word_slices, block_lam1):
        m_lambda[sl] /= lam

    Z = standardize(asm.Q, asm.word_weights, C, pca_weights=m_lambda)
    basis, F, G, var_cos2 = solve_pca(Z, S_max)

    weights = GlobalWeights(asm.respondent_weights, asm.word_weights, m_lambda, lam1, block_lam1)
    word_sample = np.concatenate([np.full(sl.stop - sl.start, l) for l, sl in enumerate(asm.word_slices)])
    words = tuple(w for g in asm.galts for w in g.words)

    partial = np.stack([_partial(Z, F, basis.eigenvalues, sl) for sl in asm.word_slices])
    W = [_cross_product(Z, sl) for sl in asm.word_slices]
    return MfaGaltResult(
        basis=basis,
        word_coords=F,
        word_sample=word_sample,
        words=words,
        columns=samples.columns,
        sample_names=samples.names,
        variable_coords=G,
        partial_coords=partial,
        group_coords=_lg(W, C.values, basis.axes),
        rv=_rv(W, C),
        contributions=row_contributions(m_lambda, F, basis.eigenvalues),
        cos2=row_cos2(Z, F),
        variable_cos2=var_cos2,
        inertia_total=basis.total_inertia,
        weights=weights,
        table=Z,
        word_slices=asm.word_slices,
        galts=asm.galts,
    )


def _partial(Z: StandardizedTable, F, lam, sl) -> np.ndarray:
    m = Z.row_weights[sl]
    return Z.values[sl].T @ (m[:, None] * F[sl]) / np.sqrt(lam)


def _cross_product(Z: StandardizedTable, sl) -> np.ndarray:
    Zl = Z.values[sl]
    return Zl.T @ (Z.row_weights[sl][:, None] * Zl)


def _lg(W, C, U) -> np.ndarray:
    CU = C @ U
    return np.array([np.einsum("ks,kh,hs->s", CU, Wl, CU) for Wl in W])


def _rv(W, metric: MetricMatrix) -> np.ndarray:
    # tr(W_l C W_m C) = <A_l, A_m>_F with A = C^{1/2} W C^{1/2}
    A = [metric.sqrt @ Wl @ metric.sqrt for Wl in W]
    L = len(A)
    inner = np.array([[np.sum(A[a] * A[b]) for b in range(L)] for a in range(L)])
    norms = np.sqrt(np.diag(inner))
    rv = inner / np.outer(norms, norms)
    rv = (rv + rv.T) / 2
    np.fill_diagonal(rv, 1.0)
    return rv


def partial_column_factors(result: MfaGaltResult, sample) -> np.ndarray:
    """Coordinates ``G^l`` of the partial variables of one sample (K x S)."""
    l = result.sample_index(sample)
    return _partial(result.table, result.word_coords, result.eigenvalues, result.word_slices[l])


def cross_product_matrix(result: MfaGaltResult, sample) -> np.ndarray:
    """``W_l = Z_l^T M_lambda,l Z_l``."""
    return _cross_product(result.table, result.word_slices[result.sample_index(sample)])


def group_coordinates(result: MfaGaltResult) -> np.ndarray:
    W = [cross_product_matrix(result, l) for l in range(len(result.sample_names))]
    return _lg(W, result.basis.metric.values, result.basis.axes)


def lg_coefficient(result: MfaGaltResult, sample, axis) -> float:
    """Lg between one set and an arbitrary C-normalized axis."""
    u = np.asarray(axis, dtype=float)
    Cu = result.basis.metric.values @ u
    return float(Cu @ cross_product_matrix(result, sample) @ Cu)


def separate_axis(result: MfaGaltResult, sample) -> tuple[float, np.ndarray]:
    """First eigenpair of a set analyzed alone with its balanced weights."""
    l = result.sample_index(sample)
    sl = result.word_slices[l]
    Z = StandardizedTable(result.table.values[sl], result.table.row_weights[sl], result.basis.metric)
    b = generalized_pca(Z, 1)
    return float(b.eigenvalues[0]), b.axes[:, 0]


def rv_matrix(result: MfaGaltResult) -> np.ndarray:
    W = [cross_product_matrix(result, l) for l in range(len(result.sample_names))]
    return _rv(W, result.basis.metric)


def project_supplementary_categories(result: MfaGaltResult, sample, lex: LexicalTable, labels, categories=None):
    """Place each category at the occurrence-weighted centroid of the words its
    respondents used. Returns (categories, coords, occurrences)."""
    l = result.sample_index(sample)
    return category_centroids(result.word_coords[result.word_slices[l]], lex, labels, categories)


def category_centroids(F_words, lex: LexicalTable, labels, categories=None):
    labels = list(labels)
    if len(labels) != lex.counts.shape[0]:
        raise Misalignment(f"{len(labels)} labels for {lex.counts.shape[0]} respondents")
    if F_words.shape[0] != lex.counts.shape[1]:
        raise Misalignment("word coordinates do not match the lexical table")
    if categories is None:
        categories = sorted({str(c) for c in labels if c is not None and str(c) != ""})
    categories = [str(c) for c in categories]
    index = {c: k for k, c in enumerate(categories)}
    rows = np.array([index.get(str(c), -1) if c is not None else -1 for c in labels])
    A = np.zeros((len(categories), lex.counts.shape[1]))
    for k in range(len(categories)):
        sel = np.flatnonzero(rows == k)
        if sel.size:
            A[k] = np.asarray(lex.counts[sel].sum(axis=0)).ravel()
    occ = A.sum(axis=1)
    empty = [c for c, n in zip(categories, occ) if n == 0]
    if empty:
        raise EmptyCategory(f"categories without any occurrence: {empty}")
    return categories, (A @ F_words) / occ[:, None], occ
