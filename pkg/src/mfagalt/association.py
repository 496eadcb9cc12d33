"""Association between the vocabulary and one contextual variable.

Quantitative variables: one-way Anova of the score on the word, with one row
per occurrence, tested by permuting scores across occurrences (occurrences
are not independent, so the F distribution is only reported as an
approximation). Categorical variables: Pearson chi-square on the words x
categories aggregated table.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import special

from .corpus import LexicalTable
from .errors import DegenerateGroups, DegenerateMargin, Misalignment

PERM_BLOCK = 128


@dataclass(frozen=True)
class OccurrenceTable:
    word_index: np.ndarray
    scores: np.ndarray
    words: tuple
    respondent_index: np.ndarray

    def __len__(self):
        return len(self.scores)


@dataclass(frozen=True)
class AssociationReport:
    variable: str
    ratio: float
    p_value: float
    method: str
    df: tuple = ()
    statistic: float = float("nan")
    p_value_approx: float = float("nan")
    n_permutations: int = 0
    seed: int | None = None


def build_occurrence_table(lex: LexicalTable, scores) -> OccurrenceTable:
    s = np.asarray(scores, dtype=float)
    if s.shape != (lex.counts.shape[0],):
        raise Misalignment(f"{s.size} scores for {lex.counts.shape[0]} respondents")
    if np.isnan(s).any():
        raise ValueError("scores contain missing values")
    coo = lex.counts.tocoo()
    order = np.lexsort((coo.col, coo.row))
    rows, cols, n = coo.row[order], coo.col[order], coo.data[order].astype(np.int64)
    resp = np.repeat(rows, n)
    return OccurrenceTable(np.repeat(cols, n).astype(np.intp), s[resp], lex.words, resp.astype(np.intp))


def _between_ss(groups, values, n_groups, counts) -> np.ndarray:
    """Between-group sum of squares up to a constant (sum_g S_g^2 / n_g)."""
    sums = np.bincount(groups, weights=values, minlength=n_groups)
    return (sums**2 / counts).sum()


def correlation_ratio(groups, values) -> float:
    groups = np.asarray(groups)
    values = np.asarray(values, dtype=float)
    _, g = np.unique(groups, return_inverse=True)
    return _eta2(g, values)


def _eta2(g, values) -> float:
    # 1 - SSW/SST is exactly 1 when every group is constant
    dev = values - values.mean()
    sst = dev @ dev
    if sst == 0:
        return float("nan")
    means = np.bincount(g, weights=values) / np.bincount(g)
    within = values - means[g]
    return float(min(max(1.0 - (within @ within) / sst, 0.0), 1.0))


def _perm_block(seed_seq, n, groups, dev, n_groups, counts):
    rng = np.random.default_rng(seed_seq)
    out = np.empty(n)
    for b in range(n):
        out[b] = _between_ss(groups, rng.permutation(dev), n_groups, counts)
    return out


def anova_association(
    occ: OccurrenceTable,
    n_perm: int = 999,
    seed: int = 0,
    variable: str = "",
    workers: int = 1,
) -> AssociationReport:
    """Correlation ratio (eta^2) of score on word with a permutation p-value.

    Replicates are generated in fixed blocks, each from its own child seed,
    so the p-value does not depend on ``workers``.
    """
    if n_perm < 99:
        raise ValueError("n_perm must be >= 99")
    _, g = np.unique(occ.word_index, return_inverse=True)
    counts = np.bincount(g)
    if counts.size < 2:
        raise DegenerateGroups(f"{variable}: all occurrences share one word")
    if np.unique(occ.scores).size < 2:
        raise DegenerateGroups(f"{variable}: all occurrences share one score")
    dev = occ.scores - occ.scores.mean()
    k = counts.size
    observed = _between_ss(g, dev, k, counts)
    eta2 = _eta2(g, occ.scores)

    sizes = [min(PERM_BLOCK, n_perm - a) for a in range(0, n_perm, PERM_BLOCK)]
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = [(c, n, g, dev, k, counts) for c, n in zip(children, sizes)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            null = np.concatenate(list(ex.map(lambda a: _perm_block(*a), jobs)))
    else:
        null = np.concatenate([_perm_block(*a) for a in jobs])
    # relative slack so replicates equal to the observed value up to rounding count as ties
    hits = int(np.count_nonzero(null >= observed * (1 - 1e-12)))
    p = (1 + hits) / (1 + n_perm)

    n = len(occ)
    df_b, df_w = k - 1, n - k
    if df_w > 0 and eta2 < 1:
        f_stat = (eta2 / df_b) / ((1 - eta2) / df_w)
        p_f = float(special.fdtrc(df_b, df_w, f_stat))
    else:
        f_stat, p_f = float("inf"), 0.0
    return AssociationReport(
        variable=variable,
        ratio=eta2,
        p_value=p,
        method="permutation_anova",
        df=(df_b, df_w),
        statistic=f_stat,
        p_value_approx=p_f,
        n_permutations=n_perm,
        seed=seed,
    )


def aggregate(lex: LexicalTable, labels, categories=None) -> tuple[np.ndarray, list]:
    """Words x categories aggregated lexical table."""
    labels = [None if c is None or str(c) == "" else str(c) for c in labels]
    if len(labels) != lex.counts.shape[0]:
        raise Misalignment(f"{len(labels)} labels for {lex.counts.shape[0]} respondents")
    if categories is None:
        categories = sorted({c for c in labels if c is not None})
    categories = [str(c) for c in categories]
    index = {c: k for k, c in enumerate(categories)}
    ind = np.zeros((len(labels), len(categories)))
    for i, c in enumerate(labels):
        if c is not None and c in index:
            ind[i, index[c]] = 1.0
    return np.asarray(lex.counts.T @ ind), categories


def chi2_test(table) -> tuple[float, int, float]:
    """Pearson chi-square statistic, degrees of freedom and upper-tail p-value."""
    T = np.asarray(table, dtype=float)
    r, c = T.sum(axis=1), T.sum(axis=0)
    if T.shape[0] < 2 or T.shape[1] < 2:
        raise DegenerateMargin(f"need at least 2 rows and 2 columns, got {T.shape}")
    if np.any(r <= 0) or np.any(c <= 0):
        raise DegenerateMargin("a marginal total is zero")
    E = np.outer(r, c) / T.sum()
    stat = float(((T - E) ** 2 / E).sum())
    df = (T.shape[0] - 1) * (T.shape[1] - 1)
    return stat, df, float(special.gammaincc(df / 2.0, stat / 2.0))


def chi2_association(lex: LexicalTable, labels, categories=None, variable: str = "") -> AssociationReport:
    T, _ = aggregate(lex, labels, categories)
    stat, df, p = chi2_test(T)
    return AssociationReport(
        variable=variable, ratio=stat, p_value=p, method="chi2", df=(df,), statistic=stat, p_value_approx=p
    )
