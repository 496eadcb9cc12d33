"""End-to-end analysis driven by a RunConfig; produces the output files in memory."""
from __future__ import annotations

import csv
import io
import json
import platform
from dataclasses import dataclass, field

import numpy as np
import scipy

from . import __version__
from .association import anova_association, build_occurrence_table, chi2_association
from .ca_galt import ca_galt
from .config import RunConfig, SampleEntry
from .context import CATEGORICAL, ContextualTable, _is_missing, align, center_contextual, encode_contextual, impute_missing, read_scores
from .corpus import LexicalTable, VocabularyFilter, build_lexical_table, compute_weights, read_responses, read_stopwords, tokenize_all
from .errors import DegenerateGroups, DegenerateMargin, InputError, UnknownCategory
from .mfa_galt import MultiSample, category_centroids, mfa_galt
from . import plots


@dataclass
class PreparedSample:
    entry: SampleEntry
    lex: LexicalTable
    imputed: ContextualTable
    centered: ContextualTable
    labels: dict = field(default_factory=dict)
    n_stopwords: int = 0


def _fmt(x) -> str:
    if x is None:
        return ""
    x = float(x)
    if np.isnan(x):
        return ""
    return f"{x:.10g}"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def prepare_sample(entry: SampleEntry, cfg: RunConfig) -> PreparedSample:
    ids, texts = read_responses(entry.responses)
    stop = read_stopwords(entry.stopwords, cfg.tokenizer) if entry.stopwords else frozenset()
    lex = build_lexical_table(tokenize_all(texts, cfg.tokenizer), VocabularyFilter(stop, entry.min_count), ids)

    score_ids, cols = read_scores(entry.scores)
    enc = align(encode_contextual(cols, cfg.variables, score_ids), lex.respondent_ids)
    d = compute_weights(lex).respondent_weights
    imputed = impute_missing(enc, d)
    centered = center_contextual(imputed, d)

    pos = {r: i for i, r in enumerate(score_ids)}
    labels = {}
    for spec in cfg.variables + cfg.supplementary:
        if spec.kind != CATEGORICAL:
            continue
        if spec.name not in cols:
            raise InputError(f"{entry.scores}: no column {spec.name!r}")
        raw = [cols[spec.name][pos[r]] for r in lex.respondent_ids]
        labels[spec.name] = [None if _is_missing(v) else str(v).strip() for v in raw]
        bad = sorted({v for v in labels[spec.name] if v is not None} - set(spec.categories))
        if bad:
            raise UnknownCategory(f"{entry.scores}: {spec.name!r} has undeclared categories {bad}")
    return PreparedSample(entry, lex, imputed, centered, labels, len(stop))


def association_rows(prepared, cfg: RunConfig):
    rows = []
    for v_idx, spec in enumerate(cfg.variables + cfg.supplementary):
        for l, ps in enumerate(prepared):
            if spec.kind == CATEGORICAL:
                labels = ps.labels[spec.name]
                try:
                    rep = chi2_association(ps.lex, labels, spec.categories, spec.name)
                    rows.append([spec.name, ps.entry.name, "categorical", "", "", _fmt(rep.ratio), _fmt(rep.p_value),
                                 _fmt(rep.p_value_approx), rep.method, str(rep.df[0]), ""])
                except DegenerateMargin:
                    rows.append([spec.name, ps.entry.name, "categorical", "", "", "", "", "", "degenerate", "", ""])
                continue
            k = ps.imputed.columns.index(spec.name)
            x = ps.imputed.values[:, k]
            mean, sd = x.mean(), x.std(ddof=1) if x.size > 1 else float("nan")
            occ = build_occurrence_table(ps.lex, x)
            try:
                rep = anova_association(occ, cfg.n_perm, [cfg.seed, l, v_idx], spec.name)
                rows.append([spec.name, ps.entry.name, "quantitative", _fmt(mean), _fmt(sd), _fmt(rep.ratio),
                             _fmt(rep.p_value), _fmt(rep.p_value_approx), rep.method,
                             f"{rep.df[0]};{rep.df[1]}", str(rep.n_permutations)])
            except DegenerateGroups:
                rows.append([spec.name, ps.entry.name, "quantitative", _fmt(mean), _fmt(sd), "", "", "",
                             "degenerate", "", ""])
    return rows


def run_analysis(cfg: RunConfig, plots_enabled: bool = False) -> dict[str, str]:
    """Run the configured analysis and return ``{filename: content}``."""
    prepared = [prepare_sample(e, cfg) for e in cfg.samples]
    names = tuple(ps.entry.name for ps in prepared)
    files: dict[str, str] = {}

    if len(prepared) == 1:
        ps = prepared[0]
        res = ca_galt(ps.lex, ps.centered, cfg.dims, rel_tol=cfg.rel_tol)
        F, G, lam = res.word_coords, res.variable_coords, res.eigenvalues
        words, word_sample = ps.lex.words, np.zeros(len(ps.lex.words), dtype=int)
        word_slices = (slice(0, len(words)),)
        total, metric_rank = res.total_inertia, res.basis.metric.rank
        columns = ps.centered.columns
        extra_meta = {}
    else:
        ms = MultiSample([(ps.lex, ps.centered) for ps in prepared], names)
        res = mfa_galt(ms, cfg.dims, rel_tol=cfg.rel_tol)
        F, G, lam = res.word_coords, res.variable_coords, res.eigenvalues
        words, word_sample, word_slices = res.words, res.word_sample, res.word_slices
        total, metric_rank = res.inertia_total, res.basis.metric.rank
        columns = res.columns
        extra_meta = {
            "separate_first_eigenvalues": dict(zip(names, map(float, res.weights.first_eigenvalues))),
            "block_first_eigenvalues": dict(zip(names, map(float, res.weights.block_first_eigenvalues))),
        }
    S = len(lam)
    dims = [f"dim{s + 1}" for s in range(S)]
    shares = 100.0 * lam / total

    files["eigenvalues.csv"] = _csv(
        ["axis", "eigenvalue", "percent", "cumulative"],
        [[s + 1, _fmt(lam[s]), _fmt(shares[s]), _fmt(shares[: s + 1].sum())] for s in range(S)],
    )
    files["word_coords.csv"] = _csv(
        ["word", "sample", *dims, *[f"contrib_{d}" for d in dims], *[f"cos2_{d}" for d in dims]],
        [
            [w, names[word_sample[j]], *map(_fmt, F[j]), *map(_fmt, res.contributions[j]), *map(_fmt, res.cos2[j])]
            for j, w in enumerate(words)
        ],
    )
    files["variable_coords.csv"] = _csv(
        ["variable", *dims, *[f"cos2_{d}" for d in dims]],
        [[c, *map(_fmt, G[k]), *map(_fmt, res.variable_cos2[k])] for k, c in enumerate(columns)],
    )
    if len(prepared) > 1:
        files["partial_coords.csv"] = _csv(
            ["variable", "sample", *dims],
            [[c, n, *map(_fmt, res.partial_coords[l, k])] for l, n in enumerate(names) for k, c in enumerate(columns)],
        )
        files["groups_lg.csv"] = _csv(["sample", *dims], [[n, *map(_fmt, res.group_coords[l])] for l, n in enumerate(names)])
        files["rv.csv"] = _csv(["sample", *names], [[n, *map(_fmt, res.rv[l])] for l, n in enumerate(names)])

    files["association.csv"] = _csv(
        ["variable", "sample", "kind", "mean", "sd", "ratio", "p_value", "p_value_approx", "method", "df", "n_permutations"],
        association_rows(prepared, cfg),
    )

    if cfg.supplementary:
        rows = []
        for spec in cfg.supplementary:
            for l, ps in enumerate(prepared):
                labels = ps.labels[spec.name]
                present = [c for c in spec.categories if c in set(labels)]
                cats, coords, occ = category_centroids(F[word_slices[l]], ps.lex, labels, present)
                for c, xy, n in zip(cats, coords, occ):
                    rows.append([spec.name, c, ps.entry.name, int(n), *map(_fmt, xy)])
        files["category_centroids.csv"] = _csv(["variable", "category", "sample", "occurrences", *dims], rows)

    if plots_enabled and S >= 2:
        files["map_words.svg"] = plots.word_map(words, word_sample, F, lam, shares, names)
        partial = res.partial_coords if len(prepared) > 1 else None
        files["map_variables.svg"] = plots.variable_map(columns, G, lam, shares, partial, names if partial is not None else ())
        if len(prepared) > 1:
            files["map_groups.svg"] = plots.group_map(names, res.group_coords)

    meta = {
        "package": {"name": "mfagalt", "version": __version__},
        "versions": {"python": platform.python_version(), "numpy": np.__version__, "scipy": scipy.__version__},
        "mode": cfg.mode,
        "seed": cfg.seed,
        "n_perm": cfg.n_perm,
        "rel_tol": cfg.rel_tol,
        "dims_requested": cfg.dims,
        "dims_returned": S,
        "metric_rank": metric_rank,
        "total_inertia": float(total),
        "imputation": "weighted column mean over observed cells (categorical: no category)",
        "tokenizer": {
            "lowercase": cfg.tokenizer.lowercase,
            "strip_punctuation": cfg.tokenizer.strip_punctuation,
            "min_token_chars": cfg.tokenizer.min_token_chars,
        },
        "variables": [
            {"name": v.name, "kind": v.kind, "standardize": v.standardize, "invert_scale": v.invert_scale,
             "categories": list(v.categories)}
            for v in cfg.variables
        ],
        "supplementary": [{"name": v.name, "categories": list(v.categories)} for v in cfg.supplementary],
        "samples": [
            {
                "name": ps.entry.name,
                "language": ps.entry.language,
                "responses": ps.entry.responses.name,
                "scores": ps.entry.scores.name,
                "stopwords": ps.entry.stopwords.name if ps.entry.stopwords else None,
                "stopword_count": ps.n_stopwords,
                "filter": ps.lex.summary,
                "dropped_empty_respondents": len(ps.lex.dropped_ids),
                "respondents": len(ps.lex.respondent_ids),
                "words": len(ps.lex.words),
                "occurrences": ps.lex.grand_total,
                "imputed_cells": ps.imputed.metadata.get("imputed_cells", 0),
            }
            for ps in prepared
        ],
        "outputs": sorted(files),
        **extra_meta,
    }
    files["run_metadata.json"] = json.dumps(meta, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    return files
