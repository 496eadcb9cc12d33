"""Closed-question (contextual) tables: encoding, imputation, weighted centering."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import AllMissingColumn, InputError, Misalignment, UnknownCategory, ZeroVariance

QUANTITATIVE = "quantitative"
CATEGORICAL = "categorical"


@dataclass(frozen=True)
class VariableSpec:
    name: str
    kind: str = QUANTITATIVE
    categories: tuple = ()
    standardize: bool = False
    invert_scale: float | None = None

    def __post_init__(self):
        if self.kind not in (QUANTITATIVE, CATEGORICAL):
            raise ValueError(f"unknown variable kind {self.kind!r}")
        if self.kind == CATEGORICAL:
            if self.standardize:
                raise ValueError(f"{self.name}: standardize applies to quantitative variables only")
            if self.invert_scale is not None:
                raise ValueError(f"{self.name}: invert_scale applies to quantitative variables only")
            if not self.categories:
                raise ValueError(f"{self.name}: categorical variable needs its categories")
        object.__setattr__(self, "categories", tuple(str(c) for c in self.categories))

    def column_names(self) -> list[str]:
        if self.kind == QUANTITATIVE:
            return [self.name]
        return [f"{self.name}={c}" for c in self.categories]


@dataclass(frozen=True)
class ContextualTable:
    """Respondents x K numeric table. ``sources[k]`` names the variable column k
    came from; ``kinds[k]`` is its variable kind."""

    respondent_ids: tuple
    columns: tuple
    values: np.ndarray
    centered: bool = False
    sources: tuple = ()
    kinds: tuple = ()
    standardize: tuple = ()
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        k = len(self.columns)
        if self.values.shape != (len(self.respondent_ids), k):
            raise ValueError("values shape does not match ids x columns")
        if not self.sources:
            object.__setattr__(self, "sources", tuple(self.columns))
        if not self.kinds:
            object.__setattr__(self, "kinds", (QUANTITATIVE,) * k)
        if not self.standardize:
            object.__setattr__(self, "standardize", (False,) * k)

    @property
    def K(self) -> int:
        return len(self.columns)


def _is_missing(v) -> bool:
    if v is None:
        return True
    if isinstance(v, float) and math.isnan(v):
        return True
    return isinstance(v, str) and v.strip() == ""


def encode_contextual(
    raw: Mapping[str, Sequence],
    specs: Sequence[VariableSpec],
    respondent_ids: Sequence,
) -> ContextualTable:
    """Expand categorical variables into 0/1 indicators, invert scales.

    Missing cells become NaN (for a categorical variable, the whole
    indicator block of that respondent).
    """
    n = len(respondent_ids)
    cols, blocks, sources, kinds, std = [], [], [], [], []
    for spec in specs:
        if spec.name not in raw:
            raise InputError(f"variable {spec.name!r} not found in contextual data")
        data = list(raw[spec.name])
        if len(data) != n:
            raise InputError(f"variable {spec.name!r} has {len(data)} values for {n} respondents")
        if spec.kind == QUANTITATIVE:
            col = np.empty(n)
            for i, v in enumerate(data):
                if _is_missing(v):
                    col[i] = np.nan
                    continue
                try:
                    col[i] = float(v)
                except (TypeError, ValueError):
                    raise InputError(f"variable {spec.name!r}: non-numeric value {v!r}") from None
            if spec.invert_scale is not None:
                col = spec.invert_scale - col
            blocks.append(col[:, None])
        else:
            lookup = {c: j for j, c in enumerate(spec.categories)}
            block = np.zeros((n, len(spec.categories)))
            for i, v in enumerate(data):
                if _is_missing(v):
                    block[i] = np.nan
                    continue
                key = str(v).strip()
                if key not in lookup:
                    raise UnknownCategory(f"variable {spec.name!r}: value {key!r} not in {spec.categories}")
                block[i, lookup[key]] = 1.0
            blocks.append(block)
        names = spec.column_names()
        cols.extend(names)
        sources.extend([spec.name] * len(names))
        kinds.extend([spec.kind] * len(names))
        std.extend([spec.standardize] * len(names))
    values = np.hstack(blocks) if blocks else np.zeros((n, 0))
    return ContextualTable(
        tuple(respondent_ids), tuple(cols), values, False, tuple(sources), tuple(kinds), tuple(std)
    )


def align(table: ContextualTable, respondent_ids: Sequence) -> ContextualTable:
    """Reorder/subset rows to ``respondent_ids`` (e.g. a lexical table's retained rows)."""
    pos = {r: i for i, r in enumerate(table.respondent_ids)}
    missing = [r for r in respondent_ids if r not in pos]
    if missing:
        raise Misalignment(f"{len(missing)} respondent(s) without contextual data, e.g. {missing[0]!r}")
    idx = np.fromiter((pos[r] for r in respondent_ids), dtype=np.intp, count=len(respondent_ids))
    return replace(table, respondent_ids=tuple(respondent_ids), values=table.values[idx])


def impute_missing(table: ContextualTable, weights) -> ContextualTable:
    d = np.asarray(weights, dtype=float)
    if table.centered:
        raise ValueError("impute before centering")
    if d.shape != (len(table.respondent_ids),):
        raise Misalignment("weight vector does not match the table rows")
    X = table.values.copy()
    n_imputed = 0
    for k in range(X.shape[1]):
        miss = np.isnan(X[:, k])
        if not miss.any():
            continue
        if miss.all():
            raise AllMissingColumn(f"column {table.columns[k]!r} has no observed value")
        if table.kinds[k] == CATEGORICAL:
            X[miss, k] = 0.0
        else:
            w = d[~miss]
            if w.sum() > 0:
                X[miss, k] = w @ X[~miss, k] / w.sum()
            else:
                X[miss, k] = X[~miss, k].mean()
        n_imputed += int(miss.sum())
    meta = dict(table.metadata, imputed_cells=n_imputed, imputation="weighted column mean")
    return replace(table, values=X, metadata=meta)


def center_contextual(table: ContextualTable, weights, standardize_flags=None) -> ContextualTable:
    d = np.asarray(weights, dtype=float)
    X = table.values
    if np.isnan(X).any():
        raise ValueError("table has missing values; impute first")
    if d.shape != (X.shape[0],):
        raise Misalignment("weight vector does not match the table rows")
    flags = table.standardize if standardize_flags is None else tuple(bool(f) for f in standardize_flags)
    Xc = X - d @ X
    for k, f in enumerate(flags):
        if not f:
            continue
        var = d @ Xc[:, k] ** 2
        if var < 1e-14:
            raise ZeroVariance(f"column {table.columns[k]!r} has zero weighted variance")
        Xc[:, k] /= math.sqrt(var)
    return replace(table, values=Xc, centered=True, standardize=flags)


def read_scores(path: str | Path) -> tuple[list[str], dict[str, list[str]]]:
    """Read an ``id,<var1>,<var2>,...`` CSV; empty cells are missing."""
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh, strict=True)
            header = next(reader, None)
            if not header or header[0].strip() != "id":
                raise InputError(f"{path}: first column must be 'id'")
            names = [h.strip() for h in header[1:]]
            ids, cols = [], {h: [] for h in names}
            for lineno, row in enumerate(reader, start=2):
                if len(row) != len(header):
                    raise InputError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
                ids.append(row[0])
                for h, v in zip(names, row[1:]):
                    cols[h].append(v)
    except (OSError, UnicodeDecodeError, csv.Error) as exc:
        raise InputError(f"{path}: {exc}") from exc
    if len(set(ids)) != len(ids):
        raise InputError(f"{path}: duplicate respondent ids")
    return ids, cols
