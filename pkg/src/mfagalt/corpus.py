"""Free-text answers to per-sample lexical tables.

Filtering is always applied in the same order: stopwords, then the
per-sample frequency threshold, then removal of respondents left with an
empty answer. Dropping empty respondents never changes a word's total, so
one pass is enough.
"""
from __future__ import annotations

import csv
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

from .errors import AllRowsEmpty, InputError

_ALNUM_RUN = re.compile(r"[^\W_]+")


@dataclass(frozen=True)
class TokenizerConfig:
    lowercase: bool = True
    strip_punctuation: bool = True
    min_token_chars: int = 1
    locale_hint: str = ""

    def __post_init__(self):
        if self.min_token_chars < 1:
            raise ValueError("min_token_chars must be >= 1")


@dataclass(frozen=True)
class VocabularyFilter:
    stopword_list: frozenset = frozenset()
    min_count: int = 1

    def __post_init__(self):
        if self.min_count < 1:
            raise ValueError("min_count must be >= 1")
        object.__setattr__(self, "stopword_list", frozenset(self.stopword_list))


@dataclass(frozen=True)
class LexicalTable:
    """Respondents x words count table of one sample.

    ``counts`` is a CSR array of nonnegative integers. ``dropped_ids`` lists
    respondents removed because nothing was left of their answer.
    """

    respondent_ids: tuple
    words: tuple
    counts: sparse.csr_array
    grand_total: int
    dropped_ids: tuple = ()
    summary: dict = field(default_factory=dict, compare=False)

    @property
    def shape(self):
        return self.counts.shape

    def row_sums(self) -> np.ndarray:
        return np.asarray(self.counts.sum(axis=1)).ravel()

    def col_sums(self) -> np.ndarray:
        return np.asarray(self.counts.sum(axis=0)).ravel()

    def dense(self) -> np.ndarray:
        return self.counts.toarray()

    def token_lists(self) -> list[list[str]]:
        """Token lists implied by the table (words repeated by count)."""
        out = []
        for i in range(self.counts.shape[0]):
            start, stop = self.counts.indptr[i], self.counts.indptr[i + 1]
            row = []
            for j, c in zip(self.counts.indices[start:stop], self.counts.data[start:stop]):
                row.extend([self.words[j]] * int(c))
            out.append(row)
        return out


@dataclass(frozen=True)
class WeightVectors:
    respondent_weights: np.ndarray
    word_weights: np.ndarray


def tokenize(raw_text: str, cfg: TokenizerConfig = TokenizerConfig()) -> list[str]:
    if not raw_text:
        return []
    text = unicodedata.normalize("NFC", raw_text)
    if cfg.lowercase:
        text = text.lower()
    if cfg.strip_punctuation:
        tokens = _ALNUM_RUN.findall(text)
    else:
        tokens = text.split()
    return [t for t in tokens if len(t) >= cfg.min_token_chars]


def build_lexical_table(
    token_lists: Sequence[Sequence[str]],
    filt: VocabularyFilter = VocabularyFilter(),
    respondent_ids: Sequence | None = None,
) -> LexicalTable:
    if len(token_lists) == 0:
        raise ValueError("at least one respondent is required")
    if respondent_ids is None:
        respondent_ids = range(len(token_lists))
    respondent_ids = tuple(respondent_ids)
    if len(respondent_ids) != len(token_lists):
        raise ValueError("respondent_ids and token_lists differ in length")

    per_row = [Counter(t for t in toks if t not in filt.stopword_list) for toks in token_lists]
    totals = Counter()
    for c in per_row:
        totals.update(c)
    n_stop = sum(len(toks) for toks in token_lists) - sum(totals.values())

    words = tuple(sorted(w for w, n in totals.items() if n >= filt.min_count))
    index = {w: j for j, w in enumerate(words)}

    rows, cols, vals, kept, dropped = [], [], [], [], []
    for rid, c in zip(respondent_ids, per_row):
        entries = sorted((index[w], n) for w, n in c.items() if w in index)
        if not entries:
            dropped.append(rid)
            continue
        r = len(kept)
        kept.append(rid)
        for j, n in entries:
            rows.append(r)
            cols.append(j)
            vals.append(n)
    if not kept:
        raise AllRowsEmpty(
            "no respondent left after stopword removal and frequency threshold "
            f"min_count={filt.min_count}"
        )

    counts = sparse.csr_array(
        (np.asarray(vals, dtype=np.int64), (np.asarray(rows), np.asarray(cols))),
        shape=(len(kept), len(words)),
    )
    counts.sort_indices()
    summary = {
        "stopword_occurrences_removed": int(n_stop),
        "distinct_words_before_threshold": len(totals),
        "distinct_words_kept": len(words),
        "respondents_in": len(respondent_ids),
        "respondents_kept": len(kept),
        "min_count": filt.min_count,
    }
    return LexicalTable(
        respondent_ids=tuple(kept),
        words=words,
        counts=counts,
        grand_total=int(counts.sum()),
        dropped_ids=tuple(dropped),
        summary=summary,
    )


def lexical_table_from_counts(counts, respondent_ids=None, words=None) -> LexicalTable:
    """Wrap an existing dense or sparse count matrix (no filtering)."""
    counts = sparse.csr_array(counts, dtype=np.int64)
    counts.eliminate_zeros()
    counts.sort_indices()
    n, p = counts.shape
    if counts.nnz and counts.data.min() < 0:
        raise ValueError("counts must be nonnegative")
    respondent_ids = tuple(range(n)) if respondent_ids is None else tuple(respondent_ids)
    words = tuple(f"w{j}" for j in range(p)) if words is None else tuple(words)
    if len(set(words)) != len(words):
        raise ValueError("duplicate words")
    table = LexicalTable(respondent_ids, words, counts, int(counts.sum()))
    if np.any(table.row_sums() == 0) or np.any(table.col_sums() == 0):
        raise AllRowsEmpty("count matrix has an empty row or column")
    return table


def compute_weights(table: LexicalTable) -> WeightVectors:
    n = float(table.grand_total)
    return WeightVectors(table.row_sums() / n, table.col_sums() / n)


def read_responses(path: str | Path) -> tuple[list[str], list[str]]:
    """Read an ``id,text`` CSV. Raises InputError on malformed rows."""
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh, strict=True)
            header = next(reader, None)
            if header is None or [h.strip() for h in header[:2]] != ["id", "text"] or len(header) != 2:
                raise InputError(f"{path}: header must be 'id,text'")
            ids, texts = [], []
            for lineno, row in enumerate(reader, start=2):
                if len(row) != 2:
                    raise InputError(f"{path}:{lineno}: expected 2 fields, got {len(row)}")
                ids.append(row[0])
                texts.append(row[1])
    except (OSError, UnicodeDecodeError, csv.Error) as exc:
        raise InputError(f"{path}: {exc}") from exc
    if len(set(ids)) != len(ids):
        raise InputError(f"{path}: duplicate respondent ids")
    return ids, texts


def read_stopwords(path: str | Path, cfg: TokenizerConfig | None = None) -> frozenset:
    words = set()
    try:
        with Path(path).open(encoding="utf-8") as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if line:
                    words.add(line.lower() if cfg is None or cfg.lowercase else line)
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from exc
    return frozenset(words)


def tokenize_all(texts: Iterable[str], cfg: TokenizerConfig = TokenizerConfig()) -> list[list[str]]:
    return [tokenize(t, cfg) for t in texts]
