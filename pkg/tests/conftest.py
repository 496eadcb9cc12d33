from pathlib import Path

import numpy as np
import pytest

from mfagalt.context import ContextualTable, center_contextual
from mfagalt.corpus import compute_weights, lexical_table_from_counts
from mfagalt.mfa_galt import MultiSample

ROOT = Path(__file__).resolve().parents[1]
FIXTURE = ROOT / "data" / "synthetic_bilingual"

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE = {}


def random_counts(rng, I, J, rate=1.0):
    """Poisson counts with no empty row or column."""
    Y = rng.poisson(rate, size=(I, J))
    Y[np.arange(I), rng.integers(0, J, size=I)] += 1
    Y[rng.integers(0, I, size=J), np.arange(J)] += 1
    return Y


def make_pair(Y, X, prefix="r"):
    lex = lexical_table_from_counts(Y, respondent_ids=[f"{prefix}{i}" for i in range(Y.shape[0])])
    cols = tuple(f"v{k}" for k in range(X.shape[1]))
    raw = ContextualTable(lex.respondent_ids, cols, np.asarray(X, dtype=float))
    return lex, center_contextual(raw, compute_weights(lex).respondent_weights)


def random_pair(rng, I, J, K, prefix="r"):
    Y = random_counts(rng, I, J)
    X = rng.normal(size=(I, K)) @ rng.normal(size=(K, K))
    return make_pair(Y, X, prefix)


def random_multisample(rng, L=None, J_total=30, K=None):
    L = L or int(rng.choice([2, 3]))
    K = K or int(rng.integers(2, 9))
    J_each = [int(rng.integers(K + 1, max(K + 2, J_total // L) + 1)) for _ in range(L)]
    while sum(J_each) > J_total:
        J_each[int(np.argmax(J_each))] -= 1
    pairs = [random_pair(rng, int(rng.integers(12, 40)), J, K, prefix=f"s{l}_") for l, J in enumerate(J_each)]
    return MultiSample(pairs)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")
