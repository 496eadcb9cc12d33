"""Independent reference computations used to cross-check the main pipeline.

These deliberately avoid the symmetrized solver in ``numcore``: they use a
general (nonsymmetric) eigen-solver, ``numpy.linalg.pinv`` and the SVD.
"""
from __future__ import annotations

import numpy as np


def dense_eigenvalues(Z, row_weights, C) -> np.ndarray:
    """Eigenvalues of ``Z^T M Z C`` by a general eigen-solver, descending, real part."""
    Z = np.asarray(Z, dtype=float)
    A = Z.T @ np.diag(row_weights) @ Z @ np.asarray(C, dtype=float)
    lam = np.linalg.eigvals(A)
    return np.sort(lam.real)[::-1]


def classical_ca(table) -> tuple[np.ndarray, np.ndarray]:
    """Correspondence analysis of a contingency table via SVD of the
    standardized residuals. Returns (eigenvalues, row principal coordinates),
    nonzero axes only."""
    N = np.asarray(table, dtype=float)
    P = N / N.sum()
    r = P.sum(axis=1)
    c = P.sum(axis=0)
    S = (P - np.outer(r, c)) / np.sqrt(np.outer(r, c))
    U, sv, _ = np.linalg.svd(S, full_matrices=False)
    keep = sv > 1e-10 * max(sv[0], 1e-300)
    rows = U[:, keep] * sv[keep] / np.sqrt(r)[:, None]
    return sv[keep] ** 2, rows


def mfa_galt_oneshot(counts_list, X_list) -> dict:
    """Brute-force MFA-GALT from raw counts and centered contextual tables.

    Everything is rebuilt from scratch: weights, resizing, global metric via
    ``pinv``, separate first eigenvalues and the global spectrum via the
    nonsymmetric operator.
    """
    counts_list = [np.asarray(Y, dtype=float) for Y in counts_list]
    totals = np.array([Y.sum() for Y in counts_list])
    N = totals.sum()
    D = np.concatenate([Y.sum(axis=1) / N for Y in counts_list])
    X = np.vstack(X_list)
    C = X.T @ np.diag(D) @ X
    Cp = np.linalg.pinv(C, rcond=1e-10, hermitian=True)
    m_blocks, z_blocks, lam1 = [], [], []
    for Y, Xl, Nl in zip(counts_list, X_list, totals):
        m_glob = Y.sum(axis=0) / N
        Q = (Y.T @ Xl / Nl) * (Nl / N)
        Zl = np.diag(1.0 / m_glob) @ Q @ Cp
        lam1.append(dense_eigenvalues(Zl, m_glob, C)[0])
        m_blocks.append(m_glob)
        z_blocks.append(Zl)
    m_lam = np.concatenate([m / l for m, l in zip(m_blocks, lam1)])
    Z = np.vstack(z_blocks)
    return {
        "eigenvalues": dense_eigenvalues(Z, m_lam, C),
        "first_eigenvalues": np.array(lam1),
        "Z": Z,
        "row_weights": m_lam,
        "C": C,
    }
