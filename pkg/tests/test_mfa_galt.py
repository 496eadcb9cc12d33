import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mfagalt.ca_galt import build_galt, standardize
from mfagalt.context import ContextualTable
from mfagalt.corpus import lexical_table_from_counts
from mfagalt.errors import DegenerateSample, EmptyCategory, UnknownSample
from mfagalt.mfa_galt import (
    MultiSample,
    assemble_global,
    cross_product_matrix,
    group_coordinates,
    lg_coefficient,
    mfa_galt,
    partial_column_factors,
    project_supplementary_categories,
    rv_matrix,
    separate_analyses,
    separate_axis,
)
from mfagalt.numcore import StandardizedTable, generalized_pca
from mfagalt.oracles import dense_eigenvalues, mfa_galt_oneshot

from conftest import make_pair, random_counts, random_multisample, random_pair


def test_assemble_equal_totals(rng):
    lex, ctx = random_pair(rng, 12, 5, 3)
    asm = assemble_global(MultiSample([(lex, ctx), (lex, ctx)]))
    for sl in asm.respondent_slices:
        assert asm.respondent_weights[sl].sum() == pytest.approx(0.5, abs=1e-15)
    for sl in asm.word_slices:
        assert asm.word_weights[sl].sum() == pytest.approx(0.5, abs=1e-15)


def test_assemble_block_sums_follow_totals(rng):
    # sample totals of 871 and 3029 occurrences
    pairs = []
    for total, prefix in ((871, "en"), (3029, "es")):
        Y = random_counts(rng, 40, 6)
        Y[0, 0] += total - Y.sum()
        pairs.append(make_pair(Y, rng.normal(size=(40, 3)), prefix))
    asm = assemble_global(MultiSample(pairs))
    assert asm.respondent_weights[asm.respondent_slices[0]].sum() == pytest.approx(871 / 3900, abs=1e-15)
    assert asm.respondent_weights[asm.respondent_slices[1]].sum() == pytest.approx(3029 / 3900, abs=1e-15)
    assert asm.word_weights.sum() == pytest.approx(1, abs=1e-15)
    assert np.all(np.abs(asm.respondent_weights @ asm.X) < 1e-12)


def test_separate_analyses(rng):
    lex, ctx = random_pair(rng, 20, 6, 3)
    ms = MultiSample([(lex, ctx), (lex, ctx)])
    asm = assemble_global(ms)
    lam = separate_analyses(ms, asm.metric)
    assert lam[0] == lam[1]
    g = build_galt(lex, ctx)
    Z = standardize(g.values, g.word_weights, asm.metric)
    assert lam[0] == pytest.approx(dense_eigenvalues(Z.values, g.word_weights, asm.metric.values)[0], rel=1e-10)


def test_degenerate_sample(rng):
    lex, ctx = random_pair(rng, 10, 4, 2)
    # every respondent uses the same proportions of words -> Q is zero after centering
    Y = np.tile([1, 2, 1], (8, 1))
    lex0 = lexical_table_from_counts(Y, [f"z{i}" for i in range(8)])
    ctx0 = make_pair(Y, rng.normal(size=(8, 2)), "z")[1]
    with pytest.raises(DegenerateSample):
        mfa_galt(MultiSample([(lex, ctx), (lex0, ctx0)]))


def test_matches_oneshot_oracle(rng):
    for _ in range(10):
        ms = random_multisample(rng)
        res = mfa_galt(ms)
        ref = mfa_galt_oneshot([lex.dense() for lex, _ in ms.samples], [ctx.values for _, ctx in ms.samples])
        np.testing.assert_allclose(res.eigenvalues, ref["eigenvalues"][: len(res.eigenvalues)], rtol=1e-9)
        np.testing.assert_allclose(res.table.row_weights, ref["row_weights"], rtol=1e-9)


def test_balancing_and_bounds(rng):
    for _ in range(15):
        ms = random_multisample(rng)
        res = mfa_galt(ms)
        for l in range(ms.L):
            lam, u = separate_axis(res, l)
            assert lam == pytest.approx(1.0, abs=1e-10)
            assert lg_coefficient(res, l, u) == pytest.approx(1.0, abs=1e-8)
            # per-sample weights divided by the standalone first eigenvalue
            g = res.galts[l]
            np.testing.assert_allclose(
                res.weights.reweighted_words[res.word_slices[l]], g.word_weights / res.weights.first_eigenvalues[l]
            )
        assert 1 - 1e-8 <= res.eigenvalues[0] <= ms.L + 1e-8
        assert np.all(res.group_coords >= -1e-12) and np.all(res.group_coords <= 1 + 1e-10)


@pytest.mark.parametrize("L", [2, 3, 4])
def test_duplicated_samples(rng, L):
    lex, ctx = random_pair(rng, 25, 7, 3)
    res = mfa_galt(MultiSample([(lex, ctx)] * L))
    assert res.eigenvalues[0] == pytest.approx(L, abs=1e-9)
    np.testing.assert_allclose(res.rv, 1.0, atol=1e-10)
    for l in range(1, L):
        np.testing.assert_allclose(res.partial_coords[l], res.partial_coords[0], atol=1e-12)


def test_partials_sum_to_global(rng):
    ms = random_multisample(rng, L=3)
    res = mfa_galt(ms)
    parts = np.stack([partial_column_factors(res, l) for l in range(3)])
    np.testing.assert_allclose(parts, res.partial_coords)
    np.testing.assert_allclose(parts.sum(axis=0), res.variable_coords, atol=1e-10)


def test_partial_entrywise_form(rng):
    # G_s(k^l) = 1/sqrt(lambda_s) * sum_{j in J_l} z_jk * (m_jj / lambda_1^l) * F_s(j), m global word weight
    ms = random_multisample(rng, L=2)
    res = mfa_galt(ms)
    l, sl = 1, res.word_slices[1]
    m = res.weights.word_weights[sl] / res.weights.block_first_eigenvalues[l]
    Z, F = res.table.values[sl], res.word_coords[sl]
    K, S = res.variable_coords.shape
    expected = np.array(
        [[sum(Z[j, k] * m[j] * F[j, s] for j in range(Z.shape[0])) / np.sqrt(res.eigenvalues[s]) for s in range(S)]
         for k in range(K)]
    )
    np.testing.assert_allclose(partial_column_factors(res, l), expected, atol=1e-12)


def test_partial_zero_block(rng):
    ms = random_multisample(rng, L=2)
    res = mfa_galt(ms)
    Z = res.table.values.copy()
    Z[res.word_slices[0]] = 0
    G0 = Z.T @ (res.table.row_weights[:, None] * res.word_coords) / np.sqrt(res.eigenvalues)
    np.testing.assert_allclose(G0, partial_column_factors(res, 1), atol=1e-12)


def test_unknown_sample(rng):
    res = mfa_galt(random_multisample(rng, L=2))
    with pytest.raises(UnknownSample):
        partial_column_factors(res, 5)
    with pytest.raises(UnknownSample):
        partial_column_factors(res, "nope")
    assert np.array_equal(partial_column_factors(res, "sample2"), partial_column_factors(res, 1))


def test_lg_definition(rng):
    ms = random_multisample(rng, L=2, K=4)
    res = mfa_galt(ms)
    C = res.basis.metric.values
    for l in range(2):
        W = cross_product_matrix(res, l)
        for s in range(res.basis.n_axes):
            u = res.basis.axes[:, s]
            assert res.group_coords[l, s] == pytest.approx(np.trace(W @ C @ np.outer(u, u) @ C), abs=1e-12)
    np.testing.assert_allclose(group_coordinates(res), res.group_coords)


def test_lg_zero_on_direction_the_set_ignores(rng):
    # two words centered under their weights leave a rank-one cross-product in three dimensions
    small = make_pair(random_counts(rng, 12, 2), rng.normal(size=(12, 3)), "s")
    res = mfa_galt(MultiSample([small, random_pair(rng, 20, 6, 3, "b")]))
    W0 = cross_product_matrix(res, 0)
    w, V = np.linalg.eigh(res.basis.metric.sqrt @ W0 @ res.basis.metric.sqrt)
    assert w[0] == pytest.approx(0, abs=1e-12)
    u = res.basis.metric.inverse_sqrt @ V[:, 0]
    assert u @ res.basis.metric.values @ u == pytest.approx(1, abs=1e-10)
    assert lg_coefficient(res, 0, u) == pytest.approx(0, abs=1e-12)


def test_lg_sum_over_sets_is_eigenvalue(rng):
    res = mfa_galt(random_multisample(rng, L=3))
    np.testing.assert_allclose(res.group_coords.sum(axis=0), res.eigenvalues, rtol=1e-10)


def test_rv_formula(rng):
    res = mfa_galt(random_multisample(rng, L=3))
    C = res.basis.metric.values
    W = [cross_product_matrix(res, l) for l in range(3)]

    def tr(a, b):
        return np.trace(W[a] @ C @ W[b] @ C)

    for a in range(3):
        assert res.rv[a, a] == 1.0
        for b in range(3):
            assert res.rv[a, b] == pytest.approx(tr(a, b) / np.sqrt(tr(a, a) * tr(b, b)), abs=1e-12)
            assert abs(res.rv[a, b]) <= 1 + 1e-12
    np.testing.assert_array_equal(res.rv, res.rv.T)
    np.testing.assert_allclose(rv_matrix(res), res.rv)


def test_word_weight_scale_absorbed(rng):
    # multiplying a set's word weights by a constant is undone by the division by its first eigenvalue
    ms = random_multisample(rng, L=2)
    res = mfa_galt(ms)
    Z, m = res.table.values, res.weights.word_weights.copy()
    C = res.basis.metric
    sl = res.word_slices[0]
    m[sl] *= 7.3
    blocks = []
    for s in res.word_slices:
        lam = generalized_pca(StandardizedTable(Z[s], m[s], C), 1).eigenvalues[0]
        blocks.append(m[s] / lam)
    m_lambda = np.concatenate(blocks)
    np.testing.assert_allclose(m_lambda, res.table.row_weights, rtol=1e-9)
    b = generalized_pca(StandardizedTable(Z, m_lambda, C)).nonnull()
    np.testing.assert_allclose(b.eigenvalues, res.eigenvalues, rtol=1e-9)


def test_contributions_and_cos2(rng):
    res = mfa_galt(random_multisample(rng, L=2))
    np.testing.assert_allclose(res.contributions.sum(axis=0), 100, atol=1e-8)
    assert np.all(res.cos2.sum(axis=1) <= 1 + 1e-10)
    assert res.eigenvalues.sum() == pytest.approx(res.inertia_total, rel=1e-10)


def test_category_centroids(rng):
    Y = np.array([[2, 0, 0], [0, 3, 0], [1, 1, 2], [0, 0, 1]])
    lex, ctx = make_pair(Y, rng.normal(size=(4, 2)), "a")
    other = random_pair(rng, 10, 4, 2, "b")
    res = mfa_galt(MultiSample([(lex, ctx), other]))
    F = res.word_coords[res.word_slices[0]]
    cats, coords, occ = project_supplementary_categories(res, 0, lex, ["x", "y", "x", "z"])
    assert cats == ["x", "y", "z"]
    np.testing.assert_array_equal(occ, [6, 3, 1])
    np.testing.assert_allclose(coords[0], (3 * F[0] + 1 * F[1] + 2 * F[2]) / 6)
    # a category using a single word sits on that word
    np.testing.assert_allclose(coords[1], F[1])
    # one category covering everyone: the weighted centroid of the sample's word cloud
    _, all_, _ = project_supplementary_categories(res, 0, lex, ["all"] * 4)
    m = lex.col_sums() / lex.grand_total
    np.testing.assert_allclose(all_[0], m @ F, atol=1e-14)
    with pytest.raises(EmptyCategory):
        project_supplementary_categories(res, 0, lex, ["x"] * 4, categories=["x", "never"])


def test_centroid_of_opposite_words():
    from mfagalt.mfa_galt import category_centroids

    lex = lexical_table_from_counts([[2, 2]])
    _, coords, _ = category_centroids(np.array([[1.0], [-1.0]]), lex, ["c"])
    assert coords[0, 0] == 0.0


def test_multisample_validation(rng):
    a = random_pair(rng, 8, 4, 2)
    b = random_pair(rng, 8, 4, 3)
    with pytest.raises(ValueError):
        MultiSample([a])
    with pytest.raises(Exception):
        MultiSample([a, b])
    raw = ContextualTable(a[1].respondent_ids, a[1].columns, a[1].values, centered=False)
    with pytest.raises(ValueError):
        MultiSample([a, (a[0], raw)])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_invariants_property(seed):
    rng = np.random.default_rng(seed)
    ms = random_multisample(rng)
    res = mfa_galt(ms)
    lam = res.eigenvalues
    F, G = res.word_coords, res.variable_coords
    m = res.table.row_weights
    np.testing.assert_allclose(F.T @ (m[:, None] * F), np.diag(lam), atol=1e-10 * max(1, lam[0]))
    np.testing.assert_allclose(G, res.basis.axes * np.sqrt(lam), atol=1e-10 * max(1, np.abs(G).max()))
    np.testing.assert_allclose(res.partial_coords.sum(axis=0), G, atol=1e-10 * max(1, np.abs(G).max()))
    assert 1 - 1e-8 <= lam[0] <= ms.L + 1e-8
