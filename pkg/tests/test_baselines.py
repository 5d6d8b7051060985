import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvsel import cfs
from curvsel.baselines import (
    SelectorKind,
    chi2_from_table,
    equal_frequency_bins,
    equal_width_bins,
    pca_fit,
    pca_inverse,
    pca_transform,
    rank_with,
    score_chi2,
    score_ig,
    score_mi,
    select_with,
)
from curvsel.errors import ConfigError

from conftest import make_ds

# 8-point fixture: two bins split at x = 3.5; table [[3, 1], [1, 3]]
FX = np.arange(8.0)
FY = np.array([0, 0, 0, 1, 0, 1, 1, 1])


def h2(p):
    return -(p * math.log2(p) + (1 - p) * math.log2(1 - p))


def test_ig_hand_fixture():
    # H(Y) = 1, H(Y|B) = 0.5 * H(3/4) + 0.5 * H(1/4)
    expected = 1.0 - h2(0.25)
    assert score_ig(FX, FY, bin_count=2) == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(0.18872187554086717, abs=1e-15)


def test_mi_hand_fixture():
    # quantile bins put ranks 0-3 and 4-7 together: same table as above
    assert score_mi(FX, FY, bin_count=2) == pytest.approx(1.0 - h2(0.25), abs=1e-12)


def test_chi2_hand_fixture():
    # expected count 2 in every cell: 4 * (1 ** 2 / 2)
    assert score_chi2(FX, FY, bin_count=2) == pytest.approx(2.0, abs=1e-12)


def test_perfect_predictor():
    y = np.repeat([0, 1], 50)
    x = y.astype(float)
    assert score_ig(x, y) == pytest.approx(1.0, abs=1e-12)
    assert score_mi(x, y) == pytest.approx(1.0, abs=1e-12)
    assert score_chi2(x, y, bin_count=2) == pytest.approx(100.0, abs=1e-9)


def test_constant_feature_scores_zero():
    y = np.array([0, 1, 0, 1])
    x = np.full(4, 3.0)
    assert score_ig(x, y) == score_mi(x, y) == score_chi2(x, y) == 0.0


def test_independent_feature_small_chi2():
    rng = np.random.default_rng(0)
    x = rng.normal(size=5000)
    y = rng.integers(0, 2, size=5000)
    assert score_chi2(x, y) < 0.01 * x.size


def test_chi2_diagnostics_count_empty_cells():
    # 10 equal-width bins over two clusters leave empty bins
    x = np.array([0.0, 0.1, 9.9, 10.0])
    y = np.array([0, 0, 1, 1])
    stat, n_zero = score_chi2(x, y, diagnostics=True)
    assert n_zero > 0 and stat == pytest.approx(4.0)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=2, max_size=6).flatmap(
    lambda r: st.lists(st.lists(st.integers(0, 20), min_size=len(r), max_size=len(r)), min_size=2, max_size=5)
))
def test_chi2_nonnegative_and_zero_iff_independent(rows):
    table = np.array(rows, dtype=float)
    if table.sum() == 0:
        return
    stat, _ = chi2_from_table(table)
    assert stat >= 0
    expected = np.outer(table.sum(1), table.sum(0)) / table.sum()
    if np.allclose(table, expected):
        assert stat == pytest.approx(0.0, abs=1e-9)
    else:
        assert stat > 0


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31 - 1), st.sampled_from(["width", "frequency"]))
def test_ig_equals_mi_under_identical_binning(seed, policy):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=50)
    y = rng.integers(0, 3, size=50)
    assert score_ig(x, y, 10, policy) == pytest.approx(score_mi(x, y, 10, policy), abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31 - 1), st.floats(0.1, 100), st.floats(-100, 100))
def test_scores_affine_invariant(seed, a, b):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=80)
    y = rng.integers(0, 2, size=80)
    for fn in (score_ig, score_mi, score_chi2):
        assert fn(a * x + b, y) == pytest.approx(fn(x, y), abs=1e-9)


def test_binning_edges():
    np.testing.assert_array_equal(equal_width_bins([0.0, 0.5, 1.0], 2), [0, 1, 1])
    np.testing.assert_array_equal(equal_frequency_bins([5.0, 1.0, 1.0, 3.0], 2), [1, 0, 0, 1])


# -- PCA -----------------------------------------------------------------------


def test_pca_line_data():
    x = np.linspace(-2, 2, 9)
    X = np.column_stack([x, x])
    model = pca_fit(X)
    np.testing.assert_allclose(model.components[0], [1 / math.sqrt(2)] * 2, atol=1e-12)
    assert model.eigenvalues[1] == pytest.approx(0.0, abs=1e-12)
    z = pca_transform(model, X, 1)[:, 0]
    np.testing.assert_allclose(np.abs(z), np.abs(math.sqrt(2) * x), atol=1e-12)


def test_pca_round_trip_and_orthonormal():
    rng = np.random.default_rng(5)
    X = rng.normal(size=(50, 4)) @ rng.normal(size=(4, 4))
    model = pca_fit(X)
    np.testing.assert_allclose(model.components @ model.components.T, np.eye(4), atol=1e-8)
    assert np.all(np.diff(model.eigenvalues) <= 1e-12) and np.all(model.eigenvalues >= 0)
    Z = pca_transform(model, X, 4)
    np.testing.assert_allclose(pca_inverse(model, Z), X, atol=1e-8)
    # full projection is an isometry
    d0 = np.linalg.norm(X[:, None] - X[None], axis=2)
    d1 = np.linalg.norm(Z[:, None] - Z[None], axis=2)
    np.testing.assert_allclose(d0, d1, atol=1e-8)


def test_pca_isotropic_reconstruction():
    rng = np.random.default_rng(9)
    X = rng.normal(size=(4000, 3))
    model = pca_fit(X)
    assert model.eigenvalues.max() / model.eigenvalues.min() < 1.2
    np.testing.assert_allclose(pca_inverse(model, pca_transform(model, X, 3)), X, atol=1e-8)


def test_pca_sign_convention():
    rng = np.random.default_rng(1)
    model = pca_fit(rng.normal(size=(30, 3)))
    for row in model.components:
        assert row[np.argmax(np.abs(row))] > 0


def test_pca_errors():
    model = pca_fit(np.random.default_rng(0).normal(size=(10, 3)))
    with pytest.raises(ConfigError):
        pca_transform(model, np.ones((4, 2)), 1)
    with pytest.raises(ConfigError):
        pca_transform(model, np.ones((4, 3)), 4)


# -- selection -------------------------------------------------------------------


def test_select_cfs_delegates(random_ds):
    direct = cfs.select_top_k(random_ds, cfs.rank_features(random_ds), 3)
    via = select_with(SelectorKind.parse("cfs"), random_ds, 3)
    assert via == direct and via.provenance == direct.provenance


def test_select_filter_full_k_reorders(random_ds):
    out = select_with(SelectorKind.parse("ig"), random_ds, random_ds.n_features)
    assert sorted(out.feature_names) == sorted(random_ds.feature_names)
    ranks = rank_with(SelectorKind.parse("ig"), random_ds)
    assert list(out.feature_names) == [random_ds.feature_names[i] for i in ranks.ids]


def test_select_pca_shape(random_ds):
    Z = select_with(SelectorKind.parse("pca"), random_ds, 3)
    assert Z.shape == (60, 3)


def test_selector_kind_parsing():
    assert SelectorKind.parse("MI").policy == "frequency"
    assert SelectorKind.parse("cst").policy == "width"
    with pytest.raises(ConfigError, match="valid names"):
        SelectorKind.parse("lasso")
    with pytest.raises(ConfigError):
        SelectorKind.parse("ig", bin_count=1)
