"""Comparison selectors: PCA projection and the IG / MI / chi-square filters.

Continuous features are discretised before scoring. IG and chi-square use
``bin_count`` equal-width bins over ``[min, max]``; MI uses equal-frequency
(rank quantile) bins. IG and MI are the same quantity, so they only differ
through that binning. Entropies are in bits.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from curvsel import cfs
from curvsel.dataset_io import Dataset
from curvsel.errors import ConfigError
from curvsel.normalize import minmax_per_feature

DEFAULT_BINS = 10


class SelTag(str, enum.Enum):
    CFS = "cfs"
    PCA = "pca"
    IG = "ig"
    MI = "mi"
    CST = "cst"


ALL_SELECTORS = tuple(t.value for t in SelTag)

_DEFAULT_POLICY = {SelTag.IG: "width", SelTag.CST: "width", SelTag.MI: "frequency"}


@dataclass(frozen=True)
class SelectorKind:
    tag: SelTag
    bin_count: int = DEFAULT_BINS
    bin_policy: str | None = None  # None: per-tag default
    sort_planes: bool = False

    def __post_init__(self):
        object.__setattr__(self, "tag", SelTag(self.tag))
        if self.bin_count < 2:
            raise ConfigError(f"bin_count must be >= 2, got {self.bin_count}")
        if self.bin_policy not in (None, "width", "frequency"):
            raise ConfigError(f"bin_policy must be 'width' or 'frequency', got {self.bin_policy!r}")

    @classmethod
    def parse(cls, name: str, **kw) -> "SelectorKind":
        try:
            return cls(SelTag(name.strip().lower()), **kw)
        except ValueError:
            raise ConfigError(
                f"unknown selector {name!r}; valid names: {', '.join(ALL_SELECTORS)}"
            ) from None

    @property
    def name(self) -> str:
        return self.tag.value

    @property
    def policy(self) -> str | None:
        return self.bin_policy or _DEFAULT_POLICY.get(self.tag)


# -- discretisation -----------------------------------------------------------


def equal_width_bins(feature, bin_count: int = DEFAULT_BINS) -> np.ndarray:
    """Bin ids in ``[0, bin_count)``; a constant feature falls in bin 0."""
    x = np.asarray(feature, dtype=np.float64)
    lo, hi = x.min(), x.max()
    if hi == lo:
        return np.zeros(x.shape, dtype=np.int64)
    b = np.floor((x - lo) / (hi - lo) * bin_count).astype(np.int64)
    return np.minimum(b, bin_count - 1)


def equal_frequency_bins(feature, bin_count: int = DEFAULT_BINS) -> np.ndarray:
    """Quantile bins from ranks; tied values always share a bin."""
    from scipy.stats import rankdata

    x = np.asarray(feature, dtype=np.float64)
    r = rankdata(x, method="min").astype(np.int64) - 1
    return (r * bin_count) // x.size


def discretize(feature, bin_count: int, policy: str) -> np.ndarray:
    if policy == "width":
        return equal_width_bins(feature, bin_count)
    if policy == "frequency":
        return equal_frequency_bins(feature, bin_count)
    raise ConfigError(f"unknown bin policy {policy!r}")


def contingency(bins, labels, bin_count: int, n_classes: int | None = None) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    n_classes = int(labels.max()) + 1 if n_classes is None else n_classes
    table = np.zeros((bin_count, n_classes), dtype=np.float64)
    np.add.at(table, (np.asarray(bins), labels), 1.0)
    return table


def _entropy(counts) -> float:
    counts = np.asarray(counts, dtype=np.float64)
    n = counts.sum()
    p = counts[counts > 0] / n
    return float(-(p * np.log2(p)).sum())


def information_from_table(table) -> float:
    """``H(Y) - H(Y | B)`` in bits for a bins x classes count table."""
    table = np.asarray(table, dtype=np.float64)
    n = table.sum()
    h_y = _entropy(table.sum(axis=0))
    h_y_given_b = sum(row.sum() / n * _entropy(row) for row in table if row.sum() > 0)
    return max(0.0, h_y - h_y_given_b)


def chi2_from_table(table) -> tuple[float, int]:
    """Pearson statistic and the number of cells with zero expected count."""
    table = np.asarray(table, dtype=np.float64)
    n = table.sum()
    expected = np.outer(table.sum(axis=1), table.sum(axis=0)) / n
    zero = expected == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(zero, 0.0, (table - expected) ** 2 / expected)
    return float(terms.sum()), int(zero.sum())


# -- scores --------------------------------------------------------------------


def score_ig(feature, labels, bin_count: int = DEFAULT_BINS, policy: str = "width") -> float:
    x = np.asarray(feature, dtype=np.float64)
    if x.max() == x.min():
        return 0.0
    table = contingency(discretize(x, bin_count, policy), labels, bin_count)
    return information_from_table(table)


def score_mi(feature, labels, bin_count: int = DEFAULT_BINS, policy: str = "frequency") -> float:
    return score_ig(feature, labels, bin_count, policy)


def score_chi2(feature, labels, bin_count: int = DEFAULT_BINS, policy: str = "width",
               *, diagnostics: bool = False):
    """Chi-square statistic of the feature-bin x class table.

    With ``diagnostics=True`` returns ``(chi2, n_zero_expected_cells)``.
    """
    x = np.asarray(feature, dtype=np.float64)
    if x.max() == x.min():
        return (0.0, 0) if diagnostics else 0.0
    table = contingency(discretize(x, bin_count, policy), labels, bin_count)
    stat, n_zero = chi2_from_table(table)
    return (stat, n_zero) if diagnostics else stat


_SCORERS = {SelTag.IG: score_ig, SelTag.MI: score_mi, SelTag.CST: score_chi2}


# -- PCA ------------------------------------------------------------------------


@dataclass(frozen=True)
class PcaModel:
    column_means: np.ndarray
    components: np.ndarray  # rows are principal axes
    eigenvalues: np.ndarray

    @property
    def n_features(self) -> int:
        return self.column_means.shape[0]


def pca_fit(features) -> PcaModel:
    """Eigendecomposition of the sample covariance, axes by decreasing eigenvalue.

    Each axis is signed so that its largest-magnitude entry is positive.
    """
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise ConfigError("pca_fit needs a 2-D matrix with at least 2 rows")
    if not np.all(np.isfinite(X)):
        raise ConfigError("pca_fit input has non-finite entries")
    mean = X.mean(axis=0)
    Xc = X - mean
    cov = Xc.T @ Xc / (X.shape[0] - 1)
    vals, vecs = np.linalg.eigh(cov)
    order = np.argsort(-vals, kind="stable")
    vals = np.clip(vals[order], 0.0, None)
    comps = vecs[:, order].T.copy()
    for row in comps:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0
    return PcaModel(mean, comps, vals)


def pca_transform(model: PcaModel, features, n_components: int) -> np.ndarray:
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise ConfigError(f"expected {model.n_features} columns, got shape {X.shape}")
    if not 1 <= n_components <= model.n_features:
        raise ConfigError(f"n_components must lie in [1, {model.n_features}], got {n_components}")
    return (X - model.column_means) @ model.components[:n_components].T


def pca_inverse(model: PcaModel, projected) -> np.ndarray:
    Z = np.asarray(projected, dtype=np.float64)
    return Z @ model.components[: Z.shape[1]] + model.column_means


# -- selection ------------------------------------------------------------------


def filter_scores(kind: SelectorKind, features, labels) -> np.ndarray:
    """Per-feature scores for a filter selector, on Min-Max scaled data."""
    if kind.tag is SelTag.CFS:
        return cfs.curvature_weights(features, labels, sort_planes=kind.sort_planes)
    if kind.tag is SelTag.PCA:
        raise ConfigError("PCA is a projection and has no per-feature scores")
    Xn = minmax_per_feature(features)
    scorer = _SCORERS[kind.tag]
    labels = np.asarray(labels, dtype=np.int64)
    return np.array([scorer(Xn[:, i], labels, kind.bin_count, kind.policy) for i in range(Xn.shape[1])])


def rank_with(kind: SelectorKind, ds: Dataset) -> cfs.RankedFeatures:
    scores = filter_scores(kind, ds.features, ds.labels)
    return cfs.rank_from_weights(scores, ds.feature_names, method=kind.name)


def select_with(kind: SelectorKind, ds: Dataset, k: int):
    """Reduce ``ds`` to ``k`` dimensions.

    Filter kinds (and CFS) return a :class:`Dataset` of the top ``k`` raw
    columns; PCA returns the ``m x k`` projection of the Min-Max scaled data.
    """
    if kind.tag is SelTag.PCA:
        Xn = minmax_per_feature(ds.features)
        return pca_transform(pca_fit(Xn), Xn, k)
    if kind.tag is SelTag.CFS:
        return cfs.select_top_k(ds, cfs.rank_features(ds, sort_planes=kind.sort_planes), k)
    return cfs.select_top_k(ds, rank_with(kind, ds), k)
