"""Curvature-based feature ranking and Top-K / threshold selection.

Each feature is paired with the class label to form a planar polyline
(one point per instance, in row order). The feature's weight is the mean
Menger curvature over the interior points of that polyline, computed after
Min-Max scaling so that weights of different features are comparable.
Larger weights rank higher.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from curvsel._backend import kernels
from curvsel.dataset_io import Dataset
from curvsel.errors import ConfigError, DataError, EmptySelectionError, InsufficientDataError
from curvsel.normalize import minmax_per_feature

TIE_POLICY = "weight descending, ties by ascending feature_id"


class FeatureWeight(NamedTuple):
    feature_id: int
    weight: float


@dataclass(frozen=True)
class RankedFeatures:
    """Features ordered by decreasing weight."""

    ordered: tuple[FeatureWeight, ...]
    feature_names: tuple[str, ...] = ()
    tie_policy: str = TIE_POLICY
    method: str = "cfs"

    @property
    def ids(self) -> list[int]:
        return [fw.feature_id for fw in self.ordered]

    @property
    def weights(self) -> list[float]:
        return [fw.weight for fw in self.ordered]

    def weight_of(self, feature_id: int) -> float:
        for fw in self.ordered:
            if fw.feature_id == feature_id:
                return fw.weight
        raise KeyError(feature_id)

    def top(self, k: int) -> list[int]:
        return self.ids[:k]

    def rows(self) -> list[dict]:
        out = []
        for rank, fw in enumerate(self.ordered, start=1):
            name = self.feature_names[fw.feature_id] if self.feature_names else str(fw.feature_id)
            out.append({"rank": rank, "feature_name": name, "feature_id": fw.feature_id, "weight": fw.weight})
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["rank", "feature_name", "feature_id", "weight"])
        for r in self.rows():
            w.writerow([r["rank"], r["feature_name"], r["feature_id"], repr(r["weight"])])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {"method": self.method, "tie_policy": self.tie_policy, "ranking": self.rows()}
        return json.dumps(doc, indent=2) + "\n"


def rank_from_weights(weights, feature_names=(), method="cfs") -> RankedFeatures:
    """Order ids by weight (descending), breaking ties by ascending id."""
    w = np.asarray(weights, dtype=np.float64)
    order = np.lexsort((np.arange(w.size), -w))
    return RankedFeatures(
        ordered=tuple(FeatureWeight(int(i), float(w[i])) for i in order),
        feature_names=tuple(feature_names),
        method=method,
    )


def label_axis(labels) -> np.ndarray:
    """Class ids mapped onto [0, 1] by Min-Max; a single class maps to 0."""
    y = np.asarray(labels, dtype=np.float64)
    return minmax_per_feature(y[:, None])[:, 0]


def decompose_planes(ds: Dataset) -> list[tuple[int, np.ndarray]]:
    """Split a Min-Max normalized dataset into one ``(m, 2)`` point list per feature."""
    X = ds.features
    if X.shape[0] < 3:
        raise InsufficientDataError("curvature planes need at least 3 instances")
    if X.min() < 0.0 or X.max() > 1.0:
        raise DataError("decompose_planes expects features already scaled to [0, 1]")
    y = label_axis(ds.labels)
    return [(i, np.column_stack((X[:, i], y))) for i in range(X.shape[1])]


def mean_curvature_weight(plane) -> float:
    """Mean curvature over interior points; degenerate triples count as 0."""
    P = np.asarray(plane, dtype=np.float64)
    if P.ndim != 2 or P.shape[1] != 2:
        raise DataError(f"a plane is a sequence of 2-D points, got shape {P.shape}")
    if P.shape[0] < 3:
        raise InsufficientDataError(f"plane has {P.shape[0]} points; at least 3 are required")
    return float(kernels.mean_plane_curvature(P[:, 0], P[:, 1]))


def curvature_weights(features, labels, *, sort_planes: bool = False, n_jobs: int = 1) -> np.ndarray:
    """Per-feature curvature weights of a raw feature matrix.

    Features are Min-Max scaled first. With ``sort_planes`` each plane is
    ordered by feature value (stable) before curvature is taken; the default
    keeps row order.
    """
    X = np.asarray(features, dtype=np.float64)
    if X.shape[0] < 3:
        raise InsufficientDataError(f"{X.shape[0]} instances; at least 3 are required")
    Xn = minmax_per_feature(X)
    y = label_axis(labels)

    def one(i):
        x = Xn[:, i]
        if sort_planes:
            o = np.argsort(x, kind="stable")
            return float(kernels.mean_plane_curvature(x[o], y[o]))
        return float(kernels.mean_plane_curvature(x, y))

    if n_jobs == 1:
        return np.array([one(i) for i in range(X.shape[1])])
    with ThreadPoolExecutor(max_workers=n_jobs if n_jobs > 0 else None) as pool:
        return np.array(list(pool.map(one, range(X.shape[1]))))


def rank_features(ds: Dataset, *, sort_planes: bool = False, n_jobs: int = 1) -> RankedFeatures:
    weights = curvature_weights(ds.features, ds.labels, sort_planes=sort_planes, n_jobs=n_jobs)
    return rank_from_weights(weights, ds.feature_names)


def _subset(ds_raw: Dataset, ids: Sequence[int], note: str) -> Dataset:
    ids = list(ids)
    return ds_raw.with_features(
        ds_raw.features[:, ids], [ds_raw.feature_names[i] for i in ids], note
    )


def select_top_k(ds_raw: Dataset, ranks: RankedFeatures, k: int) -> Dataset:
    """Raw columns of the ``k`` best-ranked features, in rank order."""
    n = ds_raw.n_features
    if len(ranks.ordered) != n:
        raise ConfigError(f"ranking covers {len(ranks.ordered)} features, dataset has {n}")
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= n:
        raise ConfigError(f"k must be an integer in [1, {n}], got {k!r}")
    return _subset(ds_raw, ranks.top(int(k)), f"{ranks.method} top-{k}")


def select_by_threshold(ds_raw: Dataset, ranks: RankedFeatures, threshold: float) -> Dataset:
    """Raw columns whose weight is strictly above ``threshold``."""
    if threshold < 0:
        raise ConfigError(f"threshold must be >= 0, got {threshold}")
    if len(ranks.ordered) != ds_raw.n_features:
        raise ConfigError("ranking does not match the dataset")
    ids = [fw.feature_id for fw in ranks.ordered if fw.weight > threshold]
    if not ids:
        best = ranks.ordered[0].weight if ranks.ordered else float("nan")
        raise EmptySelectionError(
            f"no feature has weight above {threshold} (largest weight is {best:.6g})"
        )
    return _subset(ds_raw, ids, f"{ranks.method} weight > {threshold}")


def rank_stability(ds: Dataset, n_permutations: int = 20, seed: int = 0, **kw) -> list[float]:
    """Kendall tau between the base ranking and rankings of row-shuffled copies.

    Row order changes individual curvatures, so nothing is guaranteed here;
    the numbers are reported, not asserted.
    """
    from scipy.stats import kendalltau

    base = curvature_weights(ds.features, ds.labels, **kw)
    rng = np.random.default_rng(seed)
    taus = []
    for _ in range(n_permutations):
        p = rng.permutation(ds.n_instances)
        w = curvature_weights(ds.features[p], ds.labels[p], **kw)
        tau = kendalltau(base, w).statistic
        taus.append(float(tau) if np.isfinite(tau) else 1.0)
    return taus
