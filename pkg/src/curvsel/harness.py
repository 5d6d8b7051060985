"""Cross-validated selector x normalizer x classifier accuracy grids.

With ``selection_scope="global"`` every selector is fitted once on the full
dataset before cross-validation; this follows the usual select-then-classify
pipeline but lets label information reach the test folds through the
selector. ``"per_fold"`` refits the selector on each training split. The
scope is recorded in every report.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from curvsel import classifiers as clf
from curvsel.baselines import SelectorKind, SelTag, filter_scores, pca_fit, pca_transform
from curvsel.cfs import RankedFeatures, rank_from_weights
from curvsel.dataset_io import Dataset
from curvsel.errors import ConfigError
from curvsel.normalize import NormalizerKind, fit_normalizer, minmax_apply, minmax_fit

SCOPES = ("global", "per_fold")

CellKey = tuple[str, str, str]  # (selector, normalizer, classifier)


@dataclass(frozen=True)
class GridSpec:
    dataset_id: str
    selectors: tuple[SelectorKind, ...]
    k_features: int
    normalizers: tuple[NormalizerKind, ...]
    classifiers: tuple[clf.ClassifierKind, ...]
    n_folds: int = 10
    seed: int = 0
    selection_scope: str = "global"

    def __post_init__(self):
        for name in ("selectors", "normalizers", "classifiers"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
            if not getattr(self, name):
                raise ConfigError(f"grid needs at least one entry in {name}")
        if self.n_folds < 2:
            raise ConfigError(f"n_folds must be >= 2, got {self.n_folds}")
        if self.k_features < 1:
            raise ConfigError(f"k_features must be >= 1, got {self.k_features}")
        if self.selection_scope not in SCOPES:
            raise ConfigError(f"selection_scope must be one of {SCOPES}")

    @property
    def n_cells(self) -> int:
        return len(self.selectors) * len(self.normalizers) * len(self.classifiers)

    def metadata(self) -> dict:
        return {
            "dataset": self.dataset_id,
            "k_features": self.k_features,
            "n_folds": self.n_folds,
            "seed": self.seed,
            "selection_scope": self.selection_scope,
            "selectors": [s.name for s in self.selectors],
            "normalizers": [n.name for n in self.normalizers],
            "classifiers": [c.name for c in self.classifiers],
            "pn_alpha": self.normalizers[0].pn_alpha,
            "bin_count": self.selectors[0].bin_count,
        }


@dataclass
class CellResult:
    fold_accuracies: tuple[float, ...] = ()
    class_recall: tuple[float, ...] = ()
    wall_time: float = 0.0
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def mean_accuracy(self) -> float:
        if not self.fold_accuracies:
            return math.nan
        return float(np.mean(self.fold_accuracies))


@dataclass
class CVReport:
    cells: dict[CellKey, CellResult]
    metadata: dict = field(default_factory=dict)
    ranking_reports: dict[str, RankedFeatures] = field(default_factory=dict)
    class_names: tuple[str, ...] = ()


# -- folds -------------------------------------------------------------------


def make_folds(ds_or_labels, n_folds: int = 10, seed: int = 0) -> list[tuple[np.ndarray, np.ndarray]]:
    """Stratified, seeded folds partitioning ``range(m)``.

    Each class is shuffled and dealt round-robin across folds, continuing
    from the fold where the previous class stopped so fold sizes stay
    within one of each other.
    """
    labels = ds_or_labels.labels if isinstance(ds_or_labels, Dataset) else np.asarray(ds_or_labels)
    m = labels.shape[0]
    if not 2 <= n_folds <= m:
        raise ConfigError(f"n_folds must lie in [2, {m}], got {n_folds}")
    rng = np.random.default_rng(seed)
    fold_of = np.empty(m, dtype=np.int64)
    start = 0
    for c in np.unique(labels):
        idx = np.flatnonzero(labels == c)
        if idx.size < n_folds:
            warnings.warn(
                f"class {c} has {idx.size} instances, fewer than {n_folds} folds",
                stacklevel=2,
            )
        idx = rng.permutation(idx)
        fold_of[idx] = (start + np.arange(idx.size)) % n_folds
        start = (start + idx.size) % n_folds
    folds = []
    for f in range(n_folds):
        test = np.flatnonzero(fold_of == f)
        train = np.flatnonzero(fold_of != f)
        folds.append((train, test))
    return folds


# -- grid ----------------------------------------------------------------------


def _reduce(kind: SelectorKind, k: int, X_fit, y_fit):
    """Fit a selector; returns a function mapping raw rows to k columns."""
    if kind.tag is SelTag.PCA:
        lo, hi = minmax_fit(X_fit)
        model = pca_fit(minmax_apply(X_fit, lo, hi))
        return lambda X: pca_transform(model, minmax_apply(X, lo, hi), k), None
    scores = filter_scores(kind, X_fit, y_fit)
    cols = np.array(rank_from_weights(scores).top(k))
    return lambda X: X[:, cols], scores


def _accuracy(y_true, y_pred) -> float:
    return float(np.mean(y_true == y_pred))


def _run_cell(prepared, normalizer, classifier, n_classes, labels) -> CellResult:
    t0 = time.perf_counter()
    accs = []
    hits = np.zeros(n_classes)
    support = np.zeros(n_classes)
    try:
        for Xtr, Xte, tr, te in prepared:
            norm = fit_normalizer(normalizer, Xtr)
            model = clf.fit(classifier, norm.transform(Xtr), labels[tr], n_classes)
            pred = clf.predict(model, norm.transform(Xte))
            accs.append(_accuracy(labels[te], pred))
            for c in range(n_classes):
                mask = labels[te] == c
                support[c] += mask.sum()
                hits[c] += (pred[mask] == c).sum()
    except Exception as exc:  # recorded in the report; the grid continues
        return CellResult(error=f"{type(exc).__name__}: {exc}", wall_time=time.perf_counter() - t0)
    with np.errstate(invalid="ignore", divide="ignore"):
        recall = tuple(float(h / s) if s else math.nan for h, s in zip(hits, support))
    return CellResult(tuple(accs), recall, time.perf_counter() - t0)


def run_grid(spec: GridSpec, ds: Dataset, n_jobs: int = 1) -> CVReport:
    """Evaluate every (selector, normalizer, classifier) cell with k-fold CV.

    Normalizer statistics are fitted on the training split only. Cells are
    independent; with ``n_jobs > 1`` they run on a thread pool and are
    collected in grid order.
    """
    if spec.k_features > ds.n_features:
        raise ConfigError(f"k_features={spec.k_features} exceeds {ds.n_features} features")
    X, y = ds.features, ds.labels
    folds = make_folds(ds, spec.n_folds, spec.seed)

    prepared: dict[str, list | Exception] = {}
    rankings = {}
    for sel in spec.selectors:
        try:
            if spec.selection_scope == "global":
                reduce, scores = _reduce(sel, spec.k_features, X, y)
                if scores is not None:
                    rankings[sel.name] = rank_from_weights(scores, ds.feature_names, method=sel.name)
                prepared[sel.name] = [(reduce(X[tr]), reduce(X[te]), tr, te) for tr, te in folds]
            else:
                rows = []
                for tr, te in folds:
                    reduce, _ = _reduce(sel, spec.k_features, X[tr], y[tr])
                    rows.append((reduce(X[tr]), reduce(X[te]), tr, te))
                prepared[sel.name] = rows
        except Exception as exc:
            prepared[sel.name] = exc

    keys = [
        (s, n, c)
        for s in spec.selectors
        for n in spec.normalizers
        for c in spec.classifiers
    ]

    def work(key):
        s, n, c = key
        prep = prepared[s.name]
        if isinstance(prep, Exception):
            return CellResult(error=f"selector failed: {type(prep).__name__}: {prep}")
        return _run_cell(prep, n, c, ds.n_classes, y)

    if n_jobs == 1:
        results = [work(k) for k in keys]
    else:
        with ThreadPoolExecutor(max_workers=n_jobs if n_jobs > 0 else None) as pool:
            results = list(pool.map(work, keys))

    cells = {(s.name, n.name, c.name): r for (s, n, c), r in zip(keys, results)}
    return CVReport(cells, spec.metadata(), rankings, ds.class_names)


# -- summaries -----------------------------------------------------------------


def summarize_tma(report: CVReport) -> dict[str, tuple[CellKey, float]]:
    """Best cell per selector; ties go to the lexicographically smallest
    (normalizer, classifier) pair."""
    best: dict[str, tuple[CellKey, float]] = {}
    for key in sorted(report.cells):
        cell = report.cells[key]
        if not cell.ok:
            continue
        acc = cell.mean_accuracy
        cur = best.get(key[0])
        if cur is None or acc > cur[1]:
            best[key[0]] = (key, acc)
    return best


def averaged_mean_accuracy(report: CVReport) -> dict[str, float]:
    """Mean of all successful cell accuracies, per selector."""
    acc: dict[str, list[float]] = {}
    for (s, _, _), cell in report.cells.items():
        if cell.ok:
            acc.setdefault(s, []).append(cell.mean_accuracy)
    return {s: float(np.mean(v)) for s, v in acc.items()}


# -- rendering -------------------------------------------------------------------


def _fmt(v: float) -> str:
    return "nan" if math.isnan(v) else f"{v:.10f}"


def report_to_csv(report: CVReport, *, timings: bool = False) -> str:
    """One row per cell. Wall time is left out unless asked for, so reruns
    produce identical bytes."""
    n_folds = report.metadata.get("n_folds") or max(
        (len(c.fold_accuracies) for c in report.cells.values()), default=0
    )
    n_classes = len(report.class_names)
    header = ["selector", "normalizer", "classifier", "mean_accuracy"]
    header += [f"fold_{i + 1}" for i in range(n_folds)]
    header += [f"recall_{name}" for name in report.class_names]
    if timings:
        header.append("wall_time_s")
    header.append("error")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for key, cell in report.cells.items():
        folds = [_fmt(a) for a in cell.fold_accuracies] or [""] * n_folds
        recall = [_fmt(r) for r in cell.class_recall] or [""] * n_classes
        row = [*key, _fmt(cell.mean_accuracy), *folds, *recall]
        if timings:
            row.append(f"{cell.wall_time:.4f}")
        row.append(cell.error or "")
        w.writerow(row)
    return buf.getvalue()


def _num(v):
    return None if isinstance(v, float) and math.isnan(v) else v


def report_to_dict(report: CVReport, *, timings: bool = False) -> dict:
    grid: dict = {}
    for (s, n, c), cell in report.cells.items():
        entry = {
            "mean_accuracy": _num(cell.mean_accuracy),
            "fold_accuracies": list(cell.fold_accuracies),
            "class_recall": [_num(r) for r in cell.class_recall],
            "error": cell.error,
        }
        if timings:
            entry["wall_time_s"] = cell.wall_time
        grid.setdefault(s, {}).setdefault(n, {})[c] = entry
    return {
        "metadata": report.metadata,
        "class_names": list(report.class_names),
        "cells": grid,
        "top_mean_accuracy": {
            s: {"normalizer": k[1], "classifier": k[2], "mean_accuracy": a}
            for s, (k, a) in summarize_tma(report).items()
        },
        "averaged_mean_accuracy": averaged_mean_accuracy(report),
        "rankings": {s: r.rows() for s, r in report.ranking_reports.items()},
    }


def report_to_json(report: CVReport, *, timings: bool = False) -> str:
    return json.dumps(report_to_dict(report, timings=timings), indent=2) + "\n"


def render_matrix(report: CVReport) -> str:
    """Plain-text accuracy matrices (normalizers x classifiers) per selector."""
    sels, norms, clfs = [], [], []
    for s, n, c in report.cells:
        for lst, v in ((sels, s), (norms, n), (clfs, c)):
            if v not in lst:
                lst.append(v)
    tma = summarize_tma(report)
    lines = []
    for s in sels:
        lines.append(f"[{s.upper()}]")
        lines.append("".ljust(6) + "".join(c.upper().rjust(8) for c in clfs))
        for n in norms:
            row = n.upper().ljust(6)
            for c in clfs:
                cell = report.cells.get((s, n, c))
                if cell is None or not cell.ok:
                    row += "ERR".rjust(8)
                    continue
                mark = "*" if s in tma and tma[s][0] == (s, n, c) else " "
                row += f"{100 * cell.mean_accuracy:6.2f}{mark}".rjust(8)
            lines.append(row)
        if s in tma:
            (_, n, c), a = tma[s]
            lines.append(f"TMA {100 * a:.2f}% ({n.upper()}, {c.upper()})")
        lines.append("")
    return "\n".join(lines)
