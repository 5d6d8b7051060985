"""Curvature-based filter feature selection.

Features are weighted by the mean Menger curvature of the polyline they
trace against the class label, ranked, and reduced to a Top-K or threshold
subset. Baseline selectors, normalizers, classifiers and a cross-validation
harness for comparing them ship alongside.
"""

__version__ = "0.1.0"

from curvsel._backend import BACKEND
from curvsel.cfs import (
    RankedFeatures,
    decompose_planes,
    mean_curvature_weight,
    rank_features,
    select_by_threshold,
    select_top_k,
)
from curvsel.curvature import Point2, Triple, circumradius_oracle, menger_curvature
from curvsel.dataset_io import Dataset, clean_by_attribute_deletion, load_csv, load_dataset, summarize

__all__ = [
    "BACKEND",
    "Dataset",
    "Point2",
    "RankedFeatures",
    "Triple",
    "circumradius_oracle",
    "clean_by_attribute_deletion",
    "decompose_planes",
    "load_csv",
    "load_dataset",
    "mean_curvature_weight",
    "menger_curvature",
    "rank_features",
    "select_by_threshold",
    "select_top_k",
    "summarize",
]
