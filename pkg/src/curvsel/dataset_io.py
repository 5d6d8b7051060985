"""Loading, attribute-deletion cleaning and summaries for UCI-style tables."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from curvsel.errors import ConfigError, DataError, InsufficientDataError, ParseError

MIN_INSTANCES = 3


@dataclass(frozen=True)
class RawTable:
    """Verbatim cells of a delimited file, before any cleaning."""

    rows: tuple[tuple[str, ...], ...]
    column_names: tuple[str, ...]
    label_index: int
    missing_marker: str = "?"
    source: str = "<memory>"

    def __post_init__(self):
        width = len(self.column_names)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise ParseError(
                    f"{self.source}: row {i + 1} has {len(row)} cells, expected {width}"
                )
        if not 0 <= self.label_index < width:
            raise ConfigError(f"label index {self.label_index} out of range for {width} columns")

    @property
    def label_name(self) -> str:
        return self.column_names[self.label_index]

    def is_missing(self, cell: str) -> bool:
        return cell.strip() == self.missing_marker


@dataclass(frozen=True, eq=False)
class Dataset:
    """Cleaned numeric table: ``m x n'`` features plus contiguous class ids.

    Arrays are made read-only on construction so a Dataset can be shared
    between threads without copying.
    """

    features: np.ndarray
    labels: np.ndarray
    feature_names: tuple[str, ...]
    class_names: tuple[str, ...]
    label_name: str = "class"
    dropped_columns: tuple[str, ...] = ()
    provenance: str = ""

    def __post_init__(self):
        X = np.array(self.features, dtype=np.float64, copy=True)
        y = np.array(self.labels, dtype=np.int64, copy=True)
        if X.ndim != 2:
            raise DataError(f"features must be 2-D, got shape {X.shape}")
        m, n = X.shape
        if n < 1:
            raise DataError("dataset has no feature columns")
        if m < MIN_INSTANCES:
            raise InsufficientDataError(
                f"dataset has {m} instances; at least {MIN_INSTANCES} are required"
            )
        if y.shape != (m,):
            raise DataError(f"labels shape {y.shape} does not match {m} instances")
        if not np.all(np.isfinite(X)):
            raise DataError("features contain non-finite values")
        if len(self.feature_names) != n:
            raise DataError(f"{len(self.feature_names)} feature names for {n} columns")
        n_classes = len(self.class_names)
        if y.min() < 0 or y.max() >= n_classes:
            raise DataError(f"labels must lie in [0, {n_classes})")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "class_names", tuple(self.class_names))
        object.__setattr__(self, "dropped_columns", tuple(self.dropped_columns))

    @property
    def n_instances(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def __eq__(self, other):
        # provenance is descriptive only and deliberately ignored
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.feature_names == other.feature_names
            and self.class_names == other.class_names
            and self.label_name == other.label_name
            and np.array_equal(self.features, other.features)
            and np.array_equal(self.labels, other.labels)
        )

    __hash__ = None

    def with_features(self, features, feature_names, note: str) -> "Dataset":
        """Copy with a new feature block; labels and class names are kept."""
        return Dataset(
            features=features,
            labels=self.labels,
            feature_names=tuple(feature_names),
            class_names=self.class_names,
            label_name=self.label_name,
            dropped_columns=self.dropped_columns,
            provenance=f"{self.provenance}; {note}" if self.provenance else note,
        )


@dataclass(frozen=True)
class DatasetSummary:
    n_instances: int
    n_features: int
    n_classes: int
    class_counts: tuple[int, ...]
    n_dropped_columns: int
    class_names: tuple[str, ...] = ()
    dropped_columns: tuple[str, ...] = ()

    @property
    def class_percentages(self) -> tuple[float, ...]:
        return tuple(100.0 * c / self.n_instances for c in self.class_counts)

    def to_dict(self) -> dict:
        return {
            "n_instances": self.n_instances,
            "n_features": self.n_features,
            "n_classes": self.n_classes,
            "class_names": list(self.class_names),
            "class_counts": list(self.class_counts),
            "class_percentages": [round(p, 6) for p in self.class_percentages],
            "n_dropped_columns": self.n_dropped_columns,
            "dropped_columns": list(self.dropped_columns),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _resolve_label(label_column, column_names: Sequence[str]) -> int:
    n = len(column_names)
    if isinstance(label_column, str):
        if label_column in column_names:
            return list(column_names).index(label_column)
        try:
            label_column = int(label_column)
        except ValueError:
            raise ConfigError(
                f"label column {label_column!r} not found; columns are {list(column_names)}"
            ) from None
    idx = int(label_column)
    if idx < 0:
        idx += n
    if not 0 <= idx < n:
        raise ConfigError(f"label column index {label_column} out of range for {n} columns")
    return idx


def parse_table(
    text: str,
    *,
    missing_marker: str = "?",
    label_column: str | int = -1,
    delimiter: str = ",",
    header: bool = True,
    source: str = "<memory>",
) -> RawTable:
    """Parse delimited text into a :class:`RawTable`.

    Blank lines are skipped. Without a header, columns are named
    ``col0``, ``col1``, ...
    """
    reader = csv.reader(io.StringIO(text), delimiter=delimiter)
    records = [tuple(r) for r in reader if r and any(c.strip() for c in r)]
    if not records:
        raise ParseError(f"{source}: file is empty")
    if header:
        names = tuple(c.strip() for c in records[0])
        body = records[1:]
    else:
        names = tuple(f"col{i}" for i in range(len(records[0])))
        body = records
    if not body:
        raise ParseError(f"{source}: no data rows")
    width = len(names)
    for i, row in enumerate(body):
        if len(row) != width:
            line = i + 2 if header else i + 1
            raise ParseError(f"{source}: row at line {line} has {len(row)} cells, expected {width}")
    return RawTable(
        rows=tuple(body),
        column_names=names,
        label_index=_resolve_label(label_column, names),
        missing_marker=missing_marker,
        source=source,
    )


def load_csv(
    path: str | os.PathLike,
    missing_marker: str = "?",
    label_column: str | int = -1,
    *,
    delimiter: str = ",",
    header: bool = True,
) -> RawTable:
    """Read a delimited file verbatim. ``label_column`` is a name or an index."""
    try:
        with open(path, newline="", encoding="utf-8-sig") as fh:
            text = fh.read()
    except FileNotFoundError:
        raise ParseError(f"{path}: no such file") from None
    return parse_table(
        text,
        missing_marker=missing_marker,
        label_column=label_column,
        delimiter=delimiter,
        header=header,
        source=os.fspath(path),
    )


def _parse_number(cell: str, row: int, column: str) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise DataError(f"row {row + 1}, column {column!r}: cannot parse {cell!r} as a number") from None
    if not math.isfinite(value):
        raise DataError(f"row {row + 1}, column {column!r}: non-finite value {cell!r}")
    return value


def clean_by_attribute_deletion(raw: RawTable) -> Dataset:
    """Drop every feature column holding a missing marker; parse the rest.

    Rows are never removed. Class labels are mapped to ids in order of first
    appearance.
    """
    li = raw.label_index
    label_cells = [row[li].strip() for row in raw.rows]
    for i, cell in enumerate(label_cells):
        if cell == raw.missing_marker or cell == "":
            raise DataError(f"row {i + 1}: missing class label in column {raw.label_name!r}")

    feature_cols = [j for j in range(len(raw.column_names)) if j != li]
    kept, dropped = [], []
    for j in feature_cols:
        if any(raw.is_missing(row[j]) for row in raw.rows):
            dropped.append(j)
        else:
            kept.append(j)
    if not kept:
        raise DataError(f"{raw.source}: every feature column contains missing values")

    X = np.empty((len(raw.rows), len(kept)), dtype=np.float64)
    for i, row in enumerate(raw.rows):
        for c, j in enumerate(kept):
            X[i, c] = _parse_number(row[j].strip(), i, raw.column_names[j])

    class_ids: dict[str, int] = {}
    y = np.array([class_ids.setdefault(c, len(class_ids)) for c in label_cells], dtype=np.int64)

    dropped_names = tuple(raw.column_names[j] for j in dropped)
    note = f"source={raw.source}; attribute deletion dropped {len(dropped)} column(s)"
    if dropped_names:
        note += ": " + ", ".join(dropped_names)
    return Dataset(
        features=X,
        labels=y,
        feature_names=tuple(raw.column_names[j] for j in kept),
        class_names=tuple(class_ids),
        label_name=raw.label_name,
        dropped_columns=dropped_names,
        provenance=note,
    )


def load_dataset(path, label_column="-1", missing_marker="?", *, delimiter=",", header=True) -> Dataset:
    """Shorthand for :func:`load_csv` followed by :func:`clean_by_attribute_deletion`."""
    raw = load_csv(path, missing_marker, label_column, delimiter=delimiter, header=header)
    return clean_by_attribute_deletion(raw)


def summarize(ds: Dataset) -> DatasetSummary:
    counts = np.bincount(ds.labels, minlength=ds.n_classes)
    return DatasetSummary(
        n_instances=ds.n_instances,
        n_features=ds.n_features,
        n_classes=ds.n_classes,
        class_counts=tuple(int(c) for c in counts),
        n_dropped_columns=len(ds.dropped_columns),
        class_names=ds.class_names,
        dropped_columns=ds.dropped_columns,
    )


def to_csv(ds: Dataset) -> str:
    """Canonical CSV: header row, features via ``repr`` (exact round-trip), label last."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([*ds.feature_names, ds.label_name])
    for row, label in zip(ds.features.tolist(), ds.labels.tolist()):
        writer.writerow([repr(v) for v in row] + [ds.class_names[label]])
    return buf.getvalue()


def write_csv(ds: Dataset, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(to_csv(ds))
