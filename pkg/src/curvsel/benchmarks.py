"""The four clinical benchmark tables and where to find them locally.

Files are never downloaded implicitly. ``scripts/fetch_datasets.py`` writes
them into a data directory as plain CSV with a header row; point
``CURVSEL_DATA_DIR`` at that directory (default: ``./data``).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from curvsel.dataset_io import Dataset, load_dataset


@dataclass(frozen=True)
class BenchmarkInfo:
    key: str
    title: str
    filename: str
    label_column: str
    n_instances: int
    n_attributes: int  # before cleaning, label excluded
    n_classes: int
    k_features: int
    url: str


BENCHMARKS = {
    "ccrfds": BenchmarkInfo(
        "ccrfds", "Cervical Cancer (Risk Factors)", "ccrfds.csv", "Biopsy",
        858, 35, 2, 7,
        "https://archive.ics.uci.edu/ml/machine-learning-databases/00383/risk_factors_cervical_cancer.csv",
    ),
    "bccds": BenchmarkInfo(
        "bccds", "Breast Cancer Coimbra", "bccds.csv", "Classification",
        116, 9, 2, 7,
        "https://archive.ics.uci.edu/ml/machine-learning-databases/00451/dataR2.csv",
    ),
    "btds": BenchmarkInfo(
        "btds", "Breast Tissue", "btds.csv", "Class",
        106, 9, 6, 7,
        "https://archive.ics.uci.edu/ml/machine-learning-databases/00192/BreastTissue.xls",
    ),
    "drdds": BenchmarkInfo(
        "drdds", "Diabetic Retinopathy Debrecen", "drdds.csv", "Class",
        1151, 19, 2, 15,
        "https://archive.ics.uci.edu/ml/machine-learning-databases/00329/messidor_features.arff",
    ),
}


def data_dir() -> Path:
    return Path(os.environ.get("CURVSEL_DATA_DIR", "data"))


def benchmark_path(key: str) -> Path:
    return data_dir() / BENCHMARKS[key].filename


def available(key: str) -> bool:
    return benchmark_path(key).is_file()


def load_benchmark(key: str) -> Dataset:
    info = BENCHMARKS[key]
    return load_dataset(benchmark_path(key), label_column=info.label_column)


def arff_to_csv(text: str) -> str:
    """Convert a dense numeric ARFF file to header-first CSV."""
    names, rows, in_data = [], [], False
    for line in text.splitlines():
        s = line.strip()
        if not s or s.startswith("%"):
            continue
        low = s.lower()
        if low.startswith("@attribute"):
            name = s.split(None, 2)[1]
            names.append(name.strip("'\""))
        elif low.startswith("@data"):
            in_data = True
        elif in_data:
            rows.append(",".join(c.strip() for c in s.split(",")))
    return ",".join(names) + "\n" + "\n".join(rows) + "\n"


def records_to_csv(header, rows, drop=()) -> str:
    """Header-first CSV from records, dropping named id columns."""
    keep = [i for i, h in enumerate(header) if str(h).strip() not in drop]
    out = [",".join(str(header[i]).strip() for i in keep)]
    for r in rows:
        out.append(",".join(str(r[i]).strip() for i in keep))
    return "\n".join(out) + "\n"
