import numpy as np
import pytest

from curvsel import _fallback
from curvsel.dataset_io import Dataset

try:
    from curvsel import _kernels
except ImportError:  # extension not built
    _kernels = None


def make_ds(X, y, names=None, classes=None, label_name="class"):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    n_classes = int(y.max()) + 1
    return Dataset(
        features=X,
        labels=y,
        feature_names=names or tuple(f"f{i}" for i in range(X.shape[1])),
        class_names=classes or tuple(str(c) for c in range(n_classes)),
        label_name=label_name,
    )


@pytest.fixture
def blobs():
    """Two tight, well separated Gaussian blobs, 50 points each."""
    rng = np.random.default_rng(7)
    a = rng.normal((0.0, 0.0), 0.1, size=(50, 2))
    b = rng.normal((10.0, 10.0), 0.1, size=(50, 2))
    X = np.vstack([a, b])
    y = np.repeat([0, 1], 50)
    return make_ds(X, y)


@pytest.fixture
def random_ds():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(60, 5)) * [1, 10, 0.1, 5, 2] + [0, 3, -1, 40, 7]
    y = (X[:, 0] + 0.3 * rng.normal(size=60) > 0).astype(int)
    y[::7] = 2
    return make_ds(X, y)


BACKENDS = [pytest.param(_fallback, id="python")]
BACKENDS.append(
    pytest.param(_kernels, id="cython")
    if _kernels is not None
    else pytest.param(None, id="cython", marks=pytest.mark.skip(reason="extension not built"))
)


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


# One line per acceptance criterion, echoed after the run so they land in
# captured logs even without -s.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
