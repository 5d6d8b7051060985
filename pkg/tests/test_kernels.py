"""Compiled and numpy kernels must agree; each is also checked on its own."""

import numpy as np
import pytest

from curvsel import _backend, _fallback
from curvsel.curvature import Triple, circumradius_oracle


def test_backend_selected():
    assert _backend.BACKEND in ("cython", "python")


def test_triples_against_oracle(backend):
    rng = np.random.default_rng(0)
    P = rng.uniform(-10, 10, size=(3, 500, 2))
    curv, deg = backend.triple_curvatures(P[0, :, 0], P[0, :, 1], P[1, :, 0], P[1, :, 1], P[2, :, 0], P[2, :, 1])
    assert not deg.any()
    for i in range(0, 500, 25):
        R = circumradius_oracle(Triple.of(P[0, i], P[1, i], P[2, i]))
        assert curv[i] == pytest.approx(1.0 / R, rel=1e-9)


def test_plane_and_mean(backend):
    rng = np.random.default_rng(1)
    x, y = rng.uniform(size=50), rng.integers(0, 3, size=50) / 2
    pc = backend.plane_curvatures(x, y)
    assert pc.shape == (48,)
    assert backend.mean_plane_curvature(x, y) == pytest.approx(pc.mean(), rel=1e-12)


def test_degenerate_points(backend):
    curv, deg = backend.triple_curvatures([0, 0], [0, 0], [0, 1], [0, 1], [1, 2], [1, 2])
    np.testing.assert_array_equal(curv, [0.0, 0.0])
    np.testing.assert_array_equal(deg, [True, False])


def brute_force_split(X, y, n_classes):
    """Try every threshold between distinct sorted values; smallest weighted Gini wins."""
    best = (-1, 0.0, np.inf)
    for f in range(X.shape[1]):
        vals = np.unique(X[:, f])
        for a, b in zip(vals[:-1], vals[1:]):
            t = a + (b - a) / 2.0
            left = y[X[:, f] <= t]
            right = y[X[:, f] > t]
            g = 0.0
            for part in (left, right):
                p = np.bincount(part, minlength=n_classes) / part.size
                g += part.size * (1.0 - (p * p).sum())
            if g < best[2] - 1e-9:
                best = (f, t, g)
    return best


def test_split_matches_brute_force(backend):
    rng = np.random.default_rng(2)
    for _ in range(30):
        X = rng.integers(0, 6, size=(25, 3)).astype(float)
        y = rng.integers(0, 3, size=25)
        order = np.argsort(X, axis=0, kind="stable")
        f, t, s = backend.best_gini_split(X, y, 3, order)
        bf, bt, bg = brute_force_split(X, y, 3)
        # sum(c^2)/n per side equals n - weighted gini
        assert 25 - s == pytest.approx(bg, abs=1e-9)
        assert (f, t) == (bf, bt)


def test_split_none_when_constant(backend):
    X = np.ones((5, 2))
    f, _, _ = backend.best_gini_split(X, np.array([0, 1, 0, 1, 0]), 2, np.argsort(X, axis=0, kind="stable"))
    assert f == -1


def test_backends_agree():
    kernels = pytest.importorskip("curvsel._kernels")
    rng = np.random.default_rng(4)
    x, y = rng.uniform(size=300), rng.integers(0, 4, size=300) / 3
    np.testing.assert_array_equal(kernels.plane_curvatures(x, y), _fallback.plane_curvatures(x, y))
    assert kernels.mean_plane_curvature(x, y) == pytest.approx(_fallback.mean_plane_curvature(x, y), rel=1e-13)
    X = rng.normal(size=(200, 6))
    yy = rng.integers(0, 3, size=200)
    order = np.argsort(X, axis=0, kind="stable")
    assert kernels.best_gini_split(X, yy, 3, order) == _fallback.best_gini_split(X, yy, 3, order)


def test_env_switch_forces_fallback():
    import os
    import subprocess
    import sys

    env = dict(os.environ, CURVSEL_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from curvsel import _backend; print(_backend.BACKEND)"],
        capture_output=True, text=True, env=env, check=True,
    ).stdout.strip()
    assert out == "python"
