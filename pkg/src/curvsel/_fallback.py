"""Numpy implementations of the compiled kernels in ``_kernels.pyx``.

Signatures and floating-point operation order mirror the Cython versions so
both backends agree to rounding.
"""

import numpy as np

COLLINEAR_TOL = 1e-12


def triple_curvatures(x1, y1, x2, y2, x3, y3):
    """Menger curvature of each triple, plus a degenerate (coincident) mask."""
    x1, y1, x2, y2, x3, y3 = (np.asarray(a, dtype=np.float64) for a in (x1, y1, x2, y2, x3, y3))
    ux, uy, vx, vy = x1 - x2, y1 - y2, x3 - x2, y3 - y2
    d12 = np.hypot(ux, uy)
    d23 = np.hypot(vx, vy)
    d13 = np.hypot(x3 - x1, y3 - y1)
    cross = ux * vy - uy * vx
    degenerate = (d12 == 0.0) | (d23 == 0.0) | (d13 == 0.0)
    dmax = np.maximum(np.maximum(d12, d23), d13)
    with np.errstate(divide="ignore", invalid="ignore"):
        collinear = np.abs(cross) <= COLLINEAR_TOL * (dmax * dmax)
        curv = 2.0 * np.abs(cross) / (d12 * d23) / d13
    curv = np.where(degenerate | collinear, 0.0, curv)
    return curv, degenerate


def plane_curvatures(x, y):
    """Curvature at every interior point of the polyline ``(x[j], y[j])``."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    curv, _ = triple_curvatures(x[:-2], y[:-2], x[1:-1], y[1:-1], x[2:], y[2:])
    return curv


def mean_plane_curvature(x, y):
    curv = plane_curvatures(x, y)
    total = 0.0
    for c in curv.tolist():
        total += c
    return total / curv.shape[0]


def best_gini_split(X, y, n_classes, order):
    """Best axis-aligned split of the rows of ``X`` under Gini impurity.

    ``order`` holds, per column, a stable argsort of that column. The score
    maximised is ``sum(cL**2)/nL + sum(cR**2)/nR``; the first maximum in
    (feature, position) order wins.

    Returns ``(feature, threshold, score)``; ``feature == -1`` when no split
    separates distinct values.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    m, k = X.shape
    best_f, best_t, best_s = -1, 0.0, -np.inf
    if m < 2:
        return best_f, best_t, best_s
    onehot = np.zeros((m, n_classes), dtype=np.float64)
    total = np.bincount(y, minlength=n_classes).astype(np.float64)
    n_left = np.arange(1, m, dtype=np.float64)
    n_right = m - n_left
    for f in range(k):
        idx = order[:, f]
        xs = X[idx, f]
        onehot[:] = 0.0
        onehot[np.arange(m), y[idx]] = 1.0
        left = np.cumsum(onehot, axis=0)[:-1]
        right = total - left
        sq_l = np.zeros(m - 1)
        sq_r = np.zeros(m - 1)
        for c in range(n_classes):
            sq_l += left[:, c] * left[:, c]
            sq_r += right[:, c] * right[:, c]
        score = sq_l / n_left + sq_r / n_right
        valid = xs[1:] > xs[:-1]
        if not valid.any():
            continue
        score = np.where(valid, score, -np.inf)
        p = int(np.argmax(score))
        if score[p] > best_s:
            best_s = float(score[p])
            best_f = f
            a, b = xs[p], xs[p + 1]
            t = a + (b - a) / 2.0
            best_t = float(t if t < b else a)
    return best_f, best_t, best_s
