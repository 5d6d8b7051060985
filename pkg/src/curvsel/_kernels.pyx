# cython: language_level=3
"""Compiled inner loops: per-triple Menger curvature and Gini split search.

Pure-numpy twins live in ``_fallback.py``; keep the arithmetic order of the
two in step.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport hypot, fabs, INFINITY

cnp.import_array()

cdef double COLLINEAR_TOL = 1e-12


cdef inline double _curv(double x1, double y1, double x2, double y2,
                         double x3, double y3, bint *degenerate) noexcept nogil:
    # vectors anchored at the middle point: reversing the triple only
    # swaps them, which keeps |cross| bit-identical
    cdef double ux = x1 - x2, uy = y1 - y2, vx = x3 - x2, vy = y3 - y2
    cdef double d12 = hypot(ux, uy)
    cdef double d23 = hypot(vx, vy)
    cdef double d13 = hypot(x3 - x1, y3 - y1)
    cdef double cross = ux * vy - uy * vx
    cdef double dmax
    if d12 == 0.0 or d23 == 0.0 or d13 == 0.0:
        degenerate[0] = True
        return 0.0
    degenerate[0] = False
    dmax = d12
    if d23 > dmax:
        dmax = d23
    if d13 > dmax:
        dmax = d13
    if fabs(cross) <= COLLINEAR_TOL * (dmax * dmax):
        return 0.0
    return 2.0 * fabs(cross) / (d12 * d23) / d13


def triple_curvatures(x1, y1, x2, y2, x3, y3):
    cdef double[::1] ax1 = np.ascontiguousarray(x1, dtype=np.float64).ravel()
    cdef double[::1] ay1 = np.ascontiguousarray(y1, dtype=np.float64).ravel()
    cdef double[::1] ax2 = np.ascontiguousarray(x2, dtype=np.float64).ravel()
    cdef double[::1] ay2 = np.ascontiguousarray(y2, dtype=np.float64).ravel()
    cdef double[::1] ax3 = np.ascontiguousarray(x3, dtype=np.float64).ravel()
    cdef double[::1] ay3 = np.ascontiguousarray(y3, dtype=np.float64).ravel()
    cdef Py_ssize_t n = ax1.shape[0], i
    out = np.empty(n, dtype=np.float64)
    deg = np.zeros(n, dtype=np.bool_)
    cdef double[::1] o = out
    cdef cnp.npy_bool[::1] d = deg
    cdef bint flag
    with nogil:
        for i in range(n):
            o[i] = _curv(ax1[i], ay1[i], ax2[i], ay2[i], ax3[i], ay3[i], &flag)
            d[i] = flag
    return out, deg


def plane_curvatures(x, y):
    cdef double[::1] xs = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[::1] ys = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t m = xs.shape[0], j
    out = np.empty(max(m - 2, 0), dtype=np.float64)
    cdef double[::1] o = out
    cdef bint flag
    with nogil:
        for j in range(1, m - 1):
            o[j - 1] = _curv(xs[j - 1], ys[j - 1], xs[j], ys[j], xs[j + 1], ys[j + 1], &flag)
    return out


def mean_plane_curvature(x, y):
    cdef double[::1] xs = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[::1] ys = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t m = xs.shape[0], j
    cdef double total = 0.0
    cdef bint flag
    with nogil:
        for j in range(1, m - 1):
            total += _curv(xs[j - 1], ys[j - 1], xs[j], ys[j], xs[j + 1], ys[j + 1], &flag)
    return total / (m - 2)


def best_gini_split(X, y, Py_ssize_t n_classes, order):
    cdef const double[:, :] Xv = np.asarray(X, dtype=np.float64)
    cdef const cnp.int64_t[::1] yv = np.ascontiguousarray(y, dtype=np.int64)
    cdef const cnp.intp_t[:, :] ov = np.asarray(order, dtype=np.intp)
    cdef Py_ssize_t m = Xv.shape[0], k = Xv.shape[1]
    cdef Py_ssize_t f, p, c, r
    cdef int best_f = -1
    cdef double best_t = 0.0, best_s = -INFINITY
    cdef double sq_l, sq_r, nl, nr, s, a, b, t, cl, cr
    if m < 2:
        return best_f, best_t, best_s
    total_arr = np.bincount(np.asarray(yv), minlength=n_classes).astype(np.float64)
    left_arr = np.zeros(n_classes, dtype=np.float64)
    cdef double[::1] total = total_arr
    cdef double[::1] left = left_arr
    with nogil:
        for f in range(k):
            for c in range(n_classes):
                left[c] = 0.0
            for p in range(m - 1):
                r = ov[p, f]
                left[yv[r]] += 1.0
                a = Xv[r, f]
                b = Xv[ov[p + 1, f], f]
                if not (b > a):
                    continue
                sq_l = 0.0
                sq_r = 0.0
                for c in range(n_classes):
                    cl = left[c]
                    cr = total[c] - cl
                    sq_l = sq_l + cl * cl
                    sq_r = sq_r + cr * cr
                nl = <double>(p + 1)
                nr = <double>(m - p - 1)
                s = sq_l / nl + sq_r / nr
                if s > best_s:
                    best_s = s
                    best_f = <int>f
                    t = a + (b - a) / 2.0
                    best_t = t if t < b else a
    return best_f, best_t, best_s
