"""Menger curvature of planar point triples.

The curvature of three points is the reciprocal of the radius of the circle
through them, ``2 sin(phi) / |q1 q3|`` with ``phi`` the angle at ``q2``.
It is evaluated here as ``4 * area / (d12 * d23 * d13)`` with the area from a
cross product, which stays accurate when ``phi`` is close to 0 or pi.

Note on the corner angle: the law of cosines reads

    cos(phi) = (d12**2 + d23**2 - d13**2) / (2 * d12 * d23)

A variant that squares both distances in the denominator circulates in the
literature; it is dimensionally inconsistent and leaves [-1, 1] for small
triangles. :func:`corner_cosine` uses the form above.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from curvsel._backend import kernels


class Point2(NamedTuple):
    x: float
    y: float


class Triple(NamedTuple):
    q1: Point2
    q2: Point2
    q3: Point2

    @classmethod
    def of(cls, q1, q2, q3) -> "Triple":
        return cls(Point2(*map(float, q1)), Point2(*map(float, q2)), Point2(*map(float, q3)))


class CollinearError(ValueError):
    """The circumradius of a collinear triple is infinite."""


def _check_finite(t: Triple):
    for q in t:
        if not (math.isfinite(q.x) and math.isfinite(q.y)):
            raise ValueError(f"non-finite coordinate in {t}")


def menger_curvature(t: Triple, *, return_flag: bool = False):
    """Curvature of the triple ``t``; collinear triples give exactly 0.

    With ``return_flag=True`` a ``(curvature, degenerate)`` pair is returned,
    where ``degenerate`` marks triples with coincident points (their
    curvature is reported as 0).
    """
    t = Triple.of(*t)
    _check_finite(t)
    (x1, y1), (x2, y2), (x3, y3) = t
    curv, degenerate = kernels.triple_curvatures([x1], [y1], [x2], [y2], [x3], [y3])
    value = float(curv[0])
    if return_flag:
        return value, bool(degenerate[0])
    return value


def menger_curvature_many(points1, points2, points3) -> np.ndarray:
    """Vectorised curvature for arrays of shape ``(n, 2)``."""
    p1, p2, p3 = (np.asarray(p, dtype=np.float64) for p in (points1, points2, points3))
    curv, _ = kernels.triple_curvatures(p1[:, 0], p1[:, 1], p2[:, 0], p2[:, 1], p3[:, 0], p3[:, 1])
    return curv


def corner_cosine(t: Triple) -> float:
    """Cosine of the angle at ``q2`` from the law of cosines."""
    t = Triple.of(*t)
    d12 = math.dist(t.q1, t.q2)
    d23 = math.dist(t.q2, t.q3)
    d13 = math.dist(t.q1, t.q3)
    if d12 == 0.0 or d23 == 0.0:
        raise ValueError("corner angle undefined for coincident points")
    return (d12 * d12 + d23 * d23 - d13 * d13) / (2.0 * d12 * d23)


def curvature_from_angle(t: Triple) -> float:
    """``2 sin(phi) / d13`` via :func:`corner_cosine`; a cross-check path."""
    t = Triple.of(*t)
    d13 = math.dist(t.q1, t.q3)
    if d13 == 0.0:
        return 0.0
    c = min(1.0, max(-1.0, corner_cosine(t)))
    return 2.0 * math.sqrt(1.0 - c * c) / d13


def circumradius_oracle(t: Triple) -> float:
    """Radius of the circle through three points, ``abc / (4 * area)``.

    The area uses Kahan's stable form of Heron's formula, so no cross
    product is shared with :func:`menger_curvature`.
    """
    t = Triple.of(*t)
    a, b, c = sorted(
        (math.dist(t.q1, t.q2), math.dist(t.q2, t.q3), math.dist(t.q1, t.q3)), reverse=True
    )
    prod = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))
    if prod <= 0.0 or c == 0.0:
        raise CollinearError(f"collinear or coincident points {t}")
    area = 0.25 * math.sqrt(prod)
    if area <= 1e-12 * a * a:
        raise CollinearError(f"numerically collinear points {t}")
    return a * b * c / (4.0 * area)
