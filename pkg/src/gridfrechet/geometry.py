"""Planar points, curves, translations and the shared comparison tolerance.

All distance thresholds in this package ("is p within delta of q?") go
through :func:`within_delta`, which compares *squared* distances against
``delta**2 + tol``.  Using one global absolute tolerance on squared
distances keeps the solver and every brute-force oracle bit-consistent on
boundary cases (points exactly on a disk boundary are the common case at
arrangement vertices, and closed disks are intended).
"""

from __future__ import annotations

import math
import os
from typing import Iterable, NamedTuple

import numpy as np

#: Absolute tolerance on squared distances for every "<= delta" predicate.
DEFAULT_TOL = float(os.environ.get("FRECHET_TOL", "1e-9"))


class Point(NamedTuple):
    x: float
    y: float

    def __add__(self, other):  # type: ignore[override]
        return Point(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return Point(self.x - other[0], self.y - other[1])

    def __neg__(self):
        return Point(-self.x, -self.y)


class Curve:
    """Ordered sequence of at least one planar point.

    Immutable; the underlying ``(n, 2)`` float64 array is write-protected
    and shared freely between threads.
    """

    __slots__ = ("pts",)

    def __init__(self, points: Iterable) -> None:
        pts = np.array(points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 1:
            raise ValueError("a curve is a nonempty sequence of planar points")
        pts.setflags(write=False)
        self.pts = pts

    def __len__(self) -> int:
        return self.pts.shape[0]

    def __getitem__(self, i: int) -> Point:
        return Point(self.pts[i, 0], self.pts[i, 1])

    def __iter__(self):
        return (Point(x, y) for x, y in self.pts)

    def __eq__(self, other) -> bool:
        return isinstance(other, Curve) and np.array_equal(self.pts, other.pts)

    def __hash__(self):
        return hash(self.pts.tobytes())

    def __repr__(self) -> str:
        return f"Curve({self.pts.tolist()!r})"


def euclidean_distance(p, q) -> float:
    """Euclidean distance between two points."""
    return math.hypot(p[0] - q[0], p[1] - q[1])


def squared_distance(p, q) -> float:
    dx = p[0] - q[0]
    dy = p[1] - q[1]
    return dx * dx + dy * dy


def within_delta(p, q, delta: float, tol: float | None = None) -> bool:
    """Closed-disk membership test, tolerance-consistent across the package."""
    if tol is None:
        tol = DEFAULT_TOL
    return squared_distance(p, q) <= delta * delta + tol


def translate_curve(c: Curve, t) -> Curve:
    """The curve with every point shifted by ``t``."""
    return Curve(c.pts + np.asarray(t, dtype=np.float64))


def difference_points(pi: Curve, sigma: Curve) -> set[Point]:
    """The set ``{pi_i - sigma_j}`` with exact-equality duplicates removed.

    Duplicate removal is exact on purpose: duplicates only shrink later
    work, and near-duplicates are harmless.
    """
    diffs = (pi.pts[:, None, :] - sigma.pts[None, :, :]).reshape(-1, 2)
    return {Point(x, y) for x, y in diffs}
