"""Baseline discrete Frechet distance.

Free-space matrix, monotone 1-path decision and the exact value via the
classic min-max dynamic program.  These double as the reference semantics
for everything else: the offline solver, the translation decision and all
brute-force oracles reduce to the functions in this module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import DEFAULT_TOL, Curve

try:
    from . import _core
except ImportError:  # pragma: no cover - compiled core optional
    _core = None


@dataclass(frozen=True)
class FreeSpaceMatrix:
    """Bit matrix of free positions; entry (i, j) is 1-based ``bit(i, j)``."""

    bits: np.ndarray

    def __post_init__(self):
        b = np.array(self.bits, dtype=np.uint8, order="C")
        b.setflags(write=False)
        object.__setattr__(self, "bits", b)

    @property
    def n_rows(self) -> int:
        return self.bits.shape[0]

    @property
    def n_cols(self) -> int:
        return self.bits.shape[1]

    def bit(self, x: int, y: int) -> int:
        return int(self.bits[x - 1, y - 1])

    def with_bit(self, x: int, y: int, value: int) -> "FreeSpaceMatrix":
        b = self.bits.copy()
        b[x - 1, y - 1] = value
        return FreeSpaceMatrix(b)


def free_space_matrix(pi: Curve, sigma: Curve, delta: float, tol: float | None = None) -> FreeSpaceMatrix:
    """Matrix with bit (i, j) = 1 iff ``|pi_i - sigma_j| <= delta`` (closed, tolerant)."""
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    if tol is None:
        tol = DEFAULT_TOL
    dx = pi.pts[:, None, 0] - sigma.pts[None, :, 0]
    dy = pi.pts[:, None, 1] - sigma.pts[None, :, 1]
    bits = (dx * dx + dy * dy) <= delta * delta + tol
    return FreeSpaceMatrix(bits.astype(np.uint8))


def monotone_path_exists(m: FreeSpaceMatrix) -> bool:
    """Is there a path (1,1) -> (n_rows, n_cols) by steps (+1,0), (0,+1), (+1,+1)
    visiting only 1-entries, endpoints included?"""
    bits = m.bits
    if _core is not None:
        return bool(_core.monotone_path_exists_bits(bits))
    return _monotone_path_exists_py(bits)


def _monotone_path_exists_py(bits: np.ndarray) -> bool:
    n, mcols = bits.shape
    allowed = bits[0].astype(bool)
    reach = np.logical_and.accumulate(allowed)
    if n == 1:
        return bool(reach[-1])
    idx = np.arange(mcols)
    for i in range(1, n):
        allowed = bits[i].astype(bool)
        seed = allowed & (reach | np.concatenate(([False], reach[:-1])))
        # propagate rightwards inside maximal runs of 1s
        run_start = np.maximum.accumulate(np.where(~allowed, idx, -1)) + 1
        last_seed = np.maximum.accumulate(np.where(seed, idx, -1))
        reach = allowed & (last_seed >= run_start)
        if not reach.any():
            return False
    return bool(reach[-1])


def frechet_value(pi: Curve, sigma: Curve) -> float:
    """Exact discrete Frechet distance via the O(n*m) min-max recurrence."""
    if _core is not None:
        return float(_core.frechet_value_dp(pi.pts, sigma.pts))
    dx = pi.pts[:, None, 0] - sigma.pts[None, :, 0]
    dy = pi.pts[:, None, 1] - sigma.pts[None, :, 1]
    dist = np.sqrt(dx * dx + dy * dy)
    n, m = dist.shape
    d = np.empty_like(dist)
    d[0, 0] = dist[0, 0]
    for j in range(1, m):
        d[0, j] = max(d[0, j - 1], dist[0, j])
    for i in range(1, n):
        d[i, 0] = max(d[i - 1, 0], dist[i, 0])
        row = d[i]
        prev = d[i - 1]
        for j in range(1, m):
            best = prev[j]
            if prev[j - 1] < best:
                best = prev[j - 1]
            if row[j - 1] < best:
                best = row[j - 1]
            row[j] = best if best > dist[i, j] else dist[i, j]
    return float(d[n - 1, m - 1])
