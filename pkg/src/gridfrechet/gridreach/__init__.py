"""Offline dynamic grid reachability: construct / update / query.

Two interchangeable engines implement the same structure: a compiled core
(``gridfrechet._core``, Cython) and the pure-Python reference in
:mod:`gridfrechet.gridreach.reference`.  The compiled engine is selected
by default when present; set ``GRIDFRECHET_BACKEND=pure`` (or pass
``backend="pure"``) to force the fallback.
"""

from __future__ import annotations

import os

import numpy as np

from ..frechet import FreeSpaceMatrix
from .blocks import Block, GridPosition, build_block_tree, invert_ind, pad_matrix, position_keys
from .reference import BlockInfo, ReferenceEngine, base_block_info, merge_block_info

try:
    from .. import _core
except ImportError:  # pragma: no cover - compiled core optional
    _core = None

__all__ = [
    "Block",
    "BlockInfo",
    "GridPosition",
    "ReachDS",
    "available_backends",
    "base_block_info",
    "build_block_tree",
    "construct_ds",
    "invert_ind",
    "merge_block_info",
    "pad_matrix",
    "position_keys",
    "reach_query",
    "update_ds",
]


def available_backends() -> tuple[str, ...]:
    return ("compiled", "pure") if _core is not None else ("pure",)


def default_backend() -> str:
    env = os.environ.get("GRIDFRECHET_BACKEND")
    if env:
        if env not in ("compiled", "pure"):
            raise ValueError(f"unknown backend {env!r}")
        if env == "compiled" and _core is None:
            raise RuntimeError("compiled backend requested but gridfrechet._core is not built")
        return env
    return "compiled" if _core is not None else "pure"


class ReachDS:
    """Reachability structure over a padded free-space matrix and terminals.

    ``(1, 1)`` and ``(n, n)`` are always terminals.  The matrix is expected
    padded (side ``2**kappa + 1``); when driven by the offline solver the
    terminal positions are zeroed in the matrix, but that is the caller's
    contract, not enforced here.
    """

    def __init__(self, matrix: FreeSpaceMatrix, terminals, backend: str | None = None):
        backend = backend or default_backend()
        if backend not in available_backends():
            raise RuntimeError(f"backend {backend!r} not available")
        self.backend = backend
        self.n = matrix.n_rows
        tlist = [GridPosition(*t) for t in terminals]
        for t in tlist:
            if not (1 <= t.x <= self.n and 1 <= t.y <= self.n):
                raise ValueError(f"terminal {t} out of range")
        if backend == "pure":
            self._engine = ReferenceEngine(matrix.bits, tlist)
        else:
            self._engine = _core.GridReachEngine(np.ascontiguousarray(matrix.bits), _pack(tlist, self.n))
        self.terminals = frozenset(tlist) | {GridPosition(1, 1), GridPosition(self.n, self.n)}

    def update(self, delta, new_terminals) -> "ReachDS":
        dl = [(GridPosition(*p), int(b)) for p, b in delta]
        tlist = [GridPosition(*t) for t in new_terminals]
        if self.backend == "pure":
            self._engine.update(dl, tlist)
        else:
            dpos = _pack([p for p, _ in dl], self.n)
            dbit = np.array([b for _, b in dl], dtype=np.uint8)
            self._engine.update(dpos, dbit, _pack(tlist, self.n))
        self.terminals = frozenset(tlist) | {GridPosition(1, 1), GridPosition(self.n, self.n)}
        return self

    def reach_query(self, free_terminals) -> bool:
        f = [GridPosition(*t) for t in free_terminals]
        bad = [t for t in f if t not in self.terminals]
        if bad:
            raise ValueError(f"free terminals not in terminal set: {bad}")
        if self.backend == "pure":
            return self._engine.reach_query(f)
        return bool(self._engine.reach_query(_pack(f, self.n)))

    # exposed for tests and the acceptance suite
    @property
    def last_dirty_count(self) -> int:
        return int(self._engine.last_dirty_count)

    def dirty_by_level(self) -> dict[int, int]:
        if self.backend == "pure":
            return dict(self._engine.last_dirty_by_level)
        return self._engine.dirty_by_level()

    def block_summary(self, b: int) -> dict:
        """Plain-dict view of a block's stored info (both backends)."""
        if self.backend == "pure":
            info = self._engine.block_info(b)
            return {
                "fwd_interval": dict(info.fwd_interval),
                "fwd_level": dict(info.fwd_level),
                "rev_interval": dict(info.rev_interval),
                "rev_level": dict(info.rev_level),
                "mid_free": list(info.mid_free),
            }
        return self._engine.block_summary(b)

    @property
    def engine(self):
        return self._engine

    @property
    def matrix_bits(self) -> np.ndarray:
        if self.backend == "pure":
            return self._engine.matrix.bits
        return self._engine.matrix_bits()


def _pack(positions, n: int) -> np.ndarray:
    return np.array(sorted((p[0] * (n + 1) + p[1]) for p in positions), dtype=np.int64)


def construct_ds(matrix: FreeSpaceMatrix, terminals, backend: str | None = None) -> ReachDS:
    """Build the structure bottom-up over all canonical blocks."""
    return ReachDS(matrix, terminals, backend=backend)


def update_ds(ds: ReachDS, delta, new_terminals) -> ReachDS:
    """Apply a batch of bit flips and swap the terminal set, in place.

    Equivalent to a fresh ``construct_ds`` on the updated matrix; only
    blocks meeting the flipped positions or the old/new terminals are
    recomputed.
    """
    return ds.update(delta, new_terminals)


def reach_query(ds: ReachDS, free_terminals) -> bool:
    """Monotone path (1,1) -> (n,n) using free positions plus ``free_terminals``?"""
    return ds.reach_query(free_terminals)
