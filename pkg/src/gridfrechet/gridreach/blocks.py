"""Canonical block decomposition of the padded grid and position identifiers.

The n x n grid (n = 2**kappa + 1) is split alternately along columns and
rows, children overlapping in one shared line, down to 2 x 2 leaves.
Positions are 1-based pairs (x, y) with x indexing the first curve and
y the second; ``ind`` linearises them so that every block boundary is
ind-sorted (outputs counter-clockwise, inputs clockwise).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from ..frechet import FreeSpaceMatrix


class GridPosition(NamedTuple):
    x: int
    y: int


def pad_matrix(m: FreeSpaceMatrix) -> FreeSpaceMatrix:
    """Pad a square matrix to side 2**kappa + 1 >= max(n, 3).

    Outside the original square the filler is 1 exactly on the diagonal,
    which preserves existence of a corner-to-corner monotone 1-path.
    """
    n = m.n_rows
    if m.n_cols != n:
        raise ValueError("pad_matrix expects a square matrix")
    np_side = 3
    while np_side < max(n, 3):
        np_side = 2 * (np_side - 1) + 1
    if np_side == n:
        return m
    bits = np.zeros((np_side, np_side), dtype=np.uint8)
    bits[:n, :n] = m.bits
    for i in range(n, np_side):
        bits[i, i] = 1
    return FreeSpaceMatrix(bits)


def position_keys(p, n: int) -> tuple[int, int, int]:
    """Return (ind, L, L_rev) for position p in an n x n grid.

    ind(p) = (y - x) * 2n + x is injective and orders every canonical
    block boundary; L = x + y is the anti-diagonal label, L_rev = -L.
    """
    x, y = p
    return (y - x) * 2 * n + x, x + y, -x - y


def invert_ind(ind: int, n: int) -> GridPosition:
    x = ind % (2 * n)
    return GridPosition(x, (ind - x) // (2 * n) + x)


@dataclass(frozen=True)
class Block:
    """Canonical block: rows [i0, i1] x columns [j0, j1], heap index ``idx``."""

    level: int
    i0: int
    i1: int
    j0: int
    j1: int
    idx: int

    @property
    def is_leaf(self) -> bool:
        return self.i1 - self.i0 == 1 and self.j1 - self.j0 == 1

    @property
    def splits_columns(self) -> bool:
        # even levels split the column interval J, odd levels split rows
        return self.level % 2 == 0

    def contains(self, p) -> bool:
        return self.i0 <= p[0] <= self.i1 and self.j0 <= p[1] <= self.j1

    def inputs(self) -> list[GridPosition]:
        """Lower-left boundary B^-, sorted by ind (clockwise)."""
        out = [GridPosition(x, self.j0) for x in range(self.i1, self.i0 - 1, -1)]
        out += [GridPosition(self.i0, y) for y in range(self.j0 + 1, self.j1 + 1)]
        return out

    def outputs(self) -> list[GridPosition]:
        """Upper-right boundary B^+, sorted by ind (counter-clockwise)."""
        out = [GridPosition(self.i1, y) for y in range(self.j0, self.j1 + 1)]
        out += [GridPosition(x, self.j1) for x in range(self.i1 - 1, self.i0 - 1, -1)]
        return out

    @property
    def split_line(self) -> int:
        if self.splits_columns:
            return (self.j0 + self.j1) // 2
        return (self.i0 + self.i1) // 2

    def mid_positions(self) -> list[GridPosition]:
        """The splitting boundary B^mid = lo^+  intersect  hi^-, ind-sorted."""
        if self.is_leaf:
            return []
        if self.splits_columns:
            ym = self.split_line
            return [GridPosition(x, ym) for x in range(self.i1, self.i0 - 1, -1)]
        xm = self.split_line
        return [GridPosition(xm, y) for y in range(self.j0, self.j1 + 1)]

    def in_hi(self, p) -> bool:
        if self.splits_columns:
            return p[1] >= self.split_line
        return p[0] >= self.split_line

    def in_lo(self, p) -> bool:
        if self.splits_columns:
            return p[1] <= self.split_line
        return p[0] <= self.split_line

    def input_rank(self, p) -> int:
        x, y = p
        if y == self.j0:
            return self.i1 - x
        return (self.i1 - self.i0) + (y - self.j0)

    def output_rank(self, p) -> int:
        x, y = p
        if x == self.i1:
            return y - self.j0
        return (self.j1 - self.j0) + (self.i1 - x)


@lru_cache(maxsize=32)
def build_block_tree(n: int) -> tuple[Block, ...]:
    """All canonical blocks of the n x n grid in heap order (root first).

    Block ``b`` has children ``2b + 1`` (lo: contains the lower/left part)
    and ``2b + 2`` (hi); siblings share the one-line splitting boundary.
    """
    kappa = (n - 1).bit_length() - 1
    if n < 3 or n != 2**kappa + 1:
        raise ValueError("block tree needs n = 2**kappa + 1, n >= 3")
    nblocks = 2 ** (2 * kappa + 1) - 1
    blocks: list[Block | None] = [None] * nblocks
    blocks[0] = Block(0, 1, n, 1, n, 0)
    for b in range(nblocks):
        blk = blocks[b]
        assert blk is not None
        if blk.is_leaf:
            continue
        if blk.splits_columns:
            ym = blk.split_line
            blocks[2 * b + 1] = Block(blk.level + 1, blk.i0, blk.i1, blk.j0, ym, 2 * b + 1)
            blocks[2 * b + 2] = Block(blk.level + 1, blk.i0, blk.i1, ym, blk.j1, 2 * b + 2)
        else:
            xm = blk.split_line
            blocks[2 * b + 1] = Block(blk.level + 1, blk.i0, xm, blk.j0, blk.j1, 2 * b + 1)
            blocks[2 * b + 2] = Block(blk.level + 1, xm, blk.i1, blk.j0, blk.j1, 2 * b + 2)
    return tuple(blocks)  # type: ignore[arg-type]
