"""Pure-Python reference engine for the hierarchical reachability structure.

This is the readable twin of the compiled core in ``_core.pyx``: identical
math, dictionary-based storage, and the orthogonal-range structures from
:mod:`gridfrechet.orthorange` used literally.  It is the implementation of
record for the per-block summaries; the compiled engine is checked against
it field by field.

Notation: ``p ~> q`` (a *reach traversal*) is a monotone step sequence
whose strictly interior positions are free; endpoints may be blocked.
Length-1 and length-2 traversals have no interior, so every position
reaches itself and each of its up-to-3 forward neighbours unconditionally.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field

import numpy as np

from ..frechet import FreeSpaceMatrix
from ..orthorange import DecrementalReporter, RangeMinMaxIndex
from .blocks import Block, GridPosition, build_block_tree, position_keys

INF = math.inf


@dataclass
class BlockInfo:
    """Succinct per-block reachability summary.

    ``fwd_interval[p] = (A, Z)`` brackets (by ind) the outputs reachable
    from ``p`` for every input and terminal of the block; ``fwd_level[q]``
    is the minimum anti-diagonal label among positions reaching output
    ``q``.  The ``rev_*`` maps mirror this for reversed traversals, and
    ``mid_index`` stores, for each free splitting-boundary position ``j``,
    the value ``rev_level_hi(j)`` under the key ``(ind(j), level_lo(j))``.
    An empty interval is encoded ``(inf, -inf)``.
    """

    block: Block
    fwd_interval: dict = field(default_factory=dict)
    fwd_level: dict = field(default_factory=dict)
    rev_interval: dict = field(default_factory=dict)
    rev_level: dict = field(default_factory=dict)
    mid_free: list = field(default_factory=list)
    mid_index: RangeMinMaxIndex | None = None

    def equals(self, other: "BlockInfo") -> bool:
        return (
            self.block == other.block
            and self.fwd_interval == other.fwd_interval
            and self.fwd_level == other.fwd_level
            and self.rev_interval == other.rev_interval
            and self.rev_level == other.rev_level
            and self.mid_free == other.mid_free
        )


def _leaf_reaches(p, q) -> bool:
    # Inside a 2x2 block every componentwise-monotone pair is joined by a
    # traversal without interior positions (single step, or the direct
    # diagonal step for the opposite-corner pair), so freeness is moot.
    return p[0] <= q[0] and p[1] <= q[1]


def base_block_info(block: Block, m: FreeSpaceMatrix, terminals=()) -> BlockInfo:
    """Summary of a 2x2 leaf, by enumeration over its four cells."""
    if not block.is_leaf:
        raise ValueError("base_block_info expects a 2x2 leaf block")
    n = m.n_rows
    cells = [
        GridPosition(x, y)
        for x in range(block.i0, block.i1 + 1)
        for y in range(block.j0, block.j1 + 1)
    ]
    inputs = block.inputs()
    outputs = block.outputs()
    info = BlockInfo(block)
    for p in set(inputs) | set(terminals):
        inds = [position_keys(q, n)[0] for q in outputs if _leaf_reaches(p, q)]
        info.fwd_interval[p] = (min(inds), max(inds)) if inds else (INF, -INF)
    for q in outputs:
        info.fwd_level[q] = min(position_keys(p, n)[1] for p in cells if _leaf_reaches(p, q))
    for q in set(outputs) | set(terminals):
        inds = [position_keys(p, n)[0] for p in inputs if _leaf_reaches(p, q)]
        info.rev_interval[q] = (min(inds), max(inds)) if inds else (INF, -INF)
    for p in inputs:
        info.rev_level[p] = min(position_keys(q, n)[2] for q in cells if _leaf_reaches(p, q))
    return info


def merge_block_info(
    block: Block,
    lo_info: BlockInfo,
    hi_info: BlockInfo,
    m: FreeSpaceMatrix,
    terminals=(),
) -> BlockInfo:
    """Combine the children's summaries into the parent's.

    ``lo_info`` must belong to the child containing the parent's inputs,
    ``hi_info`` to the one containing its outputs; crossings are resolved
    through the free positions of the shared splitting boundary.
    """
    n = m.n_rows
    lo_blk, hi_blk = lo_info.block, hi_info.block
    if lo_blk.level != block.level + 1 or hi_blk.level != block.level + 1:
        raise ValueError("children level mismatch")
    expected_mid = set(block.mid_positions())
    if expected_mid != (set(lo_blk.outputs()) & set(hi_blk.inputs())):
        raise ValueError("children do not share this block's splitting boundary")

    info = BlockInfo(block)
    info.mid_free = [j for j in block.mid_positions() if m.bit(*j)]
    jm = info.mid_free

    def ind(p):
        return position_keys(p, n)[0]

    def lab(p):
        return position_keys(p, n)[1]

    def lab_rev(p):
        return position_keys(p, n)[2]

    # helper structures over the free splitting boundary
    ell_lo = {j: lo_info.fwd_level[j] for j in jm}
    ellrev_hi = {j: hi_info.rev_level[j] for j in jm}
    or_top = RangeMinMaxIndex(
        [((ind(q), lo_info.fwd_level[q]), ind(q)) for q in block.outputs() if block.in_lo(q)]
    )
    or_a = RangeMinMaxIndex(
        [((ind(j), ell_lo[j]), hi_info.fwd_interval[j][0]) for j in jm
         if hi_info.fwd_interval[j][0] != INF]
    )
    or_z = RangeMinMaxIndex(
        [((ind(j), ell_lo[j]), hi_info.fwd_interval[j][1]) for j in jm
         if hi_info.fwd_interval[j][1] != -INF]
    )

    for p in list(block.inputs()) + sorted(set(terminals)):
        if p in info.fwd_interval:
            continue
        if block.in_hi(p):
            info.fwd_interval[p] = hi_info.fwd_interval[p]
            continue
        a, z = lo_info.fwd_interval[p]
        if a == INF:
            info.fwd_interval[p] = (INF, -INF)
            continue
        box = ((a, z), (-INF, lab(p)))
        best_a = min(or_top.min(box), or_a.min(box))
        best_z = max(or_top.max(box), or_z.max(box))
        info.fwd_interval[p] = (best_a, best_z) if best_a != INF else (INF, -INF)

    or_ell = RangeMinMaxIndex([((ind(j), ellrev_hi[j]), ell_lo[j]) for j in jm])
    for q in block.outputs():
        if block.in_lo(q):
            info.fwd_level[q] = lo_info.fwd_level[q]
        else:
            a, z = hi_info.rev_interval[q]
            ell2 = or_ell.min(((a, z), (-INF, lab_rev(q)))) if a != INF else INF
            info.fwd_level[q] = min(hi_info.fwd_level[q], ell2)

    # mirrored pass for reverse traversals
    or_revtop = RangeMinMaxIndex(
        [((ind(p), hi_info.rev_level[p]), ind(p)) for p in block.inputs() if block.in_hi(p)]
    )
    or_reva = RangeMinMaxIndex(
        [((ind(j), ellrev_hi[j]), lo_info.rev_interval[j][0]) for j in jm
         if lo_info.rev_interval[j][0] != INF]
    )
    or_revz = RangeMinMaxIndex(
        [((ind(j), ellrev_hi[j]), lo_info.rev_interval[j][1]) for j in jm
         if lo_info.rev_interval[j][1] != -INF]
    )

    for q in list(block.outputs()) + sorted(set(terminals)):
        if q in info.rev_interval:
            continue
        if block.in_lo(q):
            info.rev_interval[q] = lo_info.rev_interval[q]
            continue
        a, z = hi_info.rev_interval[q]
        if a == INF:
            info.rev_interval[q] = (INF, -INF)
            continue
        box = ((a, z), (-INF, lab_rev(q)))
        best_a = min(or_revtop.min(box), or_reva.min(box))
        best_z = max(or_revtop.max(box), or_revz.max(box))
        info.rev_interval[q] = (best_a, best_z) if best_a != INF else (INF, -INF)

    info.mid_index = RangeMinMaxIndex([((ind(j), ell_lo[j]), ellrev_hi[j]) for j in jm])
    for p in block.inputs():
        if block.in_hi(p):
            info.rev_level[p] = hi_info.rev_level[p]
        else:
            a, z = lo_info.fwd_interval[p]
            ell2 = info.mid_index.min(((a, z), (-INF, lab(p)))) if a != INF else INF
            info.rev_level[p] = min(lo_info.rev_level[p], ell2)

    return info


class ReferenceEngine:
    """Grid reachability structure over a padded matrix and a terminal set."""

    def __init__(self, bits: np.ndarray, terminals):
        bits = np.ascontiguousarray(bits, dtype=np.uint8)
        n = bits.shape[0]
        kappa = (n - 1).bit_length() - 1
        if bits.shape != (n, n) or n < 3 or n != 2**kappa + 1:
            raise ValueError("engine needs a padded square matrix, side 2**kappa + 1")
        self.n = n
        self.matrix = FreeSpaceMatrix(bits)
        self.blocks = build_block_tree(n)
        self.terminals = frozenset(GridPosition(*t) for t in terminals)
        self.terminals |= {GridPosition(1, 1), GridPosition(n, n)}
        self.info: list[BlockInfo | None] = [None] * len(self.blocks)
        self.block_terminals: list[set] = [set() for _ in self.blocks]
        self._assign_terminals()
        for b in range(len(self.blocks) - 1, -1, -1):
            self._fill(b)
        self.last_dirty_count = 0
        self.last_dirty_by_level: dict[int, int] = {}

    # -- construction ---------------------------------------------------

    def _assign_terminals(self):
        for bt in self.block_terminals:
            bt.clear()
        for t in self.terminals:
            stack = [0]
            while stack:
                b = stack.pop()
                self.block_terminals[b].add(t)
                blk = self.blocks[b]
                if blk.is_leaf:
                    continue
                for c in (2 * b + 1, 2 * b + 2):
                    if self.blocks[c].contains(t):
                        stack.append(c)

    def _fill(self, b: int):
        blk = self.blocks[b]
        if blk.is_leaf:
            self.info[b] = base_block_info(blk, self.matrix, self.block_terminals[b])
        else:
            self.info[b] = merge_block_info(
                blk,
                self.info[2 * b + 1],
                self.info[2 * b + 2],
                self.matrix,
                self.block_terminals[b],
            )

    # -- update ---------------------------------------------------------

    def update(self, delta, new_terminals):
        """Switch to the matrix with ``delta`` applied and the new terminal set.

        Only blocks meeting ``delta``, the old terminals or the new ones are
        recomputed; every other block keeps its BlockInfo object untouched.
        """
        delta = [(GridPosition(*p), int(b)) for p, b in delta]
        new_t = frozenset(GridPosition(*t) for t in new_terminals)
        new_t |= {GridPosition(1, 1), GridPosition(self.n, self.n)}
        dirty_pos = {p for p, _ in delta} | self.terminals | new_t
        dirty = set()
        for p in dirty_pos:
            stack = [0]
            while stack:
                b = stack.pop()
                dirty.add(b)
                blk = self.blocks[b]
                if blk.is_leaf:
                    continue
                for c in (2 * b + 1, 2 * b + 2):
                    if self.blocks[c].contains(p):
                        stack.append(c)
        bits = self.matrix.bits.copy()
        for (x, y), v in delta:
            bits[x - 1, y - 1] = v
        self.matrix = FreeSpaceMatrix(bits)
        self.terminals = new_t
        self._assign_terminals()
        self.last_dirty_count = len(dirty)
        self.last_dirty_by_level = {}
        for b in dirty:
            lv = self.blocks[b].level
            self.last_dirty_by_level[lv] = self.last_dirty_by_level.get(lv, 0) + 1
        for b in sorted(dirty, reverse=True):
            self._fill(b)

    # -- queries ----------------------------------------------------------

    def _free_or_in(self, p, fset) -> bool:
        return bool(self.matrix.bit(*p)) or p in fset

    def reach_query(self, free_terminals) -> bool:
        f = {GridPosition(*t) for t in free_terminals}
        if not f <= self.terminals:
            raise ValueError("free terminals must be a subset of the terminal set")
        start = GridPosition(1, 1)
        goal = GridPosition(self.n, self.n)
        if not (self._free_or_in(start, f) and self._free_or_in(goal, f)):
            return False
        return goal in self.reach(0, {start}, f | {start, goal})

    def reach(self, b: int, starts, free) -> set:
        """Terminals of ``free`` reachable from ``starts`` by hopping chains
        of reach traversals inside block ``b``."""
        s = {GridPosition(*p) for p in starts}
        f = {GridPosition(*p) for p in free}
        if not s <= f or not f <= self.block_terminals[b]:
            raise ValueError("reach requires starts <= free <= block terminals")
        return self._reach(b, s, f)

    def _reach(self, b: int, s: set, f: set) -> set:
        if not f:
            return set()
        blk = self.blocks[b]
        if blk.is_leaf:
            return {t for t in f if any(_leaf_reaches(p, t) for p in s)}
        lo, hi = 2 * b + 1, 2 * b + 2
        lo_blk = self.blocks[lo]
        mid = set(blk.mid_positions())
        s1 = {p for p in s if lo_blk.contains(p)}
        r1 = self._reach(lo, s1, {p for p in f if lo_blk.contains(p)})
        t2 = self._ssr(b, r1 - mid, {p for p in f if not lo_blk.contains(p)})
        seed = {p for p in s if self.blocks[hi].contains(p)} | t2 | (r1 & mid)
        r2 = self._reach(hi, seed, {p for p in f if self.blocks[hi].contains(p)})
        return r1 | r2

    def single_step_reach(self, b: int, starts, targets) -> set:
        blk = self.blocks[b]
        if blk.is_leaf:
            raise ValueError("single_step_reach needs an internal block")
        s = {GridPosition(*p) for p in starts}
        f = {GridPosition(*p) for p in targets}
        mid = set(blk.mid_positions())
        tb = self.block_terminals[b]
        lo_blk = self.blocks[2 * b + 1]
        hi_blk = self.blocks[2 * b + 2]
        if not (s <= tb and f <= tb):
            raise ValueError("starts and targets must be block terminals")
        if any(p in mid or not lo_blk.contains(p) for p in s):
            raise ValueError("starts must lie in the lo child off the splitting boundary")
        if any(p in mid or not hi_blk.contains(p) for p in f):
            raise ValueError("targets must lie in the hi child off the splitting boundary")
        return self._ssr(b, s, f)

    def _ssr(self, b: int, s: set, f: set) -> set:
        """Direct one-traversal reachability from ``s`` across the splitting
        boundary into ``f`` (Alg. 5 shape: reach-equivalent intervals, one
        range-max for the best start label, one mid-index min, one
        dominance report per interval)."""
        info = self.info[b]
        jm_ind = [position_keys(j, self.n)[0] for j in info.mid_free]
        if not s or not f or not jm_ind:
            return set()
        lo_info = self.info[2 * b + 1]
        hi_info = self.info[2 * b + 2]
        s_entries = []
        for p in s:
            a, z = lo_info.fwd_interval[p]
            if a != INF:
                s_entries.append((a, z, position_keys(p, self.n)[1]))
        f_list = sorted(f)
        f_entries = []
        for i, t in enumerate(f_list):
            a, z = hi_info.rev_interval[t]
            if a != INF:
                f_entries.append((a, z, position_keys(t, self.n)[2], i))
        if not s_entries or not f_entries:
            return set()
        cuts = sorted(
            {v for a, z, _ in s_entries for v in (a, z)}
            | {v for a, z, _, _ in f_entries for v in (a, z)}
        )
        starts = {0, len(jm_ind)}
        for v in cuts:
            starts.add(bisect_left(jm_ind, v))
            starts.add(bisect_right(jm_ind, v))
        bounds = sorted(starts)
        or_s = RangeMinMaxIndex([((a, z), lab) for a, z, lab in s_entries])
        or_f = DecrementalReporter([((a, z, lr), i) for a, z, lr, i in f_entries])
        out = set()
        for lo_i, hi_i in zip(bounds, bounds[1:]):
            if lo_i >= hi_i:
                continue
            a, bb = jm_ind[lo_i], jm_ind[hi_i - 1]
            lj_max = or_s.max(((-INF, a), (bb, INF)))
            if lj_max == -INF:
                continue
            ell_j = info.mid_index.min(((a, bb), (-INF, lj_max)))
            if ell_j == INF:
                continue
            for i in or_f.report_and_delete(((-INF, a), (bb, INF), (ell_j, INF))):
                out.add(f_list[i])
        return out

    # -- introspection ----------------------------------------------------

    def block_info(self, b: int) -> BlockInfo:
        return self.info[b]

    def block_terminal_set(self, b: int) -> set:
        return set(self.block_terminals[b])
