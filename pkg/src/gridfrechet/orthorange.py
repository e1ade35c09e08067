"""Orthogonal range tools: static 2-D range min/max and a 3-D decremental reporter.

Both follow the convention ``min {} = +inf`` and ``max {} = -inf``.  Boxes
are products of closed intervals whose ends may be ``+-math.inf``.  The
representations favour clarity; the compiled grid-reachability engine
carries its own tuned equivalents, and the polylog bounds are a benchmark
target rather than a contract here.
"""

from __future__ import annotations

import math
from typing import Iterable, NamedTuple, Sequence

import numpy as np


class KeyedEntry(NamedTuple):
    key: tuple
    value: int


def _as_entries(entries: Iterable) -> list[KeyedEntry]:
    return [e if isinstance(e, KeyedEntry) else KeyedEntry(tuple(e[0]), int(e[1])) for e in entries]


class _Node:
    __slots__ = ("lo", "hi", "k2", "vmin_pre", "vmax_pre", "vmin_suf", "vmax_suf", "vals", "left", "right")

    def __init__(self, lo, hi, k2, vals):
        self.lo = lo
        self.hi = hi
        self.k2 = k2
        self.vals = vals
        self.vmin_pre = np.minimum.accumulate(vals) if len(vals) else vals
        self.vmax_pre = np.maximum.accumulate(vals) if len(vals) else vals
        self.vmin_suf = np.minimum.accumulate(vals[::-1])[::-1] if len(vals) else vals
        self.vmax_suf = np.maximum.accumulate(vals[::-1])[::-1] if len(vals) else vals
        self.left = None
        self.right = None


class RangeMinMaxIndex:
    """Static 2-D orthogonal range minimum/maximum over integer key pairs.

    Merge-sort tree on the first key coordinate; every node keeps its
    entries sorted by the second coordinate with prefix/suffix extrema.
    """

    def __init__(self, entries: Iterable):
        ent = _as_entries(entries)
        for e in ent:
            if len(e.key) != 2:
                raise ValueError("RangeMinMaxIndex stores 2-D keys")
        ent.sort(key=lambda e: e.key[0])
        self._k1 = np.array([e.key[0] for e in ent], dtype=np.int64)
        k2 = np.array([e.key[1] for e in ent], dtype=np.int64)
        vals = np.array([e.value for e in ent], dtype=np.int64)
        self._n = len(ent)
        self._root = self._build(0, self._n, k2, vals) if self._n else None

    def _build(self, lo, hi, k2, vals):
        order = np.argsort(k2[lo:hi], kind="stable")
        node = _Node(lo, hi, k2[lo:hi][order], vals[lo:hi][order])
        if hi - lo > 1:
            mid = (lo + hi) // 2
            node.left = self._build(lo, mid, k2, vals)
            node.right = self._build(mid, hi, k2, vals)
        return node

    def _rank_range(self, l1, u1):
        if l1 == -math.inf:
            lo = 0
        elif l1 == math.inf:
            lo = self._n
        else:
            lo = int(np.searchsorted(self._k1, math.ceil(l1), side="left"))
        if u1 == math.inf:
            hi = self._n
        elif u1 == -math.inf:
            hi = 0
        else:
            hi = int(np.searchsorted(self._k1, math.floor(u1), side="right"))
        return lo, hi

    def _query(self, node, lo, hi, l2, u2, want_min):
        if node is None or hi <= node.lo or node.hi <= lo or node.hi == node.lo:
            return math.inf if want_min else -math.inf
        if lo <= node.lo and node.hi <= hi:
            if l2 == -math.inf:
                a = 0
            elif l2 == math.inf:
                a = len(node.k2)
            else:
                a = int(np.searchsorted(node.k2, math.ceil(l2), side="left"))
            if u2 == math.inf:
                b = len(node.k2)
            elif u2 == -math.inf:
                b = 0
            else:
                b = int(np.searchsorted(node.k2, math.floor(u2), side="right"))
            if a >= b:
                return math.inf if want_min else -math.inf
            if a == 0:
                return int(node.vmin_pre[b - 1]) if want_min else int(node.vmax_pre[b - 1])
            if b == len(node.k2):
                return int(node.vmin_suf[a]) if want_min else int(node.vmax_suf[a])
            sl = node.vals[a:b]
            return int(sl.min()) if want_min else int(sl.max())
        l = self._query(node.left, lo, hi, l2, u2, want_min)
        r = self._query(node.right, lo, hi, l2, u2, want_min)
        return min(l, r) if want_min else max(l, r)

    def min(self, box) -> float:
        (l1, u1), (l2, u2) = box
        lo, hi = self._rank_range(l1, u1)
        return self._query(self._root, lo, hi, l2, u2, True)

    def max(self, box) -> float:
        (l1, u1), (l2, u2) = box
        lo, hi = self._rank_range(l1, u1)
        return self._query(self._root, lo, hi, l2, u2, False)


class DecrementalReporter:
    """3-D orthogonal range reporting with deletion of reported entries.

    A reported-then-deleted entry never reappears.  Plain live-list scan;
    total reported volume over a deletion sequence is bounded by the
    initial size, which is all the callers rely on.
    """

    def __init__(self, entries: Iterable):
        self._entries = _as_entries(entries)
        for e in self._entries:
            if len(e.key) != 3:
                raise ValueError("DecrementalReporter stores 3-D keys")
        self._alive = [True] * len(self._entries)

    def report_and_delete(self, box) -> set[int]:
        out = set()
        for i, e in enumerate(self._entries):
            if not self._alive[i]:
                continue
            inside = True
            for c, (lo, hi) in zip(e.key, box):
                if not (lo <= c <= hi):
                    inside = False
                    break
            if inside:
                out.add(e.value)
                self._alive[i] = False
        return out

    def live_count(self) -> int:
        return sum(self._alive)


def build_minmax(entries: Iterable) -> RangeMinMaxIndex:
    return RangeMinMaxIndex(entries)


def range_min(ix: RangeMinMaxIndex, box) -> float:
    return ix.min(box)


def range_max(ix: RangeMinMaxIndex, box) -> float:
    return ix.max(box)


def report_and_delete(rep: DecrementalReporter, box) -> set[int]:
    return rep.report_and_delete(box)
