# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: monotone-path DP, Frechet value DP, fused
per-translation decision, the arrangement walk differ and the grid
reachability engine.  Mirrors the pure-Python fallbacks bit for bit."""

import numpy as np

cimport numpy as cnp
from libc.stdlib cimport free, malloc
from libc.string cimport memset

cnp.import_array()

cdef long long INF = (<long long> 1) << 62
cdef long long NEG = -((<long long> 1) << 62)


def monotone_path_exists_bits(const unsigned char[:, ::1] bits):
    """Monotone 1-path (1,1) -> (n,m) through 1-entries, endpoints included."""
    cdef Py_ssize_t n = bits.shape[0]
    cdef Py_ssize_t m = bits.shape[1]
    cdef Py_ssize_t i, j
    cdef unsigned char any_row
    cdef unsigned char* prev = <unsigned char*> malloc(m)
    cdef unsigned char* cur = <unsigned char*> malloc(m)
    if prev == NULL or cur == NULL:
        free(prev); free(cur)
        raise MemoryError()
    try:
        prev[0] = bits[0, 0]
        for j in range(1, m):
            prev[j] = bits[0, j] and prev[j - 1]
        for i in range(1, n):
            any_row = 0
            cur[0] = bits[i, 0] and prev[0]
            any_row |= cur[0]
            for j in range(1, m):
                if bits[i, j] and (prev[j] or prev[j - 1] or cur[j - 1]):
                    cur[j] = 1
                    any_row = 1
                else:
                    cur[j] = 0
            if not any_row:
                return False
            prev, cur = cur, prev
        return prev[m - 1] != 0
    finally:
        free(prev)
        free(cur)


def frechet_value_dp(const double[:, ::1] p, const double[:, ::1] q):
    """Discrete Frechet distance by the min-max recurrence."""
    cdef Py_ssize_t n = p.shape[0]
    cdef Py_ssize_t m = q.shape[0]
    cdef Py_ssize_t i, j
    cdef double dx, dy, d, best
    cdef double* prev = <double*> malloc(m * sizeof(double))
    cdef double* cur = <double*> malloc(m * sizeof(double))
    if prev == NULL or cur == NULL:
        free(prev); free(cur)
        raise MemoryError()
    try:
        dx = p[0, 0] - q[0, 0]
        dy = p[0, 1] - q[0, 1]
        prev[0] = (dx * dx + dy * dy) ** 0.5
        for j in range(1, m):
            dx = p[0, 0] - q[j, 0]
            dy = p[0, 1] - q[j, 1]
            d = (dx * dx + dy * dy) ** 0.5
            prev[j] = prev[j - 1] if prev[j - 1] > d else d
        for i in range(1, n):
            dx = p[i, 0] - q[0, 0]
            dy = p[i, 1] - q[0, 1]
            d = (dx * dx + dy * dy) ** 0.5
            cur[0] = prev[0] if prev[0] > d else d
            for j in range(1, m):
                best = prev[j]
                if prev[j - 1] < best:
                    best = prev[j - 1]
                if cur[j - 1] < best:
                    best = cur[j - 1]
                dx = p[i, 0] - q[j, 0]
                dy = p[i, 1] - q[j, 1]
                d = (dx * dx + dy * dy) ** 0.5
                cur[j] = best if best > d else d
            prev, cur = cur, prev
        return prev[m - 1]
    finally:
        free(prev)
        free(cur)


def decide_at_translation(const double[:, ::1] p, const double[:, ::1] q,
                          double tx, double ty, double thresh):
    """Fused free-space + path DP: is delta_F(p, q + tau) <= delta, with
    thresh = delta**2 + tol compared against squared distances."""
    cdef Py_ssize_t n = p.shape[0]
    cdef Py_ssize_t m = q.shape[0]
    cdef Py_ssize_t i, j
    cdef double dx, dy
    cdef unsigned char any_row, b
    cdef unsigned char* prev = <unsigned char*> malloc(m)
    cdef unsigned char* cur = <unsigned char*> malloc(m)
    if prev == NULL or cur == NULL:
        free(prev); free(cur)
        raise MemoryError()
    try:
        dx = p[0, 0] - q[0, 0] - tx
        dy = p[0, 1] - q[0, 1] - ty
        prev[0] = dx * dx + dy * dy <= thresh
        for j in range(1, m):
            if prev[j - 1]:
                dx = p[0, 0] - q[j, 0] - tx
                dy = p[0, 1] - q[j, 1] - ty
                prev[j] = dx * dx + dy * dy <= thresh
            else:
                prev[j] = 0
        for i in range(1, n):
            any_row = 0
            for j in range(m):
                if prev[j] or (j > 0 and (prev[j - 1] or cur[j - 1])):
                    dx = p[i, 0] - q[j, 0] - tx
                    dy = p[i, 1] - q[j, 1] - ty
                    b = dx * dx + dy * dy <= thresh
                else:
                    b = 0
                cur[j] = b
                any_row |= b
            if not any_row:
                return False
            prev, cur = cur, prev
        return prev[m - 1] != 0
    finally:
        free(prev)
        free(cur)


# ----------------------------------------------------------------------
# grid reachability engine
# ----------------------------------------------------------------------

cdef int LAYER_CUT = 16

cdef inline int _ceil_log2(int m):
    cdef int d = 0
    while (1 << d) < m:
        d += 1
    return d


cdef inline int _lb_i64(const long long* a, int n, long long v) nogil:
    # first index with a[i] >= v
    cdef int lo = 0, hi = n, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if a[mid] < v:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline int _ub_i64(const long long* a, int n, long long v) nogil:
    # first index with a[i] > v
    cdef int lo = 0, hi = n, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if a[mid] <= v:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef void _tor_build(const long long* e0k, const long long* e0v, int m, int D,
                     long long* lk, long long* lv,
                     long long* rawa, long long* rawb) nogil:
    """Mergesort-tree levels 1..D-1 over (key, value): sorted keys per aligned
    segment plus running prefix-minimum of the values."""
    cdef const long long* pk = e0k
    cdef const long long* pv = e0v
    cdef long long* curraw
    cdef long long run
    cdef int d, seg, half, s, e, midp, i, j, o, base
    for d in range(1, D):
        seg = 1 << d
        half = seg >> 1
        base = (d - 1) * m
        curraw = rawa if (d & 1) else rawb
        s = 0
        while s < m:
            e = s + seg
            if e > m:
                e = m
            midp = s + half
            if midp > e:
                midp = e
            i = s
            j = midp
            o = base + s
            while i < midp and j < e:
                if pk[i] <= pk[j]:
                    lk[o] = pk[i]
                    curraw[o - base] = pv[i]
                    i += 1
                else:
                    lk[o] = pk[j]
                    curraw[o - base] = pv[j]
                    j += 1
                o += 1
            while i < midp:
                lk[o] = pk[i]
                curraw[o - base] = pv[i]
                i += 1
                o += 1
            while j < e:
                lk[o] = pk[j]
                curraw[o - base] = pv[j]
                j += 1
                o += 1
            run = INF
            for i in range(s, e):
                if curraw[i] < run:
                    run = curraw[i]
                lv[base + i] = run
            s += seg
        pk = lk + base
        pv = curraw
    return


cdef long long _tor_query_ranks(const long long* e0k, const long long* e0v,
                                const long long* lk, const long long* lv,
                                int m, int D, int l, int r, long long t) nogil:
    """min value over rank range [l, r) among entries with key <= t."""
    cdef long long best = INF
    cdef int d, base, lo, hi, ub
    while l < r:
        d = 0
        while d + 1 < D and (l & ((1 << (d + 1)) - 1)) == 0 and l + (1 << (d + 1)) <= r:
            d += 1
        if d == 0:
            if e0k[l] <= t and e0v[l] < best:
                best = e0v[l]
            l += 1
        else:
            base = (d - 1) * m
            lo = base + l
            hi = base + l + (1 << d)
            ub = _ub_i64(lk + lo, hi - lo, t)
            if ub > 0 and lv[lo + ub - 1] < best:
                best = lv[lo + ub - 1]
            l += 1 << d
    return best


cdef int _cmp_ll(const void* a, const void* b) noexcept nogil:
    cdef long long x = (<const long long*> a)[0]
    cdef long long y = (<const long long*> b)[0]
    if x < y:
        return -1
    if x > y:
        return 1
    return 0


cdef extern from "stdlib.h":
    void qsort(void* base, size_t nmemb, size_t size,
               int (*compar)(const void*, const void*)) nogil


cdef class _TransientOR:
    """Scratch-backed static structure: min over key1-range x key2 <= t.

    Entries are supplied in ascending key1 order; values for maximisation
    are negated by the caller.
    """
    cdef long long* k1
    cdef long long* e0k
    cdef long long* e0v
    cdef long long* lk
    cdef long long* lv
    cdef int m, D, cap

    def __cinit__(self, int cap, int dcap):
        self.cap = cap
        self.k1 = <long long*> malloc(cap * sizeof(long long))
        self.e0k = <long long*> malloc(cap * sizeof(long long))
        self.e0v = <long long*> malloc(cap * sizeof(long long))
        self.lk = <long long*> malloc(cap * dcap * sizeof(long long))
        self.lv = <long long*> malloc(cap * dcap * sizeof(long long))
        if (self.k1 == NULL or self.e0k == NULL or self.e0v == NULL
                or self.lk == NULL or self.lv == NULL):
            raise MemoryError()
        self.m = 0
        self.D = 1

    def __dealloc__(self):
        free(self.k1)
        free(self.e0k)
        free(self.e0v)
        free(self.lk)
        free(self.lv)

    cdef void finish(self, int m, long long* rawa, long long* rawb) nogil:
        self.m = m
        self.D = _ceil_log2(m) + 1 if m > 1 else 1
        if m > 1:
            _tor_build(self.e0k, self.e0v, m, self.D, self.lk, self.lv, rawa, rawb)

    cdef long long query(self, long long a, long long z, long long t) nogil:
        if self.m == 0 or a > z:
            return INF
        cdef int l = _lb_i64(self.k1, self.m, a)
        cdef int r = _ub_i64(self.k1, self.m, z)
        if l >= r:
            return INF
        return _tor_query_ranks(self.e0k, self.e0v, self.lk, self.lv,
                                self.m, self.D, l, r, t)


cdef class GridReachEngine:
    """Compiled twin of gridreach.reference.ReferenceEngine.

    Flat per-block storage: for every block, the input boundary carries
    (A, Z, rev-level) and the output boundary (level, Arev, Zrev), all in
    ind-sorted rank order; free splitting-boundary entries carry
    (ind, level_lo, rev_level_hi) plus a mergesort-tree for threshold
    minima.  Terminal summaries live in flat side arrays indexed through
    a per-block offset map.
    """
    cdef public int n
    cdef int kappa, nblocks, nlevels
    cdef unsigned char[::1] M
    cdef int[::1] lv_, bi0, bi1, bj0, bj1
    cdef long long[::1] in_off, out_off, jm_off, lay_off
    cdef int[::1] jm_len, jm_D
    cdef long long[::1] fA, fZ, frl, fl, rA, rZ
    cdef long long[::1] jm_ind, jm_ell, jm_rev
    cdef long long[::1] lay_k, lay_v
    # terminals
    cdef long long[::1] t_pack
    cdef int[::1] t_x, t_y
    cdef int nt
    cdef dict tb                      # block -> (offset, count) into flat terminal arrays
    cdef int[::1] tb_ids
    cdef long long[::1] tbA, tbZ, tbrA, tbrZ
    # scratch
    cdef long long* raw_a
    cdef long long* raw_b
    cdef list tors
    cdef long long[::1] ms_ahi, ms_zhi, ms_arev, ms_zrev
    cdef int[::1] arena
    cdef int ap
    cdef long long* sscr            # SSR scratch (several parallel regions)
    cdef int sscr_cap
    cdef unsigned char[::1] dirty
    cdef public long long last_dirty_count
    cdef dict _dirty_levels
    # objects kept alive for memoryviews
    cdef object _buffers

    def __init__(self, const unsigned char[:, ::1] bits, long long[::1] terminals_packed):
        cdef int n = bits.shape[0]
        cdef int kappa = 0
        while (1 << kappa) + 1 < n:
            kappa += 1
        if bits.shape[1] != n or n < 3 or (1 << kappa) + 1 != n:
            raise ValueError("engine needs a padded square matrix, side 2**kappa + 1")
        self.n = n
        self.kappa = kappa
        self.nlevels = 2 * kappa + 1
        self.nblocks = (1 << (2 * kappa + 1)) - 1
        self._buffers = []

        m_arr = np.empty(n * n, dtype=np.uint8)
        cdef unsigned char[::1] mv = m_arr
        cdef int i, j
        for i in range(n):
            for j in range(n):
                mv[i * n + j] = bits[i, j]
        self.M = m_arr
        self._buffers.append(m_arr)

        self._init_blocks()
        self._init_scratch()
        self._set_terminals(terminals_packed)
        self._dirty_levels = {}
        self.last_dirty_count = self.nblocks
        # build everything bottom-up
        cdef int b
        for b in range(self.nblocks - 1, -1, -1):
            self._fill(b)

    # -- geometry ------------------------------------------------------

    def _init_blocks(self):
        cdef int nb = self.nblocks
        lv = np.zeros(nb, dtype=np.int32)
        bi0 = np.zeros(nb, dtype=np.int32)
        bi1 = np.zeros(nb, dtype=np.int32)
        bj0 = np.zeros(nb, dtype=np.int32)
        bj1 = np.zeros(nb, dtype=np.int32)
        self._buffers += [lv, bi0, bi1, bj0, bj1]
        self.lv_ = lv
        self.bi0 = bi0
        self.bi1 = bi1
        self.bj0 = bj0
        self.bj1 = bj1
        cdef int b, mid
        self.bi0[0] = 1
        self.bi1[0] = self.n
        self.bj0[0] = 1
        self.bj1[0] = self.n
        for b in range(nb):
            if 2 * b + 1 >= nb:
                continue
            if self.lv_[b] % 2 == 0:
                mid = (self.bj0[b] + self.bj1[b]) >> 1
                self.lv_[2 * b + 1] = self.lv_[b] + 1
                self.bi0[2 * b + 1] = self.bi0[b]
                self.bi1[2 * b + 1] = self.bi1[b]
                self.bj0[2 * b + 1] = self.bj0[b]
                self.bj1[2 * b + 1] = mid
                self.lv_[2 * b + 2] = self.lv_[b] + 1
                self.bi0[2 * b + 2] = self.bi0[b]
                self.bi1[2 * b + 2] = self.bi1[b]
                self.bj0[2 * b + 2] = mid
                self.bj1[2 * b + 2] = self.bj1[b]
            else:
                mid = (self.bi0[b] + self.bi1[b]) >> 1
                self.lv_[2 * b + 1] = self.lv_[b] + 1
                self.bi0[2 * b + 1] = self.bi0[b]
                self.bi1[2 * b + 1] = mid
                self.bj0[2 * b + 1] = self.bj0[b]
                self.bj1[2 * b + 1] = self.bj1[b]
                self.lv_[2 * b + 2] = self.lv_[b] + 1
                self.bi0[2 * b + 2] = mid
                self.bi1[2 * b + 2] = self.bi1[b]
                self.bj0[2 * b + 2] = self.bj0[b]
                self.bj1[2 * b + 2] = self.bj1[b]
        # flat offsets
        in_len = (np.asarray(bi1) - np.asarray(bi0)) + (np.asarray(bj1) - np.asarray(bj0)) + 1
        in_off = np.zeros(nb + 1, dtype=np.int64)
        np.cumsum(in_len, out=in_off[1:])
        out_off = in_off.copy()
        total = int(in_off[nb])
        fA = np.zeros(total, dtype=np.int64)
        fZ = np.zeros(total, dtype=np.int64)
        frl = np.zeros(total, dtype=np.int64)
        fl = np.zeros(total, dtype=np.int64)
        rA = np.zeros(total, dtype=np.int64)
        rZ = np.zeros(total, dtype=np.int64)
        self._buffers += [in_off, out_off, fA, fZ, frl, fl, rA, rZ]
        self.in_off = in_off
        self.out_off = out_off
        self.fA = fA
        self.fZ = fZ
        self.frl = frl
        self.fl = fl
        self.rA = rA
        self.rZ = rZ
        # splitting-boundary capacity per internal block
        caps = np.zeros(nb, dtype=np.int64)
        lvn = np.asarray(lv)
        internal = in_len > 3  # leaves have boundary length 3
        col_split = (lvn % 2 == 0)
        caps[internal & col_split] = (np.asarray(bi1) - np.asarray(bi0) + 1)[internal & col_split]
        caps[internal & ~col_split] = (np.asarray(bj1) - np.asarray(bj0) + 1)[internal & ~col_split]
        jm_off = np.zeros(nb + 1, dtype=np.int64)
        np.cumsum(caps, out=jm_off[1:])
        jt = int(jm_off[nb])
        jm_ind = np.zeros(jt, dtype=np.int64)
        jm_ell = np.zeros(jt, dtype=np.int64)
        jm_rev = np.zeros(jt, dtype=np.int64)
        jm_len = np.zeros(nb, dtype=np.int32)
        jm_D = np.ones(nb, dtype=np.int32)
        self._buffers += [jm_off, jm_ind, jm_ell, jm_rev, jm_len, jm_D]
        self.jm_off = jm_off
        self.jm_ind = jm_ind
        self.jm_ell = jm_ell
        self.jm_rev = jm_rev
        self.jm_len = jm_len
        self.jm_D = jm_D
        # layered storage only for blocks with enough mid entries
        lay_slots = np.zeros(nb, dtype=np.int64)
        big = caps > LAYER_CUT
        dcaps = np.ceil(np.log2(np.maximum(caps, 2))).astype(np.int64)
        lay_slots[big] = (caps * dcaps)[big]
        lay_starts = np.zeros(nb + 1, dtype=np.int64)
        np.cumsum(lay_slots, out=lay_starts[1:])
        lt = int(lay_starts[nb])
        lay_off_final = np.where(big, lay_starts[:nb], -1).astype(np.int64)
        lay_k = np.zeros(max(lt, 1), dtype=np.int64)
        lay_v = np.zeros(max(lt, 1), dtype=np.int64)
        self._buffers += [lay_off_final, lay_k, lay_v]
        self.lay_off = lay_off_final
        self.lay_k = lay_k
        self.lay_v = lay_v
        dirty = np.zeros(nb, dtype=np.uint8)
        self._buffers.append(dirty)
        self.dirty = dirty

    def _init_scratch(self):
        cdef int cap = 2 * self.n + 4
        cdef int dcap = _ceil_log2(cap) + 1
        self.raw_a = <long long*> malloc(cap * sizeof(long long))
        self.raw_b = <long long*> malloc(cap * sizeof(long long))
        if self.raw_a == NULL or self.raw_b == NULL:
            raise MemoryError()
        self.tors = [_TransientOR(cap, dcap) for _ in range(4)]
        ms = [np.zeros(cap, dtype=np.int64) for _ in range(4)]
        self._buffers += ms
        self.ms_ahi = ms[0]
        self.ms_zhi = ms[1]
        self.ms_arev = ms[2]
        self.ms_zrev = ms[3]
        arena = np.zeros(1 << 14, dtype=np.int32)
        self._buffers.append(arena)
        self.arena = arena
        self.ap = 0
        self.sscr = NULL
        self.sscr_cap = 0

    def __dealloc__(self):
        free(self.raw_a)
        free(self.raw_b)
        free(self.sscr)

    # -- position helpers ------------------------------------------------

    cdef inline long long _ind(self, int x, int y) nogil:
        return (<long long> (y - x)) * 2 * self.n + x

    cdef inline int _in_rank(self, int b, int x, int y) nogil:
        if y == self.bj0[b]:
            return self.bi1[b] - x
        return (self.bi1[b] - self.bi0[b]) + (y - self.bj0[b])

    cdef inline int _out_rank(self, int b, int x, int y) nogil:
        if x == self.bi1[b]:
            return y - self.bj0[b]
        return (self.bj1[b] - self.bj0[b]) + (self.bi1[b] - x)

    cdef inline int _in_len(self, int b) nogil:
        return (self.bi1[b] - self.bi0[b]) + (self.bj1[b] - self.bj0[b]) + 1

    cdef inline bint _contains(self, int b, int x, int y) nogil:
        return self.bi0[b] <= x <= self.bi1[b] and self.bj0[b] <= y <= self.bj1[b]

    cdef inline bint _is_leaf(self, int b) nogil:
        return self.bi1[b] - self.bi0[b] == 1 and self.bj1[b] - self.bj0[b] == 1

    cdef inline int _split_line(self, int b) nogil:
        if self.lv_[b] % 2 == 0:
            return (self.bj0[b] + self.bj1[b]) >> 1
        return (self.bi0[b] + self.bi1[b]) >> 1

    cdef inline bint _in_hi(self, int b, int x, int y) nogil:
        if self.lv_[b] % 2 == 0:
            return y >= self._split_line(b)
        return x >= self._split_line(b)

    cdef inline bint _in_lo(self, int b, int x, int y) nogil:
        if self.lv_[b] % 2 == 0:
            return y <= self._split_line(b)
        return x <= self._split_line(b)

    cdef inline bint _on_mid(self, int b, int x, int y) nogil:
        if self.lv_[b] % 2 == 0:
            return y == self._split_line(b)
        return x == self._split_line(b)

    # -- terminals ---------------------------------------------------------

    def _set_terminals(self, long long[::1] packed):
        cdef int n = self.n
        pk = set()
        cdef int i
        for i in range(packed.shape[0]):
            pk.add(int(packed[i]))
        pk.add(1 * (n + 1) + 1)
        pk.add(n * (n + 1) + n)
        arr = np.array(sorted(pk), dtype=np.int64)
        self.nt = arr.shape[0]
        tx = (arr // (n + 1)).astype(np.int32)
        ty = (arr % (n + 1)).astype(np.int32)
        self.t_pack = arr
        self.t_x = tx
        self.t_y = ty
        self._buffers += [arr, tx, ty]
        # assign terminals to blocks (descent; a position can sit in both children)
        per_block: dict = {}
        cdef int tid, b
        stack = []
        for tid in range(self.nt):
            stack.append(0)
            while stack:
                b = stack.pop()
                per_block.setdefault(b, []).append(tid)
                if self._is_leaf(b):
                    continue
                if self._contains(2 * b + 1, self.t_x[tid], self.t_y[tid]):
                    stack.append(2 * b + 1)
                if self._contains(2 * b + 2, self.t_x[tid], self.t_y[tid]):
                    stack.append(2 * b + 2)
        total = sum(len(v) for v in per_block.values())
        tb_ids = np.zeros(max(total, 1), dtype=np.int32)
        tbA = np.zeros(max(total, 1), dtype=np.int64)
        tbZ = np.zeros(max(total, 1), dtype=np.int64)
        tbrA = np.zeros(max(total, 1), dtype=np.int64)
        tbrZ = np.zeros(max(total, 1), dtype=np.int64)
        self.tb = {}
        off = 0
        for b_key in sorted(per_block):
            ids = per_block[b_key]
            for i, tid in enumerate(ids):
                tb_ids[off + i] = tid
            self.tb[b_key] = (off, len(ids))
            off += len(ids)
        self.tb_ids = tb_ids
        self.tbA = tbA
        self.tbZ = tbZ
        self.tbrA = tbrA
        self.tbrZ = tbrZ
        self._buffers += [tb_ids, tbA, tbZ, tbrA, tbrZ]

    cdef inline int _t_slot(self, int b, int tid):
        # flat slot of terminal tid in block b, -1 if absent
        entry = self.tb.get(b)
        if entry is None:
            return -1
        cdef int off = entry[0]
        cdef int cnt = entry[1]
        cdef int lo = 0, hi = cnt, mid
        while lo < hi:
            mid = (lo + hi) >> 1
            if self.tb_ids[off + mid] < tid:
                lo = mid + 1
            else:
                hi = mid
        if lo < cnt and self.tb_ids[off + lo] == tid:
            return off + lo
        return -1

    # -- construction ----------------------------------------------------

    cdef void _fill(self, int b):
        if self._is_leaf(b):
            self._fill_leaf(b)
        else:
            self._fill_merge(b)

    cdef void _fill_leaf(self, int b):
        cdef int i0 = self.bi0[b], i1 = self.bi1[b], j0 = self.bj0[b], j1 = self.bj1[b]
        cdef long long ioff = self.in_off[b], ooff = self.out_off[b]
        cdef int inx[3]
        cdef int iny[3]
        cdef int outx[3]
        cdef int outy[3]
        inx[0] = i1; iny[0] = j0
        inx[1] = i0; iny[1] = j0
        inx[2] = i0; iny[2] = j1
        outx[0] = i1; outy[0] = j0
        outx[1] = i1; outy[1] = j1
        outx[2] = i0; outy[2] = j1
        cdef int r, s
        cdef long long a, z, v
        for r in range(3):
            a = INF
            z = NEG
            for s in range(3):
                if outx[s] >= inx[r] and outy[s] >= iny[r]:
                    v = self._ind(outx[s], outy[s])
                    if v < a:
                        a = v
                    if v > z:
                        z = v
            self.fA[ioff + r] = a
            self.fZ[ioff + r] = z
            self.frl[ioff + r] = -(i1 + j1)
        for s in range(3):
            self.fl[ooff + s] = i0 + j0
            a = INF
            z = NEG
            for r in range(3):
                if inx[r] <= outx[s] and iny[r] <= outy[s]:
                    v = self._ind(inx[r], iny[r])
                    if v < a:
                        a = v
                    if v > z:
                        z = v
            self.rA[ooff + s] = a
            self.rZ[ooff + s] = z
        # terminal summaries
        entry = self.tb.get(b)
        if entry is None:
            return
        cdef int off = entry[0]
        cdef int cnt = entry[1]
        cdef int t, tx, ty
        for t in range(off, off + cnt):
            tx = self.t_x[self.tb_ids[t]]
            ty = self.t_y[self.tb_ids[t]]
            a = INF
            z = NEG
            for s in range(3):
                if outx[s] >= tx and outy[s] >= ty:
                    v = self._ind(outx[s], outy[s])
                    if v < a:
                        a = v
                    if v > z:
                        z = v
            self.tbA[t] = a
            self.tbZ[t] = z
            a = INF
            z = NEG
            for s in range(3):
                if inx[s] <= tx and iny[s] <= ty:
                    v = self._ind(inx[s], iny[s])
                    if v < a:
                        a = v
                    if v > z:
                        z = v
            self.tbrA[t] = a
            self.tbrZ[t] = z

    cdef long long _orb_query(self, int b, long long a, long long z, long long t):
        cdef long long joff = self.jm_off[b]
        cdef int m = self.jm_len[b]
        if m == 0 or a > z:
            return INF
        cdef int l = _lb_i64(&self.jm_ind[joff], m, a)
        cdef int r = _ub_i64(&self.jm_ind[joff], m, z)
        if l >= r:
            return INF
        cdef long long best = INF
        cdef int i
        if self.lay_off[b] >= 0 and self.jm_D[b] > 1:
            return _tor_query_ranks(&self.jm_ell[joff], &self.jm_rev[joff],
                                    &self.lay_k[self.lay_off[b]], &self.lay_v[self.lay_off[b]],
                                    m, self.jm_D[b], l, r, t)
        for i in range(l, r):
            if self.jm_ell[joff + i] <= t and self.jm_rev[joff + i] < best:
                best = self.jm_rev[joff + i]
        return best

    cdef void _fill_merge(self, int b):
        cdef int lo = 2 * b + 1, hi = 2 * b + 2
        cdef bint colsplit = self.lv_[b] % 2 == 0
        cdef int i0 = self.bi0[b], i1 = self.bi1[b], j0 = self.bj0[b], j1 = self.bj1[b]
        cdef int mline = self._split_line(b)
        cdef long long ioff = self.in_off[b], ooff = self.out_off[b]
        cdef long long joff = self.jm_off[b]
        cdef long long lo_in = self.in_off[lo], lo_out = self.out_off[lo]
        cdef long long hi_in = self.in_off[hi], hi_out = self.out_off[hi]
        cdef int n = self.n
        cdef int cnt = 0
        cdef int x, y, r, s, rr
        cdef long long a, z, lab, labr, best_a, best_z, e2, v
        cdef _TransientOR t0 = <_TransientOR> self.tors[0]
        cdef _TransientOR t1 = <_TransientOR> self.tors[1]
        cdef _TransientOR t2 = <_TransientOR> self.tors[2]
        cdef _TransientOR t3 = <_TransientOR> self.tors[3]

        # gather free splitting-boundary entries (with aligned child data)
        cdef long long[::1] sAhi = self.ms_ahi
        cdef long long[::1] sZhi = self.ms_zhi
        cdef long long[::1] sArev = self.ms_arev
        cdef long long[::1] sZrev = self.ms_zrev
        if colsplit:
            x = i1
            while x >= i0:
                if self.M[(x - 1) * n + (mline - 1)]:
                    rr = self._out_rank(lo, x, mline)
                    s = self._in_rank(hi, x, mline)
                    self.jm_ind[joff + cnt] = self._ind(x, mline)
                    self.jm_ell[joff + cnt] = self.fl[lo_out + rr]
                    self.jm_rev[joff + cnt] = self.frl[hi_in + s]
                    sAhi[cnt] = self.fA[hi_in + s]
                    sZhi[cnt] = self.fZ[hi_in + s]
                    sArev[cnt] = self.rA[lo_out + rr]
                    sZrev[cnt] = self.rZ[lo_out + rr]
                    cnt += 1
                x -= 1
        else:
            y = j0
            while y <= j1:
                if self.M[(mline - 1) * n + (y - 1)]:
                    rr = self._out_rank(lo, mline, y)
                    s = self._in_rank(hi, mline, y)
                    self.jm_ind[joff + cnt] = self._ind(mline, y)
                    self.jm_ell[joff + cnt] = self.fl[lo_out + rr]
                    self.jm_rev[joff + cnt] = self.frl[hi_in + s]
                    sAhi[cnt] = self.fA[hi_in + s]
                    sZhi[cnt] = self.fZ[hi_in + s]
                    sArev[cnt] = self.rA[lo_out + rr]
                    sZrev[cnt] = self.rZ[lo_out + rr]
                    cnt += 1
                y += 1
        self.jm_len[b] = cnt
        if self.lay_off[b] >= 0 and cnt > 1:
            self.jm_D[b] = _ceil_log2(cnt) + 1
            _tor_build(&self.jm_ell[joff], &self.jm_rev[joff], cnt, self.jm_D[b],
                       &self.lay_k[self.lay_off[b]], &self.lay_v[self.lay_off[b]],
                       self.raw_a, self.raw_b)
        else:
            self.jm_D[b] = 1

        # ---- pass A: forward intervals (plus reverse levels) for inputs
        cdef int ntop = 0
        if colsplit:
            y = j0
            while y <= mline:
                v = self._ind(i1, y)
                t0.k1[ntop] = v
                t0.e0k[ntop] = self.fl[lo_out + self._out_rank(lo, i1, y)]
                t0.e0v[ntop] = v
                t1.k1[ntop] = v
                t1.e0k[ntop] = t0.e0k[ntop]
                t1.e0v[ntop] = -v
                ntop += 1
                y += 1
        else:
            x = mline
            while x >= i0:
                v = self._ind(x, j1)
                t0.k1[ntop] = v
                t0.e0k[ntop] = self.fl[lo_out + self._out_rank(lo, x, j1)]
                t0.e0v[ntop] = v
                t1.k1[ntop] = v
                t1.e0k[ntop] = t0.e0k[ntop]
                t1.e0v[ntop] = -v
                ntop += 1
                x -= 1
        t0.finish(ntop, self.raw_a, self.raw_b)
        t1.finish(ntop, self.raw_a, self.raw_b)
        for r in range(cnt):
            t2.k1[r] = self.jm_ind[joff + r]
            t2.e0k[r] = self.jm_ell[joff + r]
            t2.e0v[r] = sAhi[r]
            t3.k1[r] = t2.k1[r]
            t3.e0k[r] = t2.e0k[r]
            t3.e0v[r] = -sZhi[r]
        t2.finish(cnt, self.raw_a, self.raw_b)
        t3.finish(cnt, self.raw_a, self.raw_b)

        cdef int inlen = self._in_len(b)
        cdef int px, py
        for r in range(inlen):
            if r <= i1 - i0:
                px = i1 - r
                py = j0
            else:
                px = i0
                py = j0 + (r - (i1 - i0))
            if self._in_hi(b, px, py):
                rr = self._in_rank(hi, px, py)
                self.fA[ioff + r] = self.fA[hi_in + rr]
                self.fZ[ioff + r] = self.fZ[hi_in + rr]
                self.frl[ioff + r] = self.frl[hi_in + rr]
                continue
            rr = self._in_rank(lo, px, py)
            a = self.fA[lo_in + rr]
            z = self.fZ[lo_in + rr]
            v = self.frl[lo_in + rr]
            if a >= INF:
                self.fA[ioff + r] = INF
                self.fZ[ioff + r] = NEG
                self.frl[ioff + r] = v
                continue
            lab = px + py
            best_a = t0.query(a, z, lab)
            e2 = t2.query(a, z, lab)
            if e2 < best_a:
                best_a = e2
            best_z = -t1.query(a, z, lab)
            e2 = -t3.query(a, z, lab)
            if e2 > best_z:
                best_z = e2
            if best_a >= INF:
                self.fA[ioff + r] = INF
                self.fZ[ioff + r] = NEG
            else:
                self.fA[ioff + r] = best_a
                self.fZ[ioff + r] = best_z
            e2 = self._orb_query(b, a, z, lab)
            if e2 < v:
                v = e2
            self.frl[ioff + r] = v
        # terminals: forward intervals
        entry = self.tb.get(b)
        cdef int toff = 0, tcnt = 0, slot, src, tid
        if entry is not None:
            toff = entry[0]
            tcnt = entry[1]
        for slot in range(toff, toff + tcnt):
            tid = self.tb_ids[slot]
            px = self.t_x[tid]
            py = self.t_y[tid]
            if self._in_hi(b, px, py):
                src = self._t_slot(hi, tid)
                self.tbA[slot] = self.tbA[src]
                self.tbZ[slot] = self.tbZ[src]
                continue
            src = self._t_slot(lo, tid)
            a = self.tbA[src]
            z = self.tbZ[src]
            if a >= INF:
                self.tbA[slot] = INF
                self.tbZ[slot] = NEG
                continue
            lab = px + py
            best_a = t0.query(a, z, lab)
            e2 = t2.query(a, z, lab)
            if e2 < best_a:
                best_a = e2
            best_z = -t1.query(a, z, lab)
            e2 = -t3.query(a, z, lab)
            if e2 > best_z:
                best_z = e2
            if best_a >= INF:
                self.tbA[slot] = INF
                self.tbZ[slot] = NEG
            else:
                self.tbA[slot] = best_a
                self.tbZ[slot] = best_z

        # ---- pass B: forward levels for outputs
        for r in range(cnt):
            t0.k1[r] = self.jm_ind[joff + r]
            t0.e0k[r] = self.jm_rev[joff + r]
            t0.e0v[r] = self.jm_ell[joff + r]
        t0.finish(cnt, self.raw_a, self.raw_b)
        cdef int qx, qy
        for s in range(inlen):
            if s <= j1 - j0:
                qx = i1
                qy = j0 + s
            else:
                qx = i1 - (s - (j1 - j0))
                qy = j1
            if self._in_lo(b, qx, qy):
                self.fl[ooff + s] = self.fl[lo_out + self._out_rank(lo, qx, qy)]
                continue
            rr = self._out_rank(hi, qx, qy)
            v = self.fl[hi_out + rr]
            a = self.rA[hi_out + rr]
            z = self.rZ[hi_out + rr]
            if a < INF:
                e2 = t0.query(a, z, -qx - qy)
                if e2 < v:
                    v = e2
            self.fl[ooff + s] = v

        # ---- pass C: reverse intervals for outputs and terminals
        ntop = 0
        if colsplit:
            y = mline
            while y <= j1:
                v = self._ind(i0, y)
                t0.k1[ntop] = v
                t0.e0k[ntop] = self.frl[hi_in + self._in_rank(hi, i0, y)]
                t0.e0v[ntop] = v
                t1.k1[ntop] = v
                t1.e0k[ntop] = t0.e0k[ntop]
                t1.e0v[ntop] = -v
                ntop += 1
                y += 1
        else:
            x = i1
            while x >= mline:
                v = self._ind(x, j0)
                t0.k1[ntop] = v
                t0.e0k[ntop] = self.frl[hi_in + self._in_rank(hi, x, j0)]
                t0.e0v[ntop] = v
                t1.k1[ntop] = v
                t1.e0k[ntop] = t0.e0k[ntop]
                t1.e0v[ntop] = -v
                ntop += 1
                x -= 1
        t0.finish(ntop, self.raw_a, self.raw_b)
        t1.finish(ntop, self.raw_a, self.raw_b)
        for r in range(cnt):
            t2.k1[r] = self.jm_ind[joff + r]
            t2.e0k[r] = self.jm_rev[joff + r]
            t2.e0v[r] = sArev[r]
            t3.k1[r] = t2.k1[r]
            t3.e0k[r] = t2.e0k[r]
            t3.e0v[r] = -sZrev[r]
        t2.finish(cnt, self.raw_a, self.raw_b)
        t3.finish(cnt, self.raw_a, self.raw_b)
        for s in range(inlen):
            if s <= j1 - j0:
                qx = i1
                qy = j0 + s
            else:
                qx = i1 - (s - (j1 - j0))
                qy = j1
            if self._in_lo(b, qx, qy):
                rr = self._out_rank(lo, qx, qy)
                self.rA[ooff + s] = self.rA[lo_out + rr]
                self.rZ[ooff + s] = self.rZ[lo_out + rr]
                continue
            rr = self._out_rank(hi, qx, qy)
            a = self.rA[hi_out + rr]
            z = self.rZ[hi_out + rr]
            if a >= INF:
                self.rA[ooff + s] = INF
                self.rZ[ooff + s] = NEG
                continue
            labr = -qx - qy
            best_a = t0.query(a, z, labr)
            e2 = t2.query(a, z, labr)
            if e2 < best_a:
                best_a = e2
            best_z = -t1.query(a, z, labr)
            e2 = -t3.query(a, z, labr)
            if e2 > best_z:
                best_z = e2
            if best_a >= INF:
                self.rA[ooff + s] = INF
                self.rZ[ooff + s] = NEG
            else:
                self.rA[ooff + s] = best_a
                self.rZ[ooff + s] = best_z
        for slot in range(toff, toff + tcnt):
            tid = self.tb_ids[slot]
            px = self.t_x[tid]
            py = self.t_y[tid]
            if self._in_lo(b, px, py):
                src = self._t_slot(lo, tid)
                self.tbrA[slot] = self.tbrA[src]
                self.tbrZ[slot] = self.tbrZ[src]
                continue
            src = self._t_slot(hi, tid)
            a = self.tbrA[src]
            z = self.tbrZ[src]
            if a >= INF:
                self.tbrA[slot] = INF
                self.tbrZ[slot] = NEG
                continue
            labr = -px - py
            best_a = t0.query(a, z, labr)
            e2 = t2.query(a, z, labr)
            if e2 < best_a:
                best_a = e2
            best_z = -t1.query(a, z, labr)
            e2 = -t3.query(a, z, labr)
            if e2 > best_z:
                best_z = e2
            if best_a >= INF:
                self.tbrA[slot] = INF
                self.tbrZ[slot] = NEG
            else:
                self.tbrA[slot] = best_a
                self.tbrZ[slot] = best_z
