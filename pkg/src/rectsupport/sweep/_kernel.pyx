# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled sweep kernel; mirrors _kernel_py.run step for step, counters included.

Everything is in rank space: a point is its y-rank slot, barrier bounds are
slot bounds, and the candidate tree stores the x-order index of the point in
each slot (-1 when empty).
"""
import numpy as np

from libc.stdint cimport int64_t, uint64_t

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil


cdef struct Counters:
    int64_t inserts
    int64_t deletes
    int64_t queries
    int64_t occlusions
    int64_t steps


cdef inline Py_ssize_t _pow2(Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t size = 1
    while size < n:
        size *= 2
    return size


cdef inline void _set_min(int64_t* t, Py_ssize_t size, Py_ssize_t i, int64_t v, Counters* c) noexcept nogil:
    i += size
    t[i] = v
    i >>= 1
    while i:
        t[i] = t[2 * i] if t[2 * i] < t[2 * i + 1] else t[2 * i + 1]
        i >>= 1
        c.steps += 1


cdef inline void _set_max(int64_t* t, Py_ssize_t size, Py_ssize_t i, int64_t v, Counters* c) noexcept nogil:
    i += size
    t[i] = v
    i >>= 1
    while i:
        t[i] = t[2 * i] if t[2 * i] > t[2 * i + 1] else t[2 * i + 1]
        i >>= 1
        c.steps += 1


cdef inline int64_t _fold_min(int64_t* t, Py_ssize_t size, Py_ssize_t lo, Py_ssize_t hi,
                              int64_t identity, Counters* c) noexcept nogil:
    cdef int64_t res = identity
    lo += size
    hi += size
    while lo < hi:
        if lo & 1:
            if t[lo] < res:
                res = t[lo]
            lo += 1
        if hi & 1:
            hi -= 1
            if t[hi] < res:
                res = t[hi]
        lo >>= 1
        hi >>= 1
        c.steps += 1
    return res


cdef inline int64_t _fold_max(int64_t* t, Py_ssize_t size, Py_ssize_t lo, Py_ssize_t hi,
                              int64_t identity, Counters* c) noexcept nogil:
    cdef int64_t res = identity
    lo += size
    hi += size
    while lo < hi:
        if lo & 1:
            if t[lo] > res:
                res = t[lo]
            lo += 1
        if hi & 1:
            hi -= 1
            if t[hi] > res:
                res = t[hi]
        lo >>= 1
        hi >>= 1
        c.steps += 1
    return res


cdef Py_ssize_t _rightmost_greater(int64_t* t, Py_ssize_t size, Py_ssize_t lo, Py_ssize_t hi,
                                   int64_t thr, Counters* c) noexcept nogil:
    cdef Py_ssize_t left[70]
    cdef Py_ssize_t right[70]
    cdef int nl = 0, nr = 0, k
    cdef Py_ssize_t node
    lo += size
    hi += size
    while lo < hi:
        if lo & 1:
            left[nl] = lo
            nl += 1
            lo += 1
        if hi & 1:
            hi -= 1
            right[nr] = hi
            nr += 1
        lo >>= 1
        hi >>= 1
        c.steps += 1
    for k in range(nr + nl):
        node = right[k] if k < nr else left[nl - 1 - (k - nr)]
        c.steps += 1
        if t[node] > thr:
            while node < size:
                c.steps += 1
                node = 2 * node + 1 if t[2 * node + 1] > thr else 2 * node
            return node - size
    return -1


cdef Py_ssize_t _leftmost_greater(int64_t* t, Py_ssize_t size, Py_ssize_t lo, Py_ssize_t hi,
                                  int64_t thr, Counters* c) noexcept nogil:
    cdef Py_ssize_t left[70]
    cdef Py_ssize_t right[70]
    cdef int nl = 0, nr = 0, k
    cdef Py_ssize_t node
    lo += size
    hi += size
    while lo < hi:
        if lo & 1:
            left[nl] = lo
            nl += 1
            lo += 1
        if hi & 1:
            hi -= 1
            right[nr] = hi
            nr += 1
        lo >>= 1
        hi >>= 1
        c.steps += 1
    for k in range(nl + nr):
        node = left[k] if k < nl else right[nr - 1 - (k - nl)]
        c.steps += 1
        if t[node] > thr:
            while node < size:
                c.steps += 1
                node = 2 * node if t[2 * node] > thr else 2 * node + 1
            return node - size
    return -1


cdef inline void _bits_add(uint64_t* words, Py_ssize_t* off, int depth, Py_ssize_t i, Counters* c) noexcept nogil:
    cdef int d
    cdef Py_ssize_t w
    cdef uint64_t was
    for d in range(depth):
        w = i >> 6
        was = words[off[d] + w]
        words[off[d] + w] = was | ((<uint64_t>1) << (i & 63))
        c.steps += 1
        if was:
            break
        i = w


cdef inline void _bits_discard(uint64_t* words, Py_ssize_t* off, int depth, Py_ssize_t i, Counters* c) noexcept nogil:
    cdef int d
    cdef Py_ssize_t w
    for d in range(depth):
        w = i >> 6
        words[off[d] + w] &= ~((<uint64_t>1) << (i & 63))
        c.steps += 1
        if words[off[d] + w]:
            break
        i = w


cdef Py_ssize_t _bits_next(uint64_t* words, Py_ssize_t* off, Py_ssize_t* length, int depth,
                           Py_ssize_t i, Counters* c) noexcept nogil:
    cdef int d = 0
    cdef Py_ssize_t w
    cdef uint64_t word
    while d < depth:
        w = i >> 6
        if w >= length[d]:
            return -1
        c.steps += 1
        word = words[off[d] + w] >> (i & 63)
        if word:
            i += __builtin_ctzll(word)
            while d > 0:
                d -= 1
                c.steps += 1
                i = (i << 6) + __builtin_ctzll(words[off[d] + i])
            return i
        i = w + 1
        d += 1
    return -1


def run(
    const int64_t[::1] yrank,
    const int64_t[::1] ustart,
    const int64_t[::1] lend,
    const int64_t[::1] lo_pos,
    const int64_t[::1] hi_pos,
    const int64_t[::1] lo_rank,
    const int64_t[::1] hi_rank,
    const int64_t[::1] ins_ptr,
    const int64_t[::1] ins_idx,
    const int64_t[::1] del_ptr,
    const int64_t[::1] del_idx,
):
    """Sweep all points; returns (edges in x-order indices, counter dict)."""
    cdef Py_ssize_t n = yrank.shape[0]
    cdef Py_ssize_t m = lo_pos.shape[0]
    cdef Counters c
    c.inserts = 0
    c.deletes = 0
    c.queries = 0
    c.occlusions = 0
    c.steps = 0

    cdef Py_ssize_t msize = _pow2(m)
    cdef Py_ssize_t nsize = _pow2(n)
    cdef int64_t up_inf = n
    up_arr = np.full(2 * msize, up_inf, dtype=np.int64)
    down_arr = np.full(2 * msize, -1, dtype=np.int64)
    cand_arr = np.full(2 * nsize, -1, dtype=np.int64)
    slot_k_arr = np.full(max(n, 1), -1, dtype=np.int64)
    cdef int64_t[::1] up_v = up_arr
    cdef int64_t[::1] down_v = down_arr
    cdef int64_t[::1] cand_v = cand_arr
    cdef int64_t[::1] slot_k = slot_k_arr
    cdef int64_t* up = &up_v[0]
    cdef int64_t* down = &down_v[0]
    cdef int64_t* cand = &cand_v[0]

    # bitset levels
    cdef Py_ssize_t off[16]
    cdef Py_ssize_t length[16]
    cdef int depth = 0
    cdef Py_ssize_t total = 0
    cdef Py_ssize_t sz = n if n > 0 else 1
    cdef Py_ssize_t words_n
    while True:
        words_n = (sz + 63) >> 6
        off[depth] = total
        length[depth] = words_n
        total += words_n
        depth += 1
        if words_n == 1:
            break
        sz = words_n
    bits_arr = np.zeros(total, dtype=np.uint64)
    cdef uint64_t[::1] bits_v = bits_arr
    cdef uint64_t* bits = &bits_v[0]

    cdef Py_ssize_t cap = 4 * n + 16
    edges_arr = np.empty((cap, 2), dtype=np.int64)
    cdef int64_t[:, ::1] edges = edges_arr
    cdef Py_ssize_t ne = 0

    cdef Py_ssize_t k, j, r, s, lb, ub, lo_end, hi_end
    cdef int64_t thr

    for k in range(n):
        r = yrank[k]
        for j in range(del_ptr[k], del_ptr[k + 1]):
            _set_min(up, msize, lo_pos[del_idx[j]], up_inf, &c)
            _set_max(down, msize, hi_pos[del_idx[j]], -1, &c)
            c.deletes += 1
        ub = _fold_min(up, msize, ustart[k], m, up_inf, &c)
        lb = _fold_max(down, msize, 0, lend[k], -1, &c)
        c.queries += 2
        if lb < 0:
            lb = 0

        if ne + n + 2 > cap:
            cap = 2 * cap + n + 2
            grown = np.empty((cap, 2), dtype=np.int64)
            grown[:ne] = edges_arr[:ne]
            edges_arr = grown
            edges = edges_arr

        # below-left staircase, walking down from the corner
        lo_end = r
        c.queries += 1
        s = _rightmost_greater(cand, nsize, lb, r, -1, &c)
        while s >= 0:
            edges[ne, 0] = slot_k[s]
            edges[ne, 1] = k
            ne += 1
            lo_end = s
            thr = slot_k[s]
            c.queries += 1
            s = _rightmost_greater(cand, nsize, lb, s, thr, &c)

        # above-left staircase, walking up from the corner
        hi_end = r
        c.queries += 1
        s = _leftmost_greater(cand, nsize, r + 1, ub, -1, &c)
        while s >= 0:
            edges[ne, 0] = slot_k[s]
            edges[ne, 1] = k
            ne += 1
            hi_end = s
            thr = slot_k[s]
            c.queries += 1
            s = _leftmost_greater(cand, nsize, s + 1, ub, thr, &c)

        # occlusion: everything strictly inside the union of vertical spans
        s = lo_end + 1
        while True:
            c.queries += 1
            s = _bits_next(bits, off, length, depth, s, &c)
            if s < 0 or s >= r:
                break
            _set_max(cand, nsize, s, -1, &c)
            _bits_discard(bits, off, depth, s, &c)
            slot_k[s] = -1
            c.deletes += 1
            c.occlusions += 1
            s += 1
        s = r + 1
        while True:
            c.queries += 1
            s = _bits_next(bits, off, length, depth, s, &c)
            if s < 0 or s >= hi_end:
                break
            _set_max(cand, nsize, s, -1, &c)
            _bits_discard(bits, off, depth, s, &c)
            slot_k[s] = -1
            c.deletes += 1
            c.occlusions += 1
            s += 1

        slot_k[r] = k
        _set_max(cand, nsize, r, k, &c)
        _bits_add(bits, off, depth, r, &c)
        c.inserts += 1

        for j in range(ins_ptr[k], ins_ptr[k + 1]):
            _set_min(up, msize, lo_pos[ins_idx[j]], hi_rank[ins_idx[j]], &c)
            _set_max(down, msize, hi_pos[ins_idx[j]], lo_rank[ins_idx[j]], &c)
            c.inserts += 1

    counters = {
        "inserts": c.inserts,
        "deletes": c.deletes,
        "queries": c.queries,
        "occlusions": c.occlusions,
        "steps": c.steps,
    }
    return edges_arr[:ne].copy(), counters
