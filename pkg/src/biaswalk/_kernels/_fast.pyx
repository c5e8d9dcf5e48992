# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the hot loops: transport sweep, stub pairing, rewiring.

Semantics are locked to ``_pure``: same PCG64 uniform stream, same order of
floating-point operations, so both backends give identical outputs for a
fixed seed (asserted by the test suite). Keep the two files in lockstep.
"""

import numpy as np

from libc.math cimport pow as cpow
from libcpp.unordered_set cimport unordered_set
from libcpp.vector cimport vector

ctypedef long long i64

NAME = "compiled"


cdef class _Uniforms:
    """Sequential uniform[0,1) doubles drawn in blocks from PCG64."""
    cdef object rng
    cdef double[::1] buf
    cdef Py_ssize_t i, n

    def __cinit__(self, seed, Py_ssize_t chunk=1 << 16):
        self.rng = np.random.default_rng(seed)
        self.buf = self.rng.random(chunk)
        self.n = chunk
        self.i = 0

    cdef inline double next(self):
        cdef double v
        if self.i >= self.n:
            self.buf = self.rng.random(self.n)
            self.i = 0
        v = self.buf[self.i]
        self.i += 1
        return v


cdef inline void _fen_add(double[::1] tree, Py_ssize_t n, Py_ssize_t i,
                          double delta) nogil:
    cdef Py_ssize_t j = i + 1
    while j <= n:
        tree[j] += delta
        j += j & (-j)


cdef inline Py_ssize_t _fen_find(double[::1] tree, Py_ssize_t n,
                                 Py_ssize_t topbit, double target) nogil:
    cdef Py_ssize_t idx = 0
    cdef Py_ssize_t bit = topbit
    cdef Py_ssize_t nxt
    cdef double rem = target
    while bit:
        nxt = idx + bit
        if nxt <= n and tree[nxt] < rem:
            idx = nxt
            rem -= tree[nxt]
        bit >>= 1
    return idx


cdef inline i64 _pack(i64 u, i64 v, i64 n) nogil:
    if u < v:
        return u * n + v
    return v * n + u


def transport_step(in_ptr, in_src, in_dst, gval, wsum, x, double lazy, out):
    """One synchronous mass-transport sweep; see ``_pure.transport_step``."""
    cdef i64[::1] ptr = in_ptr
    cdef i64[::1] src = in_src
    cdef double[::1] g = gval
    cdef double[::1] w = wsum
    cdef double[::1] xv = x
    cdef double[::1] ov = out
    cdef Py_ssize_t n = xv.shape[0]
    cdef Py_ssize_t m, e
    cdef double s, moved, dropped = 0.0
    cdef double c = 1.0 - lazy
    y_np = np.zeros(n)
    cdef double[::1] y = y_np
    with nogil:
        for m in range(n):
            if w[m] > 0.0:
                y[m] = xv[m] / w[m]
            else:
                dropped += xv[m]
        for m in range(n):
            s = 0.0
            for e in range(ptr[m], ptr[m + 1]):
                s += y[src[e]]
            moved = g[m] * s
            ov[m] = lazy * xv[m] + c * moved
    return dropped


def generate_edges(deg, double theta, seed, Py_ssize_t max_resample=200):
    """Biased stub pairing; see ``_pure.generate_edges``."""
    deg_np = np.ascontiguousarray(deg, dtype=np.int64)
    cdef i64[::1] deg_v = deg_np
    cdef Py_ssize_t n = deg_v.shape[0]
    if n == 0:
        return np.zeros((0, 2), dtype=np.int64), 0

    cdef Py_ssize_t i, j, d
    cdef i64 kmax = 0
    for i in range(n):
        if deg_v[i] > kmax:
            kmax = deg_v[i]

    wtab_np = np.zeros(kmax + 1)
    cdef double[::1] wtab = wtab_np
    for d in range(1, kmax + 1):
        wtab[d] = cpow(<double> d, theta + 1.0)

    res_np = np.array(deg_np)
    cdef i64[::1] res = res_np
    cur_np = np.zeros(n)
    tree_np = np.zeros(n + 1)
    cdef double[::1] cur = cur_np
    cdef double[::1] tree = tree_np
    cdef double total = 0.0
    for i in range(n):
        cur[i] = wtab[res[i]]
        total += cur[i]
    for i in range(1, n + 1):
        tree[i] += cur[i - 1]
        j = i + (i & (-i))
        if j <= n:
            tree[j] += tree[i]
    cdef Py_ssize_t topbit = 1
    while topbit * 2 <= n:
        topbit *= 2

    cdef vector[vector[i64]] buckets = vector[vector[i64]](kmax + 1)
    pos_np = np.zeros(n, dtype=np.int64)
    cdef i64[::1] pos = pos_np
    for i in range(n):
        d = res[i]
        pos[i] = <i64> buckets[d].size()
        buckets[d].push_back(i)

    cdef _Uniforms uni = _Uniforms(seed)
    cdef unordered_set[i64] eset
    cdef vector[i64] esrc
    cdef vector[i64] edst
    cdef Py_ssize_t discarded = 0
    cdef Py_ssize_t maxptr = kmax
    cdef Py_ssize_t v, w, idx, cand, p, attempt, bsize
    cdef i64 last, key
    cdef double delta, target

    while True:
        while maxptr > 0 and buckets[maxptr].empty():
            maxptr -= 1
        if maxptr == 0:
            break
        bsize = <Py_ssize_t> buckets[maxptr].size()
        v = <Py_ssize_t> buckets[maxptr][<Py_ssize_t> (uni.next() * bsize)]

        # swap-remove v from its bucket, consume one stub
        p = pos[v]
        last = buckets[maxptr].back()
        buckets[maxptr][p] = last
        pos[last] = p
        buckets[maxptr].pop_back()
        res[v] -= 1
        if res[v] > 0:
            pos[v] = <i64> buckets[res[v]].size()
            buckets[res[v]].push_back(v)
        # exclude v from partner sampling
        delta = 0.0 - cur[v]
        cur[v] = 0.0
        total += delta
        _fen_add(tree, n, v, delta)

        w = -1
        for attempt in range(max_resample):
            if total <= 0.0:
                break
            target = uni.next() * total
            idx = _fen_find(tree, n, topbit, target)
            if idx >= n or cur[idx] <= 0.0:
                continue
            key = _pack(v, idx, n)
            if eset.count(key):
                continue
            w = idx
            break

        if w >= 0:
            p = pos[w]
            last = buckets[res[w]].back()
            buckets[res[w]][p] = last
            pos[last] = p
            buckets[res[w]].pop_back()
            res[w] -= 1
            if res[w] > 0:
                pos[w] = <i64> buckets[res[w]].size()
                buckets[res[w]].push_back(w)
            delta = wtab[res[w]] - cur[w]
            cur[w] = wtab[res[w]]
            total += delta
            _fen_add(tree, n, w, delta)
            eset.insert(_pack(v, w, n))
            esrc.push_back(v)
            edst.push_back(w)
        else:
            discarded += 1
        delta = wtab[res[v]] - cur[v]
        cur[v] = wtab[res[v]]
        total += delta
        _fen_add(tree, n, v, delta)

    cdef Py_ssize_t ne = <Py_ssize_t> esrc.size()
    edges = np.empty((ne, 2), dtype=np.int64)
    cdef i64[:, ::1] ev = edges
    for i in range(ne):
        ev[i, 0] = esrc[i]
        ev[i, 1] = edst[i]
    return edges, discarded


def shuffle_edges(edges, Py_ssize_t n_nodes, Py_ssize_t attempts, seed):
    """Degree-preserving double-edge swaps; see ``_pure.shuffle_edges``."""
    out = np.array(edges, dtype=np.int64)
    cdef i64[:, ::1] ev = out
    cdef Py_ssize_t ne = ev.shape[0]
    cdef i64 n = n_nodes
    cdef unordered_set[i64] eset
    cdef Py_ssize_t i, t, e1, e2
    cdef i64 a, b, c, d, tmp, k1, k2
    cdef double u1, u2, u3
    for i in range(ne):
        eset.insert(_pack(ev[i, 0], ev[i, 1], n))

    cdef _Uniforms uni = _Uniforms(seed)
    cdef Py_ssize_t applied = 0
    for t in range(attempts):
        u1 = uni.next()
        u2 = uni.next()
        u3 = uni.next()
        e1 = <Py_ssize_t> (u1 * ne)
        e2 = <Py_ssize_t> (u2 * ne)
        if e1 == e2:
            continue
        a = ev[e1, 0]
        b = ev[e1, 1]
        c = ev[e2, 0]
        d = ev[e2, 1]
        if u3 < 0.5:
            tmp = c
            c = d
            d = tmp
        if a == d or c == b:
            continue
        k1 = _pack(a, d, n)
        if eset.count(k1):
            continue
        k2 = _pack(c, b, n)
        if eset.count(k2):
            continue
        eset.erase(_pack(a, b, n))
        eset.erase(_pack(c, d, n))
        eset.insert(k1)
        eset.insert(k2)
        ev[e1, 0] = a
        ev[e1, 1] = d
        ev[e2, 0] = c
        ev[e2, 1] = b
        applied += 1
    return out, applied
