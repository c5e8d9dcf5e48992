"""Pure-Python kernels: the fallback backend when the compiled core is absent.

Each function here mirrors its counterpart in ``_fast`` (the Cython
extension): same PCG64 uniform stream, same order of floating-point
operations. For a fixed seed the two backends therefore produce identical
outputs, which the test suite asserts. Keep the implementations in lockstep
when editing either side.
"""

import math

import numpy as np

NAME = "pure"


class _Uniforms:
    """Sequential uniform[0,1) doubles drawn in blocks from PCG64."""

    __slots__ = ("_rng", "_buf", "_i", "_n")

    def __init__(self, seed, chunk=1 << 16):
        self._rng = np.random.default_rng(seed)
        self._buf = self._rng.random(chunk)
        self._n = chunk
        self._i = 0

    def next(self):
        i = self._i
        if i >= self._n:
            self._buf = self._rng.random(self._n)
            i = 0
        self._i = i + 1
        return self._buf[i]


def transport_step(in_ptr, in_src, in_dst, gval, wsum, x, lazy, out):
    """One synchronous mass-transport sweep over all edges.

    Reads ``x`` (mass at time t), writes mass at t+1 into ``out``
    (separate storage). ``in_src``/``in_dst`` list every arc sorted by
    (destination, source); ``in_ptr`` is the matching CSR pointer, unused
    here but part of the shared kernel signature. Nodes with zero total
    destination weight (``wsum == 0``) send nothing; the sum of their mass
    is returned so the caller can account for the drop.
    """
    n = x.shape[0]
    y = np.divide(x, wsum, out=np.zeros_like(x), where=wsum > 0.0)
    dropped = float(x[wsum <= 0.0].sum())
    if in_src.shape[0]:
        sums = np.bincount(in_dst, weights=y[in_src], minlength=n)
    else:
        sums = np.zeros(n)
    moved = gval * sums
    out[:] = lazy * x + (1.0 - lazy) * moved
    return dropped


def generate_edges(deg, theta, seed, max_resample=200):
    """Pair stubs of a prescribed degree sequence into a simple graph.

    Loop per stub: take a uniformly random node v among those with the
    largest residual degree, consume one of its stubs, then draw a partner
    w != v with probability proportional to ``residual(w) ** (theta + 1)``,
    rejecting partners already adjacent to v (up to ``max_resample`` draws,
    after which v's stub is discarded). Returns ``(edges, discarded)`` where
    ``edges`` is an (E, 2) int64 array in creation order.
    """
    deg = np.ascontiguousarray(deg, dtype=np.int64)
    n = int(deg.shape[0])
    if n == 0:
        return np.zeros((0, 2), dtype=np.int64), 0
    kmax = int(deg.max())

    wtab = [0.0] * (kmax + 1)
    for d in range(1, kmax + 1):
        wtab[d] = math.pow(float(d), theta + 1.0)

    res = [int(d) for d in deg]
    cur = [0.0] * n
    tree = [0.0] * (n + 1)
    total = 0.0
    for i in range(n):
        cur[i] = wtab[res[i]]
        total += cur[i]
    for i in range(1, n + 1):
        tree[i] += cur[i - 1]
        j = i + (i & -i)
        if j <= n:
            tree[j] += tree[i]
    topbit = 1
    while topbit * 2 <= n:
        topbit *= 2

    def set_weight(i, v):
        nonlocal total
        delta = v - cur[i]
        cur[i] = v
        total += delta
        j = i + 1
        while j <= n:
            tree[j] += delta
            j += j & -j

    buckets = [[] for _ in range(kmax + 1)]
    pos = [0] * n
    for i in range(n):
        d = res[i]
        pos[i] = len(buckets[d])
        buckets[d].append(i)

    def bucket_remove(node, d):
        b = buckets[d]
        p = pos[node]
        last = b[-1]
        b[p] = last
        pos[last] = p
        b.pop()

    def bucket_add(node, d):
        b = buckets[d]
        pos[node] = len(b)
        b.append(node)

    uni = _Uniforms(seed)
    eset = set()
    src = []
    dst = []
    discarded = 0
    maxptr = kmax

    while True:
        while maxptr > 0 and not buckets[maxptr]:
            maxptr -= 1
        if maxptr == 0:
            break
        b = buckets[maxptr]
        v = b[int(uni.next() * len(b))]
        bucket_remove(v, maxptr)
        res[v] -= 1
        if res[v] > 0:
            bucket_add(v, res[v])
        set_weight(v, 0.0)

        w = -1
        for _ in range(max_resample):
            if total <= 0.0:
                break
            target = uni.next() * total
            idx = 0
            bit = topbit
            rem = target
            while bit:
                nxt = idx + bit
                if nxt <= n and tree[nxt] < rem:
                    idx = nxt
                    rem -= tree[nxt]
                bit >>= 1
            if idx >= n or cur[idx] <= 0.0:
                continue
            key = v * n + idx if v < idx else idx * n + v
            if key in eset:
                continue
            w = idx
            break

        if w >= 0:
            bucket_remove(w, res[w])
            res[w] -= 1
            if res[w] > 0:
                bucket_add(w, res[w])
            set_weight(w, wtab[res[w]])
            key = v * n + w if v < w else w * n + v
            eset.add(key)
            src.append(v)
            dst.append(w)
        else:
            discarded += 1
        set_weight(v, wtab[res[v]])

    edges = np.empty((len(src), 2), dtype=np.int64)
    edges[:, 0] = src
    edges[:, 1] = dst
    return edges, discarded


def shuffle_edges(edges, n_nodes, attempts, seed):
    """Degree-preserving double-edge swaps on an undirected simple graph.

    Per attempt: pick two random edges (a,b), (c,d), flip the orientation
    of the second with probability 1/2, and rewire to (a,d), (c,b) unless
    that would create a self-loop or a duplicate edge. Exactly three
    uniforms are consumed per attempt. Returns ``(edges, applied)``.
    """
    edges = np.array(edges, dtype=np.int64)
    ne = int(edges.shape[0])
    n = int(n_nodes)
    ea = [int(v) for v in edges[:, 0]]
    eb = [int(v) for v in edges[:, 1]]

    def pack(u, v):
        return u * n + v if u < v else v * n + u

    eset = set()
    for i in range(ne):
        eset.add(pack(ea[i], eb[i]))

    uni = _Uniforms(seed)
    applied = 0
    for _ in range(attempts):
        u1 = uni.next()
        u2 = uni.next()
        u3 = uni.next()
        e1 = int(u1 * ne)
        e2 = int(u2 * ne)
        if e1 == e2:
            continue
        a, b = ea[e1], eb[e1]
        c, d = ea[e2], eb[e2]
        if u3 < 0.5:
            c, d = d, c
        if a == d or c == b:
            continue
        k1 = pack(a, d)
        if k1 in eset:
            continue
        k2 = pack(c, b)
        if k2 in eset:
            continue
        eset.discard(pack(a, b))
        eset.discard(pack(c, d))
        eset.add(k1)
        eset.add(k2)
        ea[e1], eb[e1] = a, d
        ea[e2], eb[e2] = c, b
        applied += 1

    out = np.empty((ne, 2), dtype=np.int64)
    out[:, 0] = ea
    out[:, 1] = eb
    return out, applied
