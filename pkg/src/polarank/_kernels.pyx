# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: p-rank elimination and bitset clique search.

Same call signatures and results as :mod:`polarank._pure`.
"""

import time

import numpy as np

cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t, int32_t, int16_t, uint8_t
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy
from posix.time cimport clock_gettime, timespec, CLOCK_MONOTONIC

cnp.import_array()


cdef inline int popcount64(uint64_t x) nogil:
    return __builtin_popcountll(x)

cdef inline int ctz64(uint64_t x) nogil:
    return __builtin_ctzll(x)

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_clzll(unsigned long long) nogil


def pack_rows(M):
    """0/1 matrix -> (rows, words) uint64 array, bit j of row i is M[i, j]."""
    A = np.ascontiguousarray(M, dtype=np.uint8) & 1
    rows, cols = A.shape
    words = (cols + 63) // 64
    padded = np.zeros((rows, words * 64), dtype=np.uint8)
    padded[:, :cols] = A
    return np.packbits(padded, axis=1, bitorder="little").view(np.uint64).reshape(rows, words).copy()


# -- ranks -----------------------------------------------------------------

def rank_gf2(M):
    cdef uint64_t[:, ::1] W = pack_rows(M)
    cdef Py_ssize_t rows = W.shape[0], nw = W.shape[1]
    cdef Py_ssize_t i, j, k, r = 0
    cdef Py_ssize_t *pivw = <Py_ssize_t *> malloc(sizeof(Py_ssize_t) * (rows + 1))
    cdef uint64_t *pivm = <uint64_t *> malloc(sizeof(uint64_t) * (rows + 1))
    cdef uint64_t *v
    cdef uint64_t x
    with nogil:
        for i in range(rows):
            v = &W[i, 0]
            # reduce against the basis rows already stored in W[0:r]
            for k in range(r):
                if v[pivw[k]] & pivm[k]:
                    for j in range(pivw[k], nw):
                        v[j] ^= W[k, j]
            for j in range(nw):
                x = v[j]
                if x:
                    if i != r:
                        memcpy(&W[r, 0], v, sizeof(uint64_t) * nw)
                    pivw[r] = j
                    pivm[r] = x & (~x + 1)
                    r += 1
                    break
    free(pivw)
    free(pivm)
    return r


def rank_modp(M, int64_t p):
    """Rank over GF(p) by reducing each row against a normalized basis.

    Accumulation is lazy in int64; a row is renormalized mod p before the
    bound ``(p-1)^2 * steps`` could overflow.
    """
    cdef int64_t[:, ::1] A = np.ascontiguousarray(np.asarray(M, dtype=np.int64) % p)
    cdef Py_ssize_t rows = A.shape[0], cols = A.shape[1]
    cdef Py_ssize_t i, j, k, r = 0, piv
    cdef int64_t c, inv, lim
    cdef Py_ssize_t *pivc = <Py_ssize_t *> malloc(sizeof(Py_ssize_t) * (rows + 1))
    cdef int64_t *v
    cdef int64_t *b
    cdef int64_t since
    lim = (<int64_t> 1 << 62) // ((p - 1) * (p - 1) + 1)
    with nogil:
        for i in range(rows):
            v = &A[i, 0]
            since = 0
            for k in range(r):
                c = v[pivc[k]] % p
                if c == 0:
                    continue
                c = p - c
                b = &A[k, 0]
                for j in range(pivc[k], cols):
                    v[j] += c * b[j]
                since += 1
                if since >= lim:
                    for j in range(cols):
                        v[j] %= p
                    since = 0
            piv = -1
            for j in range(cols):
                v[j] %= p
                if piv < 0 and v[j] != 0:
                    piv = j
            if piv < 0:
                continue
            # modular inverse by Fermat would need pow; extended Euclid instead
            inv = _inverse(v[piv], p)
            for j in range(piv, cols):
                v[j] = (v[j] * inv) % p
            if i != r:
                memcpy(&A[r, 0], v, sizeof(int64_t) * cols)
            pivc[r] = piv
            r += 1
    free(pivc)
    return r


cdef inline int64_t _inverse(int64_t a, int64_t p) nogil:
    cdef int64_t t = 0, nt = 1, rr = p, nr = a % p, qq, tmp
    while nr != 0:
        qq = rr // nr
        tmp = t - qq * nt
        t = nt
        nt = tmp
        tmp = rr - qq * nr
        rr = nr
        nr = tmp
    if t < 0:
        t += p
    return t


# -- random numbers (bit-identical to _pure.XorShift) ----------------------

cdef struct Rng:
    uint64_t state

cdef inline uint64_t rng_next(Rng *g) nogil:
    cdef uint64_t x = g.state
    x ^= x >> 12
    x ^= x << 25
    x ^= x >> 27
    g.state = x
    return x * <uint64_t> 0x2545F4914F6CDD1D

cdef inline Py_ssize_t rng_below(Rng *g, Py_ssize_t n) nogil:
    return <Py_ssize_t> ((rng_next(g) >> 11) % <uint64_t> n)


# -- local search ------------------------------------------------------------

def local_search(M, Py_ssize_t restarts, Py_ssize_t steps, uint64_t seed, Py_ssize_t target, Py_ssize_t tenure):
    cdef uint64_t[:, ::1] adj = pack_rows(M)
    cdef Py_ssize_t n = adj.shape[0], nw = adj.shape[1]
    cdef cnp.ndarray[uint8_t, ndim=2, mode="c"] dense = np.ascontiguousarray(M, dtype=np.uint8)
    cdef uint8_t[:, ::1] A = dense
    cdef int32_t[::1] miss = np.zeros(n, dtype=np.int32)
    cdef int64_t[::1] tabu = np.zeros(n, dtype=np.int64)
    cdef uint8_t[::1] inc = np.zeros(n, dtype=np.uint8)
    cdef Py_ssize_t[::1] clique = np.zeros(n + 1, dtype=np.intp)
    cdef Py_ssize_t[::1] cand = np.zeros(n + 1, dtype=np.intp)
    cdef Py_ssize_t[::1] best = np.zeros(n + 1, dtype=np.intp)
    cdef uint64_t[::1] fbits = np.zeros(nw, dtype=np.uint64)
    cdef Py_ssize_t size, best_size = 0, nc, ncand, i, j, v, w, u, step, restart, used = restarts
    cdef int score, top
    cdef Rng g
    g.state = seed * <uint64_t> 0x9E3779B97F4A7C15 + 1
    if g.state == 0:
        g.state = 1
    with nogil:
        for restart in range(restarts):
            for i in range(n):
                miss[i] = 0
                tabu[i] = 0
                inc[i] = 0
            size = 0
            v = rng_below(&g, n)
            _ls_add(A, miss, inc, clique, &size, v, n)
            if size > best_size:
                best_size = _ls_record(clique, size, best)
            for step in range(steps):
                # free vertices: outside, adjacent to all of the clique
                ncand = 0
                for j in range(nw):
                    fbits[j] = 0
                for i in range(n):
                    if not inc[i] and miss[i] == 0:
                        cand[ncand] = i
                        ncand += 1
                        fbits[i >> 6] |= (<uint64_t> 1) << (i & 63)
                if ncand:
                    top = -1
                    nc = 0
                    for i in range(ncand):
                        score = 0
                        for j in range(nw):
                            score += popcount64(adj[cand[i], j] & fbits[j])
                        if score > top:
                            top = score
                            nc = 0
                        if score == top:
                            cand[nc] = cand[i]
                            nc += 1
                    v = cand[rng_below(&g, nc)]
                    _ls_add(A, miss, inc, clique, &size, v, n)
                    if size > best_size:
                        best_size = _ls_record(clique, size, best)
                        if best_size >= target:
                            used = restart + 1
                            break
                    continue
                ncand = 0
                for i in range(n):
                    if not inc[i] and miss[i] == 1 and tabu[i] <= step:
                        cand[ncand] = i
                        ncand += 1
                if ncand == 0:
                    break
                w = cand[rng_below(&g, ncand)]
                u = -1
                for i in range(size):
                    if not A[w, clique[i]]:
                        u = clique[i]
                        break
                _ls_remove(A, miss, inc, clique, &size, u, n)
                tabu[u] = step + tenure
                _ls_add(A, miss, inc, clique, &size, w, n)
            if best_size >= target:
                break
    out = sorted(int(best[i]) for i in range(best_size))
    return out, int(used)


cdef inline void _ls_add(uint8_t[:, ::1] A, int32_t[::1] miss, uint8_t[::1] inc,
                         Py_ssize_t[::1] clique, Py_ssize_t *size, Py_ssize_t v, Py_ssize_t n) nogil:
    cdef Py_ssize_t i
    inc[v] = 1
    for i in range(n):
        if i != v and not A[v, i]:
            miss[i] += 1
    clique[size[0]] = v
    size[0] += 1


cdef inline void _ls_remove(uint8_t[:, ::1] A, int32_t[::1] miss, uint8_t[::1] inc,
                            Py_ssize_t[::1] clique, Py_ssize_t *size, Py_ssize_t v, Py_ssize_t n) nogil:
    cdef Py_ssize_t i, k = 0
    inc[v] = 0
    for i in range(n):
        if i != v and not A[v, i]:
            miss[i] -= 1
    # keep insertion order of the remaining members
    for i in range(size[0]):
        if clique[i] != v:
            clique[k] = clique[i]
            k += 1
    size[0] = k


cdef inline Py_ssize_t _ls_record(Py_ssize_t[::1] clique, Py_ssize_t size, Py_ssize_t[::1] best) nogil:
    cdef Py_ssize_t i
    for i in range(size):
        best[i] = clique[i]
    return size


# -- exact maximum clique ------------------------------------------------------

cdef struct Search:
    Py_ssize_t n
    Py_ssize_t nw
    uint64_t *adj          # n * nw, rows in branching order
    uint64_t *pool         # (depth_max + 1) * nw candidate sets
    uint64_t *scratch      # 2 * nw, colouring work space
    Py_ssize_t *verts      # (depth_max + 1) * n
    Py_ssize_t *bounds     # (depth_max + 1) * n
    Py_ssize_t *cur
    Py_ssize_t cur_size
    Py_ssize_t *best
    Py_ssize_t best_size
    Py_ssize_t ub
    int64_t nodes
    int64_t node_budget
    double deadline
    bint stopped
    Py_ssize_t depth_max


cdef double _now() nogil:
    cdef timespec ts
    clock_gettime(CLOCK_MONOTONIC, &ts)
    return ts.tv_sec + 1e-9 * ts.tv_nsec


cdef void _expand(Search *s, Py_ssize_t depth) nogil:
    cdef Py_ssize_t nw = s.nw, n = s.n
    cdef uint64_t *P = s.pool + depth * nw
    cdef uint64_t *R = s.pool + (depth + 1) * nw
    cdef Py_ssize_t *verts = s.verts + depth * n
    cdef Py_ssize_t *bounds = s.bounds + depth * n
    cdef Py_ssize_t count = 0, k = 0, i, j, v, w
    cdef uint64_t *U
    cdef uint64_t *Q
    cdef uint64_t x, nonempty
    cdef uint64_t *row
    s.nodes += 1
    if s.nodes > s.node_budget:
        s.stopped = True
        return
    if (s.nodes & 1023) == 0 and _now() > s.deadline:
        s.stopped = True
        return
    # greedy sequential colouring of P in index order
    U = s.scratch
    Q = s.scratch + nw
    memcpy(U, P, sizeof(uint64_t) * nw)
    while True:
        nonempty = 0
        for j in range(nw):
            nonempty |= U[j]
        if not nonempty:
            break
        k += 1
        memcpy(Q, U, sizeof(uint64_t) * nw)
        for j in range(nw):
            while Q[j]:
                x = Q[j] & (~Q[j] + 1)
                v = j * 64 + ctz64(x)
                row = s.adj + v * nw
                Q[j] &= ~x
                U[j] &= ~x
                for w in range(j, nw):
                    Q[w] &= ~row[w]
                verts[count] = v
                bounds[count] = k
                count += 1
    for i in range(count - 1, -1, -1):
        if s.cur_size + bounds[i] <= s.best_size:
            return
        v = verts[i]
        row = s.adj + v * nw
        nonempty = 0
        for j in range(nw):
            R[j] = P[j] & row[j]
            nonempty |= R[j]
        s.cur[s.cur_size] = v
        s.cur_size += 1
        if nonempty:
            _expand(s, depth + 1)
        elif s.cur_size > s.best_size:
            memcpy(s.best, s.cur, sizeof(Py_ssize_t) * s.cur_size)
            s.best_size = s.cur_size
        s.cur_size -= 1
        if s.stopped or s.best_size >= s.ub:
            return
        P[v >> 6] &= ~((<uint64_t> 1) << (v & 63))


def max_clique(M, order, forced, incumbent, Py_ssize_t ub, int64_t node_budget, double time_budget, Py_ssize_t depth_limit=-1):
    A = np.asarray(M, dtype=np.uint8)
    order = np.asarray(order, dtype=np.intp)
    n = A.shape[0]
    pos = np.empty(n, dtype=np.intp)
    pos[order] = np.arange(n)
    if depth_limit < 0:
        depth_limit = n
    cdef uint64_t[:, ::1] W = pack_rows(A[np.ix_(order, order)])
    cdef Py_ssize_t nw = W.shape[1], depth_max = min(n, depth_limit) + 2, i, j
    cdef Search s
    s.n = n
    s.nw = nw
    s.adj = &W[0, 0]
    s.pool = <uint64_t *> malloc(sizeof(uint64_t) * nw * (depth_max + 2))
    s.verts = <Py_ssize_t *> malloc(sizeof(Py_ssize_t) * n * (depth_max + 1))
    s.bounds = <Py_ssize_t *> malloc(sizeof(Py_ssize_t) * n * (depth_max + 1))
    s.cur = <Py_ssize_t *> malloc(sizeof(Py_ssize_t) * (n + 1))
    s.best = <Py_ssize_t *> malloc(sizeof(Py_ssize_t) * (n + 1))
    s.cur_size = 0
    s.best_size = 0
    s.ub = ub
    s.nodes = 0
    s.node_budget = node_budget
    s.deadline = _now() + time_budget
    s.scratch = <uint64_t *> malloc(sizeof(uint64_t) * nw * 2)
    s.stopped = False
    s.depth_max = depth_max
    best_py = [int(v) for v in incumbent]
    cdef uint64_t nonempty = 0
    try:
        # candidate set: all vertices, cut down by the forced ones
        for j in range(nw):
            s.pool[j] = ~(<uint64_t> 0)
        if n % 64:
            s.pool[nw - 1] = ((<uint64_t> 1) << (n % 64)) - 1
        for v in forced:
            i = pos[v]
            s.cur[s.cur_size] = i
            s.cur_size += 1
            for j in range(nw):
                s.pool[j] &= W[i, j]
        if s.cur_size > len(best_py):
            best_py = [int(order[s.cur[i]]) for i in range(s.cur_size)]
        s.best_size = len(best_py)
        for j in range(nw):
            nonempty |= s.pool[j]
        if nonempty and s.best_size < ub:
            with nogil:
                _expand(&s, 0)
            if s.best_size > len(best_py):
                best_py = [int(order[s.best[i]]) for i in range(s.best_size)]
        return sorted(best_py), not s.stopped, int(s.nodes)
    finally:
        free(s.pool)
        free(s.scratch)
        free(s.verts)
        free(s.bounds)
        free(s.cur)
        free(s.best)


# -- breadth-first search with shortest-path multiplicities ---------------------

def bfs(offsets, flat, sources):
    """Distances from each source and min(#shortest paths, 2); shapes (S, V)."""
    cdef int64_t[::1] off = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef int64_t[::1] nbr = np.ascontiguousarray(flat, dtype=np.int64)
    cdef int64_t[::1] src = np.ascontiguousarray(sources, dtype=np.int64)
    cdef Py_ssize_t V = off.shape[0] - 1, S = src.shape[0]
    dist_np = np.full((S, V), -1, dtype=np.int16)
    mult_np = np.zeros((S, V), dtype=np.uint8)
    cdef int16_t[:, ::1] dist = dist_np
    cdef uint8_t[:, ::1] mult = mult_np
    cdef int64_t[::1] queue = np.empty(V, dtype=np.int64)
    cdef Py_ssize_t si, head, tail, x, y, e
    cdef int16_t dx
    with nogil:
        for si in range(S):
            dist[si, src[si]] = 0
            mult[si, src[si]] = 1
            queue[0] = src[si]
            head = 0
            tail = 1
            while head < tail:
                x = queue[head]
                head += 1
                dx = dist[si, x]
                for e in range(off[x], off[x + 1]):
                    y = nbr[e]
                    if dist[si, y] < 0:
                        dist[si, y] = dx + 1
                        mult[si, y] = mult[si, x]
                        queue[tail] = y
                        tail += 1
                    elif dist[si, y] == dx + 1:
                        mult[si, y] = 2 if mult[si, y] + mult[si, x] >= 2 else 1
    return dist_np, mult_np
