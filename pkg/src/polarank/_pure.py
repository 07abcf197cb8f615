"""Pure-Python/numpy versions of the hot kernels.

Signatures match the compiled ``_kernels`` module exactly; :mod:`polarank._backend`
picks one at import time.  Bitset rows are Python ints here and packed
``uint64`` words in the compiled version, so callers pass a dense 0/1 matrix
and let each backend pack it.
"""

from __future__ import annotations

import time

import numpy as np

MASK64 = (1 << 64) - 1


class XorShift:
    """xorshift64* generator shared bit-for-bit with the compiled kernels."""

    def __init__(self, seed: int):
        self.state = (seed * 0x9E3779B97F4A7C15 + 1) & MASK64 or 1

    def next(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & MASK64

    def below(self, n: int) -> int:
        return (self.next() >> 11) % n


def _rows_as_ints(M: np.ndarray) -> list[int]:
    packed = np.packbits(np.ascontiguousarray(M, dtype=np.uint8), axis=1, bitorder="little")
    return [int.from_bytes(r.tobytes(), "little") for r in packed]


def rank_gf2(M: np.ndarray) -> int:
    """Rank over GF(2) of a 0/1 matrix; rows reduced against a pivot table."""
    pivots: dict[int, int] = {}
    for v in _rows_as_ints(M & 1):
        while v:
            h = v.bit_length() - 1
            b = pivots.get(h)
            if b is None:
                pivots[h] = v
                break
            v ^= b
    return len(pivots)


def rank_modp(M: np.ndarray, p: int) -> int:
    """Rank over GF(p), p odd; dense elimination on int64 residues."""
    A = np.array(M, dtype=np.int64) % p
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        below = A[r + 1 :, c]
        hit = np.flatnonzero(below)
        if hit.size:
            idx = r + 1 + hit
            A[idx] = (A[idx] - np.outer(A[idx, c], A[r])) % p
        r += 1
    return r


# -- cliques ---------------------------------------------------------------

def local_search(A: np.ndarray, restarts: int, steps: int, seed: int, target: int, tenure: int) -> tuple[list[int], int]:
    """Greedy growth with one-for-one swaps and a tabu list.

    Returns ``(best_clique, restarts_used)``.  Stops as soon as a clique of
    size ``target`` is found.
    """
    n = A.shape[0]
    adj = _rows_as_ints(A)
    nonadj = (1 - A.astype(np.int32))
    np.fill_diagonal(nonadj, 0)
    rng = XorShift(seed)
    best: list[int] = []
    for restart in range(restarts):
        in_clique = np.zeros(n, dtype=bool)
        miss = np.zeros(n, dtype=np.int32)
        tabu = np.zeros(n, dtype=np.int64)
        clique: list[int] = []

        def add(v: int) -> None:
            in_clique[v] = True
            miss[:] += nonadj[v]
            clique.append(v)

        def remove(v: int) -> None:
            in_clique[v] = False
            miss[:] -= nonadj[v]
            clique.remove(v)

        add(rng.below(n))
        if len(clique) > len(best):
            best = sorted(clique)
        for step in range(steps):
            out = ~in_clique
            free = np.flatnonzero(out & (miss == 0))
            if free.size:
                fbits = 0
                for v in free:
                    fbits |= 1 << int(v)
                score = [bin(adj[int(v)] & fbits).count("1") for v in free]
                top = max(score)
                ties = [int(v) for v, s in zip(free, score) if s == top]
                add(ties[rng.below(len(ties))])
                if len(clique) > len(best):
                    best = sorted(clique)
                    if len(best) >= target:
                        return best, restart + 1
                continue
            swaps = np.flatnonzero(out & (miss == 1) & (tabu <= step))
            if swaps.size == 0:
                break
            w = int(swaps[rng.below(swaps.size)])
            u = next(c for c in clique if nonadj[w, c])
            remove(u)
            tabu[u] = step + tenure
            add(w)
    return best, restarts


class _Budget(Exception):
    pass


def max_clique(
    A: np.ndarray,
    order: np.ndarray,
    forced: list[int],
    incumbent: list[int],
    ub: int,
    node_budget: int,
    time_budget: float,
    depth_limit: int = -1,
) -> tuple[list[int], bool, int]:
    """Branch and bound with greedy-coloring bounds (bitset version).

    ``order`` lists vertices in the branching order (position 0 coloured
    first).  Only cliques containing every vertex of ``forced`` are searched;
    ``incumbent`` is a known clique used as the initial lower bound.  Returns
    ``(best, exhausted, nodes)``.
    """
    n = A.shape[0]
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    # adjacency re-indexed into branching order
    B = A[np.ix_(order, order)]
    nbr = _rows_as_ints(B)
    best = list(incumbent)
    nodes = 0
    deadline = time.monotonic() + time_budget
    cur = [int(pos[v]) for v in forced]
    P = (1 << n) - 1
    for v in cur:
        P &= nbr[v]

    def expand(P: int) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes > node_budget or (nodes & 1023) == 0 and time.monotonic() > deadline:
            raise _Budget
        verts: list[int] = []
        bounds: list[int] = []
        U, k = P, 0
        while U:
            k += 1
            Q = U
            while Q:
                low = Q & -Q
                v = low.bit_length() - 1
                Q &= ~nbr[v]
                Q &= ~low
                U &= ~low
                verts.append(v)
                bounds.append(k)
        for i in range(len(verts) - 1, -1, -1):
            if len(cur) + bounds[i] <= len(best):
                return
            v = verts[i]
            cur.append(v)
            R = P & nbr[v]
            if R:
                expand(R)
            elif len(cur) > len(best):
                best = [int(order[u]) for u in cur]
            cur.pop()
            if len(best) >= ub:
                return
            P &= ~(1 << v)

    exhausted = True
    try:
        if len(cur) > len(best):
            best = [int(order[u]) for u in cur]
        if P and len(best) < ub:
            expand(P)
    except _Budget:
        exhausted = False
    return sorted(best), exhausted, nodes


def bfs(offsets: np.ndarray, flat: np.ndarray, sources: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Distances from each source and min(#shortest paths, 2); shapes (S, V).

    Level-synchronous over all sources at once: path counts into each
    vertex are summed over its neighbour segment with ``reduceat``.
    """
    V = len(offsets) - 1
    S = len(sources)
    dist = np.full((V, S), -1, dtype=np.int16)
    cnt = np.zeros((V, S), dtype=np.int8)
    cols = np.arange(S)
    dist[sources, cols] = 0
    cnt[sources, cols] = 1
    frontier = cnt.copy()
    level = 0
    while True:
        level += 1
        reached = np.add.reduceat(frontier[flat].astype(np.int32), offsets[:-1], axis=0)
        new = (dist < 0) & (reached > 0)
        if not new.any():
            break
        dist[new] = level
        frontier = np.where(new, np.minimum(reached, 2), 0).astype(np.int8)
        cnt[new] = frontier[new]
    return np.ascontiguousarray(dist.T), np.ascontiguousarray(cnt.T.astype(np.uint8))
