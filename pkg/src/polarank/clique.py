"""Maximum cliques: heuristic lower bounds and an exact branch and bound.

The exact search colours candidates greedily (first fit, vertices in
largest-first degree order, ties by index) and branches on the highest
colour class first; a node is pruned once the colour count cannot beat
the incumbent.  Hot loops live in the compiled kernels.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _backend

NO_LIMIT = 10**15


@dataclass(frozen=True)
class Graph:
    """Simple graph given by a symmetric 0/1 adjacency matrix with zero diagonal."""

    adj: np.ndarray

    def __post_init__(self) -> None:
        A = np.ascontiguousarray(np.asarray(self.adj), dtype=np.uint8)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError(f"adjacency must be square, got shape {A.shape}")
        if (A > 1).any():
            raise ValueError("adjacency entries must be 0 or 1")
        if (A != A.T).any():
            x, y = np.argwhere(A != A.T)[0]
            raise ValueError(f"adjacency not symmetric at ({x}, {y})")
        if A.diagonal().any():
            raise ValueError(f"loop at vertex {int(np.flatnonzero(A.diagonal())[0])}")
        object.__setattr__(self, "adj", A)

    @property
    def n(self) -> int:
        return self.adj.shape[0]

    @property
    def degrees(self) -> np.ndarray:
        return self.adj.sum(1, dtype=np.int64)

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        A = np.zeros((n, n), dtype=np.uint8)
        for a, b in edges:
            A[a, b] = A[b, a] = 1
        return cls(A)


@dataclass
class CliqueResult:
    size: int
    witness: list[int]
    optimal: bool
    bound_used: int | None
    elapsed: float
    nodes: int = 0
    method: str = ""
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "size": self.size, "witness": self.witness, "optimal": self.optimal,
            "bound_used": self.bound_used, "elapsed": round(self.elapsed, 6),
            "nodes": self.nodes, "method": self.method, **self.extra,
        }


def verify_clique(G: Graph, witness: Sequence[int]) -> bool:
    w = [int(v) for v in witness]
    if any(not 0 <= v < G.n for v in w):
        raise ValueError("witness vertex out of range")
    if len(set(w)) != len(w):
        return False
    sub = G.adj[np.ix_(w, w)]
    return bool(sub.sum() == len(w) * (len(w) - 1))


def _checked(G: Graph, res: CliqueResult) -> CliqueResult:
    if not verify_clique(G, res.witness) or len(res.witness) != res.size:
        raise AssertionError("solver returned an invalid clique")  # pragma: no cover
    return res


def greedy_lower_bound(G: Graph, restarts: int = 100, seed: int = 0, *, steps: int | None = None,
                       target: int | None = None, tenure: int = 7) -> CliqueResult:
    """Randomized greedy growth with tabu one-for-one swaps.

    Deterministic for a fixed seed, and identical across backends.
    """
    t0 = time.perf_counter()
    if G.n == 0:
        return CliqueResult(0, [], False, None, 0.0, method="local_search")
    if steps is None:
        steps = max(100, 4 * G.n)
    if target is None:
        target = G.n
    best, used = _backend.kernels.local_search(G.adj, restarts, steps, seed, target, tenure)
    res = CliqueResult(len(best), sorted(int(v) for v in best), False, None,
                       time.perf_counter() - t0, method="local_search",
                       extra={"restarts_used": int(used), "seed": seed})
    return _checked(G, res)


def largest_first_order(G: Graph) -> np.ndarray:
    """Vertices by non-increasing degree, ties broken by index."""
    return np.argsort(-G.degrees, kind="stable")


def colouring_bound(G: Graph, order: np.ndarray | None = None) -> int:
    """Number of colours used by first-fit colouring in the given order."""
    if G.n == 0:
        return 0
    if order is None:
        order = largest_first_order(G)
    colours = np.full(G.n, -1, dtype=np.int64)
    used = 0
    for v in order:
        taken = set(colours[G.adj[v] == 1].tolist())
        c = 0
        while c in taken:
            c += 1
        colours[v] = c
        used = max(used, c + 1)
    return used


def distance_profiles(G: Graph) -> np.ndarray:
    """Row v counts the vertices at graph distance 0, 1, 2, ... from v (-1 distance dropped)."""
    n = G.n
    A = G.adj.astype(np.float32)
    reached = np.eye(n, dtype=bool)
    frontier = reached.copy()
    cols = [frontier.sum(1)]
    while True:
        nxt = (frontier.astype(np.float32) @ A > 0) & ~reached
        if not nxt.any():
            break
        reached |= nxt
        frontier = nxt
        cols.append(nxt.sum(1))
    return np.stack(cols, axis=1)


def looks_vertex_transitive(G: Graph) -> bool:
    """Necessary conditions only: constant degree and identical distance profiles."""
    if G.n == 0:
        return True
    deg = G.degrees
    if (deg != deg[0]).any():
        return False
    prof = distance_profiles(G)
    return bool((prof == prof[0]).all())


def max_clique_exact(
    G: Graph,
    upper_bound: int | None = None,
    *,
    fix_first_vertex: bool = False,
    forced: Sequence[int] = (),
    incumbent: Sequence[int] | None = None,
    node_budget: int | None = None,
    time_budget: float | None = None,
) -> CliqueResult:
    """Exact maximum clique, or the best found when a budget runs out.

    The search stops early once a clique of size ``min(upper_bound, n)`` is
    found, so ``optimal`` is relative to ``bound_used``.  With
    ``fix_first_vertex`` only cliques through vertex 0 are searched, which
    is complete when the graph is vertex-transitive; ``forced`` adds further
    vertices every searched clique must contain (the caller vouches for the
    symmetry argument).
    """
    t0 = time.perf_counter()
    n = G.n
    if node_budget is not None and node_budget <= 0 or time_budget is not None and time_budget <= 0:
        raise ValueError("budget must be positive")
    ub = n if upper_bound is None else min(int(upper_bound), n)
    if n == 0:
        return CliqueResult(0, [], True, ub, 0.0, method="branch_and_bound")
    must = [int(v) for v in forced]
    if fix_first_vertex:
        if not looks_vertex_transitive(G):
            raise ValueError("fix_first_vertex needs a vertex-transitive graph; degree or distance profiles differ")
        if 0 not in must:
            must.insert(0, 0)
    if must and not verify_clique(G, must):
        raise ValueError("forced vertices do not form a clique")
    inc = [int(v) for v in (incumbent or [])]
    if inc and not verify_clique(G, inc):
        raise ValueError("incumbent is not a clique")
    order = largest_first_order(G)
    depth = colouring_bound(G, order)
    best, exhausted, nodes = _backend.kernels.max_clique(
        G.adj, order, must, inc, ub,
        NO_LIMIT if node_budget is None else int(node_budget),
        1e18 if time_budget is None else float(time_budget),
        depth,
    )
    best = sorted(int(v) for v in best)
    res = CliqueResult(len(best), best, bool(exhausted), ub, time.perf_counter() - t0, int(nodes),
                       method="branch_and_bound",
                       extra={"forced": must, "backend": _backend.NAME})
    return _checked(G, res)


# -- symmetry from known automorphisms ---------------------------------------------

def is_automorphism(G: Graph, perm: Sequence[int]) -> bool:
    g = np.asarray(perm, dtype=np.intp)
    if sorted(g.tolist()) != list(range(G.n)):
        return False
    return bool((G.adj[np.ix_(g, g)] == G.adj).all())


def _orbit_transversal(gens: list[np.ndarray], x: int) -> dict[int, np.ndarray]:
    """Map each y in the orbit of x to a group element sending x to y."""
    n = len(gens[0])
    trans = {x: np.arange(n)}
    todo = [x]
    while todo:
        y = todo.pop()
        u = trans[y]
        for s in gens:
            z = int(s[y])
            if z not in trans:
                trans[z] = s[u]
                todo.append(z)
    return trans


def stabilizer_generators(gens: Sequence[Sequence[int]], x: int) -> list[np.ndarray]:
    """Schreier generators of the stabilizer of x (they generate it in full)."""
    gens = [np.asarray(g, dtype=np.intp) for g in gens]
    trans = _orbit_transversal(gens, x)
    out: dict[bytes, np.ndarray] = {}
    ident = np.arange(len(gens[0]))
    for y, u in trans.items():
        for s in gens:
            su = s[u]
            v = trans[int(s[y])]
            inv = np.empty_like(v)
            inv[v] = ident
            h = inv[su]
            if not (h == ident).all():
                out.setdefault(h.tobytes(), h)
    return list(out.values())


def orbits(gens: Sequence[np.ndarray], n: int) -> list[list[int]]:
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for g in gens:
        for a, b in enumerate(np.asarray(g).tolist()):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for a in range(n):
        groups.setdefault(find(a), []).append(a)
    return sorted(groups.values())


def max_clique_symmetric(
    G: Graph,
    generators: Sequence[Sequence[int]],
    upper_bound: int | None = None,
    *,
    incumbent: Sequence[int] | None = None,
    node_budget: int | None = None,
    time_budget: float | None = None,
) -> CliqueResult:
    """Exact maximum clique using a group of automorphisms given by generators.

    Every generator is checked to be an automorphism.  If the group is
    transitive, any clique can be moved to contain vertex 0; its other
    vertices are neighbours of 0, and the stabilizer of 0 moves one of them
    to an orbit representative.  Orbits of neighbours are handled in turn,
    each search dropping the vertices of earlier orbits, since a clique
    meeting an earlier orbit was already covered there.
    """
    t0 = time.perf_counter()
    gens = [np.asarray(g, dtype=np.intp) for g in generators]
    for i, g in enumerate(gens):
        if not is_automorphism(G, g):
            raise ValueError(f"generator {i} is not an automorphism")
    if len(orbits(gens, G.n)) != 1:
        raise ValueError("group is not transitive on vertices")
    stab = stabilizer_generators(gens, 0)
    nbrs = set(np.flatnonzero(G.adj[0]).tolist())
    parts = [o for o in orbits(stab, G.n) if o[0] in nbrs]
    best = [int(v) for v in (incumbent or [0])]
    if not verify_clique(G, best):
        raise ValueError("incumbent is not a clique")
    ub = G.n if upper_bound is None else min(int(upper_bound), G.n)
    optimal, nodes = True, 0
    dropped: set[int] = set()
    for orb in parts:
        if len(best) >= ub:
            break
        keep = [v for v in range(G.n) if v not in dropped]
        index = {v: i for i, v in enumerate(keep)}
        sub = Graph(G.adj[np.ix_(keep, keep)])
        left = None if time_budget is None else max(time_budget - (time.perf_counter() - t0), 1e-3)
        local_inc = [index[v] for v in best] if all(v in index for v in best) else []
        r = max_clique_exact(sub, ub, forced=[index[0], index[orb[0]]],
                             incumbent=local_inc if len(local_inc) == len(best) else None,
                             node_budget=node_budget, time_budget=left)
        nodes += r.nodes
        if r.size > len(best):
            best = [keep[i] for i in r.witness]
        if not r.optimal:
            optimal = False
            break
        dropped.update(orb)
    res = CliqueResult(len(best), sorted(best), optimal, ub, time.perf_counter() - t0, nodes,
                       method="branch_and_bound+orbits",
                       extra={"orbit_sizes": [len(o) for o in parts], "stabilizer_generators": len(stab),
                              "backend": _backend.NAME})
    return _checked(G, res)
