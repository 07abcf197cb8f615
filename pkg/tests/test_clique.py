import itertools

import numpy as np
import pytest

from polarank import bounds, clique, modrank
from polarank.clique import (
    Graph, greedy_lower_bound, max_clique_exact, max_clique_symmetric, verify_clique,
)
from polarank.repro import planted_clique, random_graph


def brute_force(A):
    n = len(A)
    best = []
    for k in range(n, 0, -1):
        for S in itertools.combinations(range(n), k):
            if all(A[a, b] for a, b in itertools.combinations(S, 2)):
                return k
    return 0


def bron_kerbosch(A):
    nbr = [set(np.flatnonzero(r).tolist()) for r in A]
    best = 0

    def bk(R, P, X):
        nonlocal best
        if not P and not X:
            best = max(best, R)
            return
        u = max(P | X, key=lambda v: len(nbr[v] & P))
        for v in list(P - nbr[u]):
            bk(R + 1, P & nbr[v], X & nbr[v])
            P = P - {v}
            X = X | {v}

    bk(0, set(range(len(A))), set())
    return best


def paley(q):
    sq = {(x * x) % q for x in range(1, q)}
    A = np.zeros((q, q), dtype=np.uint8)
    for a in range(q):
        for b in range(q):
            if a != b and (a - b) % q in sq:
                A[a, b] = 1
    return A


def test_graph_validation():
    with pytest.raises(ValueError):
        Graph(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        Graph(np.eye(2, dtype=int))
    with pytest.raises(ValueError):
        Graph(np.zeros((2, 3), dtype=int))


def test_trivial_graphs(backend):
    K5 = Graph(1 - np.eye(5, dtype=np.uint8))
    assert greedy_lower_bound(K5).size == 5
    r = max_clique_exact(K5)
    assert (r.size, r.optimal) == (5, True)
    E = Graph(np.zeros((6, 6), dtype=np.uint8))
    assert greedy_lower_bound(E).size == 1
    assert max_clique_exact(E).size == 1
    Z = Graph(np.zeros((0, 0), dtype=np.uint8))
    assert max_clique_exact(Z).size == 0 and greedy_lower_bound(Z).size == 0


def test_verify_clique():
    G = Graph.from_edges(4, [(0, 1), (1, 2), (0, 2)])
    assert verify_clique(G, [3])
    assert verify_clique(G, [0, 1, 2])
    assert not verify_clique(G, [0, 3])
    assert not verify_clique(G, [0, 0])
    with pytest.raises(ValueError):
        verify_clique(G, [4])


def test_brute_force_small(backend):
    rng = np.random.default_rng(99)
    for _ in range(60):
        n = int(rng.integers(1, 13))
        A = random_graph(rng, n, float(rng.random()))
        r = max_clique_exact(Graph(A))
        assert r.optimal and r.size == brute_force(A)


def test_against_oracle_200(backend):
    rng = np.random.default_rng(2024)
    for _ in range(200):
        n = int(rng.integers(1, 41))
        A = random_graph(rng, n)
        G = Graph(A)
        r = max_clique_exact(G)
        assert r.optimal and r.size == bron_kerbosch(A)
        assert verify_clique(G, r.witness)


def test_lemma1_planted(rng):
    checked = 0
    for i in range(1000):
        p = (2, 3, 5)[i % 3]
        n = int(rng.integers(2, 31))
        k = int(rng.integers(1, n + 1))
        A, Y = planted_clique(rng, n, k, float(rng.random()))
        assert verify_clique(Graph(A), Y)
        r = modrank.rank_mod_p(A, p).rank
        if (len(Y) - 1) % p == 0:
            assert len(Y) <= r + 1
        else:
            assert len(Y) <= r
        assert len(Y) <= bounds.clique_bound_from_rank(r, p)
        checked += 1
    assert checked == 1000


def test_rank_bound_pruning_sound(backend, rng):
    for _ in range(50):
        n = int(rng.integers(5, 30))
        A, _ = planted_clique(rng, n, int(rng.integers(2, n)), 0.3)
        ub = bounds.clique_bound_from_rank(modrank.rank_mod_p(A, 2).rank, 2)
        r = max_clique_exact(Graph(A), ub)
        assert r.size <= ub and r.bound_used == min(ub, n)
        assert r.size == bron_kerbosch(A)


def test_budget_degrades_to_not_optimal(backend):
    A = paley(101)
    r = max_clique_exact(Graph(A), node_budget=5)
    assert not r.optimal
    assert verify_clique(Graph(A), r.witness)
    with pytest.raises(ValueError):
        max_clique_exact(Graph(A), time_budget=0)


def test_fix_first_vertex(backend):
    A = paley(37)
    G = Graph(A)
    full = max_clique_exact(G)
    fixed = max_clique_exact(G, fix_first_vertex=True)
    assert fixed.size == full.size and 0 in fixed.witness and fixed.optimal


def test_fix_first_guard():
    A = np.zeros((4, 4), dtype=np.uint8)
    A[0, 1] = A[1, 0] = A[1, 2] = A[2, 1] = A[2, 3] = A[3, 2] = 1  # path: degrees differ
    with pytest.raises(ValueError, match="transitive"):
        max_clique_exact(Graph(A), fix_first_vertex=True)
    # regular but not transitive: disjoint union of a triangle and a hexagon
    B = np.zeros((9, 9), dtype=np.uint8)
    for a, b in [(0, 1), (1, 2), (0, 2)] + [(3 + i, 3 + (i + 1) % 6) for i in range(6)]:
        B[a, b] = B[b, a] = 1
    assert not clique.looks_vertex_transitive(Graph(B))


def test_forced_and_incumbent(backend):
    A = paley(29)
    G = Graph(A)
    w = greedy_lower_bound(G, seed=1).witness
    r = max_clique_exact(G, forced=[w[0], w[1]], incumbent=w)
    assert r.size >= len(w)
    with pytest.raises(ValueError):
        max_clique_exact(G, forced=[0, int(np.flatnonzero(A[0] == 0)[1])])


def test_greedy_deterministic_and_backend_independent(rng):
    from polarank import _backend, _pure
    A = random_graph(rng, 60, 0.6)
    G = Graph(A)
    a = greedy_lower_bound(G, restarts=20, seed=5)
    b = greedy_lower_bound(G, restarts=20, seed=5)
    assert a.witness == b.witness
    if _backend.COMPILED:
        c = _backend.kernels.local_search(G.adj, 20, max(100, 4 * G.n), 5, G.n, 7)
        d = _pure.local_search(G.adj, 20, max(100, 4 * G.n), 5, G.n, 7)
        assert sorted(c[0]) == sorted(d[0]) and c[1] == d[1]


def test_symmetric_solver_on_paley(backend):
    q = 61
    A = paley(q)
    shift = [(x + 1) % q for x in range(q)]
    mult = [(x * 4) % q for x in range(q)]  # 4 is a square, so this is an automorphism
    r = max_clique_symmetric(Graph(A), [shift, mult])
    assert r.optimal and r.size == bron_kerbosch(A)
    with pytest.raises(ValueError, match="automorphism"):
        max_clique_symmetric(Graph(A), [[(x * 2) % q for x in range(q)]])


def test_stabilizer_generators_fix_point():
    q = 13
    shift = np.array([(x + 1) % q for x in range(q)])
    mult = np.array([(x * 2) % q for x in range(q)])
    stab = clique.stabilizer_generators([shift, mult], 0)
    assert stab and all(h[0] == 0 for h in stab)
    assert clique.orbits(stab, q) == [[0], list(range(1, q))]


def test_h34_partial_spread(h34):
    G = Graph(h34[1][2])
    r = max_clique_exact(G, fix_first_vertex=True)
    assert r.optimal
    assert r.size == max_clique_exact(G).size == 6
    assert r.size <= min(b.value for b in bounds.baseline_bounds(2, 2))


def test_o2_witness_of_size_24(o2_rel):
    G = Graph(o2_rel[4])
    r = greedy_lower_bound(G, restarts=10**6, seed=3, steps=1000, target=24)
    assert r.size == 24 and verify_clique(G, r.witness)
