"""Time the compiled kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N] [--skip-slow]

Each row runs the same call through both backends and checks that the
results agree before reporting times.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from polarank import _backend, _pure, hermitian, incidence


def timed(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return out, best


def cases(skip_slow: bool):
    _, A39 = hermitian.build(2, 3)
    _, A54 = hermitian.build(3, 2)
    geo = incidence.load_o2()
    A4 = incidence.distance_relation_matrices(geo)[4]
    offsets, flat = geo._csr
    rng = np.random.default_rng(0)
    R = np.triu((rng.random((120, 120)) < 0.5).astype(np.uint8), 1)
    R = R + R.T
    order = np.argsort(-R.sum(1), kind="stable")
    L = (rng.integers(0, 3, (1000, 500)) @ rng.integers(0, 3, (500, 1000))) % 3
    yield "rank_gf2 H(5,4) A_3 (891x891)", lambda K: K.rank_gf2(A54[3])
    yield "rank_gf2 O(2) A_4 (1755x1755)", lambda K: K.rank_gf2(A4)
    yield "rank_modp p=3 H(3,9) A_2 (112x112)", lambda K: K.rank_modp(A39[2].astype(np.int64), 3)
    yield "rank_modp p=3 random rank 500 (1000x1000)", lambda K: K.rank_modp(L, 3)
    yield "max_clique G(120, 1/2)", lambda K: K.max_clique(R, order, [], [], 120, 10**12, 1e9)[0]
    yield "local_search O(2) A_4 to size 24", lambda K: sorted(K.local_search(A4, 1000, 1000, 3, 24, 7)[0])
    if not skip_slow:
        yield "bfs O(2) incidence graph, 512 sources", lambda K: K.bfs(offsets, flat, np.arange(512))[0]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--skip-slow", action="store_true")
    args = ap.parse_args(argv)
    if not _backend.COMPILED:
        print("compiled kernels are not built; only the fallback is available")
        return 1
    compiled = _backend.kernels
    print(f"{'kernel':44s} {'compiled':>10s} {'python':>10s} {'speedup':>8s}")
    for name, fn in cases(args.skip_slow):
        a, ta = timed(lambda: fn(compiled), args.repeat)
        b, tb = timed(lambda: fn(_pure), args.repeat)
        same = np.array_equal(np.asarray(a), np.asarray(b))
        flag = "" if same else "  MISMATCH"
        print(f"{name:44s} {ta:10.4f} {tb:10.4f} {tb / max(ta, 1e-9):7.1f}x{flag}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
