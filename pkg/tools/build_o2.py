"""Regenerate ``src/polarank/data/o2.ig`` from permutation generators.

The generators are those of the rank-5 primitive action of the Tits group
2F4(2)' on 1755 points, as listed in the GAP primitive groups library
(degree 1755, group 1), stored 0-based in ``tools/data/o2_generators.json``.
The points of the octagon O(2) are the 1755 points; two points are collinear
iff they form a pair in the orbital whose suborbit has length 10; lines are
the triangles of that collinearity graph.

Usage: python tools/build_o2.py [--out PATH] [--check]
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import deque
from itertools import combinations
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
GENS = ROOT / "tools" / "data" / "o2_generators.json"
TARGET = ROOT / "src" / "polarank" / "data" / "o2.ig"


def orbital(gens, a, b, cap):
    """Orbit of the ordered pair (a, b); None if it exceeds cap pairs."""
    seen = {(a, b)}
    todo = deque(seen)
    while todo:
        x, y = todo.popleft()
        for g in gens:
            pr = (g[x], g[y])
            if pr not in seen:
                seen.add(pr)
                if len(seen) > cap:
                    return None
                todo.append(pr)
    return seen


def build(gens):
    n = len(gens[0])
    for b in range(1, n):
        pairs = orbital(gens, 0, b, 10 * n)
        if pairs is not None and len(pairs) == 10 * n:
            break
    else:
        raise SystemExit("no orbital of valency 10")
    nbr = [set() for _ in range(n)]
    for x, y in pairs:
        nbr[x].add(y)
    lines = set()
    for x in range(n):
        for y, z in combinations(sorted(nbr[x]), 2):
            if z in nbr[y]:
                lines.add(tuple(sorted((x, y, z))))
    return n, sorted(lines)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=TARGET)
    ap.add_argument("--check", action="store_true", help="compare with the existing file instead of writing")
    args = ap.parse_args(argv)
    gens = json.loads(GENS.read_text())
    n, lines = build(gens)
    text = f"ig 1\npoints {n}\nlines {len(lines)}\n" + "".join(" ".join(map(str, l)) + "\n" for l in lines)
    if args.check:
        same = args.out.read_text() == text
        print("identical" if same else "DIFFERENT")
        return 0 if same else 1
    args.out.write_text(text)
    print(f"wrote {args.out}: {n} points, {len(lines)} lines")
    return 0


if __name__ == "__main__":
    sys.exit(main())
