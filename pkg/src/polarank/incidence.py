"""Point-line geometries: the ``ig`` format, generalized polygon axioms, distance relations."""

from __future__ import annotations

import hashlib
import io
import os
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import IO, Iterator

import numpy as np

from . import _backend

DATA_ENV = "POLARANK_DATA"
_BATCH = 512


class GeometryFormatError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


class GeometryError(RuntimeError):
    pass


@dataclass(frozen=True)
class IncidenceGeometry:
    n_points: int
    lines: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        seen: set[tuple[int, ...]] = set()
        for i, line in enumerate(self.lines):
            if len(set(line)) != len(line):
                raise GeometryError(f"line {i} repeats a point")
            if any(not 0 <= x < self.n_points for x in line):
                raise GeometryError(f"line {i} has a point index outside [0, {self.n_points})")
            key = tuple(sorted(line))
            if key in seen:
                raise GeometryError(f"line {i} duplicates an earlier line")
            seen.add(key)

    @property
    def n_lines(self) -> int:
        return len(self.lines)

    @cached_property
    def lines_on_point(self) -> tuple[tuple[int, ...], ...]:
        acc: list[list[int]] = [[] for _ in range(self.n_points)]
        for j, line in enumerate(self.lines):
            for x in line:
                acc[x].append(j)
        return tuple(tuple(a) for a in acc)

    @cached_property
    def _csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Incidence graph adjacency; vertices 0..P-1 are points, P.. are lines."""
        P = self.n_points
        nbrs: list[list[int]] = [[P + j for j in js] for js in self.lines_on_point]
        nbrs += [list(line) for line in self.lines]
        deg = np.array([len(a) for a in nbrs], dtype=np.int64)
        offsets = np.concatenate([[0], np.cumsum(deg)])
        flat = np.array([x for a in nbrs for x in a], dtype=np.int64)
        return offsets, flat

    def to_ig(self) -> str:
        out = io.StringIO()
        dump_geometry(self, out)
        return out.getvalue()

    def digest(self) -> str:
        return hashlib.sha256(self.to_ig().encode()).hexdigest()


# -- ig format ---------------------------------------------------------------

def _meaningful(lines: Iterator[str]) -> Iterator[tuple[int, str]]:
    for no, raw in enumerate(lines, 1):
        s = raw.strip()
        if s and not s.startswith("#"):
            yield no, s


def _header(rows: Iterator[tuple[int, str]], key: str, last: int) -> tuple[int, int]:
    try:
        no, s = next(rows)
    except StopIteration:
        raise GeometryFormatError(last + 1, f"missing '{key}' header") from None
    parts = s.split()
    if len(parts) != 2 or parts[0] != key or not parts[1].isdigit():
        raise GeometryFormatError(no, f"expected '{key} <count>', got {s!r}")
    return no, int(parts[1])


def load_geometry(source: str | bytes | os.PathLike | IO) -> IncidenceGeometry:
    """Parse the ``ig`` text format from a path, raw text/bytes, or an open stream."""
    if isinstance(source, bytes):
        text = source.decode()
    elif isinstance(source, os.PathLike) or (isinstance(source, str) and "\n" not in source):
        text = Path(source).read_text()
    elif isinstance(source, str):
        text = source
    else:
        text = source.read()
        if isinstance(text, bytes):
            text = text.decode()
    rows = _meaningful(iter(text.splitlines()))
    try:
        no, s = next(rows)
    except StopIteration:
        raise GeometryFormatError(1, "empty input") from None
    if s.split() != ["ig", "1"]:
        raise GeometryFormatError(no, f"expected 'ig 1', got {s!r}")
    no, n_points = _header(rows, "points", no)
    no, n_lines = _header(rows, "lines", no)
    lines: list[tuple[int, ...]] = []
    seen: dict[tuple[int, ...], int] = {}
    for no, s in rows:
        try:
            pts = tuple(int(x) for x in s.split())
        except ValueError:
            raise GeometryFormatError(no, f"non-integer entry in {s!r}") from None
        for x in pts:
            if not 0 <= x < n_points:
                raise GeometryFormatError(no, f"point index {x} out of range [0, {n_points})")
        if len(set(pts)) != len(pts):
            raise GeometryFormatError(no, "repeated point within a line")
        key = tuple(sorted(pts))
        if key in seen:
            raise GeometryFormatError(no, f"duplicate of the line on input line {seen[key]}")
        seen[key] = no
        lines.append(pts)
    if len(lines) != n_lines:
        raise GeometryFormatError(no, f"header announces {n_lines} lines, found {len(lines)}")
    return IncidenceGeometry(n_points, tuple(lines))


def dump_geometry(G: IncidenceGeometry, out: IO[str]) -> None:
    out.write(f"ig 1\npoints {G.n_points}\nlines {G.n_lines}\n")
    for line in G.lines:
        out.write(" ".join(map(str, line)) + "\n")


def data_path(name: str) -> Path:
    """Bundled data file, or the same name under ``$POLARANK_DATA`` when set."""
    override = os.environ.get(DATA_ENV)
    if override:
        return Path(override) / name
    return Path(__file__).with_name("data") / name


def load_o2() -> IncidenceGeometry:
    return load_geometry(data_path("o2.ig"))


# -- breadth-first search on the incidence graph -----------------------------

def bfs_batches(G: IncidenceGeometry, sources: np.ndarray) -> Iterator[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Yield ``(batch, dist, mult)`` with arrays of shape ``(len(batch), n_vertices)``.

    ``dist`` is -1 for unreachable vertices; ``mult`` is the number of
    shortest paths capped at 2.
    """
    offsets, flat = G._csr
    if np.any(np.diff(offsets) == 0):
        raise GeometryError("geometry has an isolated point or an empty line")
    sources = np.asarray(sources, dtype=np.int64)
    for start in range(0, len(sources), _BATCH):
        batch = sources[start : start + _BATCH]
        dist, mult = _backend.kernels.bfs(offsets, flat, batch)
        yield batch, dist, mult


@dataclass
class PolygonCertificate:
    n: int
    s: int
    r: int
    ok: bool
    witness: str
    checks: dict[str, bool] = field(default_factory=dict)
    diameter: int | None = None
    girth_at_least: int | None = None


def verify_generalized_polygon(G: IncidenceGeometry, n: int, s: int, r: int) -> PolygonCertificate:
    """Check line sizes, point degrees, diameter n and girth 2n exactly.

    In a bipartite graph, girth >= 2n holds iff every pair at distance < n
    is joined by a unique shortest path (an antipodal pair on a shortest
    cycle would have two).  A cycle of length exactly 2n then exists iff
    some pair at distance n has two shortest paths.
    """
    problems: list[str] = []
    checks: dict[str, bool] = {}
    bad_line = next((j for j, line in enumerate(G.lines) if len(line) != s + 1), None)
    checks["line_size"] = bad_line is None
    if bad_line is not None:
        problems.append(f"line {bad_line} has {len(G.lines[bad_line])} points, expected {s + 1}")
    bad_pt = next((x for x, ls in enumerate(G.lines_on_point) if len(ls) != r + 1), None)
    checks["point_degree"] = bad_pt is None
    if bad_pt is not None:
        problems.append(f"point {bad_pt} is on {len(G.lines_on_point[bad_pt])} lines, expected {r + 1}")

    diameter = 0
    connected = True
    unique_short = True
    cycle_2n = False
    witness_pair = None
    V = G.n_points + G.n_lines
    if V and not any(len(ls) == 0 for ls in G.lines_on_point) and all(G.lines):
        for batch, dist, mult in bfs_batches(G, np.arange(V)):
            if (dist < 0).any():
                connected = False
                break
            diameter = max(diameter, int(dist.max()))
            short = (dist < n) & (mult > 1)
            if unique_short and short.any():
                unique_short = False
                b, v = np.argwhere(short)[0]
                witness_pair = (int(batch[b]), int(v), int(dist[b, v]))
            if not cycle_2n and ((dist == n) & (mult > 1)).any():
                cycle_2n = True
    else:
        connected = False
    checks["diameter"] = connected and diameter == n
    checks["girth"] = connected and unique_short and cycle_2n
    if not connected:
        problems.append("incidence graph is disconnected (infinite diameter)")
    elif diameter != n:
        problems.append(f"incidence graph has diameter {diameter}, expected {n}")
    if connected and not unique_short:
        a, b, d = witness_pair
        problems.append(f"vertices {a} and {b} at distance {d} < {n} have two shortest paths (girth < {2 * n})")
    elif connected and not cycle_2n:
        problems.append(f"no cycle of length {2 * n} (girth > {2 * n})")
    ok = all(checks.values())
    return PolygonCertificate(
        n, s, r, ok, "; ".join(problems), checks,
        diameter if connected else None,
        2 * n if connected and unique_short else None,
    )


def point_distance_matrix(G: IncidenceGeometry) -> np.ndarray:
    """Incidence-graph distances between points (even by bipartiteness)."""
    P = G.n_points
    out = np.empty((P, P), dtype=np.int16)
    for batch, dist, _ in bfs_batches(G, np.arange(P)):
        out[batch] = dist[:, :P]
    return out


def distance_relation_matrices(G: IncidenceGeometry, n: int = 8) -> list[np.ndarray]:
    """A_0..A_{n/2}: A_i[a, b] = 1 iff points a, b are at incidence distance 2i."""
    D = point_distance_matrix(G)
    if (D < 0).any():
        raise GeometryError("geometry is disconnected")
    if (D % 2).any():
        raise GeometryError("two points at odd distance; incidence graph is not bipartite")
    if D.max() > n:
        raise GeometryError(f"points at distance {int(D.max())} > {n}")
    return [(D == 2 * i).astype(np.uint8) for i in range(n // 2 + 1)]


def point_bfs_profiles(G: IncidenceGeometry) -> np.ndarray:
    """Row x holds the number of points at incidence distance 0, 2, 4, ... from x."""
    D = point_distance_matrix(G)
    m = int(D.max()) // 2 + 1
    return np.stack([(D == 2 * i).sum(1) for i in range(m)], axis=1)
