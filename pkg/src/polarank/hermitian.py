"""Generators of the Hermitian polar space H(2d-1, q^2) and the dual polar scheme.

Vectors are tuples of field codes (see :mod:`polarank.field`); the form is
``f(x, y) = sum_i x_i * y_i^q`` with identity Gram matrix.  Subspaces are
kept as reduced row-echelon bases, which doubles as a canonical key.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .field import FieldElement, FieldSpec, gf, prime_power

Vector = tuple[int, ...]
Basis = tuple[Vector, ...]

DEFAULT_CAP = 10_000
SUPPORTED_Q = (2, 3, 4, 5, 8, 9)


class CapExceeded(RuntimeError):
    pass


def _codes(v: Sequence[int | FieldElement]) -> Vector:
    return tuple(x.code if isinstance(x, FieldElement) else int(x) for x in v)


def rref(rows: Iterable[Sequence[int]], F: FieldSpec) -> Basis:
    """Reduced row-echelon basis of the span of ``rows`` (zero rows dropped)."""
    m = [list(r) for r in rows]
    if not m:
        return ()
    ncols = len(m[0])
    mul, sub, inv = F.mul, F.sub, F.inv
    out: list[list[int]] = []
    for col in range(ncols):
        piv = next((i for i, r in enumerate(m) if r[col]), None)
        if piv is None:
            continue
        r = m.pop(piv)
        if r[col] != 1:
            s = inv(r[col])
            r = [mul(s, x) for x in r]
        for other in m + out:
            c = other[col]
            if c:
                for j in range(col, ncols):
                    if r[j]:
                        other[j] = sub(other[j], mul(c, r[j]))
        out.append(r)
        if not m:
            break
    return tuple(tuple(r) for r in out)


def span_dim(rows: Iterable[Sequence[int]], F: FieldSpec) -> int:
    return len(rref(rows, F))


@dataclass(frozen=True)
class Subspace:
    basis: Basis

    @classmethod
    def span(cls, vectors: Iterable[Sequence[int | FieldElement]], F: FieldSpec) -> "Subspace":
        return cls(rref([_codes(v) for v in vectors], F))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __lt__(self, other: "Subspace") -> bool:
        return self.basis < other.basis


class HermitianSpace:
    """GF(q^2)^{2d} with the standard non-degenerate Hermitian form."""

    def __init__(self, d: int, q: int):
        if d < 1:
            raise ValueError("d must be >= 1")
        prime_power(q)
        self.d = d
        self.q = q
        self.field = gf(q * q)
        self.dim = 2 * d
        F = self.field
        self.conj_table = [F.pow(x, q) for x in range(F.order)]

    def __repr__(self) -> str:
        return f"H({2 * self.d - 1},{self.q}^2)"

    def conj(self, x: int) -> int:
        return self.conj_table[x]

    def form(self, x: Sequence[int], y: Sequence[int]) -> int:
        if len(x) != self.dim or len(y) != self.dim:
            raise ValueError(f"vectors must have length {self.dim}")
        F, c = self.field, self.conj_table
        acc = 0
        for a, b in zip(x, y):
            if a and b:
                acc = F.add(acc, F.mul(a, c[b]))
        return acc

    def hermitian_form(self, x, y) -> FieldElement:
        return self.field.element(self.form(_codes(x), _codes(y)))

    def is_totally_isotropic(self, S: Subspace) -> bool:
        if S.dim == 0:
            raise ValueError("the zero subspace is not a flat")
        return all(self.form(u, v) == 0 for u in S.basis for v in S.basis)

    def perp(self, S: Subspace) -> Basis:
        """Basis of S^perp: solutions y of sum_i conj(b_i) y_i = 0 for all rows b."""
        F, c = self.field, self.conj_table
        rows = rref([[c[x] for x in b] for b in S.basis], F)
        pivots = [next(j for j, x in enumerate(r) if x) for r in rows]
        free = [j for j in range(self.dim) if j not in pivots]
        out = []
        for fcol in free:
            v = [0] * self.dim
            v[fcol] = 1
            for r, pc in zip(rows, pivots):
                v[pc] = F.neg(r[fcol])
            out.append(tuple(v))
        return tuple(out)

    # -- vectorized helpers --------------------------------------------------
    @cached_property
    def _np_tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        F = self.field
        Q = F.order
        mul = np.array([[F.mul(a, b) for b in range(Q)] for a in range(Q)], dtype=np.int32)
        add = np.array([[F.add(a, b) for b in range(Q)] for a in range(Q)], dtype=np.int32)
        nrm = np.array([F.mul(x, self.conj_table[x]) for x in range(Q)], dtype=np.int32)
        return mul, add, nrm

    def _combine(self, coeffs: np.ndarray, basis: np.ndarray) -> np.ndarray:
        """Rows of ``coeffs @ basis`` over the field; coeffs (N, m), basis (m, n)."""
        mul, add, _ = self._np_tables
        out = np.zeros((coeffs.shape[0], basis.shape[1]), dtype=np.int32)
        for i in range(basis.shape[0]):
            out = add[out, mul[coeffs[:, i : i + 1], basis[i][None, :]]]
        return out

    def _self_form(self, vecs: np.ndarray) -> np.ndarray:
        _, add, nrm = self._np_tables
        acc = np.zeros(vecs.shape[0], dtype=np.int32)
        for j in range(vecs.shape[1]):
            acc = add[acc, nrm[vecs[:, j]]]
        return acc


def projective_coords(m: int, Q: int) -> np.ndarray:
    """All length-m vectors over a Q-element field whose first nonzero entry is 1."""
    blocks = []
    for lead in range(m):
        tail = m - lead - 1
        n = Q**tail
        blk = np.zeros((n, m), dtype=np.int32)
        blk[:, lead] = 1
        if tail:
            grid = np.array(list(product(range(Q), repeat=tail)), dtype=np.int32)
            blk[:, lead + 1 :] = grid
        blocks.append(blk)
    return np.concatenate(blocks)


@dataclass
class GeneratorSet:
    space: HermitianSpace
    items: list[Subspace]

    @cached_property
    def index(self) -> dict[Basis, int]:
        return {s.basis: i for i, s in enumerate(self.items)}

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, i: int) -> Subspace:
        return self.items[i]


def enumerate_generators(space: HermitianSpace, cap: int = DEFAULT_CAP) -> GeneratorSet:
    """All totally isotropic d-spaces, built by extending isotropic flags inside perps.

    A totally isotropic k-space S is extended by every isotropic projective
    point of a complement of S inside S^perp; since S lies in the radical of
    the form restricted to S^perp, isotropy of the lift does not depend on
    the chosen complement.  Each level is deduplicated by canonical basis.
    """
    F = space.field
    Q = F.order
    level: set[Basis] = {()}
    for k in range(space.d):
        nxt: set[Basis] = set()
        coords = projective_coords(space.dim - 2 * k, Q)
        for S in sorted(level):
            if k == 0:
                comp = np.eye(space.dim, dtype=np.int32)
            else:
                comp = np.array(_complement(space.perp(Subspace(S)), S, F), dtype=np.int32)
            cand = space._combine(coords, comp)
            iso = cand[space._self_form(cand) == 0]
            for w in iso:
                nxt.add(rref(S + (tuple(int(x) for x in w),), F) if S else tuple([tuple(int(x) for x in w)]))
            if k == space.d - 1 and len(nxt) > cap:
                raise CapExceeded(f"more than {cap} generators in {space!r}")
        level = nxt
    items = [Subspace(b) for b in sorted(level)]
    return GeneratorSet(space, items)


def _complement(big: Basis, small: Basis, F: FieldSpec) -> list[Vector]:
    """Vectors of ``big`` extending ``small`` (an echelon basis) to a basis of span(big)."""
    echelon = [list(r) for r in small]
    out = []
    for v in big:
        w = list(v)
        for r in echelon:
            pc = next(j for j, x in enumerate(r) if x)
            if w[pc]:
                c = F.div(w[pc], r[pc])
                w = [F.sub(a, F.mul(c, b)) for a, b in zip(w, r)]
        if any(w):
            echelon.append(w)
            out.append(v)
    return out


def generator_count_formula(d: int, q: int) -> int:
    """prod_{i=1}^{d} (q^{2i-1} + 1), used only as a cross-check."""
    out = 1
    for i in range(1, d + 1):
        out *= q ** (2 * i - 1) + 1
    return out


def generator_points(G: GeneratorSet) -> np.ndarray:
    """Point ids (n_generators, points_per_generator) of every generator."""
    space = G.space
    Q = space.field.order
    bases = np.array([g.basis for g in G.items], dtype=np.int32)  # (n, d, 2d)
    coords = projective_coords(space.d, Q)  # (N, d)
    mul, add, _ = space._np_tables
    pts = np.zeros((bases.shape[0], coords.shape[0], space.dim), dtype=np.int32)
    for i in range(space.d):
        pts = add[pts, mul[coords[None, :, i : i + 1], bases[:, i : i + 1, :]]]
    # normalize each point so that its first nonzero coordinate is 1
    first = np.argmax(pts != 0, axis=2)
    lead = np.take_along_axis(pts, first[..., None], axis=2)
    inv = np.array([0] + [space.field.inv(x) for x in range(1, Q)], dtype=np.int32)
    pts = mul[inv[lead], pts]
    keys = np.zeros(pts.shape[:2], dtype=np.int64)
    for j in range(space.dim):
        keys = keys * Q + pts[..., j]
    _, ids = np.unique(keys, return_inverse=True)
    return ids.reshape(keys.shape)


def relation_index_matrix(G: GeneratorSet) -> np.ndarray:
    """R[a, b] = i iff generators a and b meet in codimension i."""
    if len(G) == 0:
        raise ValueError("empty generator set")
    space = G.space
    Q = space.field.order
    n = len(G)
    ids = generator_points(G)
    n_points = int(ids.max()) + 1
    # generators through each point
    flat_pt = ids.ravel()
    flat_gen = np.repeat(np.arange(n), ids.shape[1])
    order = np.argsort(flat_pt, kind="stable")
    counts = np.bincount(flat_pt, minlength=n_points)
    shared = np.zeros((n, n), dtype=np.int32)
    if counts.min() == counts.max():
        groups = flat_gen[order].reshape(n_points, counts[0])
        g = groups.shape[1]
        for a in range(g):
            for b in range(a + 1, g):
                np.add.at(shared, (groups[:, a], groups[:, b]), 1)
    else:  # pragma: no cover - generator sets are point-transitive
        starts = np.concatenate([[0], np.cumsum(counts)])
        gens = flat_gen[order]
        for p in range(n_points):
            grp = gens[starts[p] : starts[p + 1]]
            for i, a in enumerate(grp):
                for b in grp[i + 1 :]:
                    shared[a, b] += 1
    shared = shared + shared.T
    # (Q^m - 1)/(Q - 1) shared points <=> intersection of dimension m
    R = np.full((n, n), space.d, dtype=np.uint8)
    for m in range(1, space.d):
        R[shared == (Q**m - 1) // (Q - 1)] = space.d - m
    np.fill_diagonal(R, 0)
    return R


def relation_matrices(G: GeneratorSet) -> list[np.ndarray]:
    """0/1 matrices A_0..A_d of the codimension relations; A_d is oppositeness."""
    R = relation_index_matrix(G)
    return [(R == i).astype(np.uint8) for i in range(G.space.d + 1)]


def intersection_dim(space: HermitianSpace, a: Subspace, b: Subspace) -> int:
    """dim(a cap b) by rank of the stacked bases; slow reference path."""
    return a.dim + b.dim - span_dim(a.basis + b.basis, space.field)


def build(d: int, q: int, cap: int = DEFAULT_CAP) -> tuple[GeneratorSet, list[np.ndarray]]:
    G = enumerate_generators(HermitianSpace(d, q), cap=cap)
    return G, relation_matrices(G)
