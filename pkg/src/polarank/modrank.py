"""Exact ranks: over GF(p) with packed kernels, and over the rationals.

``rank_mod_p`` dispatches to the compiled kernels when they are built (see
:mod:`polarank._backend`); both paths compute the same exact rank.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence, Union

import numpy as np

from . import _backend
from .field import is_prime

MAX_DIM = 10_000

MatrixLike = Union[np.ndarray, Sequence[Sequence[int]], Sequence[Sequence[Fraction]]]


@dataclass(frozen=True)
class RankReport:
    rank: int
    modulus: int | str
    elapsed: float
    backend: str = ""

    def __int__(self) -> int:
        return self.rank


@dataclass(frozen=True)
class PackedMatrix:
    """Residues mod p in machine words.

    For p = 2 each uint64 word holds 64 entries (bit j of word w is column
    64*w + j).  For odd p entries are stored one per byte.
    """

    rows: int
    cols: int
    p: int
    words: np.ndarray

    @classmethod
    def pack(cls, M: MatrixLike, p: int) -> "PackedMatrix":
        A = _as_int_array(M, p) % p
        rows, cols = A.shape
        if p == 2:
            nw = (cols + 63) // 64
            padded = np.zeros((rows, nw * 64), dtype=np.uint8)
            padded[:, :cols] = A
            words = np.packbits(padded, axis=1, bitorder="little").view(np.uint64).reshape(rows, nw)
        else:
            if p > 255:
                raise ValueError("byte packing supports p < 256")
            words = A.astype(np.uint8)
        return cls(rows, cols, p, words)

    def unpack(self) -> np.ndarray:
        if self.p == 2:
            bits = np.unpackbits(self.words.view(np.uint8).reshape(self.rows, -1), axis=1, bitorder="little")
            return bits[:, : self.cols].astype(np.int64)
        return self.words.astype(np.int64)


def _as_int_array(M: MatrixLike, p: int | None = None) -> np.ndarray:
    """Integer matrix as int64; arbitrary-size entries are reduced mod p first."""
    if isinstance(M, PackedMatrix):
        return M.unpack()
    A = np.asarray(M)
    if A.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    if A.dtype == object:
        if p is None:
            return np.array([[int(x) for x in row] for row in A], dtype=np.int64)
        return np.array([[int(x) % p for x in row] for row in A], dtype=np.int64)
    if not np.issubdtype(A.dtype, np.integer) and not np.issubdtype(A.dtype, np.bool_):
        raise TypeError(f"integer matrix required, got dtype {A.dtype}")
    return A.astype(np.int64, copy=False)


def _check_dims(shape: tuple[int, ...], limit: int) -> None:
    if max(shape) > limit:
        raise ValueError(f"matrix dimension {max(shape)} exceeds limit {limit}")


def rank_mod_p(M: MatrixLike, p: int, *, limit: int = MAX_DIM) -> RankReport:
    """Rank of an integer matrix reduced mod the prime ``p``."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if isinstance(M, PackedMatrix):
        if M.p != p:
            raise ValueError(f"matrix packed mod {M.p}, asked for rank mod {p}")
        A = M.unpack()
    else:
        A = _as_int_array(M, p)
    _check_dims(A.shape, limit)
    t0 = time.perf_counter()
    if A.size == 0:
        r = 0
    elif p == 2:
        r = _backend.kernels.rank_gf2((A & 1).astype(np.uint8))
    else:
        r = _backend.kernels.rank_modp(A % p, p)
    return RankReport(int(r), p, time.perf_counter() - t0, _backend.NAME)


def _integer_rows(M: MatrixLike) -> list[list[int]]:
    rows = [list(r) for r in (M.tolist() if isinstance(M, np.ndarray) else M)]
    out = []
    for r in rows:
        if any(isinstance(x, Fraction) for x in r):
            den = lcm(*(Fraction(x).denominator for x in r))
            out.append([int(Fraction(x) * den) for x in r])
        else:
            out.append([int(x) for x in r])
    return out


def rank_rational(M: MatrixLike, *, limit: int = MAX_DIM) -> RankReport:
    """Rank over Q by fraction-free (Bareiss) elimination on integers.

    Rational rows are first cleared of denominators, which does not change
    the rank.
    """
    t0 = time.perf_counter()
    A = _integer_rows(M)
    if A:
        _check_dims((len(A), len(A[0])), limit)
    rows = len(A)
    cols = len(A[0]) if rows else 0
    r = 0
    prev = 1
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        pr = A[r]
        pc = pr[c]
        for i in range(r + 1, rows):
            row = A[i]
            a = row[c]
            if a:
                for j in range(c + 1, cols):
                    row[j] = (pc * row[j] - a * pr[j]) // prev
            else:
                for j in range(c + 1, cols):
                    row[j] = (pc * row[j]) // prev
            row[c] = 0
        prev = pc
        r += 1
        if r == rows:
            break
    return RankReport(r, "rational", time.perf_counter() - t0, "python")
