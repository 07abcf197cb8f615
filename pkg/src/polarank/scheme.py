"""Symmetric association schemes over exact arithmetic.

Only metric (P-polynomial) schemes with integral spectrum get eigenmatrices;
both the dual polar schemes of H(2d-1, q^2) and the point scheme of O(2)
qualify.  Matrix entries never leave the integers: products are taken in
floating point only where every intermediate value is an integer far below
2^24, which makes them exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .field import is_prime


class SchemeError(ValueError):
    pass


@dataclass
class SchemeData:
    n: int
    d: int
    A: list[np.ndarray]
    p: np.ndarray  # p[i, j, k] = p_ij^k
    eigenvalues: list[int] = field(default_factory=list)
    P: list[list[Fraction]] = field(default_factory=list)
    Q: list[list[Fraction]] = field(default_factory=list)
    f: list[int] = field(default_factory=list)

    @property
    def valencies(self) -> list[int]:
        return [int(self.p[i, i, 0]) for i in range(self.d + 1)]

    def q_column(self, j: int) -> list[Fraction]:
        return [self.Q[i][j] for i in range(self.d + 1)]


@dataclass(frozen=True)
class CongruenceReport:
    d: int
    q: int
    n: int
    coefficients: tuple[int, ...]
    integral: bool
    congruent: bool
    rank_bound: int


def _product(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    n = X.shape[0]
    dtype = np.float32 if n < (1 << 24) else np.float64
    out = X.astype(dtype) @ Y.astype(dtype)
    return np.rint(out).astype(np.int64)


def verify_scheme_axioms(A: Sequence[np.ndarray]) -> SchemeData:
    """Check the scheme axioms and compute every intersection number p_ij^k."""
    A = [np.asarray(M) for M in A]
    if not A:
        raise SchemeError("no relations")
    n = A[0].shape[0]
    for i, M in enumerate(A):
        if M.shape != (n, n):
            raise SchemeError(f"A_{i} has shape {M.shape}, expected ({n}, {n})")
        if not np.isin(M, (0, 1)).all():
            raise SchemeError(f"A_{i} is not a 0/1 matrix")
        if not (M == M.T).all():
            x, y = np.argwhere(M != M.T)[0]
            raise SchemeError(f"A_{i} is not symmetric at ({x}, {y})")
    if not (A[0] == np.eye(n, dtype=A[0].dtype)).all():
        raise SchemeError("A_0 is not the identity")
    total = sum(M.astype(np.int64) for M in A)
    if not (total == 1).all():
        x, y = np.argwhere(total != 1)[0]
        raise SchemeError(f"relations do not partition X x X: entry ({x}, {y}) covered {total[x, y]} times")
    d = len(A) - 1
    where = [np.argwhere(M) for M in A]
    p = np.zeros((d + 1, d + 1, d + 1), dtype=np.int64)
    for i in range(d + 1):
        for j in range(i, d + 1):
            prod = _product(A[i], A[j])
            for k in range(d + 1):
                vals = prod[A[k] == 1]
                lo, hi = int(vals.min()), int(vals.max())
                if lo != hi:
                    bad = int(np.argmax(vals != lo))
                    x, y = where[k][bad]
                    raise SchemeError(
                        f"p_{i}{j}^{k} is not constant: entry ({x}, {y}) of A_{i}A_{j} is {vals[bad]}, "
                        f"entry ({where[k][0][0]}, {where[k][0][1]}) is {lo}"
                    )
                p[i, j, k] = p[j, i, k] = lo
    return SchemeData(n=n, d=d, A=A, p=p)


# -- exact polynomial / matrix helpers -----------------------------------------

def charpoly(T: Sequence[Sequence[int]]) -> list[int]:
    """Coefficients (constant term first) of det(xI - T), by Faddeev-LeVerrier."""
    m = len(T)
    T = [[Fraction(x) for x in row] for row in T]
    M = [[Fraction(0)] * m for _ in range(m)]
    coeffs = [Fraction(0)] * (m + 1)
    coeffs[m] = Fraction(1)
    for k in range(1, m + 1):
        # M <- T M + c_{m-k+1} I
        TM = [[sum(T[i][l] * M[l][j] for l in range(m)) for j in range(m)] for i in range(m)]
        for i in range(m):
            TM[i][i] += coeffs[m - k + 1]
        M = TM
        TM2 = [[sum(T[i][l] * M[l][j] for l in range(m)) for j in range(m)] for i in range(m)]
        coeffs[m - k] = -sum(TM2[i][i] for i in range(m)) / k
    if any(c.denominator != 1 for c in coeffs):  # pragma: no cover - integer input
        raise SchemeError("characteristic polynomial is not integral")
    return [int(c) for c in coeffs]


def _peval(c: Sequence[int], x: int) -> int:
    acc = 0
    for a in reversed(c):
        acc = acc * x + a
    return acc


def integer_roots(c: Sequence[int]) -> list[int]:
    """Integer roots (with multiplicity) of a monic integer polynomial."""
    c = list(c)
    roots: list[int] = []
    while len(c) > 1 and c[0] == 0:
        roots.append(0)
        c = c[1:]
    if len(c) == 1:
        return roots
    c0 = abs(c[0])
    divs = [k for k in range(1, int(c0**0.5) + 1) if c0 % k == 0]
    cands = sorted({x for k in divs for x in (k, c0 // k)})
    for x in cands:
        for r in (x, -x):
            while len(c) > 1 and _peval(c, r) == 0:
                roots.append(r)
                # synthetic division by (x - r)
                hi = list(reversed(c))
                out = [hi[0]]
                for a in hi[1:-1]:
                    out.append(a + r * out[-1])
                c = list(reversed(out))
    return roots


def invert(M: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    m = len(M)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(m)] for i, row in enumerate(M)]
    for c in range(m):
        piv = next((r for r in range(c, m) if aug[r][c] != 0), None)
        if piv is None:
            raise SchemeError("singular eigenmatrix")
        aug[c], aug[piv] = aug[piv], aug[c]
        s = aug[c][c]
        aug[c] = [x / s for x in aug[c]]
        for r in range(m):
            if r != c and aug[r][c] != 0:
                t = aug[r][c]
                aug[r] = [x - t * y for x, y in zip(aug[r], aug[c])]
    return [row[m:] for row in aug]


def eigenmatrices_metric(S: SchemeData) -> SchemeData:
    """Fill in eigenvalues, P, Q and f for a metric scheme in distance order.

    Eigenvalues of A_1 are the roots of the characteristic polynomial of the
    tridiagonal intersection matrix T[k][j] = p_1j^k, listed in decreasing
    order; row i of P follows from the three-term recurrence
    theta v_j = p_1j^{j-1} v_{j-1} + p_1j^j v_j + p_1j^{j+1} v_{j+1}.
    """
    d, p = S.d, S.p
    for j in range(d + 1):
        for k in range(d + 1):
            if abs(k - j) > 1 and p[1, j, k]:
                raise SchemeError(f"not metric: p_1{j}^{k} = {p[1, j, k]} with |{k} - {j}| > 1")
        if j < d and p[1, j, j + 1] == 0:
            raise SchemeError(f"not metric: A_1 A_{j} has no A_{j + 1} component")
    T = [[int(p[1, j, k]) for j in range(d + 1)] for k in range(d + 1)]
    cp = charpoly(T)
    roots = integer_roots(cp)
    if len(roots) != d + 1:
        raise SchemeError(f"non-integral spectrum: characteristic polynomial {cp} has integer roots {roots}")
    if len(set(roots)) != d + 1:
        raise SchemeError(f"repeated eigenvalue in {roots}")
    theta = sorted(roots, reverse=True)
    P: list[list[Fraction]] = []
    for t in theta:
        v = [Fraction(1), Fraction(t)]
        for j in range(1, d):
            nxt = (t - p[1, j, j]) * v[j] - (p[1, j, j - 1] * v[j - 1])
            v.append(Fraction(nxt) / int(p[1, j, j + 1]))
        P.append(v[: d + 1])
    Pinv = invert(P)
    Q = [[S.n * x for x in row] for row in Pinv]
    f = []
    for i in range(d + 1):
        fi = Q[0][i]
        if fi.denominator != 1 or fi <= 0:
            raise SchemeError(f"multiplicity f_{i} = {fi} is not a positive integer")
        f.append(int(fi))
    for i in range(d + 1):
        for j in range(d + 1):
            if sum(P[i][k] * Q[k][j] for k in range(d + 1)) != (S.n if i == j else 0):
                raise SchemeError("P Q != n I")  # pragma: no cover
    S.eigenvalues = theta
    S.P = P
    S.Q = Q
    S.f = f
    return S


def build_scheme(A: Sequence[np.ndarray]) -> SchemeData:
    return eigenmatrices_metric(verify_scheme_axioms(A))


def idempotent_scaled(S: SchemeData, j: int) -> tuple[np.ndarray, int]:
    """Integer matrix M and denominator D with E_j = M / D."""
    col = S.q_column(j)
    den = 1
    for x in col:
        den = den * x.denominator // np.gcd(den, x.denominator)
    coeffs = [int(x * den) for x in col]
    M = sum(c * S.A[i].astype(np.int64) for i, c in enumerate(coeffs))
    return M, den * S.n


def multiplicity_f_d(q: int, d: int) -> int:
    """Multiplicity of the last eigenvalue of the dual polar graph of H(2d-1, q^2)."""
    if q < 2 or d < 1:
        raise ValueError("need q >= 2, d >= 1")
    num = q ** (2 * d - 2) - 1
    if (q * num) % (q + 1):  # pragma: no cover - always divisible
        raise ArithmeticError("non-integral multiplicity")
    a = q ** (2 * d - 1) - q * num // (q + 1)
    b = Fraction(q ** (2 * d)) * (Fraction(1, q ** (2 * d - 1)) + 1) / (q + 1)
    if b != a:  # pragma: no cover - the two closed forms agree identically
        raise ArithmeticError("closed forms disagree")
    return a


def q_column_formula(q: int, d: int) -> list[Fraction]:
    """Q_{id} = f_d (-q)^{-i} for the dual polar scheme of H(2d-1, q^2)."""
    f = multiplicity_f_d(q, d)
    return [Fraction(f) / Fraction(-q) ** i for i in range(d + 1)]


def idempotent_congruence_check(S: SchemeData, p: int, d: int) -> CongruenceReport:
    """Check that n p^{d-1} E_d is an integer matrix congruent to A_d mod p.

    The combination is sum_i p^{d-1} Q_{id} A_i = sum_i f_d (-1)^i p^{d-1-i} A_i,
    formed from the computed Q column and cross-checked against the
    closed form.
    """
    if d % 2:
        raise ValueError("the congruence needs d even")
    if not is_prime(p):
        raise ValueError(f"q = {p} must be prime here")
    if S.d != d:
        raise ValueError(f"scheme has {S.d} classes, expected {d}")
    if not S.Q:
        eigenmatrices_metric(S)
    col = S.q_column(d)
    if col != q_column_formula(p, d):
        raise SchemeError(f"Q column {col} differs from f_d(-q)^(-i) = {q_column_formula(p, d)}")
    scaled = [p ** (d - 1) * x for x in col]
    integral = all(x.denominator == 1 for x in scaled)
    coeffs = tuple(int(x) for x in scaled) if integral else ()
    congruent = False
    if integral:
        M = sum(c * S.A[i].astype(np.int64) for i, c in enumerate(coeffs))
        congruent = bool(((M - S.A[d]) % p == 0).all())
    return CongruenceReport(d, p, S.n, coeffs, integral, congruent, multiplicity_f_d(p, d))
