from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polarank import bounds, modrank
from polarank.modrank import PackedMatrix, rank_mod_p, rank_rational


def naive_rank(rows, p=None):
    """Textbook elimination over GF(p) or Q."""
    M = [[Fraction(x) if p is None else x % p for x in r] for r in rows]
    rank = 0
    cols = len(M[0]) if M else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = 1 / M[rank][c] if p is None else pow(M[rank][c], -1, p)
        for i in range(len(M)):
            if i != rank and M[i][c]:
                f = M[i][c] * inv
                M[i] = [a - f * b if p is None else (a - f * b) % p for a, b in zip(M[i], M[rank])]
        rank += 1
    return rank


def test_examples(backend, h34):
    for p in (2, 3, 5, 7):
        assert rank_mod_p(np.eye(5, dtype=int), p).rank == 5
    J = np.ones((27, 27), dtype=int) - np.eye(27, dtype=int)
    assert rank_mod_p(J, 2).rank == 26
    assert rank_mod_p(h34[1][2], 2).rank == 6


@pytest.mark.parametrize("p", [2, 3, 5])
def test_j_minus_i(backend, p):
    for m in range(1, 51):
        J = np.ones((m, m), dtype=int) - np.eye(m, dtype=int)
        assert rank_mod_p(J, p).rank == bounds.rank_j_minus_i(m, p)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 251])
def test_random_against_naive(backend, p, rng):
    for _ in range(40):
        r, c = rng.integers(1, 30, size=2)
        k = int(rng.integers(1, min(r, c) + 1))
        M = (rng.integers(-5, 6, size=(r, k)) @ rng.integers(-5, 6, size=(k, c)))
        got = rank_mod_p(M, p).rank
        assert got == naive_rank(M.tolist(), p)
        assert got <= rank_rational(M).rank


def test_wide_gf2(backend, rng):
    M = rng.integers(0, 2, size=(70, 200))
    assert rank_mod_p(M, 2).rank == naive_rank(M.tolist(), 2)


def test_permutation_invariance(backend, h39, rng):
    A = h39[1][2]
    r = rank_mod_p(A, 3).rank
    perm = rng.permutation(len(A))
    assert rank_mod_p(A[np.ix_(perm, perm)], 3).rank == r == 19
    assert rank_mod_p(A[perm], 3).rank == r


def test_non_prime():
    with pytest.raises(ValueError):
        rank_mod_p(np.eye(2, dtype=int), 4)


def test_limit():
    with pytest.raises(ValueError):
        rank_mod_p(np.eye(5, dtype=int), 2, limit=4)


def test_float_matrix_rejected():
    with pytest.raises(TypeError):
        rank_mod_p(np.eye(3), 2)


def test_empty():
    assert rank_mod_p(np.zeros((0, 3), dtype=int), 2).rank == 0


@pytest.mark.parametrize("p", [2, 3, 7])
def test_pack_roundtrip(p, rng):
    M = rng.integers(-20, 20, size=(13, 70))
    P = PackedMatrix.pack(M, p)
    assert (P.unpack() == M % p).all()
    assert rank_mod_p(P, p).rank == rank_mod_p(M, p).rank
    with pytest.raises(ValueError):
        rank_mod_p(P, 5 if p != 5 else 3)


def test_rational_examples():
    assert rank_rational(np.zeros((4, 4), dtype=int)).rank == 0
    assert rank_rational(np.ones((6, 6), dtype=int)).rank == 1
    assert rank_rational([[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), 1]]).rank == 1
    assert rank_rational([]).rank == 0


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 8), st.integers(1, 8), st.data())
def test_rational_against_naive(r, c, data):
    rows = [[data.draw(st.integers(-3, 3)) for _ in range(c)] for _ in range(r)]
    if data.draw(st.booleans()) and r > 1:
        rows[-1] = [a + 2 * b for a, b in zip(rows[0], rows[1 % r])]
    assert rank_rational(rows).rank == naive_rank(rows)


def test_large_entries():
    big = 10**30
    M = np.array([[big, big + 1], [big, big + 1]], dtype=object)
    assert rank_rational(M).rank == 1
    assert rank_mod_p(M, 3).rank == 1


def test_report_is_int_like(h34):
    rep = rank_mod_p(h34[1][2], 2)
    assert int(rep) == 6 and rep.modulus == 2 and rep.elapsed >= 0
