from fractions import Fraction

import numpy as np
import pytest

from polarank import hermitian, modrank, scheme
from polarank.scheme import SchemeError


@pytest.fixture(scope="module")
def s34(h34):
    return scheme.build_scheme(h34[1])


@pytest.fixture(scope="module")
def s39(h39):
    return scheme.build_scheme(h39[1])


def test_h34_eigenmatrices(s34):
    assert s34.eigenvalues == [10, 1, -5]
    assert s34.f == [1, 20, 6]
    assert s34.q_column(2) == [Fraction(6), Fraction(-3), Fraction(3, 2)]
    assert s34.valencies == [1, 10, 16]


def test_pq_identity(s34, s39):
    for S in (s34, s39):
        m = S.d + 1
        for i in range(m):
            for j in range(m):
                assert sum(S.P[i][k] * S.Q[k][j] for k in range(m)) == (S.n if i == j else 0)
        assert sum(S.f) == S.n


def test_multiplicities_match_norm_formula(s34, s39):
    # f_i = n / sum_j P_ij^2 / k_j, a second route to the multiplicities
    for S in (s34, s39):
        k = S.valencies
        for i in range(S.d + 1):
            assert S.f[i] == S.n / sum(Fraction(S.P[i][j]) ** 2 / k[j] for j in range(S.d + 1))


def test_idempotent_identities(s34):
    n = s34.n
    mats = [scheme.idempotent_scaled(s34, j) for j in range(3)]
    total = sum(Fraction(1, D) * M.astype(object) for M, D in mats)
    assert (total == np.eye(n, dtype=int)).all()
    M0, D0 = mats[0]
    assert (M0.astype(object) * Fraction(1, D0) == Fraction(1, n)).all()
    for j, (M, _) in enumerate(mats):
        assert modrank.rank_rational(M).rank == s34.f[j]


def test_h39(s39):
    assert s39.eigenvalues == [30, 2, -10]
    assert s39.f == [1, 90, 21]


def test_h54():
    _, A = hermitian.build(3, 2)
    S = scheme.build_scheme(A)
    assert S.f[3] == scheme.multiplicity_f_d(2, 3) == 22
    assert S.q_column(3) == scheme.q_column_formula(2, 3)


def test_o2_scheme(o2_rel):
    S = scheme.build_scheme(o2_rel)
    assert S.eigenvalues == [10, 5, 1, -3, -5]
    assert sum(S.f) == 1755
    assert S.valencies == [1, 10, 80, 640, 1024]


@pytest.mark.parametrize("q,d,f", [(2, 2, 6), (3, 2, 21), (2, 3, 22), (4, 2, 52), (5, 4, None)])
def test_multiplicity_closed_forms(q, d, f):
    val = scheme.multiplicity_f_d(q, d)
    if f is not None:
        assert val == f
    assert val == q ** (2 * d - 1) - q * (q ** (2 * d - 2) - 1) // (q + 1)


def test_congruence(s34, s39):
    r = scheme.idempotent_congruence_check(s34, 2, 2)
    assert r.coefficients == (12, -6, 3) and r.congruent and r.rank_bound == 6
    r = scheme.idempotent_congruence_check(s39, 3, 2)
    assert r.coefficients == (63, -21, 7) and r.congruent and r.rank_bound == 21


def test_congruence_preconditions(s34):
    with pytest.raises(ValueError):
        scheme.idempotent_congruence_check(s34, 2, 3)
    with pytest.raises(ValueError):
        scheme.idempotent_congruence_check(s34, 4, 2)


def path_relations():
    P = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=np.uint8)
    I = np.eye(3, dtype=np.uint8)
    return [I, P, 1 - P - I]


def test_path_graph_rejected():
    with pytest.raises(SchemeError, match="not constant"):
        scheme.verify_scheme_axioms(path_relations())


def test_axiom_violations():
    I = np.eye(3, dtype=np.uint8)
    J = np.ones((3, 3), dtype=np.uint8)
    with pytest.raises(SchemeError, match="identity"):
        scheme.verify_scheme_axioms([J - I, I])
    with pytest.raises(SchemeError, match="partition"):
        scheme.verify_scheme_axioms([I, J])
    A = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]], dtype=np.uint8)
    with pytest.raises(SchemeError, match="symmetric"):
        scheme.verify_scheme_axioms([I, A, A.T])


def test_non_metric_rejected():
    # complete multipartite K_{2,2,2}: relations "same part" and "different part"
    # listed in the wrong distance order
    n = 6
    same = np.zeros((n, n), dtype=np.uint8)
    for a in range(n):
        for b in range(n):
            if a != b and a // 2 == b // 2:
                same[a, b] = 1
    other = 1 - same - np.eye(n, dtype=np.uint8)
    S = scheme.verify_scheme_axioms([np.eye(n, dtype=np.uint8), same, other])
    with pytest.raises(SchemeError, match="not metric"):
        scheme.eigenmatrices_metric(S)
    ok = scheme.build_scheme([np.eye(n, dtype=np.uint8), other, same])
    assert ok.eigenvalues == [4, 0, -2]


def test_non_integral_spectrum_rejected():
    # the pentagon: eigenvalues (-1 +- sqrt 5)/2
    n = 5
    C = np.zeros((n, n), dtype=np.uint8)
    for i in range(n):
        C[i, (i + 1) % n] = C[(i + 1) % n, i] = 1
    D = 1 - C - np.eye(n, dtype=np.uint8)
    with pytest.raises(SchemeError, match="non-integral"):
        scheme.build_scheme([np.eye(n, dtype=np.uint8), C, D])


def test_charpoly_and_roots(s34):
    T = [[int(s34.p[1, j, k]) for j in range(3)] for k in range(3)]
    cp = scheme.charpoly(T)
    assert cp[::-1] == [round(c) for c in np.poly(np.array(T, dtype=float))]
    assert sorted(scheme.integer_roots(cp)) == [-5, 1, 10]
    assert scheme.integer_roots([0, 0, 1]) == [0, 0]
    assert scheme.integer_roots([1, 0, 1]) == []
    assert sorted(scheme.integer_roots([-4, 0, 1])) == [-2, 2]
