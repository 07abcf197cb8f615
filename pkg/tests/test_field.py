import itertools

import pytest

from polarank.field import (
    FieldError, conj, gf, is_irreducible, least_irreducible, make_field, norm, prime_power,
)

SMALL = [(p, k) for p in (2, 3, 5, 7, 11, 13) for k in range(1, 9) if p**k <= 256]


def test_moduli():
    assert make_field(2, 1).modulus_poly == (0, 1)
    assert make_field(2, 2).modulus_poly == (1, 1, 1)
    assert make_field(3, 2).modulus_poly == (1, 0, 1)


def test_least_irreducible_is_least():
    # every monic quadratic over GF(3) that sorts below the chosen one is reducible
    chosen = least_irreducible(3, 2)
    for c0, c1 in itertools.product(range(3), repeat=2):
        poly = (c0, c1, 1)
        if poly < chosen:
            assert not is_irreducible(poly, 3)


def test_bad_parameters():
    with pytest.raises(FieldError):
        make_field(4, 1)
    with pytest.raises(FieldError):
        make_field(2, 17)
    with pytest.raises(FieldError):
        prime_power(12)


@pytest.mark.parametrize("p,k", SMALL)
def test_field_axioms_exhaustive(p, k):
    F = make_field(p, k)
    n = F.order
    zero, one = 0, F.encode([1])
    for a in range(n):
        assert F.add(a, zero) == a
        assert F.mul(a, one) == a
        assert F.add(a, F.neg(a)) == zero
        if a:
            assert F.mul(a, F.inv(a)) == one
    # associativity and distributivity on a sample of triples
    step = max(1, n // 16)
    for a in range(0, n, step):
        for b in range(0, n, step):
            assert F.add(a, b) == F.add(b, a)
            assert F.mul(a, b) == F.mul(b, a)
            for c in range(0, n, step):
                assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
                assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))


def test_gf4_examples():
    F = gf(4)
    one, w = F.one, F.gen()
    assert one * one == one
    assert w * w == w + one
    assert conj(w, 2) == w + one
    assert conj(one, 2) == one


def test_gf9_inverses_and_conj():
    F = gf(9)
    for x in F.elements():
        if x:
            assert x * x.inverse() == F.one
    assert sum(1 for x in F.elements() if conj(x, 3) == x) == 3


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_norm_lands_in_subfield(q):
    F = gf(q * q)
    sub = {x for x in F.elements() if conj(x, q) == x}
    assert len(sub) == q
    for x in F.elements():
        assert norm(x, q) in sub
        assert conj(conj(x, q), q) == x


def test_conj_needs_square_order():
    with pytest.raises(FieldError):
        conj(gf(8).one, 2)


def test_division_by_zero_and_mixed_fields():
    F = gf(9)
    with pytest.raises(ZeroDivisionError):
        F.one / F.zero
    with pytest.raises((FieldError, ValueError, TypeError)):
        F.one + gf(4).one
