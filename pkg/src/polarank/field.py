"""Arithmetic in small finite fields GF(p^k).

Elements are encoded as integers ``c_0 + c_1 p + ... + c_{k-1} p^{k-1}``
where ``(c_0, ..., c_{k-1})`` is the coefficient vector of the residue
polynomial.  The encoding is canonical, so equality of codes is equality
of field elements.  :class:`FieldSpec` carries exp/log tables for fast
multiplication; :class:`FieldElement` is a thin value wrapper used by the
public API and tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterator, Sequence

MAX_ORDER = 1 << 16
_ADD_TABLE_LIMIT = 4096


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q == p**e``; raise if ``q`` is not a prime power."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    p = 2
    while q % p:
        p += 1
    e, m = 0, q
    while m % p == 0:
        m //= p
        e += 1
    if m != 1:
        raise FieldError(f"{q} is not a prime power")
    return p, e


# -- polynomials over GF(p), coefficient lists low-to-high ------------------

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _poly_trim([x % p for x in a])
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _poly_trim(a)
    return a


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Exhaustive trial division by every monic polynomial of degree <= deg/2."""
    k = len(poly) - 1
    if k < 1 or poly[-1] % p == 0:
        return False
    if k == 1:
        return True
    for deg in range(1, k // 2 + 1):
        for low in product(range(p), repeat=deg):
            if not _poly_mod(poly, list(low) + [1], p):
                return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree ``k`` (low-to-high order)."""
    for low in product(range(p), repeat=k):
        # product() varies the last slot fastest, so c_0 is the most significant key
        cand = tuple(low) + (1,)
        if is_irreducible(cand, p):
            return cand
    raise FieldError(f"no irreducible polynomial of degree {k} over GF({p})")  # pragma: no cover


@dataclass(frozen=True)
class FieldSpec:
    p: int
    k: int
    modulus_poly: tuple[int, ...]

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise FieldError(f"{self.p} is not prime")
        if self.k < 1 or len(self.modulus_poly) != self.k + 1 or self.modulus_poly[-1] != 1:
            raise FieldError("modulus must be monic of degree k")
        if self.p ** self.k > MAX_ORDER:
            raise FieldError(f"field order {self.p}^{self.k} exceeds {MAX_ORDER}")
        if not is_irreducible(self.modulus_poly, self.p):
            raise FieldError(f"{self.modulus_poly} is reducible over GF({self.p})")

    @cached_property
    def order(self) -> int:
        return self.p ** self.k

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.k})"

    # -- encoding ----------------------------------------------------------
    def encode(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.k:
            raise FieldError("too many coefficients")
        code = 0
        for c in reversed(coeffs):
            code = code * self.p + c % self.p
        return code

    def decode(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            code, c = divmod(code, self.p)
            out.append(c)
        return tuple(out)

    # -- tables ------------------------------------------------------------
    def _poly_mulmod(self, a: int, b: int) -> int:
        x, y = self.decode(a), self.decode(b)
        prod = [0] * (2 * self.k - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    prod[i + j] += xi * yj
        return self.encode(_poly_mod(prod, self.modulus_poly, self.p))

    @cached_property
    def _tables(self) -> tuple[list[int], list[int]]:
        q = self.order
        for g in range(2, q) if q > 2 else [1]:
            exp = [1]
            x = g
            while x != 1:
                exp.append(x)
                x = self._poly_mulmod(x, g)
            if len(exp) == q - 1:
                break
        else:  # pragma: no cover
            raise FieldError("no primitive element found")
        log = [0] * q
        for i, x in enumerate(exp):
            log[x] = i
        return exp, log

    @property
    def exp_table(self) -> list[int]:
        return self._tables[0]

    @property
    def log_table(self) -> list[int]:
        return self._tables[1]

    @cached_property
    def add_table(self) -> list[int] | None:
        """Flat ``q*q`` addition table for small fields, else ``None``."""
        q = self.order
        if q > _ADD_TABLE_LIMIT:
            return None
        return [self._add_digits(a, b) for a in range(q) for b in range(q)]

    @cached_property
    def neg_table(self) -> list[int]:
        return [self._scale_digits(a, self.p - 1) for a in range(self.order)]

    def _add_digits(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        out, place = 0, 1
        while a or b:
            a, x = divmod(a, self.p)
            b, y = divmod(b, self.p)
            out += ((x + y) % self.p) * place
            place *= self.p
        return out

    def _scale_digits(self, a: int, c: int) -> int:
        return self.encode([x * c for x in self.decode(a)])

    # -- arithmetic on codes -------------------------------------------------
    def add(self, a: int, b: int) -> int:
        t = self.add_table
        if t is not None:
            return t[a * self.order + b]
        return self._add_digits(a, b)

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg_table[b])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        exp, log = self._tables
        return exp[(log[a] + log[b]) % (self.order - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        exp, log = self._tables
        return exp[(-log[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("zero to a negative power")
            return 1 if e == 0 else 0
        exp, log = self._tables
        return exp[(log[a] * e) % (self.order - 1)]

    def subfield_order(self, q: int) -> None:
        if q * q != self.order:
            raise FieldError(f"{self!r} has order {self.order}, not {q}^2")

    # -- element views -------------------------------------------------------
    def __call__(self, value: int | Sequence[int]) -> FieldElement:
        if isinstance(value, int):
            code = value % self.p
        else:
            code = self.encode(value)
        return FieldElement(self, code)

    def element(self, code: int) -> FieldElement:
        if not 0 <= code < self.order:
            raise FieldError(f"code {code} out of range for {self!r}")
        return FieldElement(self, code)

    def elements(self) -> Iterator[FieldElement]:
        for c in range(self.order):
            yield FieldElement(self, c)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def gen(self) -> FieldElement:
        """The class of ``x`` modulo the defining polynomial."""
        if self.k == 1:
            return FieldElement(self, self.encode(_poly_mod([0, 1], self.modulus_poly, self.p)))
        return FieldElement(self, self.p)


@lru_cache(maxsize=None)
def make_field(p: int, k: int = 1) -> FieldSpec:
    """GF(p^k) defined by the lexicographically least monic irreducible of degree k."""
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if k < 1:
        raise FieldError("extension degree must be >= 1")
    if p ** k > MAX_ORDER:
        raise FieldError(f"field order {p}^{k} exceeds {MAX_ORDER}")
    return FieldSpec(p, k, least_irreducible(p, k))


def gf(q: int) -> FieldSpec:
    p, k = prime_power(q)
    return make_field(p, k)


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec = dc_field(repr=False)
    code: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.decode(self.code)

    def _other(self, other: FieldElement | int) -> int:
        if isinstance(other, int):
            return self.field(other).code
        if other.field != self.field:
            raise FieldError(f"mixed fields {self.field!r} and {other.field!r}")
        return other.code

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.code, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.code, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._other(other), self.code))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.code, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.code, self._other(other)))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.code, e))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.code))

    def __bool__(self) -> bool:
        return self.code != 0

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "1" if i == 0 else ("w" if i == 1 else f"w^{i}")
                terms.append(mono if c == 1 and i else f"{c}" if i == 0 else f"{c}*{mono}")
        return " + ".join(terms) or "0"


def conj(x: FieldElement, q: int) -> FieldElement:
    """The involution ``x -> x^q`` of GF(q^2)."""
    x.field.subfield_order(q)
    return FieldElement(x.field, x.field.pow(x.code, q))


def norm(x: FieldElement, q: int) -> FieldElement:
    return x * conj(x, q)
