"""Clique bounds from p-ranks, the partial spread/ovoid theorems, and legacy bounds.

Everything is plain integer arithmetic, so values stay exact for any t.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .field import is_prime

FAMILIES = (
    "lemma1", "thm1a", "thm1b", "thm1c", "thm2",
    "counting_spread", "counting_ovoid", "odd_d", "debeule", "hexagon_cited",
)


@dataclass(frozen=True)
class BoundReport:
    family: str
    value: int
    params: dict = field(default_factory=dict)
    note: str = ""

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown bound family {self.family!r}")
        if self.value < 1:
            raise ValueError("bound must be positive")

    def as_dict(self) -> dict:
        out = {"family": self.family, **self.params, "bound": self.value}
        if self.note:
            out["note"] = self.note
        return out


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def lemma1_two_case(r: int, p: int, size: int) -> int:
    """Bound on a clique of the given size: r + 1 if p | size - 1, else r."""
    _check_prime(p)
    return r + 1 if (size - 1) % p == 0 else r


def clique_bound_from_rank(r: int, p: int) -> int:
    """Unconditional clique bound from a p-rank r.

    A clique of size r + 1 is consistent with the two-case bound only when
    p divides r, so the best single bound is r + 1 if p | r and r otherwise.
    """
    if r < 0:
        raise ValueError("rank must be non-negative")
    _check_prime(p)
    return r + 1 if r % p == 0 else r


def rank_j_minus_i(m: int, p: int) -> int:
    """p-rank of J - I of order m: m - 1 when p | m - 1, else m."""
    _check_prime(p)
    if m < 1:
        raise ValueError("order must be positive")
    return m - 1 if (m - 1) % p == 0 else m


def steinberg_lift(r_prime: int, t: int) -> int:
    if r_prime < 1 or t < 1:
        raise ValueError("need r_prime >= 1 and t >= 1")
    return r_prime**t


def _exact(num: int, den: int, what: str) -> int:
    if num % den:
        raise ArithmeticError(f"{what} = {Fraction(num, den)} is not an integer")
    return num // den


def published_rank_formula(name: str, p: int) -> int:
    """Named p-rank formulas at t = 1."""
    _check_prime(p)
    if name == "h3_lines":
        return _exact(2 * p**3 + p, 3, name)
    if name == "h5_generators":
        return _exact(11 * p**5 + 5 * p**3 + 4 * p, 20, name)
    if name == "triality_hexagon":
        return _exact(4 * p**5 + p, 5, name)
    if name == "h5_multiplicity_bound":
        return p**5 - p**4 + p**3 - p**2 + p
    raise ValueError(f"unknown formula {name!r}")


def theorem1_bound(p: int, t: int, d: int) -> BoundReport:
    """Partial spread bound for H(2d-1, q^2), q = p^t, d even."""
    _check_prime(p)
    if t < 1:
        raise ValueError("t must be >= 1")
    if d < 2 or d % 2:
        raise ValueError(f"d = {d} must be even and >= 2")
    params = {"p": p, "t": t, "d": d}
    if d == 2 and p == 3:
        return BoundReport("thm1b", 19**t, params)
    if d == 2:
        return BoundReport("thm1a", published_rank_formula("h3_lines", p) ** t + 1, params)
    base = p ** (2 * d - 1) - _exact(p * (p ** (2 * d - 2) - 1), p + 1, "thm1c term")
    return BoundReport("thm1c", base**t + 1, params)


def theorem1a_value(p: int, t: int) -> int:
    """Branch (a) alone, which also applies at p = 3."""
    return published_rank_formula("h3_lines", p) ** t + 1


def theorem2_bound(t: int) -> BoundReport:
    """Partial ovoid bound for the octagon O(2^t), t odd."""
    if t < 1 or t % 2 == 0:
        raise ValueError(f"t = {t} must be odd and >= 1")
    return BoundReport("thm2", 26**t + 1, {"t": t})


def baseline_bounds(q: int | None = None, d: int | None = None,
                    s: int | None = None, r: int | None = None) -> list[BoundReport]:
    """Legacy bounds for H(2d-1, q^2) (given q, d) or a generalized octagon (given s, r)."""
    out: list[BoundReport] = []
    if q is not None and d is not None:
        if q < 2 or d < 1:
            raise ValueError("need q >= 2 and d >= 1")
        params = {"q": q, "d": d}
        out.append(BoundReport("counting_spread", q ** (2 * d - 1) + 1, params))
        if d % 2:
            out.append(BoundReport("odd_d", q**d + 1, params))
        if d == 2:
            out.append(BoundReport("debeule", (q**3 + q + 2) // 2, params))
    if s is not None and r is not None:
        if s < 1 or r < 1:
            raise ValueError("need s, r >= 1")
        out.append(BoundReport("counting_ovoid", (s * r) ** 2 + 1, {"s": s, "r": r}))
    return out


def hexagon_cited_bound(q: int) -> BoundReport:
    """Known q^3 + 1 bound for the twisted triality hexagon; cited, not derived."""
    return BoundReport("hexagon_cited", q**3 + 1, {"q": q}, note="literature value")


def crossover_table(primes=(2, 3, 5, 7), ts=(1, 2, 3, 4)) -> list[dict]:
    """Compare branch (a) with (q^3 + q + 2)/2 on H(3, q^2)."""
    rows = []
    for p in primes:
        for t in ts:
            q = p**t
            new = theorem1a_value(p, t)
            old = (q**3 + q + 2) // 2
            rows.append({"p": p, "t": t, "q": q, "thm1a": new, "debeule": old, "old_better": old < new})
    return rows


def crossover_rule(p: int, t: int) -> bool:
    """Where the old bound wins: p = 2 and t <= 2, or t = 1."""
    return (p == 2 and t <= 2) or t == 1
