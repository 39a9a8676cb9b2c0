"""Arithmetic of the rational function field F_q(t).

Finite fields F_q with q = p^a <= 16 (elements are the integers 0..q-1,
read as polynomials over F_p in base p), polynomials over them, places of
F_q(t), valuations of rational functions, and zeta factors.

Addition and multiplication tables are built once per field from the
polynomial arithmetic; everything after that is table lookups.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

Poly = tuple[int, ...]  # coefficients, lowest degree first, no trailing zeros

MAX_Q = 16


def _factor_prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    a, r = 0, q
    while r % p == 0:
        r //= p
        a += 1
    if r != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, a


def _fp_poly_irreducible(f: list[int], p: int) -> bool:
    """Irreducibility over F_p by trial division with all monic polys of degree <= deg/2."""
    n = len(f) - 1
    for d in range(1, n // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            g = list(tail) + [1]
            r = list(f)
            while len(r) >= len(g):
                c = r[-1]
                if c:
                    shift = len(r) - len(g)
                    for i, gi in enumerate(g):
                        r[shift + i] = (r[shift + i] - c * gi) % p
                r.pop()
            if not any(r):
                return False
    return True


class Fq:
    """The finite field with q = p^a elements, q <= 16."""

    def __init__(self, q: int):
        if q > MAX_Q:
            raise ValueError(f"q = {q} exceeds the cap {MAX_Q}")
        self.p, self.a = _factor_prime_power(q)
        self.q = q
        p, a = self.p, self.a
        # the lexicographically first monic irreducible of degree a
        self.modulus: tuple[int, ...] = (0, 1)
        if a > 1:
            for tail in itertools.product(range(p), repeat=a):
                f = list(tail) + [1]
                if f[0] and _fp_poly_irreducible(f, p):
                    self.modulus = tuple(f)
                    break
        self.add_table = [[self._add(x, y) for y in range(q)] for x in range(q)]
        self.mul_table = [[self._mul(x, y) for y in range(q)] for x in range(q)]
        self.neg_table = [self.add_table[x].index(0) for x in range(q)]
        self.inv_table = [0] + [self.mul_table[x].index(1) for x in range(1, q)]

    def _digits(self, x: int) -> list[int]:
        return [(x // self.p ** i) % self.p for i in range(self.a)]

    def _undigits(self, d: Sequence[int]) -> int:
        return sum(c * self.p ** i for i, c in enumerate(d))

    def _add(self, x: int, y: int) -> int:
        return self._undigits([(s + t) % self.p for s, t in zip(self._digits(x), self._digits(y))])

    def _mul(self, x: int, y: int) -> int:
        p, a = self.p, self.a
        dx, dy = self._digits(x), self._digits(y)
        prod = [0] * (2 * a - 1)
        for i, s in enumerate(dx):
            for j, t in enumerate(dy):
                prod[i + j] = (prod[i + j] + s * t) % p
        m = self.modulus
        for k in range(len(prod) - 1, a - 1, -1):
            c = prod[k]
            if c:
                for i in range(a + 1):
                    prod[k - a + i] = (prod[k - a + i] - c * m[i]) % p
        return self._undigits(prod[:a])

    def add(self, x: int, y: int) -> int:
        return self.add_table[x][y]

    def sub(self, x: int, y: int) -> int:
        return self.add_table[x][self.neg_table[y]]

    def mul(self, x: int, y: int) -> int:
        return self.mul_table[x][y]

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of 0")
        return self.inv_table[x]

    def power(self, x: int, k: int) -> int:
        out = 1
        for _ in range(k):
            out = self.mul(out, x)
        return out

    def frobenius(self, x: int, base_q: int) -> int:
        """The Frobenius x -> x^base_q of F_q over its subfield with base_q elements."""
        return self.power(x, base_q)

    def units(self) -> range:
        return range(1, self.q)

    def __repr__(self) -> str:
        return f"Fq({self.q})"


@lru_cache(maxsize=None)
def field(q: int) -> Fq:
    return Fq(q)


# -- polynomials ---------------------------------------------------------------


def trim(a: Sequence[int]) -> Poly:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def degree(a: Poly) -> int:
    return len(a) - 1


def padd(F: Fq, a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return trim([F.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)])


def pmul(F: Fq, a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    mt, at = F.mul_table, F.add_table
    for i, x in enumerate(a):
        if x:
            row = mt[x]
            for j, y in enumerate(b):
                out[i + j] = at[out[i + j]][row[y]]
    return trim(out)


def pdivmod(F: Fq, a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    inv_lead = F.inv(b[-1])
    quot = [0] * max(len(a) - db, 0)
    while len(r) - 1 >= db and r:
        c = F.mul(r[-1], inv_lead)
        shift = len(r) - 1 - db
        quot[shift] = c
        for i, bi in enumerate(b):
            r[shift + i] = F.sub(r[shift + i], F.mul(c, bi))
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return trim(quot), tuple(r)


def pgcd(F: Fq, a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, pdivmod(F, a, b)[1]
    return monic(F, a) if a else a


def monic(F: Fq, a: Poly) -> Poly:
    if not a:
        return a
    inv = F.inv(a[-1])
    return tuple(F.mul(inv, x) for x in a)


def monics(F: Fq, d: int) -> Iterator[Poly]:
    """All monic polynomials of degree exactly d, in lexicographic coefficient order."""
    for tail in itertools.product(range(F.q), repeat=d):
        yield tuple(tail) + (1,)


def pmap(F: Fq, a: Poly, fn) -> Poly:
    return trim([fn(x) for x in a])


# -- places ----------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Place:
    """A closed point of P^1: a monic irreducible polynomial, or infinity."""

    degree: int
    poly: Poly = ()
    kind: str = "finite"

    @property
    def is_infinite(self) -> bool:
        return self.kind == "infinity"

    def norm(self, q: int) -> int:
        return q ** self.degree

    def __str__(self) -> str:
        if self.is_infinite:
            return "inf"
        terms = []
        for i, c in enumerate(self.poly):
            if c:
                mono = "1" if i == 0 else ("t" if i == 1 else f"t^{i}")
                terms.append(mono if c == 1 and i else f"{c}*{mono}" if i else str(c))
        return " + ".join(reversed(terms))


INFINITY = Place(1, (), "infinity")


def irreducibles(F: Fq, d: int, smaller: Sequence[Place] = ()) -> list[Place]:
    """Monic irreducibles of degree exactly d, by trial division against ``smaller``.

    ``smaller`` must contain every monic irreducible of degree <= d/2.
    """
    out = []
    for f in monics(F, d):
        if all(pl.degree * 2 > d or pdivmod(F, f, pl.poly)[1] for pl in smaller):
            out.append(Place(d, f))
    return out


def places_up_to(F: Fq, D: int) -> list[Place]:
    """Finite places of degree <= D (sieved) followed by the place at infinity."""
    if D < 1:
        raise ValueError("D must be at least 1")
    found: list[Place] = []
    for d in range(1, D + 1):
        found.extend(irreducibles(F, d, found))
    return found + [INFINITY]


def mobius(n: int) -> int:
    out, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    return -out if m > 1 else out


def count_places(q: int, d: int) -> int:
    """Number of places of F_q(t) of degree d (infinity included for d = 1)."""
    irr = sum(mobius(d // k) * q ** k for k in range(1, d + 1) if d % k == 0) // d
    return irr + (1 if d == 1 else 0)


# -- rational functions --------------------------------------------------------------


@dataclass(frozen=True)
class RatFunc:
    """scalar * num / den with num, den monic and coprime."""

    scalar: int
    num: Poly
    den: Poly

    @staticmethod
    def make(F: Fq, num: Poly, den: Poly = (1,)) -> "RatFunc":
        num, den = trim(num), trim(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return RatFunc(0, (), (1,))
        c = F.mul(num[-1], F.inv(den[-1]))
        num, den = monic(F, num), monic(F, den)
        g = pgcd(F, num, den)
        if g != (1,):
            num = pdivmod(F, num, g)[0]
            den = pdivmod(F, den, g)[0]
        return RatFunc(c, num, den)

    @property
    def height(self) -> int:
        """Degree of the divisor of zeros: max(deg num, deg den)."""
        return max(degree(self.num), degree(self.den))


def valuation(F: Fq, x: RatFunc, v: Place) -> int:
    if x.scalar == 0:
        raise ValueError("valuation of zero")
    if v.is_infinite:
        return degree(x.den) - degree(x.num)
    return _multiplicity(F, x.num, v.poly) - _multiplicity(F, x.den, v.poly)


def _multiplicity(F: Fq, a: Poly, p: Poly) -> int:
    k = 0
    while degree(a) >= degree(p):
        quo, rem = pdivmod(F, a, p)
        if rem:
            break
        a, k = quo, k + 1
    return k


def factor_monic(F: Fq, a: Poly, places: Sequence[Place]) -> dict[Place, int]:
    """Multiplicities of the given finite places in a monic polynomial.

    Raises when the places do not exhaust the factorisation.
    """
    out = {}
    for pl in places:
        if pl.is_infinite or pl.degree > degree(a):
            continue
        k = 0
        while True:
            quo, rem = pdivmod(F, a, pl.poly)
            if rem:
                break
            a, k = quo, k + 1
        if k:
            out[pl] = k
        if degree(a) == 0:
            break
    if degree(a) > 0:
        raise ValueError("place list too short to factor the polynomial")
    return out


def divisor(F: Fq, x: RatFunc, places: Sequence[Place]) -> dict[Place, int]:
    """All nonzero valuations of x (finite places and infinity)."""
    out = dict(factor_monic(F, x.num, places))
    for pl, k in factor_monic(F, x.den, places).items():
        out[pl] = out.get(pl, 0) - k
    inf = degree(x.den) - degree(x.num)
    if inf:
        out[INFINITY] = inf
    return out


# -- zeta ------------------------------------------------------------------------------


def zeta_series(q: int, lam: complex | Fraction | int, n_max: int, check: bool = True) -> list:
    """Coefficients of Z(lam u) = 1/((1 - lam u)(1 - q lam u)) for P^1 over F_q.

    With ``check`` the Euler product over places, built from the place counts,
    is expanded and compared grade by grade.
    """
    coeffs = [lam ** n * (q ** (n + 1) - 1) // (q - 1) if isinstance(lam, int)
              else lam ** n * Fraction(q ** (n + 1) - 1, q - 1) for n in range(n_max + 1)]
    if check:
        euler = euler_product(q, lam, n_max)
        if any(abs(a - b) > 1e-9 for a, b in zip(coeffs, euler)):
            raise ArithmeticError("Euler product disagrees with the closed form")
    return coeffs


def euler_product(q: int, lam, n_max: int) -> list:
    """Expansion of prod_v (1 - (lam u)^deg v)^(-1) through u^n_max."""
    out = [0] * (n_max + 1)
    out[0] = 1
    for d in range(1, n_max + 1):
        lam_d = lam ** d
        count = count_places(q, d)
        # (1 - x u^d)^(-count) = sum_k binom(count + k - 1, k) x^k u^(dk)
        factor = [math.comb(count + k - 1, k) * lam_d ** k for k in range(n_max // d + 1)]
        new = [0] * (n_max + 1)
        for n in range(n_max + 1):
            new[n] = sum(factor[k] * out[n - d * k] for k in range(n // d + 1))
        out = new
    return out
