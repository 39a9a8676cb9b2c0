"""Brute-force counts of rational torus points of bounded anticanonical height.

Points of a split torus are tuples of nonzero rational functions; points of
a torus split by L = F_{q^e}(t) are g-invariant elements of N (x) L^x.  For
every candidate the height exponent sum_v deg(v) phi0(val_v) is computed
from explicit factorisations against the list of places.

Degree bound.  On a cone with rays rho_i, phi0(sum c_i rho_i) = sum c_i, so
phi0(m) >= |m|_1 / R with R the largest l1-norm of a ray (this is the exact
minimum of phi0 on the l1 unit sphere).  Summing over places,
sum_v deg(v) |v(x_i)| = 2 h(x_i) where h(x) = max(deg num, deg den), so a
point of exponent <= n has sum_i h(x_i) <= n R / 2.  Scalars do not change
the height, so candidates are enumerated up to scalars and each one counts
with the number of scalar solutions.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, Sequence

import numpy as np

from . import ffplaces, intlat
from .ffplaces import Fq, Place, Poly, RatFunc
from .gfan import GFan, ScopeError

RES_N_CAP = 6
SPLIT_N_CAP = 8


@dataclass
class PointBatch:
    q: int
    n_max: int
    counts: list[int]
    degree_bound: int
    certificate: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {"q": self.q, "n_max": self.n_max, "counts": self.counts,
                "degree_bound": self.degree_bound}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@lru_cache(maxsize=None)
def normalized_functions(q: int, h: int) -> tuple[RatFunc, ...]:
    """Rational functions num/den, both monic and coprime, with max degree exactly h."""
    F = ffplaces.field(q)
    out = []
    for dn in range(h + 1):
        for dd in range(h + 1):
            if max(dn, dd) != h:
                continue
            for num in ffplaces.monics(F, dn):
                for den in ffplaces.monics(F, dd):
                    if ffplaces.pgcd(F, num, den) == (1,):
                        out.append(RatFunc(1, num, den))
    return tuple(out)


@lru_cache(maxsize=None)
def _places(q: int, D: int) -> tuple[Place, ...]:
    return tuple(ffplaces.places_up_to(ffplaces.field(q), max(D, 1)))


@lru_cache(maxsize=None)
def _divisor(q: int, x: RatFunc, D: int) -> tuple[tuple[Place, int], ...]:
    F = ffplaces.field(q)
    div = ffplaces.divisor(F, x, _places(q, D))
    if sum(p.degree * k for p, k in div.items()) != 0:
        raise ArithmeticError("product formula violated")
    return tuple(sorted(div.items()))


class _Phi:
    """Fast evaluation of phi0 with per-cone integer inverses and a cache."""

    def __init__(self, f: GFan):
        self.f = f
        self.inverses = [intlat.to_lists(m) for m in f._cone_inverses]
        self.cache: dict[tuple[int, ...], int] = {}

    def __call__(self, m: tuple[int, ...]) -> int:
        val = self.cache.get(m)
        if val is None:
            for inv in self.inverses:
                coords = [sum(a * b for a, b in zip(row, m)) for row in inv]
                if all(c >= 0 for c in coords):
                    val = sum(coords)
                    break
            else:
                raise ArithmeticError(f"{m} lies in no cone")
            self.cache[m] = val
        return val


def height_budget(f: GFan, n: int) -> int:
    """Largest possible sum of coordinate heights for a point of exponent <= n."""
    return (n * f.max_ray_l1) // 2


def height_exponent_split(f: GFan, xs: Sequence[RatFunc], D: int, phi: _Phi | None = None) -> int:
    """Exponent of H(x) = q^exponent for a point of the split torus."""
    phi = phi or _Phi(f)
    vecs: dict[Place, list[int]] = {}
    for i, x in enumerate(xs):
        for p, k in _divisor(f.q, RatFunc(1, x.num, x.den), D):
            vecs.setdefault(p, [0] * f.rank)[i] = k
    return sum(p.degree * phi(tuple(v)) for p, v in vecs.items())


def _height_shells(rank: int, budget: int) -> Iterable[tuple[int, ...]]:
    for hs in itertools.product(range(budget + 1), repeat=rank):
        if sum(hs) <= budget:
            yield hs


def enumerate_split(f: GFan, n: int, degree_bound: int | None = None,
                    expand_scalars: bool = False) -> PointBatch:
    """Histogram of height exponents 0..n over (F_q(t)^x)^d for a split fan."""
    if f.e != 1:
        raise ScopeError("enumerate_split needs a split fan")
    if n > SPLIT_N_CAP:
        raise ScopeError(f"n = {n} exceeds the cap {SPLIT_N_CAP}")
    F = ffplaces.field(f.q)
    D = height_budget(f, n) if degree_bound is None else degree_bound
    phi = _Phi(f)
    counts = [0] * (n + 1)
    scalars = (f.q - 1) ** f.rank
    for hs in _height_shells(f.rank, D):
        pools = [normalized_functions(f.q, h) for h in hs]
        for xs in itertools.product(*pools):
            k = height_exponent_split(f, xs, D, phi)
            if k <= n:
                if expand_scalars:
                    for cs in itertools.product(F.units(), repeat=f.rank):
                        ys = [RatFunc(c, x.num, x.den) for c, x in zip(cs, xs)]
                        counts[height_exponent_split(f, ys, D, phi)] += 1
                else:
                    counts[k] += scalars
    cert = {"R": f.max_ray_l1, "c_min": f"1/{f.max_ray_l1}",
            "argument": "phi0(m) >= |m|_1/R and sum_v deg v |v(x_i)| = 2 h(x_i)"}
    return PointBatch(f.q, n, counts, D, cert)


# -- twisted tori ---------------------------------------------------------------------


def _frob_poly(L: Fq, q: int, a: Poly, k: int) -> Poly:
    for _ in range(k):
        a = tuple(L.frobenius(c, q) for c in a)
    return a


def _frob_ratfunc(L: Fq, q: int, x: RatFunc, k: int) -> RatFunc:
    return RatFunc(1, _frob_poly(L, q, x.num, k), _frob_poly(L, q, x.den, k))


def res_basis(f: GFan) -> intlat.IntMatrix:
    """A matrix [n0, g n0, ..., g^(e-1) n0] of determinant +-1, showing N = Z[G]."""
    if f.rank != f.e:
        raise ScopeError("cocharacter lattice is not a regular Galois module")
    candidates = [tuple(int(i == j) for j in range(f.rank)) for i in range(f.rank)]
    candidates += list(f.rays)
    for n0 in candidates:
        cols, v = [], np.array(n0, dtype=object)
        for _ in range(f.e):
            cols.append(tuple(int(x) for x in v))
            v = f.g.dot(v)
        b = intlat.columns(cols, f.rank)
        if abs(intlat.det(b)) == 1:
            return b
    raise ScopeError("cocharacter lattice is not a regular Galois module")


def enumerate_res_torus(f: GFan, n: int, degree_bound: int | None = None) -> PointBatch:
    """Histogram for T = Res_{F_{q^e}(t)/F_q(t)} G_m, points y in F_{q^e}(t)^x.

    The point y corresponds to sum_i g^i n0 (x) sigma^i(y) with sigma the
    q-power Frobenius on coefficients; at a place W of L its valuation
    vector is B (v_W(sigma^i y))_i, and the exponent of q in the height is
    sum_W deg_L(W) phi0 of that vector.
    """
    if n > RES_N_CAP:
        raise ScopeError(f"n = {n} exceeds the cap {RES_N_CAP}")
    if f.e == 1:
        raise ScopeError("enumerate_res_torus needs a nontrivial Frobenius")
    b = res_basis(f)
    big = f.q ** f.e
    if big > ffplaces.MAX_Q:
        raise ScopeError(f"F_{big} exceeds the field cap")
    L = ffplaces.field(big)
    binv = intlat.unimodular_inverse(b)
    c = max(sum(abs(int(binv[i, j])) for i in range(f.rank)) for j in range(f.rank))
    D = (n * f.max_ray_l1 * c) // (2 * f.e) if degree_bound is None else degree_bound
    bl = intlat.to_lists(b)
    phi = _Phi(f)
    counts = [0] * (n + 1)
    for h in range(D + 1):
        for y in normalized_functions(big, h):
            conj = [_frob_ratfunc(L, f.q, y, i) for i in range(f.e)]
            vecs: dict[Place, list[int]] = {}
            for i, x in enumerate(conj):
                for p, k in _divisor(big, x, max(D, 1)):
                    vecs.setdefault(p, [0] * f.e)[i] = k
            total = 0
            for p, w in vecs.items():
                m = tuple(sum(bl[r][s] * w[s] for s in range(f.e)) for r in range(f.rank))
                total += p.degree * phi(m)
            if total <= n:
                counts[total] += big - 1
    cert = {"R": f.max_ray_l1, "basis_l1": c,
            "argument": "sum_W deg W |w_W|_1 = 2 e h(y), phi0(m) >= |m|_1/R"}
    return PointBatch(f.q, n, counts, D, cert)


def invariant_scalar_count(f: GFan) -> int:
    """#{c in (F_{q^e}^x)^d : c_i = prod_j sigma(c_j)^g_ij}, by brute force."""
    L = ffplaces.field(f.q ** f.e)
    g = intlat.to_lists(f.g)
    total = 0
    for cs in itertools.product(L.units(), repeat=f.rank):
        ok = True
        for i in range(f.rank):
            rhs = 1
            for j in range(f.rank):
                s = L.frobenius(cs[j], f.q)
                k = g[i][j]
                rhs = L.mul(rhs, L.power(s, k) if k >= 0 else L.power(L.inv(s), -k))
            if rhs != cs[i]:
                ok = False
                break
        total += ok
    return total


def enumerate_invariant(f: GFan, n: int, degree_bound: int | None = None) -> PointBatch:
    """Histogram for any twisted torus: g-invariant tuples in (F_{q^e}(t)^x)^d.

    The element sum_j e_j (x) y_j is invariant iff y_i = prod_j sigma(y_j)^g_ij.
    Monic parts and scalars separate; the monic condition is checked on
    divisors and the scalar solutions are counted by brute force.
    """
    big = f.q ** f.e
    if big > ffplaces.MAX_Q:
        raise ScopeError(f"F_{big} exceeds the field cap")
    if n > RES_N_CAP:
        raise ScopeError(f"n = {n} exceeds the cap {RES_N_CAP}")
    L = ffplaces.field(big)
    D = height_budget(f, n) if degree_bound is None else degree_bound
    g = intlat.to_lists(f.g)
    phi = _Phi(f)
    places = _places(big, max(D, 1))
    frob_place = {}
    for p in places:
        if p.is_infinite:
            frob_place[p] = p
        else:
            frob_place[p] = Place(p.degree, _frob_poly(L, f.q, p.poly, 1))
    scal = invariant_scalar_count(f)
    counts = [0] * (n + 1)
    for hs in _height_shells(f.rank, D):
        pools = [normalized_functions(big, h) for h in hs]
        for ys in itertools.product(*pools):
            divs = [dict(_divisor(big, y, max(D, 1))) for y in ys]
            twisted = [{frob_place[p]: k for p, k in d.items()} for d in divs]
            ok = True
            for i in range(f.rank):
                rhs: dict[Place, int] = {}
                for j in range(f.rank):
                    if g[i][j]:
                        for p, k in twisted[j].items():
                            rhs[p] = rhs.get(p, 0) + g[i][j] * k
                if {p: k for p, k in rhs.items() if k} != divs[i]:
                    ok = False
                    break
            if not ok:
                continue
            vecs: dict[Place, list[int]] = {}
            for i, d in enumerate(divs):
                for p, k in d.items():
                    vecs.setdefault(p, [0] * f.rank)[i] = k
            total = sum(p.degree * phi(tuple(v)) for p, v in vecs.items())
            if total <= n:
                counts[total] += scal
    cert = {"R": f.max_ray_l1, "scalar_solutions": scal,
            "argument": "phi0(m) >= |m|_1/R and sum_W deg W |v_W(y_j)| = 2 h(y_j)"}
    return PointBatch(f.q, n, counts, D, cert)
