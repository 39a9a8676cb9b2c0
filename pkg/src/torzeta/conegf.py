"""Generating functions of lattice points in cones.

Two representations of a formal sum  sum_y a_y T^y  over lattice points:

* exact: a finite sum of terms  c * T^y0 / prod_j (1 - T^rho_j);
* truncated: for each grade n <= n_max (grade fixed by a linear functional
  that is positive on the region), the finitely many (exponent, coefficient)
  pairs of that grade.

Unimodular cones have exact forms read straight off their generators; other
cones (dimension at most 3) are first cut into unimodular pieces by stellar
subdivision.  On top of this sit the Xi-integral that gives alpha*, the
decomposition of a shifted cone used for truncation-order audits, and the
constant-term map that keeps the exponents lying in a saturated sublattice.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import intlat
from .intlat import IntMatrix

Vec = tuple[int, ...]


class ConeError(ValueError):
    pass


class NonSaturatedError(ValueError):
    pass


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _primitive(v: Sequence[int]) -> Vec:
    g = math.gcd(*v)
    if g == 0:
        raise ConeError("zero generator")
    return tuple(x // g for x in v)


def _cross(a: Sequence[int], b: Sequence[int]) -> Vec:
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


# -- unimodular fans -------------------------------------------------------------


@dataclass(frozen=True)
class UniFan:
    """A fan of unimodular simplicial cones.

    ``rays`` are primitive lattice vectors; ``cones`` are the maximal cones as
    sorted tuples of ray indices.  The support is the cone spanned by
    ``support``.
    """

    rank: int
    rays: tuple[Vec, ...]
    cones: tuple[tuple[int, ...], ...]
    support: tuple[Vec, ...] = field(default=(), compare=False)

    @property
    def all_cones(self) -> tuple[tuple[int, ...], ...]:
        faces: set[tuple[int, ...]] = set()
        for c in self.cones:
            for k in range(len(c) + 1):
                faces.update(itertools.combinations(c, k))
        return tuple(sorted(faces, key=lambda c: (len(c), c)))

    def generators(self, cone: Sequence[int]) -> list[Vec]:
        return [self.rays[i] for i in cone]


def is_unimodular(gens: Sequence[Sequence[int]], rank: int) -> bool:
    """True when the vectors extend to a basis of Z^rank."""
    if not gens:
        return True
    return intlat.is_saturated(intlat.columns(gens, rank))


def _positive_functional(gens: Sequence[Vec], k: int) -> Vec:
    """An integer functional strictly positive on every generator (k <= 3)."""
    if k == 1:
        if all(g[0] > 0 for g in gens):
            return (1,)
        if all(g[0] < 0 for g in gens):
            return (-1,)
        raise ConeError("cone is not strictly convex")
    if k == 2:
        normals = []
        for a in gens:
            n = (-a[1], a[0])
            vals = [_dot(n, g) for g in gens]
            if all(v >= 0 for v in vals):
                normals.append(n)
            elif all(v <= 0 for v in vals):
                normals.append((-n[0], -n[1]))
    else:
        normals = []
        for a, b in itertools.combinations(gens, 2):
            n = _cross(a, b)
            if not any(n):
                continue
            vals = [_dot(n, g) for g in gens]
            if all(v >= 0 for v in vals):
                normals.append(n)
            elif all(v <= 0 for v in vals):
                normals.append(tuple(-x for x in n))
    w = tuple(sum(n[i] for n in normals) for i in range(k))
    if not normals or any(_dot(w, g) <= 0 for g in gens):
        raise ConeError("cone is not strictly convex")
    return w


def _hull_order_2d(points: list[tuple[Fraction, Fraction]]) -> list[int]:
    """Indices of the convex-hull vertices of planar points, counter-clockwise."""
    idx = sorted(range(len(points)), key=lambda i: points[i])
    uniq: list[int] = []
    for i in idx:
        if not uniq or points[uniq[-1]] != points[i]:
            uniq.append(i)
    if len(uniq) <= 2:
        return uniq

    def turn(o: int, a: int, b: int) -> Fraction:
        (ox, oy), (ax, ay), (bx, by) = points[o], points[a], points[b]
        return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)

    lower: list[int] = []
    for i in uniq:
        while len(lower) >= 2 and turn(lower[-2], lower[-1], i) <= 0:
            lower.pop()
        lower.append(i)
    upper: list[int] = []
    for i in reversed(uniq):
        while len(upper) >= 2 and turn(upper[-2], upper[-1], i) <= 0:
            upper.pop()
        upper.append(i)
    return lower[:-1] + upper[:-1]


def _simplicial_pieces(gens: list[Vec], k: int) -> list[tuple[Vec, ...]]:
    """Cut a strictly convex full-dimensional cone in Z^k into simplicial cones."""
    w = _positive_functional(gens, k)
    if k == 2:
        # extreme rays are the two generators with an all-one-sided normal
        ext = []
        for a in gens:
            side = [a[0] * g[1] - a[1] * g[0] for g in gens]
            if all(s >= 0 for s in side) or all(s <= 0 for s in side):
                ext.append(a)
        ext = sorted(set(ext))
        if len(ext) != 2:
            raise ConeError("degenerate planar cone")
        return [tuple(ext)]
    # k == 3: cross-section with <w, .> = 1, projected to a coordinate plane
    drop = next(i for i in range(3) if w[i] != 0)
    keep = [i for i in range(3) if i != drop]
    pts = []
    for g in gens:
        s = Fraction(1, _dot(w, g))
        pts.append((g[keep[0]] * s, g[keep[1]] * s))
    hull = _hull_order_2d(pts)
    verts = [gens[i] for i in hull]
    if len(verts) < 3:
        raise ConeError("cone is not full-dimensional")
    return [(verts[0], verts[i], verts[i + 1]) for i in range(1, len(verts) - 1)]


def _parallelepiped_points(gens: Sequence[Vec], k: int) -> list[tuple[Vec, tuple[Fraction, ...]]]:
    """Nonzero lattice points sum lam_i gen_i with 0 <= lam_i < 1."""
    a = intlat.columns(gens, k)
    u, d, _ = intlat.snf(a)
    uinv = intlat.unimodular_inverse(u)
    diag = intlat.diagonal(d)
    inv = intlat.rational_inverse(a)
    out = []
    for c in itertools.product(*[range(x) for x in diag]):
        y = [sum(int(uinv[i, j]) * c[j] for j in range(k)) for i in range(k)]
        lam = [sum(inv[i][j] * y[j] for j in range(k)) for i in range(k)]
        lam = [x - math.floor(x) for x in lam]
        if not any(lam):
            continue
        point = tuple(int(sum(lam[j] * gens[j][i] for j in range(k))) for i in range(k))
        out.append((point, tuple(lam)))
    return out


def _stellar_unimodular(rays: list[Vec], cones: list[tuple[int, ...]], k: int) -> tuple[list[Vec], list[tuple[int, ...]]]:
    """Refine a simplicial fan in Z^k to a unimodular one by star subdivisions."""
    while True:
        bad = [c for c in cones if abs(intlat.det(intlat.columns([rays[i] for i in c], k))) != 1]
        if not bad:
            return rays, cones
        c = min(bad)
        gens = [rays[i] for i in c]
        cands = _parallelepiped_points(gens, k)
        # smallest coefficient sum first, then lexicographic: deterministic
        point, lam = min(cands, key=lambda t: (sum(t[1]), t[0]))
        face = tuple(i for i, x in zip(c, lam) if x)
        if point in rays:
            raise ConeError("subdivision ray already present")
        rays.append(point)
        new = len(rays) - 1
        refined = []
        for cone in cones:
            if set(face) <= set(cone):
                for i in face:
                    refined.append(tuple(sorted([j for j in cone if j != i] + [new])))
            else:
                refined.append(cone)
        cones = refined


def triangulate_unimodular(generators: Sequence[Sequence[int]]) -> UniFan:
    """Unimodular fan whose support is the cone spanned by ``generators``.

    The cone may be lower-dimensional; the subdivision happens inside the
    saturated lattice of its linear span.  Spans of dimension above 3 are
    rejected.
    """
    gens_in = [tuple(int(x) for x in g) for g in generators]
    if not gens_in:
        raise ConeError("no generators")
    rank = len(gens_in[0])
    gens = sorted({_primitive(g) for g in gens_in})
    basis = intlat.saturated_span(gens, rank)
    k = basis.shape[1]
    if k > 3:
        raise ConeError(f"unsupported cone dimension {k} (cap is 3)")
    local = []
    for g in gens:
        x = intlat.solve_integer(basis, list(g))
        local.append(tuple(x))
    if k == 1:
        _positive_functional(local, 1)
        pieces = [(local[0],)]
    else:
        pieces = _simplicial_pieces(local, k)
    rays: list[Vec] = []
    index: dict[Vec, int] = {}
    cones = []
    for p in pieces:
        ids = []
        for v in p:
            if v not in index:
                index[v] = len(rays)
                rays.append(v)
            ids.append(index[v])
        cones.append(tuple(sorted(ids)))
    rays, cones = _stellar_unimodular(rays, cones, k)
    back = [tuple(sum(int(basis[i, j]) * v[j] for j in range(k)) for i in range(rank)) for v in rays]
    order = sorted(range(len(back)), key=lambda i: back[i])
    rename = {old: new for new, old in enumerate(order)}
    rays_out = tuple(back[i] for i in order)
    cones_out = tuple(sorted(tuple(sorted(rename[i] for i in c)) for c in cones))
    return UniFan(rank, rays_out, cones_out, tuple(gens))


# -- series ----------------------------------------------------------------------


@dataclass(frozen=True)
class RationalTerm:
    coef: int
    shift: Vec
    denominators: tuple[Vec, ...]


@dataclass
class ConeSeries:
    """A formal lattice-exponent series, exact or truncated.

    Exact mode keeps ``terms``.  Truncated mode keeps ``grades[n]``, a dict
    from exponent to coefficient, for n = 0..n_max; in cone-series use the
    grade of an exponent y is <grading, y>.
    """

    rank: int
    mode: str
    terms: tuple[RationalTerm, ...] = ()
    grading: Vec | None = None
    n_max: int = -1
    grades: list[dict[Vec, int]] = field(default_factory=list)

    # -- constructors

    @classmethod
    def zero(cls, rank: int, n_max: int, grading: Vec | None = None) -> "ConeSeries":
        return cls(rank, "truncated", grading=grading, n_max=n_max,
                   grades=[{} for _ in range(n_max + 1)])

    @classmethod
    def one(cls, rank: int, n_max: int, grading: Vec | None = None) -> "ConeSeries":
        s = cls.zero(rank, n_max, grading)
        s.grades[0][(0,) * rank] = 1
        return s

    @classmethod
    def from_points(cls, points: Mapping[Vec, int] | Iterable[Vec], grading: Vec,
                    n_max: int, rank: int | None = None) -> "ConeSeries":
        items = points.items() if isinstance(points, Mapping) else ((p, 1) for p in points)
        items = list(items)
        if rank is None:
            if not items:
                raise ValueError("rank needed for an empty point set")
            rank = len(items[0][0])
        s = cls.zero(rank, n_max, grading)
        for y, c in items:
            n = _dot(grading, y)
            if n < 0:
                raise ValueError("grading must be non-negative on the points")
            if n <= n_max and c:
                table = s.grades[n]
                table[y] = table.get(y, 0) + c
                if table[y] == 0:
                    del table[y]
        return s

    # -- conversions and algebra

    def truncate(self, grading: Vec, n_max: int) -> "ConeSeries":
        """Expand an exact series up to grade n_max."""
        if self.mode == "truncated":
            raise ValueError("already truncated")
        out = ConeSeries.zero(self.rank, n_max, grading)
        for t in self.terms:
            steps = [_dot(grading, r) for r in t.denominators]
            if any(s <= 0 for s in steps):
                raise ValueError("grading must be positive on every denominator")
            base = _dot(grading, t.shift)
            if base > n_max:
                continue
            for ks in _bounded_tuples(steps, n_max - base):
                y = tuple(t.shift[i] + sum(k * r[i] for k, r in zip(ks, t.denominators))
                          for i in range(self.rank))
                table = out.grades[_dot(grading, y)]
                table[y] = table.get(y, 0) + t.coef
        for table in out.grades:
            for y in [y for y, c in table.items() if c == 0]:
                del table[y]
        return out

    def _check(self, other: "ConeSeries") -> None:
        if self.mode != "truncated" or other.mode != "truncated":
            raise ValueError("operation needs truncated series")
        if self.rank != other.rank:
            raise ValueError("rank mismatch")

    def __add__(self, other: "ConeSeries") -> "ConeSeries":
        self._check(other)
        n = min(self.n_max, other.n_max)
        out = ConeSeries.zero(self.rank, n, self.grading)
        for k in range(n + 1):
            table = dict(self.grades[k])
            for y, c in other.grades[k].items():
                table[y] = table.get(y, 0) + c
            out.grades[k] = {y: c for y, c in table.items() if c}
        return out

    def scale(self, c: int) -> "ConeSeries":
        out = ConeSeries.zero(self.rank, self.n_max, self.grading)
        out.grades = [{y: c * v for y, v in t.items()} if c else {} for t in self.grades]
        return out

    def __mul__(self, other: "ConeSeries") -> "ConeSeries":
        self._check(other)
        n = min(self.n_max, other.n_max)
        out = ConeSeries.zero(self.rank, n, self.grading)
        for a in range(n + 1):
            ta = self.grades[a]
            if not ta:
                continue
            for b in range(n + 1 - a):
                tb = other.grades[b]
                if not tb:
                    continue
                dest = out.grades[a + b]
                for ya, ca in ta.items():
                    for yb, cb in tb.items():
                        y = tuple(i + j for i, j in zip(ya, yb))
                        dest[y] = dest.get(y, 0) + ca * cb
        for table in out.grades:
            for y in [y for y, c in table.items() if c == 0]:
                del table[y]
        return out

    def __pow__(self, k: int) -> "ConeSeries":
        result = ConeSeries.one(self.rank, self.n_max, self.grading)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def coefficients(self) -> dict[Vec, int]:
        out: dict[Vec, int] = {}
        for table in self.grades:
            out.update(table)
        return out

    def grade_totals(self) -> list[int]:
        return [sum(t.values()) for t in self.grades]

    def same_as(self, other: "ConeSeries") -> bool:
        n = min(self.n_max, other.n_max)
        return all(self.grades[k] == other.grades[k] for k in range(n + 1))


def _bounded_tuples(steps: Sequence[int], budget: int) -> Iterable[tuple[int, ...]]:
    if not steps:
        yield ()
        return
    first, rest = steps[0], steps[1:]
    for k in range(budget // first + 1):
        for tail in _bounded_tuples(rest, budget - k * first):
            yield (k,) + tail


def cone_series_rational(delta: UniFan) -> ConeSeries:
    """Exact series of all lattice points in the support of ``delta``.

    Points are grouped by the cone whose relative interior contains them:
    sum over cones of prod over their rays of T^rho / (1 - T^rho).
    """
    terms = []
    for c in delta.all_cones:
        gens = delta.generators(c)
        shift = tuple(sum(g[i] for g in gens) for i in range(delta.rank))
        terms.append(RationalTerm(1, shift, tuple(gens)))
    return ConeSeries(delta.rank, "exact", terms=tuple(terms))


def relint_series(gens: Sequence[Vec], rank: int) -> ConeSeries:
    """Exact series of the relative interior of a unimodular cone."""
    shift = tuple(sum(g[i] for g in gens) for i in range(rank))
    return ConeSeries(rank, "exact", terms=(RationalTerm(1, shift, tuple(gens)),))


# -- alpha* ---------------------------------------------------------------------------


def dual_cone_generators(gens: Sequence[Vec], rank: int) -> list[Vec]:
    """Generators of the dual of a full-dimensional strictly convex cone (rank <= 3)."""
    gens = sorted({_primitive(g) for g in gens})
    if rank == 1:
        w = _positive_functional(gens, 1)
        return [w]
    if rank == 2:
        w = _positive_functional(gens, 2)
        (a, b), = _simplicial_pieces(gens, 2)
        out = []
        for x, y in ((a, b), (b, a)):
            n = (-x[1], x[0])
            if _dot(n, y) < 0:
                n = (x[1], -x[0])
            out.append(_primitive(n))
        del w
        return sorted(out)
    if rank == 3:
        _positive_functional(gens, 3)
        normals = set()
        for a, b in itertools.combinations(gens, 2):
            n = _cross(a, b)
            if not any(n):
                continue
            vals = [_dot(n, g) for g in gens]
            if all(v >= 0 for v in vals):
                normals.add(_primitive(n))
            elif all(v <= 0 for v in vals):
                normals.add(_primitive(tuple(-x for x in n)))
        return sorted(normals)
    raise ConeError(f"unsupported Picard rank {rank} (cap is 3)")


def xi_integral(dual_gens: Sequence[Vec], lam: Sequence[int]) -> Fraction:
    """Integral of exp(-<y, lam>) over the cone spanned by dual_gens.

    The Lebesgue measure is normalised by the lattice; the cone is
    triangulated unimodularly and each piece contributes prod 1/<rho, lam>.
    """
    uf = triangulate_unimodular(dual_gens)
    total = Fraction(0)
    for c in uf.cones:
        if len(c) != uf.rank:
            raise ConeError("dual cone is not full-dimensional")
        prod = Fraction(1)
        for r in uf.generators(c):
            v = _dot(r, lam)
            if v <= 0:
                raise ConeError("-K is not in the interior of the effective cone")
            prod /= v
        total += prod
    return total


def xi_alpha(pic_data) -> Fraction:
    """alpha* of the variety from its Picard data."""
    r = pic_data.pic_rank
    dual = dual_cone_generators(list(pic_data.effective_cone_gens), r)
    anti = pic_data.anticanonical_class
    if any(_dot(d, anti) <= 0 for d in dual):
        raise ConeError("-K is not in the interior of the effective cone")
    return xi_integral(dual, anti)


# -- shifted cones ----------------------------------------------------------------------


@dataclass(frozen=True)
class ShiftedDecomposition:
    """Splitting of relint(delta) cut by <lam_i^dual, y> < <lam_i^dual, z> for i in K.

    The region equals relint(cone(rays_K)) + F as a direct sum of lattice
    points, where rays_K are the rays of delta orthogonal to every
    lam_i^dual with i in K and F is finite.
    """

    rays_K: tuple[Vec, ...]
    F: frozenset[Vec]
    size_bound: int
    grade_factor: int
    lam_sum: Vec


def dual_basis(lambda_basis: Sequence[Vec]) -> list[Vec]:
    """Rows of the inverse of the basis matrix: the functionals lam_i^dual."""
    k = len(lambda_basis)
    a = intlat.columns(lambda_basis, k)
    inv = intlat.unimodular_inverse(a)
    return [tuple(int(x) for x in inv[i]) for i in range(k)]


def decompose_shifted(delta: Sequence[Vec], lambda_basis: Sequence[Vec], K: Iterable[int],
                      z: Sequence[int], all_rays: Sequence[Vec] | None = None) -> ShiftedDecomposition:
    """Split the shifted relative interior of a unimodular cone ``delta``.

    ``K`` holds 0-based indices into ``lambda_basis``.  With K empty the
    whole relative interior is relint(delta) and F is returned empty (no
    correction factor).  ``all_rays`` (default: the rays of delta) enters
    the grade bound factor |I| * max <rho, lam>.
    """
    delta = [tuple(v) for v in delta]
    K = sorted(set(K))
    duals = dual_basis(lambda_basis)
    rank = len(lambda_basis)
    lam = tuple(sum(d[i] for d in duals) for i in range(rank))
    pool = list(all_rays) if all_rays is not None else delta
    grade_factor = rank * max((_dot(r, lam) for r in pool), default=0)
    size_bound = _dot(z, lam) ** rank
    if not K:
        return ShiftedDecomposition(tuple(delta), frozenset(), size_bound, grade_factor, lam)
    rays_K = [r for r in delta if all(_dot(r, duals[i]) == 0 for i in K)]
    rest = [r for r in delta if r not in rays_K]
    limits = [_dot(z, duals[i]) for i in K]
    top = max(limits) - 1
    points = set()
    if top >= 1 or not rest:
        for mu in itertools.product(range(1, max(top, 0) + 1), repeat=len(rest)):
            y = tuple(sum(m * r[i] for m, r in zip(mu, rest)) for i in range(rank))
            if all(_dot(y, duals[i]) < lim for i, lim in zip(K, limits)):
                points.add(y)
    return ShiftedDecomposition(tuple(rays_K), frozenset(points), size_bound, grade_factor, lam)


# -- constant terms ------------------------------------------------------------------


def ct_restrict(s: ConeSeries, sublattice: IntMatrix | Sequence[Sequence[int]]) -> ConeSeries:
    """Keep exactly the monomials whose exponent lies in the sublattice.

    The sublattice is given by a matrix whose columns form its basis; it
    must be saturated.  This is integration over the character torus of
    the quotient lattice.
    """
    if s.mode != "truncated":
        raise ValueError("constant term needs a truncated series")
    if isinstance(sublattice, np.ndarray):
        basis = intlat.as_matrix(sublattice)
    else:
        basis = intlat.columns([tuple(c) for c in sublattice], s.rank)
    if basis.shape[0] != s.rank:
        raise ValueError("sublattice lives in the wrong lattice")
    if not intlat.is_saturated(basis):
        raise NonSaturatedError("sublattice is not saturated")
    if basis.shape[1] == 0:
        annihilator = [tuple(1 if i == j else 0 for j in range(s.rank)) for i in range(s.rank)]
    else:
        ann = intlat.kernel_basis(basis.T.copy())
        annihilator = [tuple(int(x) for x in ann[:, j]) for j in range(ann.shape[1])]
    out = ConeSeries.zero(s.rank, s.n_max, s.grading)
    for n, table in enumerate(s.grades):
        out.grades[n] = {y: c for y, c in table.items()
                         if all(_dot(a, y) == 0 for a in annihilator)}
    return out


def enumerate_cone_points(gens: Sequence[Vec], grading: Vec, n_max: int,
                          strict: bool = False) -> set[Vec]:
    """Brute-force lattice points of a simplicial cone (all or relative interior).

    Independent of the triangulation machinery: a box search filtered by
    exact rational coordinates.
    """
    gens = [tuple(g) for g in gens]
    rank = len(grading)
    basis = intlat.saturated_span(gens, rank)
    k = basis.shape[1]
    if k != len(gens):
        raise ConeError("generators are not linearly independent")
    bound = n_max * max(1, max(sum(abs(x) for x in g) for g in gens))
    a = intlat.columns(gens, rank)
    out = set()
    for y in itertools.product(range(-bound, bound + 1), repeat=rank):
        gr = _dot(grading, y)
        if gr < 0 or gr > n_max:
            continue
        coords = _coords_in(a, y)
        if coords is None:
            continue
        if all((c > 0) if strict else (c >= 0) for c in coords):
            out.add(y)
    return out


def _coords_in(a: IntMatrix, y: Sequence[int]) -> list[Fraction] | None:
    """Rational coordinates of y on the (independent) columns of a, if in their span."""
    rows, cols = a.shape
    m = [[Fraction(int(a[i, j])) for j in range(cols)] + [Fraction(int(y[i]))] for i in range(rows)]
    piv_cols = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        m[r] = [x / m[r][c] for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * t for x, t in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
    if any(m[i][cols] != 0 for i in range(r, rows)):
        return None
    coords = [Fraction(0)] * cols
    for i, c in enumerate(piv_cols):
        coords[c] = m[i][cols]
    return coords
