"""Smooth complete fans with a cyclic Galois twist.

A :class:`GFan` is a smooth complete fan in N = Z^d together with an
automorphism ``g`` of N of finite order ``e``.  ``g`` stands for the Frobenius
of the constant-field extension F_{q^e}/F_q, so the torus is split by
F_{q^e}(t) and every place of F_q(t) is unramified in it.

Conventions used throughout the package:

* rays live in N (cocharacters), characters in M = Hom(N, Z);
* ``g`` acts on N by matrix multiplication and on M contragrediently;
* ray indices are 0-based; cones are sorted tuples of ray indices and the
  zero cone is the empty tuple.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from . import intlat
from .intlat import FinAb, IntMatrix

Cone = tuple[int, ...]


class FanError(ValueError):
    """The fan data violates an invariant (exit status 2 in the CLI)."""

    def __init__(self, diagnostics: Sequence["Diagnostic"] | str):
        if isinstance(diagnostics, str):
            diagnostics = [Diagnostic("input", diagnostics)]
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(f"{d.code}: {d.message}" for d in self.diagnostics))


class ScopeError(ValueError):
    """Valid input that lies outside what the package supports (exit status 3)."""


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str


def is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = next(d for d in range(2, q + 1) if q % d == 0)
    while q % p == 0:
        q //= p
    return q == 1


@dataclass(frozen=True)
class GFan:
    rank: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[Cone, ...]
    frobenius: tuple[tuple[int, ...], ...]
    e: int
    q: int
    name: str = field(default="", compare=False)

    # -- derived data -------------------------------------------------------

    @cached_property
    def g(self) -> IntMatrix:
        return intlat.as_matrix(self.frobenius)

    @cached_property
    def cones(self) -> tuple[Cone, ...]:
        """All cones (faces of maximal cones), sorted by dimension then indices."""
        faces: set[Cone] = set()
        for c in self.max_cones:
            for k in range(len(c) + 1):
                faces.update(itertools.combinations(c, k))
        return tuple(sorted(faces, key=lambda c: (len(c), c)))

    @cached_property
    def ray_index(self) -> dict[tuple[int, ...], int]:
        return {r: i for i, r in enumerate(self.rays)}

    @cached_property
    def ray_perm(self) -> tuple[int, ...]:
        """perm[i] = index of g(rho_i); requires the G-fan condition."""
        out = []
        for r in self.rays:
            image = tuple(int(x) for x in self.g.dot(np.array(r, dtype=object)))
            if image not in self.ray_index:
                raise FanError([Diagnostic("frobenius_rays", f"g{r} = {image} is not a ray")])
            out.append(self.ray_index[image])
        return tuple(out)

    def perm_power(self, k: int) -> tuple[int, ...]:
        perm = list(range(len(self.rays)))
        for _ in range(k % self.e):
            perm = [self.ray_perm[i] for i in perm]
        return tuple(perm)

    @cached_property
    def _cone_inverses(self) -> list[IntMatrix]:
        return [intlat.unimodular_inverse(intlat.columns([self.rays[i] for i in c], self.rank))
                for c in self.max_cones]

    @property
    def is_split(self) -> bool:
        return self.e == 1

    @cached_property
    def max_ray_l1(self) -> int:
        return max(sum(abs(x) for x in r) for r in self.rays)

    def locate(self, m: Sequence[int]) -> tuple[Cone, tuple[int, ...]]:
        """A maximal cone containing m and the coordinates of m on its rays."""
        vec = np.array([int(x) for x in m], dtype=object)
        for c, inv in zip(self.max_cones, self._cone_inverses):
            coords = inv.dot(vec)
            if all(x >= 0 for x in coords):
                return c, tuple(int(x) for x in coords)
        raise FanError([Diagnostic("coverage", f"{tuple(m)} lies in no cone")])

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "rank": self.rank,
            "rays": [list(r) for r in self.rays],
            "cones": [list(c) for c in self.max_cones],
            "q": self.q,
        }
        if self.e != 1:
            out["frobenius"] = [list(r) for r in self.frobenius]
            out["e"] = self.e
        if self.name:
            out["name"] = self.name
        return out

    def with_q(self, q: int) -> "GFan":
        return GFan(self.rank, self.rays, self.max_cones, self.frobenius, self.e, q, self.name)


# -- loading -----------------------------------------------------------------


def fan_from_dict(data: dict[str, Any], check: bool = True) -> GFan:
    """Build a GFan from the JSON layout; raises FanError on bad input."""
    try:
        rank = int(data["rank"])
        rays = tuple(tuple(int(x) for x in r) for r in data["rays"])
        cones = tuple(tuple(sorted(int(i) for i in c)) for c in data["cones"])
        q = int(data["q"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FanError(f"malformed fan data: {exc!r}") from None
    if rank < 1:
        raise FanError("rank must be at least 1")
    if any(len(r) != rank for r in rays):
        raise FanError("every ray must have length rank")
    if any(i < 0 or i >= len(rays) for c in cones for i in c):
        raise FanError("cone refers to a missing ray")
    if len(set(rays)) != len(rays):
        raise FanError("repeated ray")
    frob_raw = data.get("frobenius")
    if frob_raw is None:
        frob = tuple(tuple(int(i == j) for j in range(rank)) for i in range(rank))
    else:
        try:
            frob = tuple(tuple(int(x) for x in row) for row in frob_raw)
        except (TypeError, ValueError):
            raise FanError("frobenius must be an integer matrix") from None
        if len(frob) != rank or any(len(r) != rank for r in frob):
            raise FanError("frobenius must be a rank x rank matrix")
    if "e" in data:
        e = int(data["e"])
    else:
        # an explicit frobenius without e: take its exact order
        e = intlat.order_of(intlat.as_matrix(frob), limit=1000) or 0
    if e < 1:
        raise FanError([Diagnostic("frobenius_order", "frobenius has no finite order")])
    fan = GFan(rank, rays, tuple(sorted(set(cones))), frob, e, q, str(data.get("name", "")))
    if check:
        diags = validate(fan)
        if diags:
            raise FanError(diags)
    return fan


def load_fan(path: str | Path, check: bool = True) -> GFan:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FanError(f"malformed JSON: {exc}") from None
    except OSError as exc:
        raise FanError(f"cannot read fan file: {exc}") from None
    if not isinstance(data, dict):
        raise FanError("fan JSON must be an object")
    return fan_from_dict(data, check=check)


# -- validation ----------------------------------------------------------------


def _probe_vectors(d: int) -> Iterable[tuple[int, ...]]:
    box = 3 if d <= 3 else 2
    for v in itertools.product(range(-box, box + 1), repeat=d):
        if any(v):
            yield v


def validate(f: GFan) -> list[Diagnostic]:
    """All violated invariants, as named diagnostics (empty list when valid)."""
    out: list[Diagnostic] = []
    d = f.rank
    if not is_prime_power(f.q):
        out.append(Diagnostic("q", f"q = {f.q} is not a prime power"))
    for r in f.rays:
        if math.gcd(*r) != 1:
            out.append(Diagnostic("primitive", f"ray {r} is not primitive"))
    used = {i for c in f.max_cones for i in c}
    if used != set(range(len(f.rays))):
        out.append(Diagnostic("unused_ray", "some rays lie in no cone"))
    regular = True
    for c in f.max_cones:
        if len(c) != d:
            out.append(Diagnostic("full_dimensional", f"cone {list(c)} is not {d}-dimensional"))
            regular = False
            continue
        dt = intlat.det(intlat.columns([f.rays[i] for i in c], d))
        if abs(dt) != 1:
            out.append(Diagnostic("regular", f"cone {list(c)} has determinant {dt}"))
            regular = False
    if not f.max_cones:
        out.append(Diagnostic("complete", "no cones"))
        regular = False
    if regular:
        walls: dict[Cone, int] = {}
        for c in f.max_cones:
            for w in itertools.combinations(c, d - 1):
                walls[w] = walls.get(w, 0) + 1
        for w, k in walls.items():
            if k != 2:
                out.append(Diagnostic("complete", f"wall {list(w)} lies in {k} maximal cone(s)"))
        if not out:
            out.extend(_probe(f))
    out.extend(_check_frobenius(f))
    return out


def _probe(f: GFan) -> list[Diagnostic]:
    out = []
    inverses = f._cone_inverses
    # an interior point of one maximal cone must not meet any other one
    for k, c in enumerate(f.max_cones):
        centre = np.array([sum(f.rays[i][j] for i in c) for j in range(f.rank)], dtype=object)
        for k2, inv in enumerate(inverses):
            if k2 != k and all(x >= 0 for x in inv.dot(centre)):
                out.append(Diagnostic("overlap", f"cones {list(c)} and {list(f.max_cones[k2])} overlap"))
                return out
    for v in _probe_vectors(f.rank):
        vec = np.array(v, dtype=object)
        if not any(all(x >= 0 for x in inv.dot(vec)) for inv in inverses):
            out.append(Diagnostic("complete", f"direction {v} is not covered"))
            break
    return out


def _check_frobenius(f: GFan) -> list[Diagnostic]:
    g = f.g
    dt = intlat.det(g)
    if abs(dt) != 1:
        return [Diagnostic("frobenius_invertible", f"det(g) = {dt}")]
    out = []
    if not np.array_equal(intlat.matpow(g, f.e), intlat.identity(f.rank)):
        out.append(Diagnostic("frobenius_order", f"g^{f.e} is not the identity"))
    elif intlat.order_of(g, limit=f.e) != f.e:
        out.append(Diagnostic("frobenius_order", f"g has order smaller than e = {f.e}"))
    try:
        perm = f.ray_perm
    except FanError as exc:
        return out + exc.diagnostics
    cones = set(f.max_cones)
    for c in f.max_cones:
        image = tuple(sorted(perm[i] for i in c))
        if image not in cones:
            out.append(Diagnostic("frobenius_cones", f"g maps cone {list(c)} to a non-cone"))
    return out


# -- orbits and decomposition groups ---------------------------------------------


@dataclass(frozen=True)
class RayOrbit:
    rays: tuple[int, ...]
    representative: int
    size: int
    d_alpha: int


def _perm_orbits(perm: Sequence[int]) -> list[tuple[int, ...]]:
    seen: set[int] = set()
    out = []
    for i in range(len(perm)):
        if i in seen:
            continue
        orbit = [i]
        j = perm[i]
        while j != i:
            orbit.append(j)
            j = perm[j]
        seen.update(orbit)
        out.append(tuple(sorted(orbit)))
    return out


def orbits(f: GFan) -> list[RayOrbit]:
    """Ray orbits under <g>.  In the constant-field case d_alpha is the orbit size."""
    return [RayOrbit(o, o[0], len(o), len(o)) for o in _perm_orbits(f.ray_perm)]


@dataclass(frozen=True)
class Decomposition:
    """Data of the decomposition group G_v = <g^fv> at a place of degree fv."""

    fv: int
    group_order: int
    sub_orbits: tuple[tuple[int, ...], ...]
    stable_cones: tuple[Cone, ...]
    cone_orbits: tuple[tuple[int, ...], ...]

    @property
    def l(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.sub_orbits)


def decomposition_restriction(f: GFan, fv: int) -> Decomposition:
    """Sub-orbits of rays under <g^fv> and the <g^fv>-stable cones.

    ``cone_orbits[k]`` lists the indices (into ``sub_orbits``) of the
    sub-orbits that make up ``stable_cones[k]``.
    """
    if fv < 1:
        raise ValueError("fv must be positive")
    perm = f.perm_power(fv)
    subs = _perm_orbits(perm)
    where = {i: k for k, b in enumerate(subs) for i in b}
    stable, structure = [], []
    for c in f.cones:
        if tuple(sorted(perm[i] for i in c)) == c:
            stable.append(c)
            structure.append(tuple(sorted({where[i] for i in c})))
    order = f.e // math.gcd(f.e, fv)
    return Decomposition(fv, order, tuple(subs), tuple(stable), tuple(structure))


# -- Picard data -----------------------------------------------------------------


@dataclass(frozen=True)
class PLFunction:
    """A G-invariant piecewise-linear function, one integer per ray orbit."""

    values: tuple[int, ...]

    def ray_values(self, f: GFan) -> list[int]:
        out = [0] * len(f.rays)
        for val, orb in zip(self.values, orbits(f)):
            for i in orb.rays:
                out[i] = val
        return out

    def evaluate(self, f: GFan, m: Sequence[int]) -> int:
        cone, coords = f.locate(m)
        rv = self.ray_values(f)
        return sum(c * rv[i] for i, c in zip(cone, coords))


def phi0(f: GFan) -> PLFunction:
    """The anticanonical PL function: 1 on every ray."""
    return PLFunction(tuple(1 for _ in orbits(f)))


@dataclass(frozen=True)
class PicardData:
    pic_rank: int
    fixed_characters: IntMatrix          # rows: basis of M^G
    gamma: IntMatrix                     # M^G -> P^G, shape (#orbits, rank M^G)
    pic_geometric_rank: int              # rank of Pic over the splitting field
    pic_projection: IntMatrix            # P -> Pic_L coordinates
    pic_action: IntMatrix                # g on Pic_L
    pic_basis: IntMatrix                 # columns: basis of Pic_L^G in Pic_L coordinates
    divisor_classes: tuple[tuple[int, ...], ...]  # class of D_alpha in the Pic basis
    anticanonical_class: tuple[int, ...]
    h1_gxt: FinAb
    ct_order: int | float

    @property
    def effective_cone_gens(self) -> tuple[tuple[int, ...], ...]:
        return self.divisor_classes


def character_projection(f: GFan) -> IntMatrix:
    """Rows form a basis of M^G; applied to n in N this gives its image in (M^G)^dual."""
    basis = intlat.fixed_lattice(f.g.T.copy())
    return basis.T.copy()


def picard(f: GFan) -> PicardData:
    """Picard lattice of X_Sigma over F_q(t), with the geometric Pic and its g-action."""
    from . import gcoh

    d, nr = f.rank, len(f.rays)
    orbs = orbits(f)
    fixed_m = character_projection(f)
    gamma = intlat.zeros(len(orbs), fixed_m.shape[0])
    for a, orb in enumerate(orbs):
        rho = f.rays[orb.representative]
        for j in range(fixed_m.shape[0]):
            gamma[a, j] = sum(int(fixed_m[j, k]) * rho[k] for k in range(d))

    ray_matrix = intlat.as_matrix(f.rays)           # gamma over L: M -> P
    u, dm, _ = intlat.snf(ray_matrix)
    if intlat.diagonal(dm) != [1] * d:
        raise FanError([Diagnostic("picard", "geometric Picard group is not free")])
    proj = u[d:, :].copy()
    lift = intlat.unimodular_inverse(u)[:, d:].copy()
    perm_mat = intlat.zeros(nr, nr)
    for i, j in enumerate(f.ray_perm):
        perm_mat[j, i] = 1
    action = proj.dot(perm_mat).dot(lift)
    basis = intlat.fixed_lattice(action)
    classes = []
    for orb in orbs:
        vec = [0] * nr
        for i in orb.rays:
            vec[i] = 1
        c = proj.dot(np.array(vec, dtype=object))
        coords = intlat.solve_integer(basis, [int(x) for x in c])
        if coords is None:
            raise FanError([Diagnostic("picard", "orbit divisor is not G-invariant")])
        classes.append(tuple(coords))
    r = basis.shape[1]
    if r != len(orbs) - fixed_m.shape[0]:
        raise FanError([Diagnostic("picard", "Picard rank does not match the exact sequence")])
    anti = tuple(sum(c[k] for c in classes) for k in range(r))
    h1 = gcoh.h1(gcoh.GLattice(d, intlat.unimodular_inverse(f.g).T.copy(), f.e))
    taus = intlat.zeros(fixed_m.shape[0], len(orbs))
    for a, orb in enumerate(orbs):
        for j in range(fixed_m.shape[0]):
            taus[j, a] = orb.d_alpha * gamma[a, j]
    ct = intlat.sublattice_index(taus, fixed_m.shape[0]) if fixed_m.shape[0] else 1
    return PicardData(r, fixed_m, gamma, nr - d, proj, action, basis,
                      tuple(classes), anti, h1, ct)


# -- built-in fans -------------------------------------------------------------------

BUILTIN: dict[str, dict[str, Any]] = {
    "P1": {"rank": 1, "rays": [[1], [-1]], "cones": [[0], [1]], "q": 2},
    "P2": {"rank": 2, "rays": [[1, 0], [0, 1], [-1, -1]],
           "cones": [[0, 1], [1, 2], [0, 2]], "q": 2},
    "P1xP1": {"rank": 2, "rays": [[1, 0], [0, 1], [-1, 0], [0, -1]],
              "cones": [[0, 1], [1, 2], [2, 3], [0, 3]], "q": 2},
    "BlP2": {"rank": 2, "rays": [[1, 0], [0, 1], [-1, -1], [1, 1]],
             "cones": [[0, 3], [1, 3], [1, 2], [0, 2]], "q": 2},
    "P1xP1_swap": {"rank": 2, "rays": [[1, 0], [0, 1], [-1, 0], [0, -1]],
                   "cones": [[0, 1], [1, 2], [2, 3], [0, 3]],
                   "frobenius": [[0, 1], [1, 0]], "e": 2, "q": 2},
    "P1xP1_antipodal": {"rank": 2, "rays": [[1, 0], [0, 1], [-1, 0], [0, -1]],
                        "cones": [[0, 1], [1, 2], [2, 3], [0, 3]],
                        "frobenius": [[-1, 0], [0, -1]], "e": 2, "q": 2},
    "P2_rotation": {"rank": 2, "rays": [[1, 0], [0, 1], [-1, -1]],
                    "cones": [[0, 1], [1, 2], [0, 2]],
                    "frobenius": [[0, -1], [1, -1]], "e": 3, "q": 2},
    "P1xP1xP1": {"rank": 3, "rays": [[1, 0, 0], [0, 1, 0], [0, 0, 1],
                                      [-1, 0, 0], [0, -1, 0], [0, 0, -1]],
                 "cones": [[a, b, c] for a in (0, 3) for b in (1, 4) for c in (2, 5)],
                 "q": 2},
}


def builtin(name: str, q: int | None = None) -> GFan:
    data = dict(BUILTIN[name])
    data["name"] = name
    if q is not None:
        data["q"] = q
    return fan_from_dict(data)
