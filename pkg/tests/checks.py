"""Independent enumeration checks shared by the module tests and the acceptance run."""

from __future__ import annotations

import itertools
import random

from torzeta import conegf, intlat
from torzeta.conegf import ConeSeries


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def box(rank, bound):
    return itertools.product(range(-bound, bound + 1), repeat=rank)


# -- shifted cones -------------------------------------------------------------------


ORTHANT_FAN_2D = {
    # rays of a unimodular fan supported on the first quadrant, with all its cones
    "rays": [(1, 0), (1, 1), (0, 1)],
    "cones": [(), (0,), (1,), (2,), (0, 1), (1, 2)],
}


def shifted_region(delta, duals, K, z, n_max):
    """Points of relint(delta) with <lam_i^dual, y> < <lam_i^dual, z> for i in K, grade <= n_max."""
    lam = tuple(sum(d[i] for d in duals) for i in range(len(duals)))
    if delta:
        pts = conegf.enumerate_cone_points(delta, lam, n_max, strict=True)
    else:
        pts = {(0,) * len(duals)}
    return {y for y in pts if all(dot(y, duals[i]) < dot(z, duals[i]) for i in K)}


def check_shifted(delta, lambda_basis, K, z, all_rays, n_max=10):
    """Return a list of failure strings (empty when the decomposition checks out)."""
    dec = conegf.decompose_shifted(delta, lambda_basis, K, z, all_rays)
    duals = conegf.dual_basis(lambda_basis)
    lam = dec.lam_sum
    region = shifted_region(delta, duals, K, z, n_max)
    expect = ConeSeries.from_points(region, lam, n_max, len(lam))
    base = (ConeSeries.from_points(conegf.enumerate_cone_points(dec.rays_K, lam, n_max, strict=True),
                                   lam, n_max, len(lam))
            if dec.rays_K else ConeSeries.one(len(lam), n_max, lam))
    factor = (ConeSeries.from_points(dec.F, lam, n_max, len(lam)) if K
              else ConeSeries.one(len(lam), n_max, lam))
    out = []
    if not (base * factor).same_as(expect):
        out.append(f"factorization fails for delta={delta} K={K} z={z}")
    if len(dec.F) > dec.size_bound:
        out.append(f"|F| = {len(dec.F)} exceeds {dec.size_bound}")
    for y in dec.F:
        if dot(y, lam) > dec.grade_factor * dot(z, lam):
            out.append(f"F point {y} above the grade bound")
    if not K and dec.rays_K != tuple(delta):
        out.append("K empty must keep every ray")
    want_rays = tuple(r for r in delta if all(dot(r, duals[i]) == 0 for i in K))
    if dec.rays_K != want_rays:
        out.append(f"rays_K {dec.rays_K} != {want_rays}")
    return out


def shifted_cases(max_grade=3):
    rays = ORTHANT_FAN_2D["rays"]
    basis = [(1, 0), (0, 1)]
    for cone in ORTHANT_FAN_2D["cones"]:
        delta = [rays[i] for i in cone]
        for k in range(3):
            for K in itertools.combinations(range(2), k):
                for z in itertools.product(range(max_grade + 1), repeat=2):
                    if sum(z) <= max_grade:
                        yield delta, basis, K, z, rays


# -- constant terms ------------------------------------------------------------------


def random_saturated(rank, k, rng):
    """First k columns of a random unimodular matrix."""
    m = intlat.identity(rank)
    for _ in range(rng.randint(2, 8) if rank > 1 else 0):
        i, j = rng.sample(range(rank), 2)
        e = intlat.identity(rank)
        e[i, j] = rng.randint(-2, 2)
        m = m.dot(e)
    cols = rng.sample(range(rank), k)
    return m[:, cols].copy()


def in_lattice(basis, y):
    if basis.shape[1] == 0:
        return not any(y)
    return intlat.solve_integer(basis, list(y)) is not None


TECH0_CONES = {
    2: [(1, 0), (1, 2)],
    3: [(1, 0, 0), (0, 1, 0), (1, 1, 2)],
}


def check_ct_restrict(rank, basis, n_max=8):
    gens = TECH0_CONES[rank]
    grading = (1,) * rank
    series = conegf.cone_series_rational(conegf.triangulate_unimodular(gens)).truncate(grading, n_max)
    got = conegf.ct_restrict(series, basis)
    pts = conegf.enumerate_cone_points(gens, grading, n_max)
    want = ConeSeries.from_points({y for y in pts if in_lattice(basis, y)}, grading, n_max, rank)
    return got.same_as(want)


def tech0_cases(count=20, seed=0):
    rng = random.Random(seed)
    for t in range(count):
        rank = 2 if t % 2 == 0 else 3
        k = rng.randint(0, rank)
        yield rank, random_saturated(rank, k, rng)
