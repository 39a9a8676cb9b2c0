import itertools
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from torzeta import conegf, ffplaces, gfan, heightzeta as hz, intlat
from torzeta.conegf import ConeSeries

NAMES = sorted(gfan.BUILTIN)


def residues(f):
    return range(1, max(f.e, 2) + 1)


def test_local_height_examples():
    p1, p2 = gfan.builtin("P1"), gfan.builtin("P2")
    assert hz.local_height_exponent(p2, gfan.phi0(p2), (0, 0)) == 0
    assert hz.local_height_exponent(p1, gfan.phi0(p1), (3,)) == 3
    assert hz.local_height_exponent(p2, gfan.phi0(p2), (-2, -1)) == 3


def test_q_polynomial_p1():
    qp = hz.q_polynomial(gfan.builtin("P1"), 1)
    assert qp.coeffs == {(0, 0): 1, (1, 1): -1}


@pytest.mark.parametrize("name", NAMES)
def test_q_polynomial_audit(name):
    """Q / prod (1 - X) re-expanded equals the sum over stable cones, to degree 6."""
    f = gfan.builtin(name)
    for fv in residues(f):
        dec = gfan.decomposition_restriction(f, fv)
        nb = len(dec.sub_orbits)
        grading, n = (1,) * nb, 6
        qp = hz.q_polynomial(f, fv)
        lhs = ConeSeries.from_points(qp.coeffs, grading, n, nb)
        for b in range(nb):
            lhs = lhs * ConeSeries.from_points(
                {tuple(k * (i == b) for i in range(nb)): 1 for k in range(n + 1)}, grading, n, nb)
        pts = {}
        for cone in dec.cone_orbits:
            for ks in itertools.product(range(1, n + 1), repeat=len(cone)):
                if sum(ks) <= n:
                    y = [0] * nb
                    for k, b in zip(ks, cone):
                        y[b] = k
                    pts[tuple(y)] = pts.get(tuple(y), 0) + 1
        assert lhs.same_as(ConeSeries.from_points(pts, grading, n, nb))


@pytest.mark.parametrize("name", NAMES)
def test_q_polynomial_has_no_linear_terms(name):
    f = gfan.builtin(name)
    for fv in residues(f):
        qp = hz.q_polynomial(f, fv)
        assert qp.constant == 1
        assert qp.weighted_min_degree() is None or qp.weighted_min_degree() >= 2


def test_local_factor_p1():
    f = gfan.builtin("P1")
    (t1, a), (t2, b) = hz.sub_orbit_monomials(f, 1)
    assert (t1, t2) == (1, 1) and {a, b} == {1, -1}
    g, n = (1, 0), 6
    geo = lambda y: ConeSeries.from_points({(k * y[0], k * y[1]): 1 for k in range(n + 1)}, g, n, 2)
    want = geo((1, a)) * geo((1, b)) * ConeSeries.from_points({(0, 0): 1, (2, 0): -1}, g, n, 2)
    assert hz.local_factor(f, 1, n).same_as(want)


def test_local_factor_swap_orbit_lengths():
    f = gfan.builtin("P1xP1_swap")
    monos = hz.sub_orbit_monomials(f, 1)
    assert [m[0] for m in monos] == [2, 2]
    assert [m[0] for m in hz.sub_orbit_monomials(f, 3)] == [6, 6]
    assert [m[0] for m in hz.sub_orbit_monomials(f, 2)] == [2, 2, 2, 2]


@pytest.mark.parametrize("name", NAMES)
def test_local_factor_direct_sum(name):
    f = gfan.builtin(name)
    for fv in range(1, 5):
        s = hz.local_factor(f, fv, 6)
        assert s.grades[0] == {(0,) * s.rank: 1}
        assert s.same_as(hz.local_factor_direct(f, fv, 6))


@pytest.mark.parametrize("name", NAMES)
def test_truncation_exactness(name):
    f = gfan.builtin(name)
    n = 4 if f.rank < 3 else 3
    assert hz.zeta_coeffs(f, n) == hz.zeta_coeffs(f, n, max_degree=n + 2)


def _fixed_points(f, fv, budget):
    """Lattice points m of N fixed by g^fv with phi0(m) <= budget, grouped by phi0 value."""
    phi = gfan.phi0(f)
    gk = intlat.matpow(f.g, fv % f.e)
    bound = budget * f.max_ray_l1
    out = {}
    for m in itertools.product(range(-bound, bound + 1), repeat=f.rank):
        if list(gk.dot(np.array(m, dtype=object))) != list(m):
            continue
        h = phi.evaluate(f, m)
        if h <= budget:
            out.setdefault(h, []).append(m)
    return out


def convolution_counts(f, n):
    """N(k) from tuples (m_v) over places with sum deg(v) phi0(m_v) = k and zero character sum."""
    field = ffplaces.field(f.q)
    places = ffplaces.places_up_to(field, n)
    proj = intlat.to_lists(gfan.character_projection(f))
    pts = {d: _fixed_points(f, d, n // d) for d in range(1, n + 1)}
    counts = [0] * (n + 1)

    def rec(i, used, total):
        if i == len(places):
            if all(x == 0 for x in total):
                counts[used] += 1
            return
        d = places[i].degree
        for h, ms in pts[d].items():
            if used + d * h > n:
                continue
            for m in ms:
                new = [t + d * sum(p * x for p, x in zip(row, m)) for t, row in zip(total, proj)]
                rec(i + 1, used + d * h, new)

    rec(0, 0, [0] * len(proj))
    return [hz.torus_points(f) * c for c in counts]


@pytest.mark.parametrize("name, q, n", [
    ("P1", 2, 4), ("P1", 3, 3), ("P2", 2, 4), ("P1xP1", 2, 4), ("BlP2", 2, 4), ("BlP2", 3, 3),
    ("P1xP1_swap", 2, 4), ("P1xP1_antipodal", 2, 4), ("P2_rotation", 2, 4),
])
def test_character_kill_against_convolution(name, q, n):
    f = gfan.builtin(name, q)
    assert hz.zeta_coeffs(f, n) == convolution_counts(f, n)


@pytest.mark.parametrize("name", ["P1", "P2", "P1xP1", "BlP2", "P1xP1xP1"])
@pytest.mark.parametrize("q", [2, 3, 5])
def test_normalization_split(name, q):
    f = gfan.builtin(name, q)
    assert hz.zeta_coeffs(f, 0) == [(q - 1) ** f.rank]


def test_normalization_twisted():
    assert hz.zeta_coeffs(gfan.builtin("P1xP1_swap"), 0) == [3]
    assert hz.zeta_coeffs(gfan.builtin("P1xP1_swap", 3), 0) == [8]
    assert hz.torus_points(gfan.builtin("P1xP1_antipodal")) == 9
    assert hz.torus_points(gfan.builtin("P2_rotation")) == 7


def test_scope_cap():
    with pytest.raises(gfan.ScopeError):
        hz.zeta_coeffs(gfan.builtin("P1"), 9)
    assert len(hz.zeta_coeffs(gfan.builtin("P1"), 10, enforce_cap=False)) == 11


def test_p1_closed_form():
    # points of G_m of height q^(2h): pairs of coprime monic polynomials, times scalars
    for q in (2, 3):
        got = hz.zeta_coeffs(gfan.builtin("P1", q), 8)
        want = [q - 1] + [0] * 8
        for h in range(1, 5):
            want[2 * h] = (q * q - 1) * q ** (2 * h - 1)
        assert got == want


# -- local densities and the constant ---------------------------------------------------


def brute_points(f, fv):
    """#X(F_{q^fv}) for the built-in examples, from explicit descriptions."""
    Q = f.q ** fv
    name = f.name
    if name in ("P1xP1_swap",):
        return (f.q ** (2 * fv) + 1) if fv % 2 else (Q + 1) ** 2
    if name == "P1xP1_antipodal":
        return (Q + 1) ** 2
    if name == "P2_rotation":
        return Q * Q + Q + 1
    raise KeyError(name)


def test_local_point_counts():
    p2 = gfan.builtin("P2")
    assert hz.local_point_count(p2, 1) == 7
    assert sum((p2.q - 1) ** (2 - len(c)) for c in p2.cones) == 7
    assert hz.local_point_count(gfan.builtin("BlP2"), 1) == 9
    for name in ("P1xP1_swap", "P1xP1_antipodal", "P2_rotation"):
        f = gfan.builtin(name)
        for fv in range(1, 7):
            assert hz.local_point_count(f, fv) == brute_points(f, fv)


def test_density_polynomial_split_p2():
    poly = hz.density_polynomial(gfan.builtin("P2"), 1)
    # (1 - x) * (1 + x + x^2) = 1 - x^3
    assert poly == [1, 0, 0, -1]


@pytest.mark.parametrize("name, closed", [
    ("P1", lambda q: (q * q - 1) / (q * math.log(q))),
    ("P1xP1_swap", lambda q: (q**4 - 1) / (2 * q * q * math.log(q))),
])
@pytest.mark.parametrize("q", [2, 3])
def test_tau_closed_forms(name, closed, q):
    f = gfan.builtin(name, q)
    for D in (4, 8, 12):
        t = hz.tau_h(f, D)
        assert abs(t.value - closed(q)) <= t.error_bound


@pytest.mark.parametrize("name", ["P1", "P2", "P1xP1", "BlP2", "P1xP1_swap", "P2_rotation"])
def test_tau_stability(name):
    f = gfan.builtin(name)
    prev = hz.tau_h(f, 6)
    for D in range(7, 12):
        cur = hz.tau_h(f, D)
        assert abs(cur.value - prev.value) < prev.error_bound
        assert cur.error_bound <= prev.error_bound / f.q * (1 + 1e-9)
        prev = cur


def test_l_pic_split():
    # rank r split: ((q / (q - 1)) / log q) ** r
    for name, r in (("P2", 1), ("BlP2", 2)):
        got = hz.l_pic(gfan.builtin(name))
        assert abs(got - (mpmath.mpf(2) / mpmath.log(2)) ** r) < 1e-30


def test_report_json():
    rep = hz.peyre_constant(gfan.builtin("BlP2"), 8, n_max=3)
    d = rep.to_dict()
    assert d["N"] == [1, 0, 6, 18] and d["pole_order"] == 2 and d["alpha_star"] == "1/6"
    assert d["beta"] == 1 and d["tau_H"]["cutoff"] == 8
    assert abs(d["C_star"] - d["tau_H"]["value"] / 6) < 1e-12


def test_growth_period():
    assert hz.growth_period(gfan.builtin("P1")) == 2
    assert hz.growth_period(gfan.builtin("BlP2")) == 6
