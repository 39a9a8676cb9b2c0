"""Anticanonical height zeta function and the predicted leading constant.

Over K = F_q(t) with a torus split by F_{q^e}(t) every place v is unramified,
with decomposition group G_v = <g^f> (f = deg v).  A rational point of the
torus is, up to the finite group T(F_q), a family of local valuation vectors
m_v in N^{G_v} whose weighted sum vanishes; its height exponent is
sum_v f_v * phi0(m_v).  Hence

    N(n) = #T(F_q) * [t^n] CT_z  prod_v  F_v(z, t),

    F_v = sum_{sigma in Sigma^{G_v}} prod_{beta in sigma(1)/G_v} X_beta / (1 - X_beta),
    X_beta = z^{f pi(tau_beta)} t^{f l_beta},

where tau_beta is the sum of the rays in the sub-orbit beta, l_beta its size
and pi: N -> (M^G)^dual the restriction to invariant characters.  Writing
F_v = Q_v(X) / prod_beta (1 - X_beta) isolates the integer polynomial Q_v.
The t-variable is kept as the first exponent coordinate so that the constant
term is a sublattice restriction in the sense of :mod:`conegf`.

The constant is tau_H = q^d * l(Pic) * prod_v det(1 - g^f q_v^-1 | Pic_L) #X(k_v) / q_v^d,
with l(Pic) the leading coefficient of the Artin L-function of Pic_L at s = 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Sequence

import mpmath

from . import conegf, ffplaces, gcoh, gfan, intlat
from .conegf import ConeSeries
from .gfan import GFan, PLFunction

N_MAX_CAP = 8


# -- local heights -------------------------------------------------------------


def local_height_exponent(f: GFan, phi: PLFunction, m: Sequence[int]) -> int:
    """phi(m): locate a cone containing m and apply that cone's linear form.

    The local height at v is q_v ** phi(m) for a point with valuation vector m.
    """
    return phi.evaluate(f, m)


# -- the Q polynomial ------------------------------------------------------------


@dataclass(frozen=True)
class QPoly:
    """Integer polynomial in one variable X_beta per sub-orbit beta."""

    l: tuple[int, ...]
    coeffs: dict[tuple[int, ...], int]

    def __call__(self, values: Sequence[Any]) -> Any:
        total = 0
        for mono, c in self.coeffs.items():
            term = c
            for x, k in zip(values, mono):
                term = term * x ** k
            total = total + term
        return total

    def weighted_min_degree(self) -> int | None:
        """Smallest total degree of a non-constant monomial of Q(X_beta^l_beta)."""
        degs = [sum(k * lb for k, lb in zip(mono, self.l))
                for mono, c in self.coeffs.items() if c and any(mono)]
        return min(degs) if degs else None

    @property
    def constant(self) -> int:
        return self.coeffs.get((0,) * len(self.l), 0)


def q_polynomial(f: GFan, fv: int) -> QPoly:
    """Q_{Sigma,v} = prod_beta (1 - X_beta) * sum_sigma prod_{beta in sigma} X_beta/(1 - X_beta)."""
    dec = gfan.decomposition_restriction(f, fv)
    nb = len(dec.sub_orbits)
    coeffs: dict[tuple[int, ...], int] = {}
    for cone in dec.cone_orbits:
        inside = set(cone)
        outside = [b for b in range(nb) if b not in inside]
        # prod_{beta in sigma} X_beta * prod_{beta not in sigma} (1 - X_beta)
        for k in range(len(outside) + 1):
            for extra in _subsets(outside, k):
                mono = tuple(1 if (b in inside or b in extra) else 0 for b in range(nb))
                coeffs[mono] = coeffs.get(mono, 0) + (-1) ** k
    return QPoly(dec.l, {m: c for m, c in coeffs.items() if c})


def _subsets(items: Sequence[int], k: int):
    import itertools
    return (set(c) for c in itertools.combinations(items, k))


# -- local factors -------------------------------------------------------------------


def _proj(f: GFan) -> intlat.IntMatrix:
    return gfan.character_projection(f)


def sub_orbit_monomials(f: GFan, fv: int) -> list[tuple[int, ...]]:
    """Exponent (t, z) of X_beta for each sub-orbit beta at a place of degree fv."""
    dec = gfan.decomposition_restriction(f, fv)
    proj = _proj(f)
    out = []
    for b in dec.sub_orbits:
        tau = [sum(f.rays[i][k] for i in b) for k in range(f.rank)]
        z = tuple(fv * sum(int(proj[j, k]) * tau[k] for k in range(f.rank))
                  for j in range(proj.shape[0]))
        out.append((fv * len(b),) + z)
    return out


def _grading(f: GFan) -> tuple[int, ...]:
    return (1,) + (0,) * _proj(f).shape[0]


def local_factor(f: GFan, v: ffplaces.Place | int, n_max: int) -> ConeSeries:
    """The local factor Q_v(X) / prod_beta (1 - X_beta), truncated at t-grade n_max.

    Depends on the place only through its degree; ``v`` may be that degree.
    """
    fv = v if isinstance(v, int) else v.degree
    return _local_factor_cached(f, fv, n_max)


@lru_cache(maxsize=256)
def _local_factor_cached(f: GFan, fv: int, n_max: int) -> ConeSeries:
    grading = _grading(f)
    rank = len(grading)
    monos = sub_orbit_monomials(f, fv)
    qp = q_polynomial(f, fv)
    qpoints: dict[tuple[int, ...], int] = {}
    for mono, c in qp.coeffs.items():
        y = tuple(sum(k * x[i] for k, x in zip(mono, monos)) for i in range(rank))
        qpoints[y] = qpoints.get(y, 0) + c
    out = ConeSeries.from_points(qpoints, grading, n_max, rank)
    for x in monos:
        geo = {tuple(k * xi for xi in x): 1 for k in range(n_max // x[0] + 1)}
        out = out * ConeSeries.from_points(geo, grading, n_max, rank)
    return out


def local_factor_direct(f: GFan, fv: int, n_max: int) -> ConeSeries:
    """Same series by summing over N^{G_v}: each m contributes z^{fv pi(m)} t^{fv phi0(m)}.

    Every m lies in a unique relative interior of a G_v-stable cone; m is
    enumerated as a non-negative integer combination of the sub-orbit sums.
    """
    dec = gfan.decomposition_restriction(f, fv)
    grading = _grading(f)
    monos = sub_orbit_monomials(f, fv)
    points: dict[tuple[int, ...], int] = {}
    for cone in dec.cone_orbits:
        steps = [monos[b][0] for b in cone]
        for ks in _positive_tuples(steps, n_max):
            y = tuple(sum(k * monos[b][i] for k, b in zip(ks, cone)) for i in range(len(grading)))
            points[y] = points.get(y, 0) + 1
    return ConeSeries.from_points(points, grading, n_max, len(grading))


def _positive_tuples(steps: Sequence[int], budget: int):
    if not steps:
        yield ()
        return
    for k in range(1, budget // steps[0] + 1):
        for tail in _positive_tuples(steps[1:], budget - k * steps[0]):
            yield (k,) + tail


def _power_near_one(s: ConeSeries, count: int, low: int) -> ConeSeries:
    """s ** count for s = 1 + (terms of grade >= low), via the binomial series."""
    one = ConeSeries.one(s.rank, s.n_max, s.grading)
    if count == 0:
        return one
    h = s + one.scale(-1)
    result, power = one, one
    for k in range(1, s.n_max // low + 1):
        power = power * h
        result = result + power.scale(math.comb(count, k))
    return result


def torus_points(f: GFan) -> int:
    """#T(F_q) = |det(q - g)| on the cocharacter lattice."""
    n = f.rank
    return abs(intlat.det(f.g - intlat.identity(n) * f.q) if n else 1)


def euler_product(f: GFan, n_max: int, max_degree: int | None = None) -> ConeSeries:
    """prod over places of degree <= max_degree (default n_max) of the local factors."""
    D = n_max if max_degree is None else max_degree
    grading = _grading(f)
    total = ConeSeries.one(len(grading), n_max, grading)
    for d in range(1, D + 1):
        if d > n_max:
            factor = local_factor(f, d, n_max)
            assert factor.same_as(ConeSeries.one(len(grading), n_max, grading))
            continue
        total = total * _power_near_one(local_factor(f, d, n_max), ffplaces.count_places(f.q, d), d)
    return total


def check_scope(f: GFan, n_max: int) -> None:
    if n_max > N_MAX_CAP:
        raise gfan.ScopeError(f"n_max = {n_max} exceeds the cap {N_MAX_CAP}")
    if n_max < 0:
        raise gfan.ScopeError("n_max must be non-negative")


def zeta_coeffs(f: GFan, n_max: int, max_degree: int | None = None,
                enforce_cap: bool = True) -> list[int]:
    """N(0..n_max): the number of rational torus points of height q^n.

    The n_max cap keeps batch runs bounded; growth studies may lift it.
    """
    if enforce_cap:
        check_scope(f, n_max)
    elif n_max < 0:
        raise gfan.ScopeError("n_max must be non-negative")
    series = euler_product(f, n_max, max_degree)
    t_axis = intlat.columns([(1,) + (0,) * (series.rank - 1)], series.rank)
    ct = conegf.ct_restrict(series, t_axis)
    pre = torus_points(f)
    zero = (0,) * (series.rank - 1)
    return [pre * ct.grades[n].get((n,) + zero, 0) for n in range(n_max + 1)]


def growth_period(f: GFan) -> int:
    """Period of the leading oscillation of N(n) q^-n.

    The poles of the height zeta function nearest to the origin come from
    factors 1 - (q u)^a with a = <rho, -K> over the rays rho of the dual of
    the effective cone, so the main term of N(n) q^-n is a quasi-polynomial
    whose period is the lcm of those pairings.
    """
    pd = gfan.picard(f)
    dual = conegf.dual_cone_generators(list(pd.effective_cone_gens), pd.pic_rank)
    return math.lcm(*(sum(a * b for a, b in zip(d, pd.anticanonical_class)) for d in dual))


# -- the constant ----------------------------------------------------------------------


def _poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_div_exact(a: Sequence[int], b: Sequence[int]) -> list[int]:
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for k in range(len(out) - 1, -1, -1):
        c, r = divmod(a[k + len(b) - 1], b[-1])
        if r:
            raise ArithmeticError("inexact polynomial division")
        out[k] = c
        for i, bi in enumerate(b):
            a[k + i] -= c * bi
    if any(a):
        raise ArithmeticError("inexact polynomial division")
    return out


def _det_one_minus_x(a: intlat.IntMatrix) -> list[int]:
    """Coefficients of det(1 - x A) in x."""
    if a.shape[0] == 0:
        return [1]
    return list(reversed(intlat.charpoly(a)))


def _permutation_cycles(perm: Sequence[int], items: Sequence[int]) -> list[int]:
    seen, out = set(), []
    for i in items:
        if i in seen:
            continue
        k, j = 1, perm[i]
        seen.add(i)
        while j != i:
            seen.add(j)
            j, k = perm[j], k + 1
        out.append(k)
    return out


def local_count_polynomial(f: GFan, fv: int) -> list[int]:
    """P(x) with #X(k_v) / q_v^d = P(q_v^-1): sum over g^fv-stable cones of orbit counts."""
    a = intlat.matpow(f.g, fv % f.e)
    full = _det_one_minus_x(a)
    perm = f.perm_power(fv)
    dec = gfan.decomposition_restriction(f, fv)
    total = [0] * (f.rank + 1)
    for cone in dec.stable_cones:
        span = [1]
        for c in _permutation_cycles(perm, cone):
            span = _poly_mul(span, [1] + [0] * (c - 1) + [-1])
        quot = _poly_div_exact(full, span)
        term = [0] * len(cone) + quot
        for k, x in enumerate(term):
            total[k] += x
    return total


def local_point_count(f: GFan, fv: int) -> int:
    """#X(F_{q^fv})."""
    poly = local_count_polynomial(f, fv)
    qv = f.q ** fv
    return sum(c * qv ** (f.rank - k) for k, c in enumerate(poly))


def density_polynomial(f: GFan, fv: int) -> list[int]:
    """a(x) = det(1 - x g^fv | Pic_L) * #X(k_v)/q_v^d as a polynomial in x = q_v^-1."""
    pd = gfan.picard(f)
    pic = intlat.matpow(pd.pic_action, fv % f.e)
    out = _poly_mul(_det_one_minus_x(pic), local_count_polynomial(f, fv))
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def l_pic(f: GFan) -> mpmath.mpf:
    """lim_{s->1} (s-1)^r L(s, Pic_L), eigenvalue by eigenvalue through the char. polynomial."""
    pd = gfan.picard(f)
    q = f.q
    chi = intlat.charpoly(pd.pic_action)        # lowest degree first
    n, r = len(chi) - 1, pd.pic_rank
    rest = chi
    for _ in range(r):
        rest = _poly_div_exact(rest, [-1, 1])
    at1 = sum(rest)
    atq = sum(c * q ** k for k, c in enumerate(rest))
    rational = Fraction(q ** (n - r), at1 * atq) * Fraction(q, q - 1) ** r
    return mpmath.mpf(rational.numerator) / rational.denominator / mpmath.log(q) ** r


@dataclass
class TauResult:
    value: float
    cutoff: int
    error_bound: float
    exact_value: Any = field(default=None, repr=False)
    exact_error: Any = field(default=None, repr=False)


def tau_h(f: GFan, cutoff: int, dps: int = 40) -> TauResult:
    """tau_H from the local densities at places of degree <= cutoff, with a tail bound."""
    if cutoff < 1:
        raise ValueError("cutoff must be at least 1")
    with mpmath.workdps(dps):
        q = f.q
        log_total = mpmath.mpf(0)
        bound_b = Fraction(0)
        for res in range(1, f.e + 1):
            poly = density_polynomial(f, res)
            if poly[0] != 1 or (len(poly) > 1 and poly[1] != 0):
                raise ArithmeticError("local density is not 1 + O(q_v^-2)")
            b = sum(Fraction(abs(c), q ** (k - 2)) for k, c in enumerate(poly) if k >= 2)
            bound_b = max(bound_b, b)
        for d in range(1, cutoff + 1):
            poly = density_polynomial(f, d)
            x = mpmath.mpf(1) / mpmath.mpf(q) ** d
            a = mpmath.fsum(c * x ** k for k, c in enumerate(poly))
            log_total += ffplaces.count_places(q, d) * mpmath.log(a)
        value = mpmath.mpf(q) ** f.rank * l_pic(f) * mpmath.exp(log_total)
        if bound_b * Fraction(1, q ** (2 * (cutoff + 1))) > Fraction(1, 2):
            raise ArithmeticError("cutoff too small for the tail bound")
        s = mpmath.mpf(bound_b.numerator) / bound_b.denominator
        s = s / mpmath.mpf(q) ** (cutoff + 1) / (cutoff + 1) / (1 - mpmath.mpf(1) / q)
        err = value * (mpmath.exp(2 * s) - 1)
        return TauResult(float(value), cutoff, float(err), value, err)


@dataclass
class ZetaReport:
    N: list[int]
    pole_order: int
    alpha_star: Fraction
    beta: int
    d_alpha: list[int]
    torus_points: int
    h1_gxt_order: int
    ct_order: int
    tau_H: TauResult | None = None
    C_star: float | None = None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "N": self.N,
            "pole_order": self.pole_order,
            "alpha_star": f"{self.alpha_star.numerator}/{self.alpha_star.denominator}",
            "beta": self.beta,
            "d_alpha": self.d_alpha,
            "torus_points": self.torus_points,
            "h1_gxt_order": self.h1_gxt_order,
            "C_T_order": self.ct_order,
        }
        if self.tau_H is not None:
            out["tau_H"] = {"value": self.tau_H.value, "cutoff": self.tau_H.cutoff,
                            "error_bound": self.tau_H.error_bound}
            out["C_star"] = self.C_star
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)


def zeta_report(f: GFan, n_max: int) -> ZetaReport:
    pd = gfan.picard(f)
    return ZetaReport(
        N=zeta_coeffs(f, n_max),
        pole_order=pd.pic_rank,
        alpha_star=conegf.xi_alpha(pd),
        beta=gcoh.beta(f),
        d_alpha=[o.d_alpha for o in gfan.orbits(f)],
        torus_points=torus_points(f),
        h1_gxt_order=int(pd.h1_gxt.order),
        ct_order=int(pd.ct_order),
    )


def peyre_constant(f: GFan, cutoff: int, report: ZetaReport | None = None,
                   n_max: int = 0, dps: int = 40) -> ZetaReport:
    """Complete a report with tau_H and C* = alpha* beta tau_H / (r - 1)!."""
    rep = report if report is not None else zeta_report(f, n_max)
    tau = tau_h(f, cutoff, dps)
    rep.tau_H = tau
    c = rep.alpha_star.numerator * rep.beta * tau.exact_value
    c = c / rep.alpha_star.denominator / math.factorial(rep.pole_order - 1)
    rep.C_star = float(c)
    return rep
