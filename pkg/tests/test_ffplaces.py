import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from torzeta import ffplaces
from torzeta.ffplaces import INFINITY, RatFunc

QS = [2, 3, 4, 5, 7, 8, 9, 16]


@pytest.mark.parametrize("q", QS)
def test_field_axioms(q):
    F = ffplaces.field(q)
    els = range(q)
    for a, b in itertools.product(els, repeat=2):
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.sub(F.add(a, b), b) == a
    for a, b, c in itertools.product(els, repeat=3):
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    for a in F.units():
        assert F.mul(a, F.inv(a)) == 1
        assert F.power(a, q - 1) == 1


def test_frobenius_fixes_subfield():
    F = ffplaces.field(4)
    fixed = [x for x in range(4) if F.frobenius(x, 2) == x]
    assert fixed == [0, 1]
    F16 = ffplaces.field(16)
    assert len([x for x in range(16) if F16.frobenius(x, 4) == x]) == 4


def test_field_cap():
    with pytest.raises(ValueError):
        ffplaces.field(32)
    with pytest.raises(ValueError):
        ffplaces.field(6)


def necklace(q, d):
    return sum(ffplaces.mobius(d // k) * q**k for k in range(1, d + 1) if d % k == 0) // d


@pytest.mark.parametrize("q", [2, 3, 4])
@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_irreducible_counts(q, d):
    F = ffplaces.field(q)
    found = [p for p in ffplaces.places_up_to(F, d) if p.degree == d and not p.is_infinite]
    assert len(found) == necklace(q, d)
    assert ffplaces.count_places(q, d) == necklace(q, d) + (d == 1)


def test_places_over_f2():
    F = ffplaces.field(2)
    places = ffplaces.places_up_to(F, 2)
    assert [p.poly for p in places if not p.is_infinite] == [(0, 1), (1, 1), (1, 1, 1)]
    assert places[-1] == INFINITY


def test_valuations():
    F = ffplaces.field(3)
    t_place = ffplaces.Place(1, (0, 1))
    x = RatFunc.make(F, (0, 0, 1), (1, 1))   # t^2 / (t + 1)
    assert ffplaces.valuation(F, x, t_place) == 2
    assert ffplaces.valuation(F, x, ffplaces.Place(1, (1, 1))) == -1
    assert ffplaces.valuation(F, x, INFINITY) == -1


def test_ratfunc_normalization():
    F = ffplaces.field(3)
    x = RatFunc.make(F, (2, 2), (0, 2, 2))   # (2t+2)/(2t^2+2t) = 1/t
    assert (x.scalar, x.num, x.den) == (1, (1,), (0, 1))


polys = st.lists(st.integers(0, 2), min_size=1, max_size=4)


@given(polys, polys)
def test_product_formula(num, den):
    F = ffplaces.field(3)
    if not ffplaces.trim(num) or not ffplaces.trim(den):
        return
    x = RatFunc.make(F, tuple(num), tuple(den))
    places = ffplaces.places_up_to(F, 4)
    div = ffplaces.divisor(F, x, places)
    assert sum(p.degree * k for p, k in div.items()) == 0
    for p in places:
        assert div.get(p, 0) == ffplaces.valuation(F, x, p)


def test_polynomial_division():
    F = ffplaces.field(5)
    a, b = (1, 2, 3, 4), (3, 1)
    quo, rem = ffplaces.pdivmod(F, a, b)
    assert ffplaces.padd(F, ffplaces.pmul(F, quo, b), rem) == a


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_zeta_euler_product(q):
    assert ffplaces.zeta_series(q, 1, 10) == [(q ** (n + 1) - 1) // (q - 1) for n in range(11)]
    # twisted eigenvalue -1
    coeffs = ffplaces.zeta_series(q, -1, 8)
    assert coeffs == [(-1) ** n * (q ** (n + 1) - 1) // (q - 1) for n in range(9)]
    assert ffplaces.euler_product(q, Fraction(1, q), 6) == [
        Fraction(q ** (n + 1) - 1, (q - 1) * q**n) for n in range(7)]
