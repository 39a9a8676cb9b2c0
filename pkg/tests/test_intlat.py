import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from torzeta import intlat
from torzeta.intlat import FinAb

from latgen import random_int_matrix


def test_snf_small_example():
    u, d, v = intlat.snf([[2, 4], [6, 8]])
    assert intlat.diagonal(d) == [2, 4]
    assert np.array_equal(u.dot(intlat.as_matrix([[2, 4], [6, 8]])).dot(v), d)


def test_snf_zero_and_empty():
    _, d, _ = intlat.snf([[0, 0], [0, 0]])
    assert intlat.diagonal(d) == [0, 0]
    assert intlat.cokernel(intlat.zeros(3, 0)) == FinAb((), 3)


@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_snf_reconstructs(r, c, data):
    m = data.draw(random_int_matrix(r, c))
    u, d, v = intlat.snf(m)
    assert abs(intlat.det(u)) == 1 and abs(intlat.det(v)) == 1
    assert np.array_equal(u.dot(m).dot(v), d)
    for i in range(r):
        for j in range(c):
            if i != j:
                assert d[i, j] == 0
    diag = intlat.diagonal(d)
    nz = [x for x in diag if x]
    assert all(x > 0 for x in nz)
    assert nz == diag[:len(nz)]
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))


@given(st.integers(1, 4), st.data())
def test_cokernel_order_is_abs_det(n, data):
    m = data.draw(random_int_matrix(n, n))
    dt = intlat.det(m)
    g = intlat.cokernel(m)
    assert g.order == (abs(dt) if dt else math.inf)


@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_kernel_is_saturated_and_complete(r, c, data):
    m = data.draw(random_int_matrix(r, c, -3, 3))
    k = intlat.kernel_basis(m)
    assert k.shape[1] == c - intlat.rank(m)
    assert not m.dot(k).any()
    assert intlat.is_saturated(k)


def test_cokernel_examples():
    assert str(intlat.cokernel([[2, 0], [0, 3]])) == "Z/6"
    assert intlat.cokernel([[1], [1]]) == FinAb((), 1)
    assert intlat.sublattice_index([[2, 0], [0, 2]], 2) == 4
    assert intlat.sublattice_index([[1], [0]], 2) == math.inf


@given(st.integers(1, 3), st.data())
def test_solve_integer(n, data):
    a = data.draw(random_int_matrix(n, n, -4, 4))
    x = data.draw(st.lists(st.integers(-5, 5), min_size=n, max_size=n))
    b = [int(t) for t in a.dot(np.array(x, dtype=object))]
    y = intlat.solve_integer(a, b)
    assert y is not None
    assert [int(t) for t in a.dot(np.array(y, dtype=object))] == b


def test_solve_integer_without_solution():
    assert intlat.solve_integer(intlat.as_matrix([[2]]), [1]) is None
    assert intlat.solve_integer(intlat.as_matrix([[1], [1]]), [1, 2]) is None


def test_fixed_lattice_of_swap():
    fx = intlat.fixed_lattice(intlat.as_matrix([[0, 1], [1, 0]]))
    assert fx.shape == (2, 1)
    assert sorted(abs(int(x)) for x in fx[:, 0]) == [1, 1]


@given(st.integers(1, 4), st.data())
def test_charpoly_matches_det(n, data):
    m = data.draw(random_int_matrix(n, n, -3, 3))
    cp = intlat.charpoly(m)
    for x in (-2, 0, 1, 3):
        assert sum(c * x**k for k, c in enumerate(cp)) == intlat.det(intlat.identity(n) * x - m)


def test_order_of_and_inverse():
    rot = intlat.as_matrix([[0, -1], [1, -1]])
    assert intlat.order_of(rot) == 3
    assert intlat.order_of(intlat.as_matrix([[1, 1], [0, 1]]), limit=50) is None
    inv = intlat.unimodular_inverse(rot)
    assert np.array_equal(inv.dot(rot), intlat.identity(2))
    with pytest.raises(ValueError):
        intlat.unimodular_inverse(intlat.as_matrix([[2, 0], [0, 1]]))


def test_finab_rejects_bad_factors():
    with pytest.raises(ValueError):
        FinAb((2, 3))
    with pytest.raises(ValueError):
        FinAb((1,))
