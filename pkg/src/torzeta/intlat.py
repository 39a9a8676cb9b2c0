"""Exact integer-lattice linear algebra.

Matrices are numpy arrays of dtype ``object`` holding Python integers, so
entries never overflow.  Every routine here is exact; nothing is done modulo
a prime and nothing goes through floating point.

The central routine is :func:`snf`, a Smith normal form with transforms.
Kernels, cokernels, integer solutions, saturation tests and sublattice
indices are all read off from it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

IntMatrix = np.ndarray


def as_matrix(m: Iterable[Iterable[int]] | np.ndarray, cols: int | None = None) -> IntMatrix:
    """Coerce nested sequences into an object-dtype integer matrix.

    ``cols`` fixes the column count for an empty list of rows.
    """
    if isinstance(m, np.ndarray):
        if m.ndim != 2:
            raise ValueError(f"expected a 2-d array, got shape {m.shape}")
        out = np.empty(m.shape, dtype=object)
        for idx, x in np.ndenumerate(m):
            out[idx] = int(x)
        return out
    rows = [[int(x) for x in row] for row in m]
    if not rows:
        return np.zeros((0, cols or 0), dtype=object)
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("ragged matrix")
    out = np.empty((len(rows), width), dtype=object)
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            out[i, j] = x
    return out


def identity(n: int) -> IntMatrix:
    out = np.zeros((n, n), dtype=object)
    for i in range(n):
        out[i, i] = 1
    return out


def zeros(r: int, c: int) -> IntMatrix:
    out = np.empty((r, c), dtype=object)
    out.fill(0)
    return out


def columns(vectors: Sequence[Sequence[int]], dim: int) -> IntMatrix:
    """Matrix whose columns are the given vectors (``dim`` rows even if empty)."""
    out = zeros(dim, len(vectors))
    for j, v in enumerate(vectors):
        if len(v) != dim:
            raise ValueError("vector of wrong length")
        for i, x in enumerate(v):
            out[i, j] = int(x)
    return out


def to_lists(m: IntMatrix) -> list[list[int]]:
    return [[int(x) for x in row] for row in m]


def matpow(g: IntMatrix, k: int) -> IntMatrix:
    out = identity(g.shape[0])
    base = g.copy()
    while k:
        if k & 1:
            out = out.dot(base)
        base = base.dot(base)
        k >>= 1
    return out


def det(m: IntMatrix) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    a = [list(map(int, row)) for row in m]
    n = len(a)
    if n == 0:
        return 1
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank(m: IntMatrix) -> int:
    rows = [[Fraction(int(x)) for x in row] for row in m]
    r = 0
    ncols = m.shape[1]
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def rational_inverse(m: IntMatrix) -> list[list[Fraction]]:
    """Inverse over Q by Gauss-Jordan; raises ``ValueError`` when singular."""
    n = m.shape[0]
    a = [[Fraction(int(x)) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [row[n:] for row in a]


def unimodular_inverse(m: IntMatrix) -> IntMatrix:
    inv = rational_inverse(m)
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return as_matrix([[int(x) for x in row] for row in inv])


@dataclass(frozen=True)
class FinAb:
    """Finitely generated abelian group Z^free_rank + sum of Z/d_i."""

    invariant_factors: tuple[int, ...]
    free_rank: int = 0

    def __post_init__(self) -> None:
        ds = self.invariant_factors
        if any(d < 2 for d in ds):
            raise ValueError("invariant factors must be >= 2")
        if any(ds[i + 1] % ds[i] for i in range(len(ds) - 1)):
            raise ValueError("invariant factors must form a divisibility chain")

    @property
    def order(self) -> int | float:
        if self.free_rank:
            return math.inf
        return math.prod(self.invariant_factors)

    @property
    def exponent(self) -> int | float:
        if self.free_rank:
            return math.inf
        return math.lcm(*self.invariant_factors) if self.invariant_factors else 1

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.invariant_factors]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


def _smallest_nonzero(a: IntMatrix, t: int) -> tuple[int, int] | None:
    best = None
    r, c = a.shape
    for i in range(t, r):
        for j in range(t, c):
            x = a[i, j]
            if x != 0 and (best is None or abs(x) < best[0]):
                best = (abs(x), i, j)
    return None if best is None else (best[1], best[2])


def snf(m: Iterable[Iterable[int]] | np.ndarray) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form ``U @ m @ V == D``.

    U and V are unimodular, D is diagonal with non-negative entries and each
    diagonal entry divides the next.  The pivot is always the entry of
    smallest absolute value, scanning row-major, so the transforms are
    reproducible.
    """
    a = as_matrix(m).copy()
    r, c = a.shape
    u, v = identity(r), identity(c)

    def swap_rows(i: int, j: int) -> None:
        if i != j:
            a[[i, j]] = a[[j, i]]
            u[[i, j]] = u[[j, i]]

    def swap_cols(i: int, j: int) -> None:
        if i != j:
            a[:, [i, j]] = a[:, [j, i]]
            v[:, [i, j]] = v[:, [j, i]]

    t = 0
    while t < min(r, c):
        pos = _smallest_nonzero(a, t)
        if pos is None:
            break
        swap_rows(t, pos[0])
        swap_cols(t, pos[1])
        while True:
            dirty = False
            for i in range(t + 1, r):
                if a[i, t]:
                    k = a[i, t] // a[t, t]
                    a[i] = a[i] - k * a[t]
                    u[i] = u[i] - k * u[t]
                    dirty = dirty or a[i, t] != 0
            for j in range(t + 1, c):
                if a[t, j]:
                    k = a[t, j] // a[t, t]
                    a[:, j] = a[:, j] - k * a[:, t]
                    v[:, j] = v[:, j] - k * v[:, t]
                    dirty = dirty or a[t, j] != 0
            if dirty:
                # a remainder is now smaller than the pivot: bring it forward
                best = None
                for i in range(t, r):
                    if a[i, t] and (best is None or abs(a[i, t]) < best[0]):
                        best = (abs(a[i, t]), i, t)
                for j in range(t, c):
                    if a[t, j] and (best is None or abs(a[t, j]) < best[0]):
                        best = (abs(a[t, j]), t, j)
                swap_rows(t, best[1])
                swap_cols(t, best[2])
                continue
            bad = next(((i, j) for i in range(t + 1, r) for j in range(t + 1, c)
                        if a[i, j] % a[t, t]), None)
            if bad is None:
                break
            a[t] = a[t] + a[bad[0]]
            u[t] = u[t] + u[bad[0]]
        if a[t, t] < 0:
            a[t] = -a[t]
            u[t] = -u[t]
        t += 1
    return u, a, v


def diagonal(d: IntMatrix) -> list[int]:
    return [int(d[i, i]) for i in range(min(d.shape))]


def cokernel(m: Iterable[Iterable[int]] | np.ndarray, rows: int | None = None) -> FinAb:
    """The group Z^rows / image(m)."""
    a = as_matrix(m, cols=0)
    if rows is not None and a.shape[0] != rows:
        if a.size == 0:
            a = zeros(rows, 0)
        else:
            raise ValueError("row count mismatch")
    _, d, _ = snf(a)
    diag = diagonal(d)
    nonzero = [x for x in diag if x]
    free = a.shape[0] - len(nonzero)
    return FinAb(tuple(x for x in nonzero if x > 1), free)


def kernel_basis(m: Iterable[Iterable[int]] | np.ndarray) -> IntMatrix:
    """Columns form a saturated basis of the integer kernel of ``m``."""
    a = as_matrix(m)
    _, d, v = snf(a)
    r = sum(1 for x in diagonal(d) if x)
    return v[:, r:].copy()


def image_basis(m: IntMatrix) -> IntMatrix:
    """Columns form a basis of the image lattice m(Z^cols)."""
    u, d, _ = snf(m)
    uinv = unimodular_inverse(u)
    cols = [j for j, x in enumerate(diagonal(d)) if x]
    out = zeros(m.shape[0], len(cols))
    for k, j in enumerate(cols):
        out[:, k] = uinv[:, j] * d[j, j]
    return out


def solve_integer(a: IntMatrix, b: Sequence[int]) -> list[int] | None:
    """An integer solution x of a @ x == b, or None when there is none."""
    u, d, v = snf(a)
    r, c = a.shape
    ub = [sum(int(u[i, k]) * int(b[k]) for k in range(r)) for i in range(r)]
    y = [0] * c
    for i in range(r):
        di = int(d[i, i]) if i < c else 0
        if di == 0:
            if ub[i] != 0:
                return None
        elif ub[i] % di:
            return None
        else:
            y[i] = ub[i] // di
    return [sum(int(v[i, k]) * y[k] for k in range(c)) for i in range(c)]


def is_saturated(sub: IntMatrix) -> bool:
    """True when the columns are independent and Z^r / span is torsion-free."""
    if sub.shape[1] == 0:
        return True
    _, d, _ = snf(sub)
    diag = diagonal(d)
    return all(x == 1 for x in diag) and len(diag) == sub.shape[1]


def sublattice_index(sub: Iterable[Iterable[int]] | np.ndarray, ambient_rank: int) -> int | float:
    """[Z^ambient_rank : span of the columns], or ``math.inf`` if not full rank."""
    a = as_matrix(sub, cols=0)
    if a.shape[0] != ambient_rank:
        if a.size == 0:
            a = zeros(ambient_rank, 0)
        else:
            raise ValueError("sublattice vectors of wrong length")
    g = cokernel(a)
    return g.order


def fixed_lattice(g: IntMatrix) -> IntMatrix:
    """Saturated basis (as columns) of {x : g x = x}."""
    return kernel_basis(g - identity(g.shape[0]))


def saturated_span(vectors: Sequence[Sequence[int]], dim: int) -> IntMatrix:
    """Basis (columns) of the lattice R-span(vectors) intersected with Z^dim."""
    a = columns(vectors, dim)
    if a.shape[1] == 0:
        return zeros(dim, 0)
    # the saturation is the kernel of a basis of the annihilator
    ann = kernel_basis(a.T)
    if ann.shape[1] == 0:
        return identity(dim)
    return kernel_basis(ann.T)


def order_of(g: IntMatrix, limit: int = 10_000) -> int | None:
    """Multiplicative order of a square matrix, or None if above ``limit``."""
    n = g.shape[0]
    eye = identity(n)
    p = g.copy()
    for k in range(1, limit + 1):
        if np.array_equal(p, eye):
            return k
        p = p.dot(g)
    return None


def charpoly(m: IntMatrix) -> list[int]:
    """Coefficients c_0..c_n of det(x I - m) (lowest degree first).

    Uses the Faddeev-LeVerrier recursion over the rationals.
    """
    n = m.shape[0]
    a = [[Fraction(int(x)) for x in row] for row in m]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        ck1 = coeffs[n - k + 1]
        prod = [[sum(a[i][t] * mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        mk = [[prod[i][j] + (ck1 if i == j else 0) for j in range(n)] for i in range(n)]
        am = [[sum(a[i][t] * mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        coeffs[n - k] = -sum(am[i][i] for i in range(n)) / k
    out = []
    for c in coeffs:
        if c.denominator != 1:
            raise ArithmeticError("non-integral characteristic polynomial")
        out.append(int(c))
    return out
