"""Tate cohomology of a finite cyclic group acting on a lattice.

For G = <g> cyclic of order e and a G-lattice M one has

    H^1(G, M)  = ker(N_G) / im(g - 1),
    H^0^(G, M) = M^G / N_G M,

with N_G = 1 + g + ... + g^(e-1).  Both groups are finite and killed by e.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import intlat
from .intlat import FinAb, IntMatrix


@dataclass(frozen=True)
class GLattice:
    rank: int
    generator_action: IntMatrix
    e: int

    def __post_init__(self) -> None:
        g = self.generator_action
        if g.shape != (self.rank, self.rank):
            raise ValueError("action matrix has the wrong shape")
        if abs(intlat.det(g)) != 1:
            raise ValueError("action matrix is not invertible over Z")
        if not np.array_equal(intlat.matpow(g, self.e), intlat.identity(self.rank)):
            raise ValueError(f"g^{self.e} is not the identity")

    @property
    def norm(self) -> IntMatrix:
        out = intlat.zeros(self.rank, self.rank)
        p = intlat.identity(self.rank)
        for _ in range(self.e):
            out = out + p
            p = p.dot(self.generator_action)
        return out

    def dual(self) -> "GLattice":
        """The contragredient lattice Hom(M, Z), acted on by (g^T)^(-1)."""
        inv = intlat.unimodular_inverse(self.generator_action)
        return GLattice(self.rank, inv.T.copy(), self.e)


def _quotient(sub_ambient: IntMatrix, gens: IntMatrix) -> FinAb:
    """(lattice spanned by columns of sub_ambient) / (lattice spanned by gens).

    ``gens`` must lie inside the first lattice.
    """
    k = sub_ambient.shape[1]
    coords = intlat.zeros(k, gens.shape[1])
    for j in range(gens.shape[1]):
        x = intlat.solve_integer(sub_ambient, [int(t) for t in gens[:, j]])
        if x is None:
            raise ArithmeticError("generator outside the ambient sublattice")
        for i in range(k):
            coords[i, j] = x[i]
    return intlat.cokernel(coords, rows=k)


def h1(m: GLattice) -> FinAb:
    kernel = intlat.kernel_basis(m.norm)
    coboundaries = m.generator_action - intlat.identity(m.rank)
    out = _quotient(kernel, coboundaries)
    assert out.free_rank == 0
    return out


def h0_tate(m: GLattice) -> FinAb:
    fixed = intlat.fixed_lattice(m.generator_action)
    out = _quotient(fixed, m.norm)
    assert out.free_rank == 0
    return out


def pic_lattice(f) -> GLattice:
    """Pic of the fan over the splitting field, as a G-lattice."""
    from .gfan import picard

    pd = picard(f)
    return GLattice(pd.pic_geometric_rank, pd.pic_action, f.e)


def beta(f) -> int:
    """Order of H^1(G, Pic(X_L))."""
    return int(h1(pic_lattice(f)).order)
