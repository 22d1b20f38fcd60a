"""
Jacobi complexes of a DGLA
==========================

For a DGLA ``L`` the complex ``J^r(L)`` is built from the alternating powers
of ``L`` with the Chevalley-Eilenberg differential.  Its ``h0`` is a filtered
coalgebra, and the dual (with a unit adjoined) is a filtered commutative
algebra.
"""

from schurjacobi.cli import shipped_dglas
from schurjacobi.complexes import Complex
from schurjacobi.dgla import DGLA, dual_algebra, h0, jacobi

dglas = shipped_dglas()

# An odd abelian line: truncated polynomials k[t]/t^{r+1}
odd_line = DGLA.abelian(Complex({1: 1}))
for r in (1, 2, 3):
    alg = dual_algebra(jacobi(r, odd_line))
    print("odd line, r =", r, "graded pieces", alg.graded_dims())

# g -> V from scaling C^3 and from a two-torus on C^3: same graded pieces,
# the dimensions of S^i of a plane
for name in ("scaling2", "torus"):
    j = jacobi(3, dglas[name])
    alg = dual_algebra(j)
    print(name, "Tot dims", dict(sorted(j.total.pieces.items())),
          "h0 =", h0(j).dim, "graded", alg.graded_dims(), "filtered:", alg.is_filtered())

# Lie algebras in degree 0 sit in negative total degree, so h0 vanishes
print("sl2: h0 =", h0(jacobi(2, dglas["sl2"])).dim)
