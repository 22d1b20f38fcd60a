"""
Schur functors of small complexes
=================================

Young symmetrizers act on tensor powers of a graded complex with Koszul
signs.  Their images are subcomplexes, and adding a contractible summand
does not change their cohomology.
"""

import random

from schurjacobi.complexes import Complex, cohomology_dims, contractible, random_complex, schur_complex
from schurjacobi.linalg import Matrix
from schurjacobi.symmetric_group import partitions, quasi_idempotence_constant, young_symmetrizer

# The symmetrizer of the hook (2,1) and its idempotence constant
print(young_symmetrizer((2, 1)))
print("c(2,1) =", quasi_idempotence_constant((2, 1)))

# An odd line: symmetric and exterior squares trade places
odd = Complex({1: 1})
for l in ((2,), (1, 1)):
    print(l, "on an odd line:", schur_complex(l, odd).pieces)

# Q^2 -> Q has cohomology Q in degree 0
a = Complex({0: 2, 1: 1}, {0: Matrix.from_rows([[1, 0]])})
b = a.direct_sum(contractible(-1))
for n in (2, 3):
    for l in partitions(n):
        ha = {k: v for k, v in cohomology_dims(schur_complex(l, a)).items() if v}
        hb = {k: v for k, v in cohomology_dims(schur_complex(l, b)).items() if v}
        print(l, ha, "same after adding a cone" if ha == hb else "DIFFERENT", hb)

# A seeded random complex and its symmetric square
c = random_complex(random.Random(7))
print("A:", c.pieces, "H(A):", cohomology_dims(c))
print("H(S^2 A):", cohomology_dims(schur_complex((2,), c)))
