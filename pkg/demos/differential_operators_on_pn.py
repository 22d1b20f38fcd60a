"""
Differential operators on projective space
==========================================

``Diff^r/O`` on ``P^n`` is resolved by ``O -> S^r(V*(1))``.  The same
Jacobi complexes decide how ``Diff^r(O(k), O(k))`` splits, and whether
``Diff^r/O`` is simple.
"""

import math

from schurjacobi import projective as pj

for n in (1, 2, 3):
    for r in (1, 2):
        rep = pj.resolution(n, r)
        print(f"P^{n} r={r}", "ok" if rep.passed else "FAILED",
              "h0(Diff^r) =", rep.h0_diff, "=", math.comb(n + r, n), "squared")

# The connecting scalars of the twisted complex are k, k+1, ..., k+r-1
for k in (-1, 0, 2):
    print("k =", k, "scalars", [int(x) for x in pj.jacobi_display(2, 3, k).scalars])

for k in (-1, 0, 1, 3):
    print("k =", k, [s.label() for s in pj.diff_twist(2, 3, k).summands])

# Scalar endomorphisms only for n >= 2; on the line Diff^r/O = O(r+1)^r
for n in (1, 2, 3):
    print(f"End(Diff^2/O) on P^{n}:", pj.global_endomorphisms(n, 2))
