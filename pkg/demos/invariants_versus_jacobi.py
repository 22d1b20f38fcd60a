"""
Invariants of an infinitesimal action
=====================================

A Lie algebra acting linearly on ``V`` with a point ``s`` gives a DGLA
``g -> V``.  The ``g``-invariant part of the truncated local ring at ``s``
matches the dual of ``h0`` of its Jacobi complex.
"""

from schurjacobi import quotient as qe

inst = qe.scaling_instance(2)
for r in (1, 2, 3):
    rep = qe.compare(inst, r)
    print("scaling on C^3, r =", r, rep.status, "graded", rep.kernel_graded_dims)

torus = qe.torus_instance()
rep = qe.compare(torus, 2)
print("torus, r = 2", rep.status, rep.kernel_graded_dims, rep.jacobi_graded_dims)

# A character W of weight k: W*-linear invariants against the module complex
for k in (-1, 0, 1, 2):
    rep = qe.module_compare(qe.scaling_instance(1, weight=k), 2)
    print("weight", k, rep.status, rep.kernel_graded_dims)
