"""Exact Schur functors of complexes, DGLAs, Jacobi complexes and
differential operators on projective space."""

from .linalg import Matrix, Subspace, kernel_basis, image_basis, rank
from .symmetric_group import (
    GroupAlgebraElement,
    Partition,
    Permutation,
    YoungDiagram,
    quasi_idempotence_constant,
    young_symmetrizer,
)
from .complexes import Complex, ComplexMap, SchurComplex, alt_power, cohomology_dims, schur_complex
from .dgla import DGLA, DGLAModule, JacobiComplex, augment, ce_map, comultiplication, h0, jacobi, jacobi_module
from .quotient import ActionInstance, compare, invariant_kernel, module_compare
from .projective import (
    diff_twist,
    global_endomorphisms,
    global_sections_diff,
    jacobi_display,
    line_cohomology,
    resolution,
    weyl_oracle_p1,
)

__version__ = "0.1.0"
