import json
import math
from fractions import Fraction

import pytest
import sympy

from schurjacobi import quotient as qe
from schurjacobi.linalg import Matrix, Subspace
from schurjacobi.quotient import (
    ActionInstance,
    InstanceError,
    TruncatedAlgebra,
    column_weight,
    comorphism_f,
    compare,
    f_multiplicativity_defect,
    invariant_kernel,
    jacobi_side,
    module_compare,
    monomials,
    scaling_instance,
    torus_instance,
)


def symbols(n):
    return sympy.symbols(f"y0:{n}")


def to_fraction(c):
    c = sympy.Rational(c)
    return Fraction(int(c.p), int(c.q))


def poly_vector(expr, ys, r):
    """Coefficient vector of ``expr`` truncated at total degree ``r``."""
    alg = TruncatedAlgebra(len(ys), r)
    p = sympy.Poly(sympy.expand(expr), *ys)
    coeffs = {}
    for mono, c in p.terms():
        if sum(mono) <= r:
            coeffs[tuple(mono)] = to_fraction(c)
    return alg.to_vector(coeffs)


def series(expr, ys, r):
    """Taylor polynomial of ``expr`` at the origin up to total degree ``r``."""
    t = sympy.Symbol("t")
    scaled = expr.subs({y: t * y for y in ys}, simultaneous=True)
    s = sympy.series(scaled, t, 0, r + 1).removeO()
    return sympy.expand(s.subs(t, 1))


# instances ----------------------------------------------------------------------

def test_builtins_load_and_round_trip(tmp_path):
    for name in qe.BUILTINS:
        inst = qe.builtin_instance(name)
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(inst.to_json()))
        again = qe.load_instance(str(path))
        assert again.to_json() == inst.to_json()
    assert qe.load_instance("scaling2").to_json() == scaling_instance(2).to_json()


def test_non_action_is_rejected():
    rho = [Matrix.from_rows([[0, 1], [0, 0]]), Matrix.from_rows([[0, 0], [1, 0]])]
    abelian = [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]
    with pytest.raises(InstanceError, match="not a Lie algebra action"):
        ActionInstance(2, abelian, 2, rho, [1, 0])


def test_structure_constant_errors():
    with pytest.raises(InstanceError, match="antisymmetric"):
        ActionInstance(2, [[[0, 0], [1, 0]], [[0, 0], [0, 0]]], 1, [Matrix.zeros(1, 1)] * 2, [1])
    # [e0,e1]=e1, [e1,e2]=e1, [e0,e2]=e0 violates Jacobi
    c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    c[0][1][1], c[1][0][1] = 1, -1
    c[1][2][1], c[2][1][1] = 1, -1
    c[0][2][0], c[2][0][0] = 1, -1
    with pytest.raises(InstanceError, match="Jacobi"):
        ActionInstance(3, c, 1, [Matrix.zeros(1, 1)] * 3, [0])


def test_missing_field_and_shape_errors():
    with pytest.raises(InstanceError, match="missing"):
        ActionInstance.from_json({"v_dim": 1})
    with pytest.raises(InstanceError, match="base point"):
        ActionInstance(1, [[[0]]], 2, [Matrix.identity(2)], [1])


def test_non_injective_anchor_is_rejected():
    at_origin = ActionInstance(1, [[[0]]], 2, [Matrix.identity(2)], [0, 0])
    assert not at_origin.a_injective()
    with pytest.raises(InstanceError, match="injective"):
        jacobi_side(at_origin, 2)
    with pytest.raises(InstanceError, match="injective"):
        compare(at_origin, 2)


# truncated algebras and the comorphism ------------------------------------------

def test_monomial_order_and_counts():
    assert monomials(2, 2) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    for n in range(1, 4):
        for r in range(4):
            assert len(monomials(n, r)) == math.comb(n + r, r)


def test_truncated_algebra_is_commutative_associative():
    assert TruncatedAlgebra(2, 3).is_commutative_associative()


def test_f_of_unit_and_linear_coordinates():
    inst = scaling_instance(1)
    r = 2
    f = comorphism_f(inst, r)
    n = len(monomials(2, r))
    idx = {m: i for i, m in enumerate(monomials(2, r))}
    src = {m: i for i, m in enumerate(monomials(2, r + 1))}
    unit = f.column(src[(0, 0)])
    assert unit[idx[(0, 0)]] == 1 and sum(1 for x in unit if x) == 1
    x0 = f.column(src[(1, 0)])
    assert x0[idx[(1, 0)]] == 1
    assert {k: x0[n + i] for k, i in idx.items() if x0[n + i]} == {(0, 0): 1, (1, 0): 1}
    x1 = f.column(src[(0, 1)])
    assert {k: x1[n + i] for k, i in idx.items() if x1[n + i]} == {(0, 1): 1}


@pytest.mark.parametrize("inst", [scaling_instance(1), scaling_instance(2), torus_instance(),
                                  ActionInstance(1, [[[0]]], 2, [Matrix.from_rows([[1, 2], [0, -1]])], [1, 1])],
                         ids=["scaling1", "scaling2", "torus", "shear"])
@pytest.mark.parametrize("r", [1, 2, 3])
def test_f_matches_first_order_expansion(inst, r):
    ys = symbols(inst.v_dim)
    t = sympy.Symbol("t")
    f = comorphism_f(inst, r)
    mons = monomials(inst.v_dim, r + 1)
    n = len(monomials(inst.v_dim, r))
    for col, mono in enumerate(mons):
        p = sympy.Mul(*[y ** e for y, e in zip(ys, mono)])
        for a in range(inst.g_dim):
            rho = sympy.Matrix([[sympy.Rational(str(x)) for x in row] for row in inst.rho[a].to_lists()])
            v = sympy.Matrix([y + sympy.Rational(str(s)) for y, s in zip(ys, inst.s)])
            moved = v + t * rho * v
            sub = {y: moved[i] - sympy.Rational(str(inst.s[i])) for i, y in enumerate(ys)}
            deriv = sympy.diff(p.subs(sub, simultaneous=True), t).subs(t, 0)
            expected = poly_vector(deriv, ys, r)
            got = tuple(f.column(col)[(a + 1) * n + i] for i in range(n))
            assert got == expected, (mono, a)


@pytest.mark.parametrize("inst", [scaling_instance(1), scaling_instance(2), torus_instance()],
                         ids=["scaling1", "scaling2", "torus"])
def test_f_is_multiplicative(inst):
    assert f_multiplicativity_defect(inst, 3) is None


# invariant kernels --------------------------------------------------------------

def test_kernel_r0_is_constants():
    assert invariant_kernel(scaling_instance(2), 0).dim == 1


def test_kernel_scaling_c2_r1():
    k = invariant_kernel(scaling_instance(1), 1)
    assert k.dim == 2
    alg = k.algebra
    assert k.space.contains(alg.to_vector({(0, 0): 1}))
    assert k.space.contains(alg.to_vector({(0, 1): 1}))


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("r", [1, 2, 3])
def test_kernel_is_span_of_expanded_invariant_rational_functions(n, r):
    inst = scaling_instance(n)
    ys = symbols(n + 1)
    us = [ys[a] / (1 + ys[0]) for a in range(1, n + 1)]
    vecs = []
    for d in range(r + 1):
        for mono in monomials(n, d, d):
            expr = sympy.Mul(*[u ** e for u, e in zip(us, mono)])
            vecs.append(poly_vector(series(expr, ys, r), ys, r))
    expected = Subspace.span(len(monomials(n + 1, r)), vecs)
    k = invariant_kernel(inst, r)
    assert k.dim == 1 + sum(math.comb(n + i - 1, i) for i in range(1, r + 1))
    assert k.space.canonical() == expected.canonical()
    assert k.graded_dims()[: r + 1] == [math.comb(n + i - 1, i) for i in range(r + 1)]


@pytest.mark.parametrize("r", [1, 2])
def test_torus_kernel_matches_product_invariants(r):
    ys = symbols(4)
    u, w = ys[1] / (1 + ys[0]), ys[3] / (1 + ys[2])
    vecs = [poly_vector(series(u ** i * w ** j, ys, r), ys, r)
            for i in range(r + 1) for j in range(r + 1 - i)]
    expected = Subspace.span(len(monomials(4, r)), vecs)
    k = invariant_kernel(torus_instance(), r)
    assert k.space.canonical() == expected.canonical()
    assert k.dim == [3, 6][r - 1]


def test_jacobi_side_dims():
    assert jacobi_side(scaling_instance(1), 1).algebra.graded_dims() == [1, 1]
    assert jacobi_side(torus_instance(), 2).algebra.dim == 6


def test_jacobi_side_of_contractible_instance():
    # g = V: the anchor is an isomorphism and only the unit survives
    inst = ActionInstance(1, [[[0]]], 1, [Matrix.identity(1)], [1])
    side = jacobi_side(inst, 3)
    assert side.algebra.dim == 1
    assert compare(inst, 3).passed


def test_instance_dgla_matches_instance_data():
    inst = torus_instance()
    g = qe.instance_dgla(inst)
    assert g.L.pieces == {0: 2, 1: 4}
    assert g.L.d(0) == Matrix.from_columns(inst.a_vectors(), 4)
    for a in range(2):
        for j in range(4):
            assert g.bilinear(a, 2 + j) == {2 + i: inst.rho[a][i, j] for i in range(4) if inst.rho[a][i, j]}


# comparisons --------------------------------------------------------------------

def test_column_weight_values():
    assert [column_weight(j) for j in range(1, 5)] == [-1, -2, 6, 24]


def test_compare_r0_is_trivial():
    rep = compare(scaling_instance(1), 0)
    assert rep.passed and rep.kernel_graded_dims == [1]


@pytest.mark.parametrize("n,r", [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3)])
def test_compare_scaling(n, r):
    rep = compare(scaling_instance(n), r)
    assert rep.passed, rep.certificate
    assert rep.kernel_graded_dims == [math.comb(n + i - 1, i) for i in range(r + 1)]
    assert all(rep.checks.values())


@pytest.mark.parametrize("r", [1, 2])
def test_compare_torus(r):
    rep = compare(torus_instance(), r)
    assert rep.passed, rep.certificate
    assert rep.kernel_graded_dims == [1, 2, 3][: r + 1]


def test_compare_non_scaling_action():
    # C* acting with weights (1, 2) at s = (1, 0): the quotient is a weighted line
    inst = ActionInstance(1, [[[0]]], 2, [Matrix.from_rows([[1, 0], [0, 2]])], [1, 0])
    for r in (1, 2, 3):
        rep = compare(inst, r)
        assert rep.passed, rep.certificate


@pytest.mark.parametrize("k", [-1, 0, 1, 2])
@pytest.mark.parametrize("r", [1, 2])
def test_module_compare(k, r):
    rep = module_compare(scaling_instance(1, weight=k), r)
    assert rep.passed, rep.certificate
    assert sum(rep.kernel_graded_dims) == 1 + r
    assert rep.checks["module_action"]


@pytest.mark.parametrize("k", [-1, 2])
def test_module_slice_is_span_of_expanded_sections(k):
    # invariants linear in w: w * x0^k * u^i with u = x1/x0, x0 = 1 + y0
    r = 2
    inst = scaling_instance(1, weight=k)
    ext = inst.with_dual_module()
    sl = qe._module_slice(ext, inst.v_dim, r)
    ys = symbols(3)
    u = ys[1] / (1 + ys[0])
    vecs = [poly_vector(ys[2] * series((1 + ys[0]) ** k * u ** i, ys[:2], r), ys, r + 1) for i in range(r + 1)]
    expected = Subspace.span(len(monomials(3, r + 1)), vecs)
    assert sl.space.canonical() == expected.canonical()


def test_module_compare_without_w_reduces_to_compare():
    a = module_compare(scaling_instance(1), 2)
    b = compare(scaling_instance(1), 2)
    assert a.to_json() == b.to_json()


def test_report_json_is_serialisable():
    rep = compare(scaling_instance(1), 2)
    text = json.dumps(rep.to_json(), sort_keys=True)
    assert '"status": "PASS"' in text
