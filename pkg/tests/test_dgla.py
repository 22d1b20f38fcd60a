import itertools
import math
from fractions import Fraction

import pytest

from schurjacobi import quotient as qe
from schurjacobi.complexes import Complex, antisymmetrize, cohomology_dims, contractible
from schurjacobi.dgla import (
    DGLA,
    DGLAError,
    DGLAModule,
    H0,
    augment,
    ce_map,
    comultiplication,
    dual_algebra,
    dual_module,
    h0,
    jacobi,
    jacobi_module,
    module_comultiplication,
    unshuffle_coproduct,
)
from schurjacobi.linalg import Matrix

LIE2 = {(0, 1): {0: 1}, (1, 0): {0: -1}}
SL2 = {(0, 1): {2: 1}, (1, 0): {2: -1}, (2, 0): {0: 2}, (0, 2): {0: -2}, (2, 1): {1: -2}, (1, 2): {1: 2}}


def lie2():
    return DGLA.from_bilinear(Complex({0: 2}), LIE2)


def scaling(n=1):
    return qe.instance_dgla(qe.scaling_instance(n))


def generic_h0_dim(n, r):
    return sum(math.comb(n + i - 1, i) for i in range(1, r + 1))


# construction and validation --------------------------------------------------

def test_lie_algebras_are_accepted():
    lie2()
    DGLA.from_bilinear(Complex({0: 3}), SL2)


def test_jacobi_violation_is_rejected():
    broken = dict(SL2)
    broken[2, 1], broken[1, 2] = {1: 2}, {1: -2}
    with pytest.raises(DGLAError, match="Jacobi"):
        DGLA.from_bilinear(Complex({0: 3}), broken)


def test_non_antisymmetric_table_is_rejected():
    with pytest.raises(DGLAError, match="antisymmetric"):
        DGLA.from_bilinear(Complex({0: 2}), {(0, 1): {0: 1}})


def test_bracket_of_wrong_degree_is_rejected():
    with pytest.raises(DGLAError, match="degree"):
        DGLA.from_bilinear(Complex({0: 1, 1: 1}), {(0, 1): {0: 1}, (1, 0): {0: -1}})


def test_bracket_that_is_not_a_chain_map_is_rejected():
    # u in degree -1 with du = x; w acts on u but kills x
    L = Complex({-1: 1, 0: 2}, {-1: Matrix.from_rows([[1], [0]])})
    u, x, w = 0, 1, 2
    with pytest.raises(DGLAError, match="chain map"):
        DGLA.from_bilinear(L, {(w, u): {u: 1}, (u, w): {u: -1}})


def test_odd_bracket_is_symmetric():
    # [e, e] = f with e of degree 1 and f of degree 2 is graded antisymmetric
    L = Complex({1: 1, 2: 1})
    g = DGLA.from_bilinear(L, {(0, 0): {1: 1}})
    assert g.bilinear(0, 0) == {1: 1}


def test_dgla_json_round_trip():
    g = scaling(2)
    back = DGLA.from_json(g.to_json())
    assert back.bracket == g.bracket and back.L.to_json() == g.L.to_json()


# Chevalley-Eilenberg maps -----------------------------------------------------

def test_ce_map_is_zero_for_abelian_bracket():
    g = DGLA.abelian(Complex({0: 1, 1: 2}))
    for i in range(2, 5):
        assert all(m.is_zero() for m in ce_map(i, g).components.values())


def test_ce_map_on_two_dim_lie_algebra():
    g = lie2()
    xy = antisymmetrize({(0, 1): Fraction(1)}, g.degrees)
    coords = g.alt(2).tuple_coordinates(0, xy)
    assert ce_map(2, g)[0].apply(coords) == (1, 0)


@pytest.mark.parametrize("n", [1, 2])
def test_ce_map_on_g_tensor_v_is_the_action(n):
    inst = qe.scaling_instance(n)
    g = qe.instance_dgla(inst)
    alt2 = g.alt(2)
    ce = ce_map(2, g)[1]
    for v in range(inst.v_dim):
        ev = antisymmetrize({(0, 1 + v): Fraction(1)}, g.degrees)
        image = ce.apply(alt2.tuple_coordinates(1, ev))
        expected = inst.rho[0].column(v)
        assert image == expected


@pytest.mark.parametrize("g", [lie2(), scaling(1), scaling(2), qe.instance_dgla(qe.torus_instance())])
def test_ce_maps_are_chain_maps_squaring_to_zero(g):
    for i in range(2, 5):
        assert ce_map(i, g).is_chain_map()
    for i in range(3, 5):
        comp = ce_map(i - 1, g) @ ce_map(i, g)
        assert all(m.is_zero() for m in comp.components.values())


# Jacobi complexes -------------------------------------------------------------

def test_jacobi_r1_is_shifted_l():
    g = scaling(2)
    t = jacobi(1, g).total
    assert t.pieces == {k - 1: v for k, v in g.L.pieces.items()}


def test_jacobi_of_even_line():
    j = jacobi(3, DGLA.abelian(Complex({0: 1})))
    assert j.total.pieces == {-1: 1}
    assert not j.total.differentials


def test_jacobi_of_contractible_has_no_h0():
    g = DGLA.abelian(contractible(0))
    for r in range(1, 4):
        assert h0(jacobi(r, g)).dim == 0
        assert all(v == 0 for v in jacobi(r, g).cohomology_dims().values())


def test_h0_of_injective_anchor():
    g = DGLA.abelian(Complex({0: 1, 1: 2}, {0: Matrix.from_rows([[1], [0]])}))
    assert h0(jacobi(1, g)).dim == 1


@pytest.mark.parametrize("n,r", [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3), (3, 2)])
def test_h0_dims_of_scaling(n, r):
    h = h0(jacobi(r, scaling(n)))
    assert h.dim == generic_h0_dim(n, r)
    assert h.graded_dims() == [math.comb(n + i - 1, i) for i in range(1, r + 1)]


def test_h0_scaling_n1_r2_graded():
    assert h0(jacobi(2, scaling(1))).graded_dims() == [1, 1]


def test_torus_h0_dims():
    h = h0(jacobi(2, qe.instance_dgla(qe.torus_instance())))
    assert h.dim == 5 and h.graded_dims() == [2, 3]


def test_h0_duality():
    h = h0(jacobi(3, scaling(2)))
    for a, rep in enumerate(h.reps):
        assert h.classes(rep) == tuple(Fraction(int(a == b)) for b in range(h.dim))
    for b in h.coboundaries.vectors():
        assert not any(h.classes(b))


def test_filtration_piece_is_subcomplex():
    j = jacobi(3, scaling(1))
    assert j.filtration_piece(1).total.pieces == jacobi(1, scaling(1)).total.pieces


# comultiplication and the dual algebra ----------------------------------------

def test_unshuffle_coproduct_of_pure_tensor_degree_zero():
    # x ^ y in degree 0 splits into x (x) y - y (x) x over the two unshuffles
    vec = antisymmetrize({(0, 1): Fraction(1)}, [0, 0])
    parts = unshuffle_coproduct(vec, 1, [0, 0])
    assert parts == {((0,), (1,)): Fraction(1), ((1,), (0,)): Fraction(-1)}


def test_comultiplication_r1_is_zero():
    assert comultiplication(1, scaling(2)).is_zero()


def test_scaling_n1_r2_is_truncated_polynomial_algebra():
    alg = dual_algebra(jacobi(2, scaling(1)))
    assert alg.dim == 3
    level2 = alg.filtration[2]
    t = next(v for v in alg.filtration[1].vectors() if not level2.contains(v))
    t2 = alg.multiply(t, t)
    assert any(t2) and level2.contains(t2)
    assert not any(alg.multiply(t2, t))


@pytest.mark.parametrize("g,r", [(scaling(1), 4), (scaling(2), 3), (qe.instance_dgla(qe.torus_instance()), 2)])
def test_dual_algebra_axioms(g, r):
    alg = dual_algebra(jacobi(r, g))
    assert alg.is_associative()
    assert alg.is_commutative()
    assert alg.is_filtered()
    unit = tuple(Fraction(int(i == 0)) for i in range(alg.dim))
    for a in range(alg.dim):
        e = tuple(Fraction(int(i == a)) for i in range(alg.dim))
        assert alg.multiply(unit, e) == e == alg.multiply(e, unit)


@pytest.mark.parametrize("r", [2, 3])
def test_comultiplication_coassociative(r):
    j = jacobi(r, scaling(2))
    h = H0(j)
    d = h.dim
    delta = comultiplication(r, j, h)
    for z in range(d):
        left, right = {}, {}
        for a, b in itertools.product(range(d), repeat=2):
            c = delta[a * d + b, z]
            if not c:
                continue
            for x, y in itertools.product(range(d), repeat=2):
                if delta[x * d + y, a]:
                    left[x, y, b] = left.get((x, y, b), 0) + c * delta[x * d + y, a]
                if delta[x * d + y, b]:
                    right[a, x, y] = right.get((a, x, y), 0) + c * delta[x * d + y, b]
        assert {k: v for k, v in left.items() if v} == {k: v for k, v in right.items() if v}


# modules ----------------------------------------------------------------------

def weight_module(g, k, dim=1):
    """Q^dim in degree 1 on which the single g generator acts by k."""
    table = {(0, m): {m: k} for m in range(dim)} if k else {}
    return DGLAModule.from_table(g, Complex({1: dim}), table)


def test_non_action_is_rejected():
    g = lie2()
    # x acts by 1, y by 1 on a line: [x,y] = x should act by 0 = xy - yx, but acts by 1
    with pytest.raises(DGLAError, match="module square"):
        DGLAModule.from_table(g, Complex({0: 1}), {(0, 0): {0: 1}, (1, 0): {0: 1}})


def test_action_of_wrong_degree_is_rejected():
    with pytest.raises(DGLAError, match="degree"):
        DGLAModule.from_table(lie2(), Complex({0: 1, 1: 1}), {(0, 0): {1: 1}})


def test_augment_bookkeeping():
    g = scaling(1)
    m = weight_module(g, 2)
    aug = augment(g, m)
    assert aug.dim == g.dim + m.dim
    for x, y in itertools.product(range(g.dim), repeat=2):
        assert aug.bilinear(aug.l_index[x], aug.l_index[y]) == {
            aug.l_index[z]: c for z, c in g.bilinear(x, y).items()}
    assert aug.bilinear(aug.l_index[0], aug.m_index[0]) == {aug.m_index[0]: 2}
    assert aug.bilinear(aug.m_index[0], aug.m_index[0]) == {}


def test_augment_with_trivial_action_has_bracket_on_l_only():
    g = scaling(1)
    aug = augment(g, weight_module(g, 0))
    for (x, y) in itertools.product(range(aug.dim), repeat=2):
        if aug.bilinear(x, y):
            assert not aug.is_module[x] and not aug.is_module[y]


def test_module_jacobi_of_zero_module_is_empty():
    g = scaling(1)
    m = DGLAModule.from_table(g, Complex({}), {})
    assert jacobi_module(2, g, m).total.pieces == {}


def test_module_jacobi_over_zero_dgla_is_m():
    g = DGLA.abelian(Complex({}))
    m = DGLAModule.from_table(g, Complex({1: 2}), {})
    t = jacobi_module(2, g, m).total
    assert t.pieces == {0: 2}


@pytest.mark.parametrize("k", [-1, 0, 1, 2])
@pytest.mark.parametrize("r", [1, 2])
def test_module_h0_dims(k, r):
    g = scaling(1)
    mj = jacobi_module(r, g, weight_module(g, k))
    assert H0(mj.jacobi).dim == 1 + r


@pytest.mark.parametrize("k", [0, 1])
@pytest.mark.parametrize("r", [1, 2])
def test_module_coaction_vanishes_on_the_bare_module_column(k, r):
    # classes living in the M column have no L factor to split off
    g = scaling(1)
    mj = jacobi_module(r, g, weight_module(g, k))
    hm = H0(mj.jacobi)
    coact = module_comultiplication(r, g, weight_module(g, k), mj=mj)
    bare = hm.filtration(1)
    assert bare.dim == 1
    for v in bare.vectors():
        assert not any(coact.apply(v))


def test_filtration_piece_is_rejected_as_summand():
    j = jacobi(2, scaling(1))
    with pytest.raises(DGLAError, match="direct summand"):
        j.restrict(lambda m, col, jj: col <= 1)


@pytest.mark.parametrize("k", [-1, 1, 2])
def test_dual_module_is_a_unital_module(k):
    g = scaling(1)
    r = 2
    jl = jacobi(r, g)
    mj = jacobi_module(r, g, weight_module(g, k))
    alg = dual_algebra(jl)
    mod = dual_module(mj, jl)
    basis_a = [tuple(Fraction(int(i == a)) for i in range(alg.dim)) for a in range(alg.dim)]
    basis_m = [tuple(Fraction(int(i == b)) for i in range(mod.dim)) for b in range(mod.dim)]
    for f in basis_m:
        assert mod.act(basis_a[0], f) == f
    for a, b, f in itertools.product(basis_a, basis_a, basis_m):
        assert mod.act(alg.multiply(a, b), f) == mod.act(a, mod.act(b, f))


def test_module_cohomology_matches_tensor_for_trivial_action():
    g = scaling(1)
    r = 2
    one = jacobi_module(r, g, weight_module(g, 0, 1))
    two = jacobi_module(r, g, weight_module(g, 0, 2))
    d1 = {k: v for k, v in cohomology_dims(one.total).items() if v}
    d2 = {k: v for k, v in cohomology_dims(two.total).items() if v}
    assert d2 == {k: 2 * v for k, v in d1.items()}
