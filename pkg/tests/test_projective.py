import itertools
import math
from fractions import Fraction

import pytest
import sympy

from schurjacobi.projective import (
    EquivariantBundle,
    diff_twist,
    endomorphisms_cech,
    euler_dgla,
    euler_power_fiber,
    euler_power_h0,
    expected_twist,
    global_endomorphisms,
    global_sections_diff,
    jacobi_display,
    line_cohomology,
    resolution,
    sym_power_bundle,
    weyl_oracle_p1,
)
from schurjacobi.linalg import rank


def cech_line_cohomology(n, d):
    """Cech count on the standard cover: H^0 has all exponents >= 0, H^n all < 0."""
    h0 = sum(1 for a in itertools.product(range(d + 1), repeat=n + 1) if sum(a) == d) if d >= 0 else 0
    hn = sum(1 for a in itertools.product(range(d + 1, 0), repeat=n + 1) if sum(a) == d) if d < 0 else 0
    return h0, hn


# line bundles -------------------------------------------------------------------

def test_line_cohomology_examples():
    assert line_cohomology(2, 0, 0) == 1
    assert line_cohomology(2, 2, 0) == 6
    assert line_cohomology(1, -2, 1) == 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_line_cohomology_matches_cech_monomials(n):
    for d in range(-n - 5, 5):
        h0, hn = cech_line_cohomology(n, d)
        assert line_cohomology(n, d, 0) == h0
        assert line_cohomology(n, d, n) == hn
        for q in range(1, n):
            assert line_cohomology(n, d, q) == 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_serre_duality_and_euler_characteristic(n):
    for d in range(-6, 6):
        assert line_cohomology(n, d, n) == line_cohomology(n, -n - 1 - d, 0)
        chi = sum((-1) ** q * line_cohomology(n, d, q) for q in range(n + 1))
        assert chi == math.comb(n + d, n) if d >= 0 else chi == (-1) ** n * math.comb(-d - 1, n)


def test_bundle_cohomology_scales_with_rank():
    b = EquivariantBundle("W", 3, -3)
    assert b.h(1, 1) == 3 * line_cohomology(1, -3, 1)
    assert sym_power_bundle(2, 2).h(2, 0) == 6 * 6


# the Euler co-section -----------------------------------------------------------

def test_euler_dgla_realisations():
    e = euler_dgla(2)
    assert e.matches_instance()
    assert e.fiber_map.column(0) == (1, 0, 0)
    # identity element of V* (x) V inside V* (x) H0(O(1))
    assert e.h0_map.column(0) == tuple(Fraction(int(a == b)) for a in range(3) for b in range(3))


def test_euler_power_coefficients_are_multinomials():
    col = euler_power_h0(1, 2).column(0)
    # e^g (x) x^g with g = (2,0), (1,1), (0,2): multiplicities 1, 2, 1
    assert [col[i * 3 + i] for i in range(3)] == [1, 2, 1]
    assert euler_power_fiber(1, 2).column(0) == (1, 0, 0)


# the resolution -----------------------------------------------------------------

def test_resolution_fiber_example():
    rep = resolution(2, 2)
    assert rep.passed
    details = {c.name: c.detail for c in rep.checks}
    assert details["fiber_cokernel_rank"] == "6 - 1 = 5"
    assert rank(euler_power_fiber(2, 2)) == 1


def test_resolution_p1_r1_cokernel_is_tangent_line():
    rep = resolution(1, 1)
    assert rep.passed
    assert {c.name: c.detail for c in rep.checks}["fiber_cokernel_rank"] == "2 - 1 = 1"


@pytest.mark.parametrize("n,r", [(n, r) for n in (1, 2, 3) for r in (1, 2, 3)])
def test_resolution_grid(n, r):
    rep = resolution(n, r)
    assert rep.passed, [c for c in rep.checks if not c.ok]
    N = math.comb(n + r, n)
    assert rep.h0_quotient == N * N - 1
    assert rep.h0_diff == N * N


# global sections ------------------------------------------------------------------

def test_global_sections_examples():
    assert global_sections_diff(1, 1) == 4
    assert global_sections_diff(2, 1) == 9
    assert global_sections_diff(1, 2) == 9


@pytest.mark.parametrize("n", [1, 2, 3])
def test_global_sections_formula(n):
    for r in range(0, 5):
        assert global_sections_diff(n, r) == math.comb(n + r, n) ** 2


def test_weyl_oracle_values():
    assert [weyl_oracle_p1(r) for r in range(5)] == [1, 4, 9, 16, 25]
    with pytest.raises(ValueError):
        weyl_oracle_p1(5)


def test_first_order_operators_on_p2_by_chart_gluing():
    # p0 + p1 d1 + p2 d2 on the chart x0 = 1, regular on the other two charts
    z1, z2, w1, w2 = sympy.symbols("z1 z2 w1 w2")
    bound = 3
    mons = [z1 ** a * z2 ** b for a in range(bound + 1) for b in range(bound + 1 - a)]
    cs = sympy.symbols(f"c0:{3 * len(mons)}")
    p = [sum(c * m for c, m in zip(cs[i * len(mons):(i + 1) * len(mons)], mons)) for i in range(3)]
    eqs = []
    # chart x1 = 1: z1 = 1/w1, z2 = w2/w1, d_z1 = -w1^2 d_w1 - w1 w2 d_w2, d_z2 = w1 d_w2
    # chart x2 = 1: z2 = 1/w1, z1 = w2/w1, d_z2 = -w1^2 d_w1 - w1 w2 d_w2, d_z1 = w1 d_w2
    for a, b in ((1, 2), (2, 1)):
        za, zb = (z1, z2) if a == 1 else (z2, z1)
        sub = {za: 1 / w1, zb: w2 / w1}
        coeffs = [p[0].subs(sub, simultaneous=True),
                  (-w1 ** 2 * p[a]).subs(sub, simultaneous=True),
                  (-w1 * w2 * p[a] + w1 * p[b]).subs(sub, simultaneous=True)]
        for c in coeffs:
            poly = sympy.Poly(sympy.expand(c * w1 ** (bound + 2)), w1, w2)
            for (e1, _), coef in poly.terms():
                if e1 < bound + 2:
                    eqs.append(coef)
    m = sympy.Matrix([[sympy.diff(e, c) for c in cs] for e in eqs])
    count = len(cs) - m.rank()
    assert count == 9 == global_sections_diff(2, 1)


# twisted Jacobi complexes ---------------------------------------------------------

def test_display_k0_detaches_constants():
    assert jacobi_display(2, 2, 0).scalars[0] == 0


def test_display_k1_r2_scalars():
    rep = jacobi_display(2, 2, 1)
    assert rep.scalars == [1, 2] and rep.passed


def test_display_km1_splits_at_one():
    assert jacobi_display(1, 3, -1).scalars == [-1, 0, 1]


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("r", [1, 2, 3])
def test_display_scalars_are_k_plus_j(n, r):
    for k in range(-2, r + 3):
        assert jacobi_display(n, r, k).scalars == [k + j for j in range(r)]


def test_twist_examples():
    a = diff_twist(2, 2, 1)
    assert [s.label() for s in a.summands] == ["S^1(V*(1))", "S^2(V*(1))/S^1(V*(1))"]
    b = diff_twist(2, 2, -1)
    assert [s.label() for s in b.summands] == ["S^2(V*(1))"]
    c = diff_twist(2, 1, 0)
    assert [s.label() for s in c.summands] == ["S^0(V*(1))", "S^1(V*(1))/S^0(V*(1))"]
    assert [s.rank for s in c.summands] == [1, 2]


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("r", [1, 2, 3])
def test_twist_grid_matches_case_formula(n, r):
    for k in range(-2, r + 3):
        rep = diff_twist(n, r, k)
        assert rep.passed, (k, rep.summands, rep.expected)
        assert sum(s.rank for s in rep.summands) == math.comb(n + r, n)


def test_expected_twist_drops_empty_summands():
    assert [s.label() for s in expected_twist(2, 2, 2)] == ["S^2(V*(1))"]


# endomorphisms ------------------------------------------------------------------

def test_endomorphism_examples():
    assert global_endomorphisms(2, 1) == 1
    assert global_endomorphisms(3, 2) == 1


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("r", [1, 2, 3])
def test_endomorphisms_are_scalars_for_n_at_least_two(n, r):
    assert global_endomorphisms(n, r) == 1


def test_endomorphisms_on_p1():
    # on P^1 the quotient is O(r+1)^r, so End has dimension r^2
    assert [global_endomorphisms(1, r) for r in (1, 2, 3)] == [1, 4, 9]
    assert global_endomorphisms(1, 2) > 1


@pytest.mark.parametrize("n,r", [(1, 1), (2, 1), (2, 2)])
def test_cech_agrees_with_e1_page(n, r):
    assert endomorphisms_cech(n, r) == global_endomorphisms(n, r)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        global_endomorphisms(2, 0)
    with pytest.raises(ValueError):
        resolution(2, 0)
