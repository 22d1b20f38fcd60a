"""Differential operators on projective space ``P^n = P(V)``.

Every bundle here is ``(fixed representation) (x) O(d)``, so sheaf cohomology
reduces to line bundle cohomology with multiplicity.  Homogeneous
coordinates ``x_0..x_n`` span ``H0(O(1))``; the base point is ``[1:0:...:0]``.

The Euler co-section ``O -> V*(1)`` is ``1 -> sum_i e_i (x) x_i`` and its
``r``-th symmetric power is ``eps^r = sum_|g|=r mult(g) e^g (x) x^g``.

Fiberwise everything is the ``C*`` scaling instance: ``L = (g -> V)`` with
``g = Lie(GL(Q))`` in degree 0 and the fiber of ``V*(1)`` in degree 1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .complexes import Complex, antisymmetrize
from .dgla import DGLA, DGLAModule, H0, ModuleJacobi, jacobi
from .linalg import Matrix, kernel_basis, rank
from .quotient import instance_dgla, monomials, scaling_instance

__all__ = [
    "line_cohomology",
    "EquivariantBundle",
    "euler_characteristic",
    "euler_dgla",
    "resolution",
    "jacobi_display",
    "diff_twist",
    "expected_twist",
    "global_endomorphisms",
    "endomorphisms_cech",
    "global_sections_diff",
    "weyl_oracle_p1",
]


def line_cohomology(n: int, d: int, q: int) -> int:
    """``dim H^q(P^n, O(d))``."""
    if n < 1:
        raise ValueError("need n >= 1")
    if q == 0:
        return math.comb(n + d, n) if d >= 0 else 0
    if q == n:
        return math.comb(-d - 1, n) if d <= -n - 1 else 0
    return 0


@dataclass(frozen=True)
class EquivariantBundle:
    """``rep (x) O(twist)`` with ``rep`` a fixed vector space of dimension ``rep_dim``."""

    rep: str
    rep_dim: int
    twist: int

    def h(self, n: int, q: int) -> int:
        return self.rep_dim * line_cohomology(n, self.twist, q)

    def euler_characteristic(self, n: int) -> int:
        return sum((-1) ** q * self.h(n, q) for q in range(n + 1))


def euler_characteristic(n: int, bundles: Iterable[tuple[int, EquivariantBundle]]) -> int:
    """``chi`` of a formal combination ``sum c_i [E_i]``."""
    return sum(c * b.euler_characteristic(n) for c, b in bundles)


def sym_power_bundle(n: int, a: int) -> EquivariantBundle:
    """``S^a(V*(1)) = S^a V* (x) O(a)``."""
    return EquivariantBundle(f"S^{a}V*", math.comb(n + a, n), a)


def _multinomial(g: Sequence[int]) -> int:
    out = math.factorial(sum(g))
    for x in g:
        out //= math.factorial(x)
    return out


def euler_power_h0(n: int, r: int) -> Matrix:
    """``H0(O) -> S^r V* (x) H0(O(r))``: column of ``eps^r`` (row ``g * N + m``)."""
    mons = monomials(n + 1, r, r)
    N = len(mons)
    col = {}
    for i, g in enumerate(mons):
        col[i * N + i] = Fraction(_multinomial(g))
    return Matrix.from_sparse_columns([col], N * N)


def euler_power_fiber(n: int, r: int) -> Matrix:
    """``eps^r`` at ``[1:0:...:0]``: only ``x_0^r`` survives."""
    mons = monomials(n + 1, r, r)
    col = {i: Fraction(_multinomial(g)) for i, g in enumerate(mons) if g[0] == r}
    return Matrix.from_sparse_columns([col], len(mons))


@dataclass
class EulerDGLA:
    n: int
    fiber: DGLA
    fiber_map: Matrix  # g -> V at the base point
    h0_map: Matrix  # H0(O) -> V* (x) H0(O(1))

    def matches_instance(self) -> bool:
        inst = instance_dgla(scaling_instance(self.n))
        return inst.L == self.fiber.L and inst.bracket == self.fiber.bracket


def euler_dgla(n: int, r: int = 1) -> EulerDGLA:
    """``L = (O -> V*(1))`` realized at the base point and on ``H0``."""
    if r < 1:
        raise ValueError("need r >= 1")
    d = n + 1
    fiber_map = euler_power_fiber(n, 1)
    L = Complex({0: 1, 1: d}, {0: fiber_map})
    table = {}
    for v in range(d):
        table[0, 1 + v] = {1 + v: 1}
        table[1 + v, 0] = {1 + v: -1}
    g = DGLA.from_bilinear(L, table)
    return EulerDGLA(n, g, fiber_map, euler_power_h0(n, 1))


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class ResolutionReport:
    n: int
    r: int
    checks: list[Check] = field(default_factory=list)
    h0_quotient: int = 0
    h0_diff: int = 0

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)


def resolution(n: int, r: int) -> ResolutionReport:
    """``0 -> O -> S^r(V*(1)) -> Diff^r/O -> 0``: fiber, Jacobi and ``H0`` checks."""
    if r < 1:
        raise ValueError("need r >= 1")
    rep = ResolutionReport(n, r)
    N = math.comb(n + r, n)
    fib = euler_power_fiber(n, r)
    rk = rank(fib)
    rep.checks.append(Check("fiber_injective", rk == 1, f"rank {rk}"))
    rep.checks.append(Check("fiber_cokernel_rank", N - rk == N - 1, f"{N} - {rk} = {N - rk}"))
    # fiber of Diff^r/O is h0 of the Jacobi complex; its top column is S^r
    g = euler_dgla(n).fiber
    j = jacobi(r, g)
    h = H0(j)
    rep.checks.append(Check("jacobi_h0_rank", h.dim == N - 1, f"h0 = {h.dim}, expected {N - 1}"))
    others = {k: v for k, v in j.cohomology_dims().items() if k != 0 and v}
    rep.checks.append(Check("jacobi_concentrated", not others, f"other cohomology {others}"))
    top = [idx for idx, (col, _) in enumerate(j.labels[0]) if col == r]
    images = []
    for idx in top:
        e = [Fraction(0)] * h.n0
        e[idx] = Fraction(1)
        images.append(h.classes(e))
    m = Matrix.from_columns(images, h.dim)
    rep.checks.append(Check("top_column_surjects", rank(m) == h.dim, f"rank {rank(m)} of {h.dim}"))
    # kernel of S^r -> h0 is spanned by s^r, the fiber image of O
    ker = kernel_basis(m)
    col = j.columns[r]
    s_pow = antisymmetrize({(1,) * r: Fraction(1)}, g.degrees)
    s_coords = col.tuple_coordinates(r, s_pow)
    ok = ker.dim == 1 and ker.contains(s_coords)
    rep.checks.append(Check("top_column_kernel_is_image_of_O", ok, f"kernel dim {ker.dim}"))
    # H0 level
    h0map = euler_power_h0(n, r)
    h0_rank = rank(h0map)
    h1_o = line_cohomology(n, 0, 1)
    target = sym_power_bundle(n, r).h(n, 0)
    rep.h0_quotient = target - h0_rank + h1_o
    rep.checks.append(Check("h0_quotient", rep.h0_quotient == N * N - 1, f"{rep.h0_quotient}"))
    rep.h0_diff = line_cohomology(n, 0, 0) + rep.h0_quotient
    rep.checks.append(Check("h0_diff", rep.h0_diff == N * N, f"{rep.h0_diff}"))
    # Euler characteristic: from the long exact sequence versus the bundle formula
    chi_seq = rep.h0_quotient
    for q in range(1, n + 1):
        hq = sym_power_bundle(n, r).h(n, q) - line_cohomology(n, 0, q)
        chi_seq += (-1) ** q * hq
    chi_formula = sym_power_bundle(n, r).euler_characteristic(n) - 1
    rep.checks.append(Check("euler_characteristic", chi_seq == chi_formula, f"{chi_seq} vs {chi_formula}"))
    return rep


def global_sections_diff(n: int, r: int) -> int:
    """``dim H0(Diff^r)`` from ``Diff^r = O + Diff^r/O`` and the resolution."""
    if r == 0:
        return line_cohomology(n, 0, 0)
    N = math.comb(n + r, n)
    quotient = N * line_cohomology(n, r, 0) - rank(euler_power_h0(n, r)) + line_cohomology(n, 0, 1)
    return line_cohomology(n, 0, 0) + quotient


# twisted Jacobi complexes -----------------------------------------------------

@dataclass
class DisplayReport:
    n: int
    r: int
    k: int
    scalars: list[Fraction]  # scalars[j] = connecting scalar on S^j (x) M, j = 0..r-1
    expected: list[int]
    jacobi: ModuleJacobi

    @property
    def passed(self) -> bool:
        return [Fraction(x) for x in self.expected] == self.scalars


def _fiber_module(n: int, k: int, g: DGLA) -> DGLAModule:
    """Fiber of ``O(k)`` at the base point: a line of weight ``k`` in degree 1."""
    return DGLAModule.from_table(g, Complex({1: 1}), {(0, 0): {0: k}} if k else {})


def jacobi_display(n: int, r: int, k: int) -> DisplayReport:
    """Connecting scalars of ``J^r(L, O(k))`` at the base point.

    For a degree-``j`` monomial ``u`` in the fiber coordinates the total
    differential sends ``xi ^ u ^ m`` to ``c_j * (u ^ m)`` in the previous
    column (plus ``s ^ u ^ m`` in its own column); ``c_j`` is read off and
    checked to be the same for every ``u``.
    """
    if r < 1:
        raise ValueError("need r >= 1")
    g = euler_dgla(n).fiber
    m = _fiber_module(n, k, g)
    mj = ModuleJacobi(r, g, m)
    aug = mj.aug
    jac = mj.jacobi
    xi = aug.l_index[0]
    mvec = aug.m_index[0]
    vidx = [aug.l_index[1 + i] for i in range(n + 1)]
    degs = aug.degrees
    d = jac.total.d(-1)
    scalars = []
    for j in range(r):
        found = None
        for combo in itertools.combinations_with_replacement(vidx, j):
            src = antisymmetrize({(xi,) + combo + (mvec,): Fraction(1)}, degs)
            col = j + 2
            coords = jac.columns[col].tuple_coordinates(j + 1, src)
            full = [Fraction(0)] * jac.total.dim(-1)
            for b, c in enumerate(coords):
                if c:
                    full[jac.index[-1][(col, b)]] = c
            img = d.apply(full)
            part = {}
            for (cc, b), n_ in jac.index[0].items():
                if cc == j + 1 and img[n_]:
                    part[b] = img[n_]
            tgt = antisymmetrize({combo + (mvec,): Fraction(1)}, degs)
            tcoords = jac.columns[j + 1].tuple_coordinates(j + 1, tgt)
            # img restricted to column j+1 must be a multiple of tcoords
            piv = next(b for b, c in enumerate(tcoords) if c)
            c_j = part.get(piv, Fraction(0)) / tcoords[piv]
            if any(part.get(b, Fraction(0)) != c_j * tc for b, tc in enumerate(tcoords)):
                raise ArithmeticError(f"connecting map is not scalar on degree {j}")
            if found is None:
                found = c_j
            elif found != c_j:
                raise ArithmeticError(f"connecting scalar depends on the monomial in degree {j}")
        scalars.append(found)
    return DisplayReport(n, r, k, scalars, [k + j for j in range(r)], mj)


@dataclass(frozen=True)
class Summand:
    """``S^top(V*(1)) / S^bottom(V*(1))`` (``bottom = None`` for no quotient)."""

    top: int
    bottom: int | None
    rank: int

    def label(self) -> str:
        if self.bottom is None:
            return f"S^{self.top}(V*(1))"
        return f"S^{self.top}(V*(1))/S^{self.bottom}(V*(1))"


def expected_twist(n: int, r: int, k: int) -> list[Summand]:
    """Case formula for ``Diff^r(O(k), O(k))`` (zero-rank summands dropped)."""
    N = math.comb(n + r, n)
    if 0 <= k <= r:
        a = math.comb(n + k, n)
        out = [Summand(k, None, a), Summand(r, k, N - a)]
    else:
        out = [Summand(r, None, N)]
    return [s for s in out if s.rank]


@dataclass
class TwistReport:
    n: int
    r: int
    k: int
    summands: list[Summand]
    expected: list[Summand]
    scalars: list[Fraction]

    @property
    def passed(self) -> bool:
        return self.summands == self.expected


def diff_twist(n: int, r: int, k: int) -> TwistReport:
    """Split ``Diff^r(O(k),O(k)) = h0(J^r(L, O(-k))) (x) O(k)`` at a vanishing scalar.

    The splitting is read from the constructed connecting scalars: if the
    scalar on ``S^j0`` vanishes, the columns up to ``j0`` form a direct
    summand whose ``h0`` has rank ``C(n+j0, n)``.
    """
    disp = jacobi_display(n, r, -k)
    zeros = [j for j, c in enumerate(disp.scalars) if c == 0]
    jac = disp.jacobi.jacobi
    h = H0(jac)
    if not zeros:
        out = [Summand(r, None, h.dim)]
    else:
        j0 = zeros[0]
        # columns <= j0 + 1 carry u of degree <= j0 in Tot^0 and <= j0 - 1 in Tot^-1
        low = jac.restrict(lambda m, col, b: col <= j0 + 1)
        high = jac.restrict(lambda m, col, b: col > j0 + 1)
        ra = H0(low).dim
        rb = H0(high).dim
        if ra + rb != h.dim:
            raise ArithmeticError("summands do not add up to the whole")
        out = [Summand(j0, None, ra), Summand(r, j0, rb)]
    out = [s for s in out if s.rank]
    return TwistReport(n, r, k, out, expected_twist(n, r, k), disp.scalars)


# endomorphisms ------------------------------------------------------------------

def _end_d1(n: int, r: int) -> Matrix:
    """``d1: H0(End^0) = Q + End(S^r V*) -> S^r V* (x) H0(O(r))``, ``(c, F) -> c eps^r - F eps^r``.

    Columns: ``c`` first, then ``F = E_{a b}`` (``a * N + b``).  Rows: ``a * N + m``.
    """
    mons = monomials(n + 1, r, r)
    N = len(mons)
    mult = [Fraction(_multinomial(g)) for g in mons]
    cols = [{i * N + i: mult[i] for i in range(N)}]
    for a in range(N):
        for b in range(N):
            # E_ab sends e^b (x) x^b (coefficient mult[b]) to e^a (x) x^b
            cols.append({a * N + b: -mult[b]})
    return Matrix.from_sparse_columns(cols, N * N)


def global_endomorphisms(n: int, r: int) -> int:
    """``dim H^0`` of ``End`` of ``[O -> S^r(V*(1))]``, i.e. of ``End(Diff^r/O)``.

    For ``n >= 2`` the only total-degree-0 ``E1`` term is ``H0(End^0)`` and the
    answer is ``dim ker d1``.  On ``P^1`` the term ``H^1(End^-1)`` is present
    for ``r >= 2`` and the weight-graded Cech computation is used instead.
    """
    if n < 1 or r < 1:
        raise ValueError("need n >= 1 and r >= 1")
    N = math.comb(n + r, n)
    extra = N * line_cohomology(n, -r, 1) if n == 1 else 0
    incoming = N * line_cohomology(n, -r, 0)
    if extra or incoming:
        return endomorphisms_cech(n, r)
    d1 = _end_d1(n, r)
    return d1.cols - rank(d1)


class _EndComplex:
    """Components of ``End^p`` of ``[O -> S^r V* (x) O(r)]`` as weight bases.

    Each component is ``(name, twist, rep_weights)``; a section over a chart is a
    Laurent monomial determined by the total weight.
    """

    def __init__(self, n: int, r: int):
        self.n, self.r = n, r
        self.mons = monomials(n + 1, r, r)
        self.mult = [Fraction(_multinomial(g)) for g in self.mons]
        N = len(self.mons)
        neg = [tuple(-x for x in g) for g in self.mons]
        pos = [tuple(g) for g in self.mons]
        zero = (0,) * (n + 1)
        ee = [tuple(p - q for p, q in zip(self.mons[b], self.mons[a])) for a in range(N) for b in range(N)]
        self.parts = {
            -1: [("Hom(C1,C0)", -r, pos)],
            0: [("Hom(C0,C0)", 0, [zero]), ("Hom(C1,C1)", 0, ee)],
            1: [("Hom(C0,C1)", r, neg)],
        }
        self.N = N


def _charts(n: int, p: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(n + 1), p + 1))


def _section_exponent(weight, rep_weight, twist, chart):
    a = tuple(w - v for w, v in zip(weight, rep_weight))
    if sum(a) != twist:
        return None
    if any(a[i] < 0 for i in range(len(a)) if i not in chart):
        return None
    return a


def endomorphisms_cech(n: int, r: int) -> int:
    """Hypercohomology ``H^0`` of the ``End`` complex by torus-weight-graded Cech cochains."""
    cx = _EndComplex(n, r)
    weights = _candidate_weights(cx)
    return sum(_cech_h0_at(cx, w) for w in sorted(weights))


def _candidate_weights(cx: _EndComplex) -> set:
    """Weights carried by ``E1`` terms of total degree 0."""
    n = cx.n
    out = set()
    for p, q in ((0, 0), (-1, 1), (1, -1)):
        if q < 0 or p not in cx.parts:
            continue
        for _, twist, reps in cx.parts[p]:
            for a in _line_cohomology_weights(n, twist, q):
                for v in reps:
                    out.add(tuple(x + y for x, y in zip(a, v)))
    return out


def _line_cohomology_weights(n: int, d: int, q: int) -> list[tuple]:
    """Exponent vectors spanning ``H^q(P^n, O(d))`` (monomial Cech classes)."""
    if q == 0 and d >= 0:
        return monomials(n + 1, d, d)
    if q == n and d <= -n - 1:
        # x^a with all a_i <= -1
        return [tuple(-1 - x for x in m) for m in monomials(n + 1, -d - n - 1, -d - n - 1)]
    return []


def _cech_basis(cx: _EndComplex, weight, total: int):
    """Basis of total degree ``total``: ``(end_degree, comp, rep_index, chart)``."""
    out = []
    for p in sorted(cx.parts):
        c = total - p
        if c < 0 or c > cx.n:
            continue
        for ci, (_, twist, reps) in enumerate(cx.parts[p]):
            for ri, rw in enumerate(reps):
                for ch in _charts(cx.n, c):
                    if _section_exponent(weight, rw, twist, ch) is not None:
                        out.append((p, ci, ri, ch))
    return out


def _end_d(cx: _EndComplex, p: int, ci: int, ri: int) -> dict:
    """``D`` on a component basis element: ``{(p+1, comp, rep): coefficient}``."""
    N, mult = cx.N, cx.mult
    out = {}
    if p == -1:
        # f = (e^g)^* : D f = d o f + f o d
        g = ri
        out[(0, 0, 0)] = mult[g]
        for dl in range(N):
            out[(0, 1, dl * N + g)] = out.get((0, 1, dl * N + g), 0) + mult[dl]
    elif p == 0 and ci == 0:
        for dl in range(N):
            out[(1, 0, dl)] = mult[dl]
    elif p == 0 and ci == 1:
        a, b = divmod(ri, N)
        out[(1, 0, a)] = -mult[b]
    return {k: v for k, v in out.items() if v}


def _cech_matrix(cx: _EndComplex, weight, src: list, tgt: list) -> Matrix:
    idx = {b: i for i, b in enumerate(tgt)}
    cols = []
    for (p, ci, ri, ch) in src:
        col = {}
        # End differential, same chart
        for (p2, c2, r2), v in _end_d(cx, p, ci, ri).items():
            key = (p2, c2, r2, ch)
            if key in idx:
                col[idx[key]] = col.get(idx[key], 0) + v
        # Cech differential with sign (-1)^p
        sgn = -1 if p % 2 else 1
        for extra in range(cx.n + 1):
            if extra in ch:
                continue
            new = tuple(sorted(ch + (extra,)))
            pos = new.index(extra)
            key = (p, ci, ri, new)
            if key in idx:
                col[idx[key]] = col.get(idx[key], 0) + sgn * (-1) ** pos
        cols.append({k: v for k, v in col.items() if v})
    return Matrix.from_sparse_columns(cols, len(tgt))


def _cech_h0_at(cx: _EndComplex, weight) -> int:
    bm, b0, b1 = (_cech_basis(cx, weight, t) for t in (-1, 0, 1))
    if not b0:
        return 0
    d0 = _cech_matrix(cx, weight, b0, b1)
    dm = _cech_matrix(cx, weight, bm, b0)
    if not (d0 @ dm).is_zero():
        raise ArithmeticError("Cech total differential does not square to zero")
    return len(b0) - rank(d0) - rank(dm)


# Weyl algebra oracle on P^1 -------------------------------------------------------

def _poly_mul(p: dict, q: dict) -> dict:
    out = {}
    for a, x in p.items():
        for b, y in q.items():
            out[a + b] = out.get(a + b, 0) + x * y
    return {k: v for k, v in out.items() if v}


def _chart_change(j: int) -> dict[int, dict[int, Fraction]]:
    """``d_z^j`` under ``z = 1/w`` as ``{k: poly in w}`` (coefficient of ``d_w^k``)."""
    op = {0: {0: Fraction(1)}}
    for _ in range(j):
        new: dict[int, dict] = {}
        # (-w^2 d_w) o (c(w) d_w^k) = -w^2 c' d_w^k - w^2 c d_w^{k+1}
        for k, c in op.items():
            dc = {e - 1: e * v for e, v in c.items() if e}
            for key, poly in ((k, dc), (k + 1, c)):
                term = _poly_mul({2: Fraction(-1)}, poly)
                acc = new.setdefault(key, {})
                for e, v in term.items():
                    acc[e] = acc.get(e, 0) + v
        op = {k: {e: v for e, v in c.items() if v} for k, c in new.items()}
    return op


def _weyl_count(r: int, bound: int) -> int:
    unknowns = [(j, m) for j in range(r + 1) for m in range(bound + 1)]
    changes = [_chart_change(j) for j in range(r + 1)]
    rows: dict[tuple[int, int], dict[int, Fraction]] = {}
    for u, (j, m) in enumerate(unknowns):
        for k, c in changes[j].items():
            for e, v in c.items():
                e2 = e - m  # z^m = w^-m
                if e2 < 0:
                    row = rows.setdefault((k, e2), {})
                    row[u] = row.get(u, 0) + v
    if not rows:
        return len(unknowns)
    mat = Matrix.from_rows([[row.get(u, 0) for u in range(len(unknowns))] for row in rows.values()])
    return len(unknowns) - rank(mat)


def weyl_oracle_p1(r: int) -> int:
    """Operators ``sum_j p_j(z) d_z^j`` on ``P^1`` regular at infinity, counted directly."""
    if r > 4:
        raise ValueError("weyl_oracle_p1 supports r <= 4")
    bound = 2 * r + 1
    a, b = _weyl_count(r, bound), _weyl_count(r, bound + 2)
    if a != b:
        raise ArithmeticError("operator count is not stable in the degree bound")
    return a
