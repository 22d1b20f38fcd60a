"""Infinitesimal quotients of linear actions at a base point.

Functions near the base point ``s`` are truncated polynomials in the
translated coordinates ``x_i = v_i - s_i``.  A Lie algebra element ``xi``
moves ``v`` by ``rho(xi) v``, so in the translated coordinates the first-order
change of ``x_j`` is ``(rho(xi) s)_j + sum_i rho(xi)_{ji} x_i``.

* ``comorphism_f`` extends this rule multiplicatively (product rule).
* ``invariant_kernel`` keeps the polynomials of degree ``<= r`` whose first
  order change vanishes up to degree ``r - 1``.
* ``jacobi_side`` builds the DGLA ``g -> V`` and the dual of ``h0`` of its
  Jacobi complex.
* ``compare`` pairs polynomials with symmetric tensors and checks that this
  identifies the two filtered algebras.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from .complexes import Complex
from .dgla import (
    DGLA,
    DGLAModule,
    DualAlgebra,
    DualModule,
    H0,
    JacobiComplex,
    ModuleJacobi,
    dual_algebra,
    dual_module,
    jacobi,
)
from .linalg import Matrix, Subspace, kernel_basis, rank, rational_str, to_rational

__all__ = [
    "ActionInstance",
    "TruncatedAlgebra",
    "InvariantKernel",
    "FilteredAlgebraReport",
    "comorphism_f",
    "invariant_kernel",
    "jacobi_side",
    "compare",
    "module_compare",
    "scaling_instance",
    "torus_instance",
    "builtin_instance",
    "load_instance",
    "column_weight",
]


def column_weight(j: int) -> int:
    """Weight of the degree-``j`` pairing: ``(-1)^{j(j+1)/2} j!``.

    Up to the overall sign ``(-1)^j`` this is the sign of reversing ``j`` odd
    factors.  Together with ``j!`` it is, up to a scalar, the unique choice (with weight 1 in degree 1) for which invariant
    polynomials vanish on coboundaries of the Jacobi complex.
    """
    return (-1) ** (j * (j + 1) // 2) * math.factorial(j)


class InstanceError(ValueError):
    pass


def _mat(m, rows: int, cols: int) -> Matrix:
    return m if isinstance(m, Matrix) else Matrix.from_json(m, rows, cols)


class ActionInstance:
    """Lie algebra ``g`` acting linearly on ``V`` with a base point ``s``.

    ``structure_constants[a][b][c]`` is the coefficient of ``e_c`` in
    ``[e_a, e_b]``; ``rho[a]`` is the matrix of ``e_a`` on ``V``.  An optional
    second representation ``W`` is given by ``w_rho``.
    """

    def __init__(self, g_dim: int, structure_constants, v_dim: int, rho: Sequence, s: Sequence,
                 w_dim: int = 0, w_rho: Sequence | None = None):
        self.g_dim, self.v_dim, self.w_dim = int(g_dim), int(v_dim), int(w_dim)
        sc = structure_constants or [[[0] * g_dim for _ in range(g_dim)] for _ in range(g_dim)]
        self.c = [[[to_rational(sc[a][b][c]) for c in range(g_dim)] for b in range(g_dim)] for a in range(g_dim)]
        if len(rho) != g_dim:
            raise InstanceError(f"need one rho matrix per basis element of g ({g_dim}), got {len(rho)}")
        self.rho = [_mat(m, v_dim, v_dim) for m in rho]
        if len(s) != v_dim:
            raise InstanceError(f"base point has length {len(s)}, expected {v_dim}")
        self.s = tuple(to_rational(x) for x in s)
        w_rho = w_rho or []
        if w_dim and len(w_rho) != g_dim:
            raise InstanceError("w_rho needs one matrix per basis element of g")
        self.w_rho = [_mat(m, w_dim, w_dim) for m in w_rho] if w_dim else []
        self._validate()

    def _validate(self):
        n = self.g_dim
        for a in range(n):
            for b in range(n):
                if any(self.c[a][b][k] + self.c[b][a][k] for k in range(n)):
                    raise InstanceError(f"structure constants are not antisymmetric at ({a}, {b})")
        for a, b, d in itertools.combinations(range(n), 3):
            jac = [Fraction(0)] * n
            for x, y, z in ((a, b, d), (b, d, a), (d, a, b)):
                for e in range(n):
                    for f in range(n):
                        jac[f] += self.c[y][z][e] * self.c[x][e][f]
            if any(jac):
                raise InstanceError(f"structure constants violate the Jacobi identity at {(a, b, d)}")
        for name, reps in (("rho", self.rho), ("w_rho", self.w_rho)):
            for a in range(len(reps)):
                for b in range(len(reps)):
                    lhs = reps[a] @ reps[b] - reps[b] @ reps[a]
                    rhs = Matrix.zeros(*lhs.shape)
                    for e in range(n):
                        if self.c[a][b][e]:
                            rhs = rhs + reps[e].scale(self.c[a][b][e])
                    if lhs != rhs:
                        raise InstanceError(f"{name} is not a Lie algebra action: "
                                            f"rho([e{a}, e{b}]) != [rho(e{a}), rho(e{b})]")

    def a_vectors(self) -> list[tuple]:
        """``a(e_k) = rho(e_k) s``."""
        return [m.apply(self.s) for m in self.rho]

    def a_injective(self) -> bool:
        return rank(Matrix.from_columns(self.a_vectors(), self.v_dim)) == self.g_dim if self.g_dim else True

    def with_dual_module(self) -> "ActionInstance":
        """Action on ``V + W*`` (``W*`` acted on by ``-rho_W^T``), base point ``(s, 0)``."""
        dv, dw = self.v_dim, self.w_dim
        rho = []
        for a in range(self.g_dim):
            rw = self.w_rho[a].T.scale(-1)
            rho.append(Matrix.block_diag(self.rho[a], rw))
        return ActionInstance(self.g_dim, self.c, dv + dw, rho, self.s + (Fraction(0),) * dw)

    def to_json(self) -> dict:
        d = {
            "g_dim": self.g_dim,
            "structure_constants": [[[rational_str(x) for x in row] for row in mat] for mat in self.c],
            "v_dim": self.v_dim,
            "rho": [m.to_json() for m in self.rho],
            "s": [rational_str(x) for x in self.s],
        }
        if self.w_dim:
            d["w_dim"] = self.w_dim
            d["w_rho"] = [m.to_json() for m in self.w_rho]
        return d

    @classmethod
    def from_json(cls, data: Mapping) -> "ActionInstance":
        try:
            return cls(data["g_dim"], data.get("structure_constants"), data["v_dim"], data["rho"], data["s"],
                       data.get("w_dim", 0), data.get("w_rho"))
        except KeyError as exc:
            raise InstanceError(f"instance is missing field {exc}") from None


def scaling_instance(n: int, weight: int | None = None) -> ActionInstance:
    """``C*`` scaling ``C^{n+1}`` with ``s = e_0``; optional one-dim ``W`` of given weight."""
    d = n + 1
    kw = {}
    if weight is not None:
        kw = {"w_dim": 1, "w_rho": [Matrix.from_rows([[weight]])]}
    return ActionInstance(1, [[[0]]], d, [Matrix.identity(d)], [1] + [0] * n, **kw)


def torus_instance() -> ActionInstance:
    """``(C*)^2`` on ``C^2 + C^2``, each factor scaling one summand; ``s = (1,0,1,0)``."""
    r1 = Matrix.from_rows([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    r2 = Matrix.from_rows([[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    zero = [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]
    return ActionInstance(2, zero, 4, [r1, r2], [1, 0, 1, 0])


BUILTINS = {
    "scaling1": "scaling1.json",
    "scaling2": "scaling2.json",
    "torus": "torus.json",
    "scaling1_w1": "scaling1_w1.json",
}


def builtin_instance(name: str) -> ActionInstance:
    if name not in BUILTINS:
        raise InstanceError(f"unknown builtin instance {name!r}; choose from {sorted(BUILTINS)}")
    text = resources.files("schurjacobi.data").joinpath(BUILTINS[name]).read_text()
    return ActionInstance.from_json(json.loads(text))


def load_instance(spec: str) -> ActionInstance:
    """Load from a JSON path, a builtin name, or a builtin file name."""
    p = Path(spec)
    if p.exists():
        try:
            data = json.loads(p.read_text())
        except json.JSONDecodeError as exc:
            raise InstanceError(f"{spec}: invalid JSON ({exc})") from None
        return ActionInstance.from_json(data)
    name = p.stem
    return builtin_instance(name if name in BUILTINS else spec)


# truncated polynomial algebras ----------------------------------------------

def monomials(nvars: int, max_degree: int, min_degree: int = 0) -> list[tuple[int, ...]]:
    """Exponent vectors by degree, graded lexicographic inside each degree."""
    out = []
    for d in range(min_degree, max_degree + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


class TruncatedAlgebra:
    """``sum_{i<=r} S^i V*`` with multiplication truncated above degree ``r``."""

    def __init__(self, nvars: int, r: int):
        self.nvars, self.r = nvars, r
        self.basis = monomials(nvars, r)
        self.index = {m: i for i, m in enumerate(self.basis)}
        self.dim = len(self.basis)

    def degree(self, i: int) -> int:
        return sum(self.basis[i])

    def multiply(self, u: Mapping[tuple, Fraction], v: Mapping[tuple, Fraction]) -> dict:
        out: dict = {}
        for a, x in u.items():
            for b, y in v.items():
                m = tuple(p + q for p, q in zip(a, b))
                if sum(m) <= self.r:
                    out[m] = out.get(m, 0) + x * y
        return {m: c for m, c in out.items() if c}

    def to_vector(self, p: Mapping[tuple, Fraction]) -> tuple:
        vec = [Fraction(0)] * self.dim
        for m, c in p.items():
            if sum(m) <= self.r:
                vec[self.index[m]] += c
        return tuple(vec)

    def from_vector(self, v: Sequence) -> dict:
        return {self.basis[i]: Fraction(c) for i, c in enumerate(v) if c}

    def is_commutative_associative(self) -> bool:
        mons = [{m: Fraction(1)} for m in self.basis]
        for a, b in itertools.product(mons, repeat=2):
            if self.multiply(a, b) != self.multiply(b, a):
                return False
        for a, b, c in itertools.product(mons, repeat=3):
            if self.multiply(self.multiply(a, b), c) != self.multiply(a, self.multiply(b, c)):
                return False
        return True


def _first_order(inst: ActionInstance, a: int, mono: tuple, max_degree: int) -> dict:
    """Change of the monomial under ``e_a``: ``sum_j d_j(m) * ((rho s)_j + (rho x)_j)``."""
    rho = inst.rho[a]
    rs = rho.apply(inst.s)
    out: dict = {}
    n = len(mono)
    for j in range(n):
        if not mono[j]:
            continue
        base = list(mono)
        base[j] -= 1
        c = mono[j]
        if rs[j]:
            m = tuple(base)
            if sum(m) <= max_degree:
                out[m] = out.get(m, 0) + c * rs[j]
        for i in range(n):
            if rho[j, i]:
                m = list(base)
                m[i] += 1
                m = tuple(m)
                if sum(m) <= max_degree:
                    out[m] = out.get(m, 0) + c * rho[j, i]
    return {m: v for m, v in out.items() if v}


def comorphism_f(inst: ActionInstance, r: int) -> Matrix:
    """Matrix of ``f`` from degree ``<= r+1`` monomials to ``P_r + sum_a eps_a P_r``.

    Target coordinates: first the plain block, then one block per basis element
    of ``g`` (``eps_a`` the dual basis), all indexed by degree ``<= r`` monomials.
    """
    src = monomials(inst.v_dim, r + 1)
    tgt = TruncatedAlgebra(inst.v_dim, r)
    n = tgt.dim
    cols = []
    for m in src:
        col = {}
        if sum(m) <= r:
            col[tgt.index[m]] = Fraction(1)
        for a in range(inst.g_dim):
            for mm, v in _first_order(inst, a, m, r).items():
                col[(a + 1) * n + tgt.index[mm]] = v
        cols.append(col)
    return Matrix.from_sparse_columns(cols, n * (inst.g_dim + 1))


def f_multiplicativity_defect(inst: ActionInstance, r: int):
    """First monomial pair with ``f(m1 m2) != f(m1) f(m2)`` (``eps`` squares to 0), else ``None``."""
    fm = comorphism_f(inst, r)
    src = monomials(inst.v_dim, r + 1)
    sidx = {m: i for i, m in enumerate(src)}
    n = len(monomials(inst.v_dim, r))
    tgt = TruncatedAlgebra(inst.v_dim, r)

    def split(col):
        parts = []
        for b in range(inst.g_dim + 1):
            parts.append(tgt.from_vector([col[b * n + i] for i in range(n)]))
        return parts

    for i, m1 in enumerate(src):
        for m2 in src[i:]:
            prod = tuple(p + q for p, q in zip(m1, m2))
            if sum(prod) > r + 1:
                continue
            lhs = split(fm.column(sidx[prod]))
            a, b = split(fm.column(sidx[m1])), split(fm.column(sidx[m2]))
            rhs = [tgt.multiply(a[0], b[0])]
            for e in range(1, inst.g_dim + 1):
                p = tgt.multiply(a[0], b[e])
                for k, v in tgt.multiply(a[e], b[0]).items():
                    p[k] = p.get(k, 0) + v
                rhs.append({k: v for k, v in p.items() if v})
            if lhs != rhs:
                return (m1, m2)
    return None


@dataclass
class InvariantKernel:
    """Polynomials of degree ``<= r`` invariant to first order up to degree ``r - 1``."""

    algebra: TruncatedAlgebra
    space: Subspace
    r: int

    @property
    def dim(self) -> int:
        return self.space.dim

    def order_level(self, i: int) -> Subspace:
        """Kernel elements vanishing to order ``i`` at the base point."""
        low = [k for k, m in enumerate(self.algebra.basis) if sum(m) < i]
        if not low or not self.space.dim:
            return self.space
        b = self.space.basis
        sub = Matrix.from_rows([b.row(k) for k in low])
        coeffs = kernel_basis(sub).vectors()
        vecs = [b.apply(c) for c in coeffs]
        return Subspace.span(self.algebra.dim, vecs)

    def filtration(self) -> list[Subspace]:
        return [self.order_level(i) for i in range(self.r + 2)]

    def graded_dims(self) -> list[int]:
        f = [s.dim for s in self.filtration()]
        return [a - b for a, b in zip(f, f[1:])]

    def multiply(self, u: Sequence, v: Sequence) -> tuple:
        alg = self.algebra
        return alg.to_vector(alg.multiply(alg.from_vector(u), alg.from_vector(v)))

    def closure_defect(self):
        vecs = self.space.vectors()
        for i, u in enumerate(vecs):
            for j, v in enumerate(vecs[i:], i):
                if not self.space.contains(self.multiply(u, v)):
                    return (i, j)
        return None


def _first_order_matrix(inst: ActionInstance, r: int) -> Matrix:
    src = TruncatedAlgebra(inst.v_dim, r)
    tgt = TruncatedAlgebra(inst.v_dim, r - 1) if r >= 1 else None
    n = tgt.dim if tgt else 0
    cols = []
    for m in src.basis:
        col = {}
        if tgt:
            for a in range(inst.g_dim):
                for mm, v in _first_order(inst, a, m, r - 1).items():
                    col[a * n + tgt.index[mm]] = v
        cols.append(col)
    return Matrix.from_sparse_columns(cols, n * inst.g_dim)


def invariant_kernel(inst: ActionInstance, r: int) -> InvariantKernel:
    alg = TruncatedAlgebra(inst.v_dim, r)
    m = _first_order_matrix(inst, r)
    space = kernel_basis(m) if m.rows else Subspace.full(alg.dim)
    k = InvariantKernel(alg, space, r)
    bad = k.closure_defect()
    if bad is not None:
        raise ArithmeticError(f"invariant kernel is not closed under multiplication (basis pair {bad})")
    return k


# Jacobi side ----------------------------------------------------------------

def instance_dgla(inst: ActionInstance) -> DGLA:
    """``L = (g -> V)`` with ``g`` in degree 0, ``V`` in degree 1."""
    G, D = inst.g_dim, inst.v_dim
    d0 = Matrix.from_columns(inst.a_vectors(), D) if G else Matrix(D, 0)
    L = Complex({0: G, 1: D}, {0: d0})
    table: dict = {}
    for a in range(G):
        for b in range(G):
            v = {c: inst.c[a][b][c] for c in range(G) if inst.c[a][b][c]}
            if v:
                table[a, b] = v
        for j in range(D):
            v = {G + i: inst.rho[a][i, j] for i in range(D) if inst.rho[a][i, j]}
            if v:
                table[a, G + j] = v
                table[G + j, a] = {k: -x for k, x in v.items()}
    return DGLA.from_bilinear(L, table)


def instance_module(inst: ActionInstance, g: DGLA | None = None) -> DGLAModule:
    """``W*`` in degree 1 with the contragredient action."""
    g = g or instance_dgla(inst)
    dw = inst.w_dim
    M = Complex({1: dw})
    table = {}
    for a in range(inst.g_dim):
        rw = inst.w_rho[a].T.scale(-1)
        for m in range(dw):
            v = {i: rw[i, m] for i in range(dw) if rw[i, m]}
            if v:
                table[a, m] = v
    return DGLAModule.from_table(g, M, table)


@dataclass
class JacobiSide:
    dgla: DGLA
    jacobi: JacobiComplex
    h0: H0
    algebra: DualAlgebra


def _require_injective(inst: ActionInstance):
    if not inst.a_injective():
        raise InstanceError("a: g -> V, xi -> rho(xi) s, is not injective; the Jacobi-side "
                            "comparison requires an infinitesimally free action at s")


def jacobi_side(inst: ActionInstance, r: int) -> JacobiSide:
    _require_injective(inst)
    g = instance_dgla(inst)
    j = jacobi(r, g)
    h = H0(j)
    return JacobiSide(g, j, h, dual_algebra(j, h))


# comparison -------------------------------------------------------------------

@dataclass
class FilteredAlgebraReport:
    status: str
    kernel_graded_dims: list[int]
    jacobi_graded_dims: list[int]
    witness: Matrix | None = None
    kernel_table: list | None = None
    jacobi_table: list | None = None
    certificate: str | None = None
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "PASS"

    def to_json(self) -> dict:
        d = {
            "status": self.status,
            "kernel_graded_dims": self.kernel_graded_dims,
            "jacobi_graded_dims": self.jacobi_graded_dims,
            "checks": self.checks,
        }
        if self.witness is not None:
            d["witness"] = self.witness.to_json()
        if self.certificate:
            d["certificate"] = self.certificate
        return d


def _pairing(poly: Mapping[tuple, Fraction], tensor: Mapping[tuple, Fraction], var_index: Sequence[int]) -> Fraction:
    """``sum_alpha column_weight(|alpha|) * h_alpha * t_{sorted(alpha)}``."""
    total = Fraction(0)
    for mono, c in poly.items():
        j = sum(mono)
        key = tuple(var_index[i] for i, e in enumerate(mono) for _ in range(e))
        t = tensor.get(key, 0)
        if t:
            total += column_weight(j) * c * t
    return total


def _functional(j: JacobiComplex, poly: Mapping[tuple, Fraction], var_index: Sequence[int]) -> list[Fraction]:
    """Value of a polynomial (no constant term) on every basis vector of ``Tot^0``."""
    by_deg: dict[int, dict] = {}
    for m, c in poly.items():
        by_deg.setdefault(sum(m), {})[m] = c
    out = []
    for (col, b) in j.labels.get(0, []):
        part = by_deg.get(col)
        out.append(_pairing(part, j.columns[col].vector(col, b), var_index) if part else Fraction(0))
    return out


def _to_dual_coords(h: H0, func: Sequence[Fraction]) -> tuple | None:
    """Coordinates in the ``h.dual`` basis, or ``None`` if ``func`` does not kill coboundaries."""
    for b in h.coboundaries.vectors():
        if sum((x * y for x, y in zip(func, b)), Fraction(0)):
            return None
    return tuple(sum((x * y for x, y in zip(func, z)), Fraction(0)) for z in h.reps)


def _fail(kdims, jdims, msg, checks) -> FilteredAlgebraReport:
    return FilteredAlgebraReport("FAIL", kdims, jdims, certificate=msg, checks=checks)


def compare(inst: ActionInstance, r: int) -> FilteredAlgebraReport:
    """Identify the invariant kernel with ``h0(J^r(L))* + Q`` as filtered algebras."""
    _require_injective(inst)
    ker = invariant_kernel(inst, r)
    kdims = ker.graded_dims()[: r + 1]
    if r == 0:
        ok = ker.dim == 1
        return FilteredAlgebraReport("PASS" if ok else "FAIL", kdims, [1],
                                     witness=Matrix.identity(1), checks={"graded_dims": ok})
    side = jacobi_side(inst, r)
    alg = side.algebra
    jdims = alg.graded_dims()
    checks: dict = {"graded_dims": kdims == jdims}
    if not checks["graded_dims"]:
        return _fail(kdims, jdims, f"graded dimensions differ: kernel {kdims} vs jacobi {jdims}", checks)
    var_index = [inst.g_dim + i for i in range(inst.v_dim)]
    ta = ker.algebra

    def phi(vec: Sequence) -> tuple | None:
        poly = ta.from_vector(vec)
        const = poly.pop((0,) * inst.v_dim, Fraction(0))
        coords = _to_dual_coords(side.h0, _functional(side.jacobi, poly, var_index))
        return None if coords is None else (const,) + coords

    cols = []
    for k, v in enumerate(ker.space.vectors()):
        img = phi(v)
        if img is None:
            checks["kills_coboundaries"] = False
            return _fail(kdims, jdims, f"kernel basis vector {k} does not vanish on coboundaries", checks)
        cols.append(img)
    checks["kills_coboundaries"] = True
    w = Matrix.from_columns(cols, alg.dim)
    checks["bijective"] = rank(w) == alg.dim == ker.dim
    if not checks["bijective"]:
        return _fail(kdims, jdims, f"comparison map has rank {rank(w)}, expected {alg.dim}", checks)
    # filtration levels map onto each other
    for i, (kl, jl) in enumerate(zip(ker.filtration(), alg.filtration)):
        imgs = [phi(v) for v in kl.vectors()]
        if Subspace.span(alg.dim, imgs) != jl:
            checks["filtration"] = False
            return _fail(kdims, jdims, f"filtration level {i} is not mapped onto its counterpart", checks)
    checks["filtration"] = True
    # multiplicativity, re-checked on the witness matrix
    basis = ker.space.vectors()
    for a, u in enumerate(basis):
        for b, v in enumerate(basis[a:], a):
            lhs = phi(ker.multiply(u, v))
            rhs = alg.multiply(w.column(a), w.column(b))
            if lhs != rhs:
                checks["multiplicative"] = False
                return _fail(kdims, jdims, f"phi(k{a} * k{b}) != phi(k{a}) * phi(k{b}): "
                             f"{[str(x) for x in lhs or ()]} vs {[str(x) for x in rhs]}", checks)
    checks["multiplicative"] = True
    ktable = [[ker.multiply(u, v) for v in basis] for u in basis]
    return FilteredAlgebraReport("PASS", kdims, jdims, witness=w, kernel_table=ktable,
                                 jacobi_table=alg.table, checks=checks)


@dataclass
class ModuleSlice:
    """``W*``-degree-1 part of the invariant kernel of the action on ``V + W*``."""

    ker: InvariantKernel
    indices: list[int]  # monomial indices with W*-degree 1
    space: Subspace  # in the ambient monomial coordinates
    v_dim: int

    def order_level(self, i: int) -> Subspace:
        """Elements whose ``V``-degree is at least ``i`` in every term."""
        alg = self.ker.algebra
        low = [k for k in self.indices if sum(alg.basis[k][: self.v_dim]) < i]
        b = Matrix.from_columns(self.space.vectors(), alg.dim) if self.space.dim else None
        if b is None:
            return self.space
        if not low:
            return self.space
        sub = Matrix.from_rows([b.row(k) for k in low])
        return Subspace.span(alg.dim, [b.apply(c) for c in kernel_basis(sub).vectors()])


def _module_slice(ext: ActionInstance, v_dim: int, r: int) -> ModuleSlice:
    ker = invariant_kernel(ext, r + 1)
    alg = ker.algebra
    idx = [k for k, m in enumerate(alg.basis) if sum(m[v_dim:]) == 1]
    mask = set(idx)
    vecs = []
    for v in ker.space.vectors():
        part = tuple(x if k in mask else Fraction(0) for k, x in enumerate(v))
        if any(part):
            vecs.append(part)
    space = Subspace.span(alg.dim, vecs)
    for v in space.vectors():
        if not ker.space.contains(v):
            raise ArithmeticError("invariant kernel is not graded by W*-degree")
    return ModuleSlice(ker, idx, space, v_dim)


def module_compare(inst: ActionInstance, r: int) -> FilteredAlgebraReport:
    """Identify the ``W*``-degree-1 invariants with ``h0(J^r(L, W*))*`` as modules."""
    _require_injective(inst)
    if not inst.w_dim:
        return compare(inst, r)
    ext = inst.with_dual_module()
    sl = _module_slice(ext, inst.v_dim, r)
    ker0 = invariant_kernel(inst, r)
    kdims = [sl.order_level(i).dim - sl.order_level(i + 1).dim for i in range(r + 1)]
    g = instance_dgla(inst)
    m = instance_module(inst, g)
    mj = ModuleJacobi(r, g, m)
    jl = jacobi(r, g)
    hl, hm = H0(jl), H0(mj.jacobi)
    dm = dual_module(mj, jl, hl, hm)
    # module filtration: level i annihilates classes living in columns <= i (columns ^c L (x) M)
    levels = []
    for i in range(r + 2):
        f = hm.filtration(i)
        levels.append(kernel_basis(Matrix.from_rows(f.vectors())) if f.dim else Subspace.full(hm.dim))
    jdims = [levels[i].dim - levels[i + 1].dim for i in range(r + 1)]
    checks: dict = {"graded_dims": kdims == jdims}
    if not checks["graded_dims"]:
        return _fail(kdims, jdims, f"graded dimensions differ: kernel {kdims} vs jacobi {jdims}", checks)
    aug = mj.aug
    var_index = [aug.l_index[inst.g_dim + i] for i in range(inst.v_dim)]
    var_index += [aug.m_index[i] for i in range(inst.w_dim)]
    alg = sl.ker.algebra

    def phi_m(vec):
        poly = alg.from_vector(vec)
        return _to_dual_coords(hm, _functional(mj.jacobi, poly, var_index))

    cols = []
    for k, v in enumerate(sl.space.vectors()):
        img = phi_m(v)
        if img is None:
            checks["kills_coboundaries"] = False
            return _fail(kdims, jdims, f"slice basis vector {k} does not vanish on coboundaries", checks)
        cols.append(img)
    checks["kills_coboundaries"] = True
    w = Matrix.from_columns(cols, hm.dim)
    checks["bijective"] = rank(w) == hm.dim == sl.space.dim
    if not checks["bijective"]:
        return _fail(kdims, jdims, f"comparison map has rank {rank(w)}, expected {hm.dim}", checks)
    for i in range(r + 1):
        imgs = [phi_m(v) for v in sl.order_level(i).vectors()]
        if Subspace.span(hm.dim, imgs) != levels[i]:
            checks["filtration"] = False
            return _fail(kdims, jdims, f"module filtration level {i} is not mapped onto its counterpart", checks)
    checks["filtration"] = True
    # algebra side: the invariants of order r act on the slice
    side_alg = dual_algebra(jl, hl)
    var0 = [inst.g_dim + i for i in range(inst.v_dim)]
    pad = inst.w_dim
    for a, u in enumerate(ker0.space.vectors()):
        upoly = ker0.algebra.from_vector(u)
        const = upoly.pop((0,) * inst.v_dim, Fraction(0))
        ucoords = _to_dual_coords(hl, _functional(jl, upoly, var0))
        if ucoords is None:
            checks["module_action"] = False
            return _fail(kdims, jdims, f"invariant {a} does not vanish on coboundaries", checks)
        uvec = (const,) + ucoords
        upoly_ext = {mm + (0,) * pad: c for mm, c in ker0.algebra.from_vector(u).items()}
        for b, v in enumerate(sl.space.vectors()):
            prod = alg.to_vector(alg.multiply(upoly_ext, alg.from_vector(v)))
            lhs = phi_m(prod)
            rhs = dm.act(uvec, w.column(b))
            if lhs != rhs:
                checks["module_action"] = False
                return _fail(kdims, jdims, f"phi(k{a} * m{b}) != k{a} . phi(m{b})", checks)
    checks["module_action"] = True
    return FilteredAlgebraReport("PASS", kdims, jdims, witness=w, jacobi_table=dm.table, checks=checks)
