"""Differential graded Lie algebras, modules and Jacobi complexes.

Model of the alternating powers: ``x_1 ^ ... ^ x_i`` is the tensor
``P_i(x_1 (x) ... (x) x_i)`` where ``P_i`` is the Koszul-signed column
symmetrizer divided by its quasi-idempotence constant.  In this model

* ``ce_map(i)`` is ``C(i,2) * P_{i-1} o (bracket (x) id^{i-2})``, the usual
  Chevalley-Eilenberg coderivation;
* the comultiplication is the unshuffle sum with coefficient 1 per unshuffle,
  Koszul-signed for the factors and for the column shifts.

``J^r(L)`` places ``^i L`` in column ``-i``; the totalization multiplies the
internal differential of column ``-i`` by ``(-1)^i``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Mapping, Sequence

from .complexes import (
    Complex,
    ComplexMap,
    SchurComplex,
    act_on_vector,
    alt_power,
    antisymmetrize,
    koszul_sign,
)
from .linalg import Matrix, NotContainedError, Subspace, image_basis, kernel_basis, rank, rref, to_rational

__all__ = [
    "DGLA",
    "DGLAModule",
    "AugmentedDGLA",
    "JacobiComplex",
    "H0",
    "ce_map",
    "jacobi",
    "h0",
    "comultiplication",
    "augment",
    "jacobi_module",
    "module_comultiplication",
    "unshuffle_coproduct",
    "dual_algebra",
    "dual_module",
    "DGLAError",
]

Vec = dict  # sparse vector: key -> Fraction


class DGLAError(ValueError):
    """A bracket or module action violates the DGLA axioms."""


def _add_into(out: dict, key, v):
    w = out.get(key, 0) + v
    if w:
        out[key] = w
    else:
        out.pop(key, None)


class DGLA:
    """A complex ``L`` with a degree-0 bracket ``^2 L -> L``.

    ``bracket`` has one column per basis vector of ``alt_power(2, L)`` (degrees
    ascending, canonical basis inside each degree) and one row per basis
    vector of ``L``.  Construction checks that the bracket is a chain map and
    that ``^3 L -> ^2 L -> L`` vanishes.
    """

    def __init__(self, underlying: Complex, bracket: Matrix, check: bool = True):
        self.L = underlying
        self.degrees = underlying.basis_degrees()
        self.dim = len(self.degrees)
        alt2 = self.alt(2)
        cols = sum(alt2.pieces.values())
        if bracket.shape != (self.dim, cols):
            raise DGLAError(f"bracket must be {self.dim}x{cols}, got {bracket.shape}")
        self.bracket = bracket
        self._bilinear = self._bilinear_from_bracket()
        if check:
            self.validate()

    # construction ---------------------------------------------------
    @classmethod
    def from_bilinear(cls, underlying: Complex, table: Mapping[tuple[int, int], Mapping[int, object]] | Callable,
                      check: bool = True) -> "DGLA":
        """Build from ``[e_i, e_j] = sum_k table[i, j][k] e_k`` (graded antisymmetric)."""
        degs = underlying.basis_degrees()
        n = len(degs)
        get = table if callable(table) else (lambda i, j: table.get((i, j), {}))
        bil = {}
        for i in range(n):
            for j in range(n):
                v = {k: to_rational(c) for k, c in dict(get(i, j)).items() if to_rational(c)}
                if v:
                    bil[i, j] = v
        for (i, j), v in bil.items():
            sgn = -1 if (degs[i] * degs[j]) % 2 == 0 else 1
            if bil.get((j, i), {}) != {k: sgn * c for k, c in v.items()}:
                raise DGLAError(f"bracket table is not graded antisymmetric at ({i}, {j})")
        alt2 = alt_power(2, underlying)
        columns = []
        for k in alt2.degrees:
            for j in range(alt2.dim(k)):
                out: dict = {}
                for (a, b), c in alt2.vector(k, j).items():
                    for z, w in bil.get((a, b), {}).items():
                        _add_into(out, z, c * w)
                columns.append(out)
        bracket = Matrix.from_sparse_columns(columns, n) if columns else Matrix(n, 0)
        g = cls(underlying, bracket, check=False)
        g._alt_cache[2] = alt2
        if check:
            g.validate()
        return g

    @cached_property
    def _alt_cache(self) -> dict[int, SchurComplex]:
        return {}

    def alt(self, i: int) -> SchurComplex:
        if i not in self._alt_cache:
            self._alt_cache[i] = alt_power(i, self.L)
        return self._alt_cache[i]

    def _bilinear_from_bracket(self) -> dict[tuple[int, int], dict[int, Fraction]]:
        alt2 = self.alt(2)
        col0 = {}
        c = 0
        for k in alt2.degrees:
            col0[k] = c
            c += alt2.dim(k)
        bil = {}
        for x in range(self.dim):
            for y in range(self.dim):
                p = antisymmetrize({(x, y): Fraction(1)}, self.degrees)
                if not p:
                    continue
                k = self.degrees[x] + self.degrees[y]
                coords = alt2.tuple_coordinates(k, p)
                out: dict = {}
                for j, cj in enumerate(coords):
                    if cj:
                        for z in range(self.dim):
                            w = self.bracket[z, col0[k] + j]
                            if w:
                                _add_into(out, z, cj * w)
                if out:
                    bil[x, y] = out
        return bil

    def bilinear(self, x: int, y: int) -> dict[int, Fraction]:
        return self._bilinear.get((x, y), {})

    def bracket_vectors(self, u: Mapping[int, Fraction], v: Mapping[int, Fraction]) -> dict[int, Fraction]:
        out: dict = {}
        for x, a in u.items():
            for y, b in v.items():
                for z, c in self.bilinear(x, y).items():
                    _add_into(out, z, a * b * c)
        return out

    # validation -----------------------------------------------------
    def validate(self):
        for (x, y), v in self._bilinear.items():
            for z in v:
                if self.degrees[z] != self.degrees[x] + self.degrees[y]:
                    raise DGLAError(f"bracket of basis vectors {x}, {y} does not have degree 0")
        defect = self.bracket_chain_defect()
        if defect:
            raise DGLAError(f"bracket is not a chain map: d[x,y] != [dx,y] + (-1)^|x| [x,dy] at {defect}")
        jac = self.jacobiator_defect()
        if jac is not None:
            raise DGLAError(f"composite ^3L -> ^2L -> L is nonzero (Jacobi fails) on basis vector {jac}")

    def _d_vector(self, x: int) -> dict[int, Fraction]:
        return _complex_d_column(self.L, x)

    def bracket_chain_defect(self):
        for x in range(self.dim):
            dx = self._d_vector(x)
            for y in range(self.dim):
                lhs: dict = {}
                for z, c in self.bilinear(x, y).items():
                    for w, e in self._d_vector(z).items():
                        _add_into(lhs, w, c * e)
                rhs = self.bracket_vectors(dx, {y: Fraction(1)})
                sgn = -1 if self.degrees[x] % 2 else 1
                for w, e in self.bracket_vectors({x: Fraction(1)}, self._d_vector(y)).items():
                    _add_into(rhs, w, sgn * e)
                if lhs != rhs:
                    return (x, y)
        return None

    def jacobiator_defect(self):
        if not self._bilinear:
            return None
        ce3 = ce_map(3, self)
        alt3 = self.alt(3)
        for k in alt3.degrees:
            for j in range(alt3.dim(k)):
                col = ce3[k].column(j)
                v2 = self._alt2_vector(k, col)
                if self._apply_bilinear(v2):
                    return (k, j)
        return None

    def _alt2_vector(self, k: int, coords) -> dict:
        alt2 = self.alt(2)
        out: dict = {}
        for j, c in enumerate(coords):
            if c:
                for t, v in alt2.vector(k, j).items():
                    _add_into(out, t, c * v)
        return out

    def _apply_bilinear(self, vec: Mapping[tuple, Fraction]) -> dict[int, Fraction]:
        out: dict = {}
        for (x, y), c in vec.items():
            for z, w in self.bilinear(x, y).items():
                _add_into(out, z, c * w)
        return out

    # serialisation --------------------------------------------------
    def to_json(self) -> dict:
        d = self.L.to_json()
        d["bracket"] = self.bracket.to_json()
        return d

    @classmethod
    def from_json(cls, data: Mapping) -> "DGLA":
        L = Complex.from_json(data)
        cols = sum(alt_power(2, L).pieces.values())
        return cls(L, Matrix.from_json(data["bracket"], L.total_dim, cols))

    @classmethod
    def abelian(cls, underlying: Complex) -> "DGLA":
        return cls.from_bilinear(underlying, {})


def _complex_d_column(c: Complex, x: int) -> dict[int, Fraction]:
    degs = c.basis_degrees()
    k = degs[x]
    j = x - c.offset(k)
    m = c.d(k)
    r0 = c.offset(k + 1)
    return {r0 + i: m[i, j] for i in range(m.rows) if m[i, j]}


def ce_map(i: int, g: DGLA) -> ComplexMap:
    """Chevalley-Eilenberg map ``^i L -> ^{i-1} L``."""
    if i < 2:
        raise ValueError("ce_map needs i >= 2")
    cache = g.__dict__.setdefault("_ce_cache", {})
    if i in cache:
        return cache[i]
    src, tgt = g.alt(i), g.alt(i - 1)
    factor = math.comb(i, 2)
    comps = {}
    for k in src.degrees:
        cols = []
        for j in range(src.dim(k)):
            y: dict = {}
            for t, v in src.vector(k, j).items():
                for z, w in g.bilinear(t[0], t[1]).items():
                    _add_into(y, (z,) + t[2:], factor * v * w)
            y = antisymmetrize(y, g.degrees) if i > 2 else y
            cols.append(tgt.tuple_coordinates(k, y) if tgt.dim(k) else ())
        comps[k] = Matrix.from_columns(cols, tgt.dim(k))
    cm = ComplexMap(src, tgt, comps)
    cache[i] = cm
    return cm


class JacobiComplex:
    """Total complex of ``^r L -> ... -> ^2 L -> L`` (``^i L`` in column ``-i``).

    ``labels[m]`` lists, for each basis vector of ``total`` in degree ``m``, the
    pair ``(i, j)``: basis vector ``j`` of ``(^i L)`` in internal degree ``m + i``.
    """

    def __init__(self, r: int, g: DGLA, labels: Mapping[int, list] | None = None):
        if r < 1:
            raise ValueError("Jacobi complex needs r >= 1")
        self.r = r
        self.g = g
        self.columns = {i: g.alt(i) for i in range(1, r + 1)}
        self.ce = {i: ce_map(i, g) for i in range(2, r + 1)}
        if labels is None:
            labels = {}
            for i, col in self.columns.items():
                for k in col.degrees:
                    labels.setdefault(k - i, []).extend((i, j) for j in range(col.dim(k)))
            labels = {m: sorted(v) for m, v in sorted(labels.items())}
        self.labels = {m: list(v) for m, v in labels.items() if v}
        self.index = {m: {lab: n for n, lab in enumerate(v)} for m, v in self.labels.items()}
        diffs = {m: self._total_d(m) for m in self.labels if m + 1 in self.labels}
        self.total = Complex({m: len(v) for m, v in self.labels.items()}, diffs)

    def _full_d_column(self, m: int, lab) -> dict:
        """Image of a basis vector under the total differential, keyed by label."""
        i, j = lab
        k = m + i
        out = {}
        col = self.columns[i]
        sgn = -1 if i % 2 else 1
        dint = col.d(k)
        for a in range(dint.rows):
            if dint[a, j]:
                out[(i, a)] = sgn * dint[a, j]
        if i >= 2:
            ce = self.ce[i][k]
            for a in range(ce.rows):
                if ce[a, j]:
                    out[(i - 1, a)] = out.get((i - 1, a), 0) + ce[a, j]
        return {key: v for key, v in out.items() if v}

    def _total_d(self, m: int) -> Matrix:
        src, tgt = self.labels[m], self.index[m + 1]
        cols = []
        for lab in src:
            col = {}
            for key, v in self._full_d_column(m, lab).items():
                if key not in tgt:
                    raise DGLAError("total differential leaves the selected summand")
                col[tgt[key]] = v
            cols.append(col)
        return Matrix.from_sparse_columns(cols, len(tgt))

    def restrict(self, keep: Callable[[int, int, int], bool], summand: bool = True) -> "JacobiComplex":
        """Subcomplex spanned by basis vectors ``(m, i, j)`` with ``keep`` true.

        The differential may not leave the kept span; with ``summand`` it may
        not enter it either.
        """
        labels = {m: [lab for lab in v if keep(m, *lab)] for m, v in self.labels.items()}
        for m, v in self.labels.items():
            for lab in v:
                inside = keep(m, *lab)
                if not inside and not summand:
                    continue
                for (i2, j2) in self._full_d_column(m, lab):
                    if keep(m + 1, i2, j2) != inside:
                        raise DGLAError("selected basis does not span a "
                                        + ("direct summand" if summand else "subcomplex"))
        return JacobiComplex(self.r, self.g, labels)

    def vector(self, m: int, coords: Sequence) -> dict[int, dict[tuple, Fraction]]:
        """Tensor representative of a degree-``m`` element, per column."""
        out: dict[int, dict] = {}
        for (i, j), c in zip(self.labels.get(m, []), coords):
            if c:
                col = out.setdefault(i, {})
                for t, v in self.columns[i].vector(m + i, j).items():
                    _add_into(col, t, c * v)
        return out

    def filtration_piece(self, i: int) -> "JacobiComplex":
        """``F^i J^r = J^i``: columns ``1..i``."""
        return self.restrict(lambda m, col, j: col <= i, summand=False)

    def cohomology_dims(self) -> dict[int, int]:
        from .complexes import cohomology_dims

        return cohomology_dims(self.total)


def jacobi(r: int, g: DGLA) -> JacobiComplex:
    return JacobiComplex(r, g)


def _extend_to_basis(base: list, candidates: Sequence, dim: int) -> list:
    """Append candidates that increase the rank; deterministic."""
    chosen = []
    cur = list(base)
    r0 = rank(Matrix.from_columns(cur, dim)) if cur else 0
    for v in candidates:
        trial = cur + [v]
        r1 = rank(Matrix.from_columns(trial, dim))
        if r1 > r0:
            cur, r0 = trial, r1
            chosen.append(tuple(v))
    return chosen


class H0:
    """Degree-0 cohomology of a Jacobi complex with chosen representatives.

    ``reps`` are cocycles in ``Tot^0`` whose classes form a basis; ``dual`` are
    cocycle functionals on ``Tot^0`` (vanishing on coboundaries) with
    ``dual[a](reps[b]) == delta_ab``.
    """

    def __init__(self, j: JacobiComplex):
        self.j = j
        t = j.total
        n0 = t.dim(0)
        self.n0 = n0
        zero_sp = kernel_basis(t.d(0))
        bnd = image_basis(t.d(-1))
        self.cocycles = zero_sp
        self.coboundaries = bnd
        self.reps = _extend_to_basis(bnd.vectors(), zero_sp.vectors(), n0)
        self.dim = len(self.reps)
        # complement of the cocycles in Tot^0
        std = [tuple(Fraction(int(a == b)) for a in range(n0)) for b in range(n0)]
        comp = _extend_to_basis(zero_sp.vectors(), std, n0)
        frame = bnd.vectors() + list(self.reps) + comp
        if frame:
            fm = Matrix.from_columns(frame, n0)
            inv = _inverse(fm)
            off = len(bnd.vectors())
            self.dual = [inv.row(off + a) for a in range(self.dim)]
        else:
            self.dual = []

    def classes(self, vec: Sequence) -> tuple:
        """Coordinates of the class of a degree-0 cocycle."""
        if self.n0 and not self.cocycles.contains(vec):
            raise NotContainedError("vector is not a cocycle")
        return tuple(sum((a * b for a, b in zip(row, vec)), Fraction(0)) for row in self.dual)

    def filtration(self, i: int) -> Subspace:
        """``F^i h0``: classes representable by cocycles in columns ``<= i``."""
        if i <= 0 or not self.dim:
            return Subspace.zero(self.dim)
        labels = self.j.labels.get(0, [])
        t = self.j.total
        sel = [n for n, (c, _) in enumerate(labels) if c <= i]
        if not sel:
            return Subspace.zero(self.dim)
        sub = t.d(0).submatrix(range(t.dim(1)), sel)
        cls = []
        for v in kernel_basis(sub).vectors():
            full = [Fraction(0)] * self.n0
            for n, c in zip(sel, v):
                full[n] = c
            cls.append(self.classes(full))
        return Subspace.span(self.dim, cls)

    def filtration_dims(self) -> list[int]:
        """``dim(F^i h0)`` for ``i = 0..r``."""
        return [self.filtration(i).dim for i in range(self.j.r + 1)]

    def graded_dims(self) -> list[int]:
        f = self.filtration_dims()
        return [b - a for a, b in zip(f, f[1:])]

    def dual_filtration(self) -> list[Subspace]:
        """Decreasing filtration of ``h0*``: level ``i >= 1`` annihilates ``F^{i-1} h0``.

        Index runs over ``i = 0..r+1``; levels 0 and 1 are all of ``h0*``.
        """
        out = [Subspace.full(self.dim)]
        for i in range(1, self.j.r + 2):
            f = self.filtration(i - 1)
            if f.dim:
                out.append(kernel_basis(Matrix.from_rows(f.vectors())))
            else:
                out.append(Subspace.full(self.dim))
        return out


def _inverse(m: Matrix) -> Matrix:
    n = m.rows
    r, piv = rref(m.hstack(Matrix.identity(n)))
    if tuple(piv[:n]) != tuple(range(n)):
        raise ArithmeticError("matrix is singular")
    return r.submatrix(range(n), range(n, 2 * n))


def h0(j: JacobiComplex) -> H0:
    return H0(j)


def unshuffle_coproduct(vec: Mapping[tuple, Fraction], p: int, factor_degrees: Sequence[int],
                        shifted: bool = True):
    """Sum over ``(p, n-p)`` unshuffles of the signed reordering, split as pairs.

    With ``shifted`` each term also carries ``(-1)^{(n-p) e}``, ``e`` the internal
    degree of the first ``p`` factors: the Koszul sign of moving the column
    shift of the second part past the first part.

    Returns a dict keyed by ``(first_p_factors, remaining_factors)``.
    """
    out: dict = {}
    if not vec:
        return out
    n = len(next(iter(vec)))
    for first in itertools.combinations(range(n), p):
        rest = [i for i in range(n) if i not in first]
        slot = [0] * n
        for s, i in enumerate(first):
            slot[i] = s
        for s, i in enumerate(rest):
            slot[i] = p + s
        sg = -1 if sum(1 for a in range(n) for b in range(a + 1, n) if slot[b] < slot[a]) % 2 else 1
        for t, v in act_on_vector(slot, vec, factor_degrees).items():
            if shifted and ((n - p) * sum(factor_degrees[x] for x in t[:p])) % 2:
                v = -v
            _add_into(out, (t[:p], t[p:]), sg * v)
    return out


def _coproduct_pairing(j_src: JacobiComplex, z_coords: Sequence, left: JacobiComplex, right: JacobiComplex,
                       left_funcs: Sequence, right_funcs: Sequence,
                       left_map: Callable[[tuple], tuple | None] = lambda t: t,
                       right_map: Callable[[tuple], tuple | None] = lambda t: t) -> list[list[Fraction]]:
    """``(f_a (x) g_b)(Delta z)`` for degree-0 ``z`` of ``j_src``.

    ``left_map``/``right_map`` translate factor tuples into the index spaces of
    ``left``/``right`` (returning ``None`` drops the term).
    """
    degs = j_src.g.degrees
    result = [[Fraction(0)] * len(right_funcs) for _ in left_funcs]
    for n, vec in j_src.vector(0, z_coords).items():
        for p in range(1, n):
            q = n - p
            if p not in left.columns or q not in right.columns:
                continue
            split: dict = {}
            for (t1, t2), v in unshuffle_coproduct(vec, p, degs).items():
                if sum(degs[x] for x in t1) != p:
                    continue
                a, b = left_map(t1), right_map(t2)
                if a is None or b is None:
                    continue
                _add_into(split, (a, b), v)
            if not split:
                continue
            lc, rc = left.columns[p], right.columns[q]
            lpiv = [lc.tensor.decode(x) for x in lc.pivots.get(p, [])]
            rpiv = [rc.tensor.decode(x) for x in rc.pivots.get(q, [])]
            coeff = {(u, w): split.get((lpiv[u], rpiv[w]), Fraction(0))
                     for u in range(len(lpiv)) for w in range(len(rpiv))}
            recon: dict = {}
            for (u, w), c in coeff.items():
                if c:
                    for ta, va in lc.vector(p, u).items():
                        for tb, vb in rc.vector(q, w).items():
                            _add_into(recon, (ta, tb), c * va * vb)
            if recon != split:
                raise NotContainedError("coproduct component is not in ^p (x) ^q")
            lidx, ridx = left.index.get(0, {}), right.index.get(0, {})
            for (u, w), c in coeff.items():
                if not c:
                    continue
                lu, rw = lidx.get((p, u)), ridx.get((q, w))
                if lu is None or rw is None:
                    continue
                for a, fa in enumerate(left_funcs):
                    x = fa[lu]
                    if x:
                        for b, gb in enumerate(right_funcs):
                            y = gb[rw]
                            if y:
                                result[a][b] += c * x * y
    return result


def comultiplication(r: int, g: DGLA | JacobiComplex, h: H0 | None = None) -> Matrix:
    """Reduced comultiplication ``h0 -> h0 (x) h0`` (row ``a*dim + b``)."""
    j = g if isinstance(g, JacobiComplex) else jacobi(r, g)
    h = h or H0(j)
    d = h.dim
    cols = []
    for z in h.reps:
        pair = _coproduct_pairing(j, z, j, j, h.dual, h.dual)
        cols.append([pair[a][b] for a in range(d) for b in range(d)])
    return Matrix.from_columns(cols, d * d) if cols else Matrix(d * d, 0)


@dataclass
class DualAlgebra:
    """``h0* + Q`` with unit at index 0 and product from the comultiplication."""

    dim: int
    table: list  # table[a][b] = coordinates of e_a * e_b
    filtration: list  # decreasing, levels 0..r+1, Subspaces in algebra coordinates

    def graded_dims(self) -> list[int]:
        f = [s.dim for s in self.filtration] + [0]
        return [a - b for a, b in zip(f, f[1:])][: len(self.filtration) - 1]

    def is_filtered(self) -> bool:
        """``G_i * G_j`` lands in ``G_{i+j}`` (levels past the end are zero)."""
        top = len(self.filtration)
        for i, gi in enumerate(self.filtration):
            for j, gj in enumerate(self.filtration):
                for u in gi.vectors():
                    for v in gj.vectors():
                        w = self.multiply(u, v)
                        if i + j >= top:
                            if any(w):
                                return False
                        elif not self.filtration[i + j].contains(w):
                            return False
        return True

    def multiply(self, u: Sequence, v: Sequence) -> tuple:
        out = [Fraction(0)] * self.dim
        for a, x in enumerate(u):
            if x:
                for b, y in enumerate(v):
                    if y:
                        for c, z in enumerate(self.table[a][b]):
                            if z:
                                out[c] += x * y * z
        return tuple(out)

    def is_associative(self) -> bool:
        e = [tuple(Fraction(int(i == a)) for i in range(self.dim)) for a in range(self.dim)]
        for a, b, c in itertools.product(range(self.dim), repeat=3):
            if self.multiply(self.multiply(e[a], e[b]), e[c]) != self.multiply(e[a], self.multiply(e[b], e[c])):
                return False
        return True

    def is_commutative(self) -> bool:
        return all(self.table[a][b] == self.table[b][a] for a in range(self.dim) for b in range(self.dim))


def dual_algebra(j: JacobiComplex, h: H0 | None = None) -> DualAlgebra:
    h = h or H0(j)
    d = h.dim
    delta = comultiplication(j.r, j, h)
    n = d + 1
    table = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        table[0][a][a] = Fraction(1)
        table[a][0][a] = Fraction(1)
    for a in range(d):
        for b in range(d):
            for k in range(d):
                table[a + 1][b + 1][k + 1] = delta[a * d + b, k]
    filt = [Subspace.full(n)]
    for ann in h.dual_filtration()[1:]:
        filt.append(Subspace.span(n, [(Fraction(0),) + tuple(v) for v in ann.vectors()]))
    return DualAlgebra(n, table, filt)


class DGLAModule:
    """Complex ``M`` with a degree-0 action ``L (x) M -> M``.

    ``action`` has one column per pair ``(x, m)`` of basis vectors, index
    ``x * dim(M) + m``, and one row per basis vector of ``M``.
    """

    def __init__(self, g: DGLA, underlying: Complex, action: Matrix, check: bool = True):
        self.g = g
        self.M = underlying
        self.degrees = underlying.basis_degrees()
        self.dim = len(self.degrees)
        if action.shape != (self.dim, g.dim * self.dim):
            raise DGLAError(f"action must be {self.dim}x{g.dim * self.dim}, got {action.shape}")
        self.action = action
        self._act = {}
        for x in range(g.dim):
            for m in range(self.dim):
                col = action.sparse_column(x * self.dim + m)
                if col:
                    self._act[x, m] = col
        if check:
            self.validate()

    @classmethod
    def from_table(cls, g: DGLA, underlying: Complex, table: Mapping[tuple[int, int], Mapping[int, object]],
                   check: bool = True) -> "DGLAModule":
        dm = len(underlying.basis_degrees())
        cols = [dict(table.get((x, m), {})) for x in range(g.dim) for m in range(dm)]
        return cls(g, underlying, Matrix.from_sparse_columns(
            [{k: to_rational(v) for k, v in c.items()} for c in cols], dm), check)

    def act(self, x: int, m: int) -> dict[int, Fraction]:
        return self._act.get((x, m), {})

    def act_vectors(self, u: Mapping[int, Fraction], w: Mapping[int, Fraction]) -> dict[int, Fraction]:
        out: dict = {}
        for x, a in u.items():
            for m, b in w.items():
                for z, c in self.act(x, m).items():
                    _add_into(out, z, a * b * c)
        return out

    def validate(self):
        g = self.g
        for (x, m), v in self._act.items():
            for z in v:
                if self.degrees[z] != g.degrees[x] + self.degrees[m]:
                    raise DGLAError(f"action of {x} on {m} does not have degree 0")
        for x in range(g.dim):
            dx = _complex_d_column(g.L, x)
            for m in range(self.dim):
                dm = _complex_d_column(self.M, m)
                lhs = {}
                for z, c in self.act(x, m).items():
                    for w, e in _complex_d_column(self.M, z).items():
                        _add_into(lhs, w, c * e)
                rhs = self.act_vectors(dx, {m: Fraction(1)})
                sgn = -1 if g.degrees[x] % 2 else 1
                for w, e in self.act_vectors({x: Fraction(1)}, dm).items():
                    _add_into(rhs, w, sgn * e)
                if lhs != rhs:
                    raise DGLAError(f"action is not a chain map at ({x}, {m})")
        for x in range(g.dim):
            for y in range(g.dim):
                br = g.bilinear(x, y)
                sgn = -1 if (g.degrees[x] * g.degrees[y]) % 2 else 1
                for m in range(self.dim):
                    lhs = self.act_vectors(br, {m: Fraction(1)})
                    rhs = self.act_vectors({x: Fraction(1)}, self.act(y, m))
                    for z, c in self.act_vectors({y: Fraction(1)}, self.act(x, m)).items():
                        _add_into(rhs, z, -sgn * c)
                    if lhs != rhs:
                        raise DGLAError(f"module square does not commute at ({x}, {y}, {m})")

    def to_json(self) -> dict:
        d = self.M.to_json()
        d["action"] = self.action.to_json()
        return d

    @classmethod
    def from_json(cls, g: DGLA, data: Mapping) -> "DGLAModule":
        M = Complex.from_json(data)
        return cls(g, M, Matrix.from_json(data["action"], M.total_dim, g.dim * M.total_dim))


class AugmentedDGLA(DGLA):
    """``L --0--> M`` as a DGLA; remembers which basis vectors come from ``M``."""

    l_index: list[int]
    m_index: list[int]
    is_module: list[bool]

    def multiplicity(self, t: Sequence[int]) -> int:
        return sum(1 for x in t if self.is_module[x])


def augment(g: DGLA, m: DGLAModule, check: bool = True) -> AugmentedDGLA:
    """DGLA on ``L + M``: ``[,]`` on ``^2 L``, the action on ``L (x) M``, zero on ``S^2 M``."""
    total = g.L.direct_sum(m.M)
    degs = total.basis_degrees()
    l_index, m_index = [], []
    for k in total.degrees:
        base = total.offset(k)
        l_index.extend(base + i for i in range(g.L.dim(k)))
        m_index.extend(base + g.L.dim(k) + i for i in range(m.M.dim(k)))
    table: dict = {}
    for x in range(g.dim):
        for y in range(g.dim):
            v = g.bilinear(x, y)
            if v:
                table[l_index[x], l_index[y]] = {l_index[z]: c for z, c in v.items()}
    for x in range(g.dim):
        for mm in range(m.dim):
            v = m.act(x, mm)
            if v:
                a, b = l_index[x], m_index[mm]
                table[a, b] = {m_index[z]: c for z, c in v.items()}
                sgn = -1 if (degs[a] * degs[b]) % 2 == 0 else 1
                table[b, a] = {m_index[z]: sgn * c for z, c in v.items()}
    try:
        aug = AugmentedDGLA.from_bilinear(total, table, check=check)
    except DGLAError as exc:
        raise DGLAError(f"augmented bracket is not a DGLA (module square fails?): {exc}") from None
    aug.l_index, aug.m_index = l_index, m_index
    mask = [False] * len(degs)
    for i in m_index:
        mask[i] = True
    aug.is_module = mask
    aug.base, aug.module = g, m
    return aug


class ModuleJacobi:
    """``J^r(L, M)``: the ``M``-degree-1 summand of ``J^{r+1}(L -> M)``.

    Column ``c`` of the ambient complex contributes ``^{c-1} L (x) M``, so the
    columns ``^i L (x) M`` run over ``i = 0..r``.
    """

    def __init__(self, r: int, g: DGLA, m: DGLAModule, aug: AugmentedDGLA | None = None):
        self.r = r
        self.aug = aug or augment(g, m)
        full = JacobiComplex(r + 1, self.aug)
        mult = {}
        for i, col in full.columns.items():
            for k in col.degrees:
                for j, p in enumerate(col.pivots[k]):
                    mult[i, k, j] = self.aug.multiplicity(col.tensor.decode(p))
        self.ambient = full
        self.jacobi = full.restrict(lambda mdeg, i, j: mult[i, mdeg + i, j] == 1)

    @property
    def total(self) -> Complex:
        return self.jacobi.total


def jacobi_module(r: int, g: DGLA, m: DGLAModule) -> ModuleJacobi:
    return ModuleJacobi(r, g, m)


def module_comultiplication(r: int, g: DGLA, m: DGLAModule, mj: ModuleJacobi | None = None,
                            jl: JacobiComplex | None = None) -> Matrix:
    """Reduced coaction ``h0(J^r(L,M)) -> h0(J^r(L)) (x) h0(J^r(L,M))``."""
    mj = mj or ModuleJacobi(r, g, m)
    jl = jl or jacobi(r, g)
    hl, hm = H0(jl), H0(mj.jacobi)
    return _module_coaction(mj, jl, hl, hm)


def _module_coaction(mj: "ModuleJacobi", jl: JacobiComplex, hl: H0, hm: H0) -> Matrix:
    aug = mj.aug
    back = {a: i for i, a in enumerate(aug.l_index)}

    def left_map(t):
        if any(aug.is_module[x] for x in t):
            return None
        return tuple(back[x] for x in t)

    def right_map(t):
        return t if aug.multiplicity(t) == 1 else None

    dl, dm = hl.dim, hm.dim
    cols = []
    for z in hm.reps:
        pair = _coproduct_pairing(mj.jacobi, z, jl, mj.jacobi, hl.dual, hm.dual, left_map, right_map)
        cols.append([pair[a][b] for a in range(dl) for b in range(dm)])
    return Matrix.from_columns(cols, dl * dm) if cols else Matrix(dl * dm, 0)


@dataclass
class DualModule:
    """``h0(J^r(L,M))*`` with the action of ``h0(J^r(L))* + Q`` (unit index 0)."""

    dim: int
    algebra_dim: int
    table: list  # table[a][b] = coordinates of e_a . f_b

    def act(self, u: Sequence, v: Sequence) -> tuple:
        out = [Fraction(0)] * self.dim
        for a, x in enumerate(u):
            if x:
                for b, y in enumerate(v):
                    if y:
                        for c, z in enumerate(self.table[a][b]):
                            if z:
                                out[c] += x * y * z
        return tuple(out)


def dual_module(mj: ModuleJacobi, jl: JacobiComplex, hl: H0 | None = None, hm: H0 | None = None) -> DualModule:
    hl = hl or H0(jl)
    hm = hm or H0(mj.jacobi)
    coact = _module_coaction(mj, jl, hl, hm)
    dl, dm = hl.dim, hm.dim
    table = [[[Fraction(0)] * dm for _ in range(dm)] for _ in range(dl + 1)]
    for b in range(dm):
        table[0][b][b] = Fraction(1)
    for a in range(dl):
        for b in range(dm):
            for k in range(dm):
                table[a + 1][b][k] = coact[a * dm + b, k]
    return DualModule(dm, dl + 1, table)
