"""Cochain complexes, Koszul-signed tensor powers and Schur functors.

Degrees are cohomological: ``d`` maps degree ``k`` to ``k + 1``.  The basis of a
complex is ordered by degree, then by index inside the piece; a basis vector
of ``A^{(x)n}`` is an ``n``-tuple of such global indices, and tensor-power
pieces are grouped by total degree with tuples in lexicographic order.

A permutation ``sigma`` acts on ``a_1 (x) ... (x) a_n`` by moving factor ``a_i``
to slot ``sigma(i)``, with sign
``prod_{i<j, sigma(j)<sigma(i)} (-1)^(deg a_i * deg a_j)``.  This is a left
action: ``act(s) o act(t) == act(s o t)``.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from .linalg import Matrix, NotContainedError, Subspace, kernel_basis, rank, to_rational
from .symmetric_group import (
    DEFAULT_BOUND,
    GroupAlgebraElement,
    Permutation,
    dual_partition,
    quasi_idempotence_constant,
    sign,
    young_symmetrizer,
)

__all__ = [
    "Complex",
    "ComplexMap",
    "TensorPower",
    "SchurComplex",
    "koszul_sign",
    "permutation_action",
    "tensor_power",
    "apply_group_algebra",
    "schur_complex",
    "alt_power",
    "cohomology_dims",
    "symmetrizer_defect",
    "schur_functor_map",
    "random_complex",
    "contractible",
    "act_on_vector",
    "antisymmetrize",
]

# int64 headroom guard for the sparse integer kernels
_INT_LIMIT = 2**62


class Complex:
    """Finite cochain complex of rational vector spaces.

    ``differentials[k]`` is the matrix of ``d: A^k -> A^{k+1}``; missing entries
    are zero.  ``d o d = 0`` is checked on construction.
    """

    def __init__(self, pieces: Mapping[int, int], differentials: Mapping[int, Matrix] | None = None,
                 check: bool = True):
        self.pieces = {int(k): int(v) for k, v in sorted(pieces.items()) if int(v) > 0}
        if any(v < 0 for v in pieces.values()):
            raise ValueError("negative piece dimension")
        self.differentials: dict[int, Matrix] = {}
        for k, m in (differentials or {}).items():
            k = int(k)
            if m.shape != (self.dim(k + 1), self.dim(k)):
                raise ValueError(f"differential in degree {k} has shape {m.shape}, "
                                 f"expected {(self.dim(k + 1), self.dim(k))}")
            if m.rows and m.cols and not m.is_zero():
                self.differentials[k] = m
        if check:
            for k in self.differentials:
                if k + 1 in self.differentials:
                    if not (self.differentials[k + 1] @ self.differentials[k]).is_zero():
                        raise ValueError(f"d o d != 0 starting in degree {k}")

    def dim(self, k: int) -> int:
        return self.pieces.get(k, 0)

    @property
    def degrees(self) -> list[int]:
        return sorted(self.pieces)

    @property
    def total_dim(self) -> int:
        return sum(self.pieces.values())

    def d(self, k: int) -> Matrix:
        m = self.differentials.get(k)
        return m if m is not None else Matrix(self.dim(k + 1), self.dim(k))

    def basis_degrees(self) -> list[int]:
        """Degree of every global basis vector, in canonical order."""
        return [k for k in self.degrees for _ in range(self.pieces[k])]

    def offset(self, k: int) -> int:
        return sum(v for j, v in self.pieces.items() if j < k)

    def total_differential(self) -> Matrix:
        n = self.total_dim
        rows = [[Fraction(0)] * n for _ in range(n)]
        for k, m in self.differentials.items():
            r0, c0 = self.offset(k + 1), self.offset(k)
            for i in range(m.rows):
                for j in range(m.cols):
                    if m[i, j]:
                        rows[r0 + i][c0 + j] = m[i, j]
        return Matrix(n, n, rows)

    def direct_sum(self, other: "Complex") -> "Complex":
        degs = sorted(set(self.pieces) | set(other.pieces))
        pieces = {k: self.dim(k) + other.dim(k) for k in degs}
        diffs = {k: Matrix.block_diag(self.d(k), other.d(k)) for k in degs}
        return Complex(pieces, diffs)

    def shift(self, s: int) -> "Complex":
        """``A[s]``: piece ``k`` of the result is piece ``k + s`` of ``A``."""
        sgn = -1 if s % 2 else 1
        return Complex({k - s: v for k, v in self.pieces.items()},
                       {k - s: m.scale(sgn) for k, m in self.differentials.items()})

    def __eq__(self, other):
        return (isinstance(other, Complex) and self.pieces == other.pieces
                and self.differentials == other.differentials)

    def __repr__(self):
        return f"{type(self).__name__}({self.pieces})"

    def to_json(self) -> dict:
        return {
            "pieces": {str(k): v for k, v in self.pieces.items()},
            "differentials": {str(k): m.to_json() for k, m in self.differentials.items()},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Complex":
        try:
            pieces = {int(k): int(v) for k, v in data["pieces"].items()}
        except (KeyError, AttributeError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed complex JSON: {exc}") from None
        diffs = {}
        for k, rows in (data.get("differentials") or {}).items():
            k = int(k)
            diffs[k] = Matrix.from_json(rows, pieces.get(k + 1, 0), pieces.get(k, 0))
        return cls(pieces, diffs)


class ComplexMap:
    """Degree-0 map of complexes given by one matrix per degree."""

    def __init__(self, source: Complex, target: Complex, components: Mapping[int, Matrix]):
        self.source = source
        self.target = target
        self.components = {}
        for k in sorted(set(source.pieces) | set(target.pieces)):
            m = components.get(k)
            if m is None:
                m = Matrix(target.dim(k), source.dim(k))
            if m.shape != (target.dim(k), source.dim(k)):
                raise ValueError(f"component in degree {k} has wrong shape {m.shape}")
            self.components[k] = m

    def __getitem__(self, k: int) -> Matrix:
        return self.components.get(k, Matrix(self.target.dim(k), self.source.dim(k)))

    def chain_defect(self) -> dict[int, Matrix]:
        """Nonzero ``f d - d f`` per degree (empty iff this is a chain map)."""
        out = {}
        for k in sorted(set(self.source.pieces) | set(self.target.pieces)):
            diff = self[k + 1] @ self.source.d(k) - self.target.d(k) @ self[k]
            if not diff.is_zero():
                out[k] = diff
        return out

    def is_chain_map(self) -> bool:
        return not self.chain_defect()

    def __matmul__(self, other: "ComplexMap") -> "ComplexMap":
        return ComplexMap(other.source, self.target,
                          {k: self[k] @ other[k] for k in self.components})

    def __eq__(self, other):
        return isinstance(other, ComplexMap) and all(
            self[k] == other[k] for k in set(self.components) | set(other.components))

    def rank(self, k: int) -> int:
        return rank(self[k])


def koszul_sign(sigma: Permutation | Sequence[int], degrees: Sequence[int]) -> int:
    """``prod_{i<j, sigma(j)<sigma(i)} (-1)^(d_i d_j)``."""
    images = sigma.images if isinstance(sigma, Permutation) else tuple(sigma)
    if len(images) != len(degrees):
        raise ValueError("permutation and degree list have different lengths")
    e = 0
    n = len(images)
    for i in range(n):
        if degrees[i] % 2:
            for j in range(i + 1, n):
                if images[j] < images[i] and degrees[j] % 2:
                    e += 1
    return -1 if e % 2 else 1


def _lcm_denominator(values: Iterable[Fraction]) -> int:
    return reduce(math.lcm, (Fraction(v).denominator for v in values), 1)


class TensorPower:
    """Bookkeeping and sparse integer kernels for ``A^{(x)n}``."""

    def __init__(self, a: Complex, n: int):
        if n < 1:
            raise ValueError("tensor power needs n >= 1")
        self.a = a
        self.n = n
        self.factor_degrees = np.array(a.basis_degrees(), dtype=np.int64)
        self.D = len(self.factor_degrees)
        self.size = self.D ** n

    @cached_property
    def tuples(self) -> np.ndarray:
        if self.size == 0:
            return np.zeros((0, self.n), dtype=np.int64)
        return np.array(np.unravel_index(np.arange(self.size), (self.D,) * self.n)).T.astype(np.int64)

    @cached_property
    def total_degree(self) -> np.ndarray:
        return self.factor_degrees[self.tuples].sum(axis=1) if self.size else np.zeros(0, np.int64)

    @cached_property
    def positions(self) -> dict[int, np.ndarray]:
        """Full indices of each total-degree piece, ascending."""
        out = {}
        for k in np.unique(self.total_degree):
            out[int(k)] = np.nonzero(self.total_degree == k)[0]
        return out

    @cached_property
    def local_index(self) -> np.ndarray:
        loc = np.zeros(self.size, dtype=np.int64)
        for idx in self.positions.values():
            loc[idx] = np.arange(len(idx))
        return loc

    def encode(self, t: Sequence[int]) -> int:
        v = 0
        for x in t:
            v = v * self.D + int(x)
        return v

    def decode(self, i: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.tuples[i])

    # integer kernels ----------------------------------------------------
    @cached_property
    def _factor_differential(self) -> tuple[sp.csr_matrix, int]:
        a = self.a
        entries = [x for m in a.differentials.values() for r in m.to_lists() for x in r]
        scale = _lcm_denominator(entries)
        rows, cols, vals = [], [], []
        for k, m in a.differentials.items():
            r0, c0 = a.offset(k + 1), a.offset(k)
            for i in range(m.rows):
                for j in range(m.cols):
                    if m[i, j]:
                        v = m[i, j] * scale
                        rows.append(r0 + i)
                        cols.append(c0 + j)
                        vals.append(int(v))
        if vals and max(abs(v) for v in vals) * self.n * self.D > _INT_LIMIT:
            raise OverflowError("differential entries too large for the integer kernel")
        d = sp.csr_matrix((np.array(vals, dtype=np.int64), (rows, cols)), shape=(self.D, self.D))
        return d, scale

    @cached_property
    def differential_int(self) -> tuple[sp.csr_matrix, int]:
        """``(M, s)`` with ``M / s`` the tensor-power differential on the full space."""
        d, scale = self._factor_differential
        parity = sp.diags(np.where(self.factor_degrees % 2, -1, 1).astype(np.int64), format="csr")
        ident = sp.identity(self.D, dtype=np.int64, format="csr")
        total = sp.csr_matrix((self.size, self.size), dtype=np.int64)
        for i in range(self.n):
            factors = [parity] * i + [d] + [ident] * (self.n - i - 1)
            term = factors[0]
            for f in factors[1:]:
                term = sp.kron(term, f, format="csr")
            total = total + term
        total.eliminate_zeros()
        return total.tocsr(), scale

    def permutation_int(self, sigma: Permutation) -> sp.csr_matrix:
        if sigma.n != self.n:
            raise ValueError("permutation size differs from tensor power")
        s = sigma.zero_based()
        t = self.tuples
        new = np.empty_like(t)
        for i in range(self.n):
            new[:, s[i]] = t[:, i]
        par = self.factor_degrees[t] % 2
        e = np.zeros(self.size, dtype=np.int64)
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if s[j] < s[i]:
                    e += par[:, i] * par[:, j]
        signs = np.where(e % 2, -1, 1).astype(np.int64)
        if self.size:
            weights = self.D ** np.arange(self.n - 1, -1, -1, dtype=np.int64)
            new_idx = new @ weights
        else:
            new_idx = np.zeros(0, dtype=np.int64)
        return sp.csr_matrix((signs, (new_idx, np.arange(self.size))), shape=(self.size, self.size))

    def group_algebra_int(self, e: GroupAlgebraElement) -> tuple[sp.csr_matrix, int]:
        """``(M, s)`` with ``M / s`` the action of ``e`` on the full space."""
        if e.n != self.n:
            raise ValueError("group algebra element lives on a different Sym(n)")
        scale = _lcm_denominator(e.terms.values())
        if e.terms and max(abs(c * scale) for c in e.terms.values()) * len(e.terms) > _INT_LIMIT:
            raise OverflowError("coefficients too large for the integer kernel")
        total = sp.csr_matrix((self.size, self.size), dtype=np.int64)
        for p, c in e.terms.items():
            total = total + int(c * scale) * self.permutation_int(p)
        total.eliminate_zeros()
        return total.tocsr(), scale

    def block(self, m: sp.spmatrix, scale: int, k_from: int, k_to: int) -> Matrix:
        rows = self.positions.get(k_to, np.zeros(0, np.int64))
        cols = self.positions.get(k_from, np.zeros(0, np.int64))
        sub = m[rows][:, cols].tocoo()
        data = [[Fraction(0)] * len(cols) for _ in range(len(rows))]
        for i, j, v in zip(sub.row, sub.col, sub.data):
            data[i][j] = Fraction(int(v), scale)
        return Matrix(len(rows), len(cols), data)

    def complex(self) -> Complex:
        d, s = self.differential_int
        pieces = {k: len(v) for k, v in self.positions.items()}
        diffs = {k: self.block(d, s, k, k + 1) for k in pieces if k + 1 in pieces}
        return Complex(pieces, diffs)

    def complex_map(self, m: sp.spmatrix, scale: int) -> ComplexMap:
        c = self.complex()
        return ComplexMap(c, c, {k: self.block(m, scale, k, k) for k in c.pieces})

    def apply_differential(self, vec: Mapping[int, Fraction]) -> dict[int, Fraction]:
        """Apply the differential to a sparse vector keyed by full index."""
        d, s = self.differential_int
        csc = self._diff_csc
        out: dict[int, Fraction] = {}
        for j, v in vec.items():
            lo, hi = csc.indptr[j], csc.indptr[j + 1]
            for i, w in zip(csc.indices[lo:hi], csc.data[lo:hi]):
                i = int(i)
                out[i] = out.get(i, 0) + v * int(w)
        return {i: Fraction(v) / s for i, v in out.items() if v}

    @cached_property
    def _diff_csc(self):
        return self.differential_int[0].tocsc()


def tensor_power(a: Complex, n: int) -> Complex:
    return TensorPower(a, n).complex()


def permutation_action(sigma: Permutation, a: Complex, n: int) -> ComplexMap:
    tp = TensorPower(a, n)
    return tp.complex_map(tp.permutation_int(sigma), 1)


def apply_group_algebra(e: GroupAlgebraElement, a: Complex, n: int) -> ComplexMap:
    tp = TensorPower(a, n)
    return tp.complex_map(*tp.group_algebra_int(e))


def symmetrizer_defect(l: Sequence[int], a: Complex, bound: int = DEFAULT_BOUND) -> int:
    """Number of nonzero entries of ``Sigma(l) d - d Sigma(l)`` on ``A^{(x)|l|}``."""
    e = young_symmetrizer(l, bound)
    t = TensorPower(a, e.n)
    if not t.size:
        return 0
    m, _ = t.group_algebra_int(e)
    d, _ = t.differential_int
    diff = (m @ d - d @ m).tocsr()
    diff.eliminate_zeros()
    return int(diff.nnz)


def cohomology_dims(a: Complex) -> dict[int, int]:
    out = {}
    for k in a.degrees:
        out[k] = a.dim(k) - rank(a.d(k)) - rank(a.d(k - 1))
    return out


def _column_echelon(block: list[list[Fraction]]) -> list[tuple[int, list[Fraction]]]:
    """Reduced column echelon basis of the column span: ``(pivot_row, column)``."""
    from .linalg import rref

    m = Matrix(len(block), len(block[0]) if block else 0, block)
    r, piv = rref(m.T)
    return [(piv[i], list(r.row(i))) for i in range(len(piv))]


class SchurComplex(Complex):
    """Image of a group-algebra element on ``A^{(x)n}`` with induced differential.

    ``basis[k]`` lists sparse vectors (full tensor index -> Fraction) in reduced
    column echelon form; ``pivots[k][j]`` is the full index where basis vector
    ``j`` has its leading 1.
    """

    def __init__(self, tensor: TensorPower, element: GroupAlgebraElement, partition=None):
        self.tensor = tensor
        self.element = element
        self.partition = partition
        m, scale = tensor.group_algebra_int(element)
        basis: dict[int, list[dict]] = {}
        pivots: dict[int, list[int]] = {}
        if tensor.size:
            keys = np.sort(tensor.tuples, axis=1) @ (tensor.D ** np.arange(tensor.n - 1, -1, -1, dtype=np.int64))
            order = np.argsort(keys, kind="stable")
            uniq, starts = np.unique(keys[order], return_index=True)
            bounds = list(starts) + [len(order)]
            mcsc = m.tocsc()
            found = []
            for a_, b_ in zip(bounds[:-1], bounds[1:]):
                orbit = np.sort(order[a_:b_])
                sub = mcsc[:, orbit][orbit, :].toarray()
                if not sub.any():
                    continue
                block = [[Fraction(int(x)) for x in row] for row in sub]
                for p, col in _column_echelon(block):
                    vec = {int(orbit[i]): v for i, v in enumerate(col) if v}
                    found.append((int(orbit[p]), vec))
            found.sort(key=lambda x: x[0])
            for p, vec in found:
                k = int(tensor.total_degree[p])
                basis.setdefault(k, []).append(vec)
                pivots.setdefault(k, []).append(p)
        self.basis = basis
        self.pivots = pivots
        pieces = {k: len(v) for k, v in basis.items()}
        diffs = {}
        for k in pieces:
            if k + 1 not in pieces:
                for j, b in enumerate(basis[k]):
                    if tensor.apply_differential(b):
                        raise NotContainedError(
                            f"differential of Schur basis vector {j} in degree {k} leaves the image")
                continue
            cols = [self.coordinates(k + 1, tensor.apply_differential(b)) for b in basis[k]]
            diffs[k] = Matrix.from_columns(cols, pieces[k + 1])
        super().__init__(pieces, diffs)

    def coordinates(self, k: int, vec: Mapping[int, Fraction]) -> tuple:
        """Coordinates of a sparse full-index vector in the degree-``k`` basis."""
        piv = self.pivots.get(k, [])
        coords = tuple(Fraction(vec.get(p, 0)) for p in piv)
        recon: dict[int, Fraction] = {}
        for c, b in zip(coords, self.basis.get(k, [])):
            if c:
                for i, v in b.items():
                    recon[i] = recon.get(i, 0) + c * v
        recon = {i: v for i, v in recon.items() if v}
        clean = {i: Fraction(v) for i, v in vec.items() if v}
        if recon != clean:
            raise NotContainedError(f"vector is not in the degree-{k} piece of the image")
        return coords

    def tuple_coordinates(self, k: int, vec: Mapping[tuple, Fraction]) -> tuple:
        return self.coordinates(k, {self.tensor.encode(t): v for t, v in vec.items()})

    def vector(self, k: int, j: int) -> dict[tuple, Fraction]:
        """Basis vector ``j`` of degree ``k`` keyed by factor-index tuples."""
        return {self.tensor.decode(i): v for i, v in self.basis[k][j].items()}

    def subspace(self, k: int) -> Subspace:
        """Degree-``k`` basis as a subspace of the degree-``k`` tensor piece."""
        idx = self.tensor.positions.get(k, np.zeros(0, np.int64))
        loc = self.tensor.local_index
        cols = []
        for b in self.basis.get(k, []):
            cols.append({int(loc[i]): v for i, v in b.items()})
        mat = Matrix.from_sparse_columns(cols, len(idx))
        return Subspace(len(idx), mat, [int(loc[p]) for p in self.pivots.get(k, [])])


def schur_complex(l: Sequence[int], a: Complex, bound: int = DEFAULT_BOUND) -> SchurComplex:
    """Image of the Young symmetrizer of ``l`` on ``A^{(x)|l|}``."""
    e = young_symmetrizer(l, bound)
    return SchurComplex(TensorPower(a, e.n), e, tuple(l))


def alt_power(i: int, a: Complex, bound: int = DEFAULT_BOUND) -> SchurComplex:
    if i < 1:
        raise ValueError("alt_power needs i >= 1")
    return schur_complex(dual_partition((i,)), a, bound)


def schur_functor_map(l: Sequence[int], f: ComplexMap, bound: int = DEFAULT_BOUND) -> ComplexMap:
    """``S^l(f)`` between the Schur complexes of ``f.source`` and ``f.target``."""
    sa = schur_complex(l, f.source, bound)
    sb = schur_complex(l, f.target, bound)
    n = sa.tensor.n
    # global factor matrix of f
    src, tgt = f.source, f.target
    fcols: dict[int, dict[int, Fraction]] = {}
    for k, m in f.components.items():
        r0, c0 = tgt.offset(k), src.offset(k)
        for j in range(m.cols):
            fcols[c0 + j] = {r0 + i: m[i, j] for i in range(m.rows) if m[i, j]}
    comps = {}
    for k in sa.pieces:
        cols = []
        for j in range(sa.dim(k)):
            out: dict[tuple, Fraction] = {}
            for t, v in sa.vector(k, j).items():
                for combo in itertools.product(*(fcols.get(x, {}).items() for x in t)):
                    c = v
                    for _, w in combo:
                        c *= w
                    key = tuple(i for i, _ in combo)
                    out[key] = out.get(key, 0) + c
            out = {t: c for t, c in out.items() if c}
            cols.append(sb.tuple_coordinates(k, out) if sb.dim(k) else ())
        comps[k] = Matrix.from_columns(cols, sb.dim(k)) if cols else Matrix(sb.dim(k), 0)
    return ComplexMap(sa, sb, comps)


# sparse tuple-keyed helpers ---------------------------------------------

def act_on_vector(sigma: Sequence[int], vec: Mapping[tuple, Fraction],
                  factor_degrees: Sequence[int]) -> dict[tuple, Fraction]:
    """Koszul-signed action of a 0-based permutation on a tuple-keyed vector."""
    out: dict[tuple, Fraction] = {}
    n = len(sigma)
    for t, v in vec.items():
        new = [0] * n
        for i, x in enumerate(t):
            new[sigma[i]] = x
        s = koszul_sign(sigma, [factor_degrees[x] for x in t])
        key = tuple(new)
        out[key] = out.get(key, 0) + s * v
    return {t: v for t, v in out.items() if v}


def antisymmetrize(vec: Mapping[tuple, Fraction], factor_degrees: Sequence[int],
                   normalized: bool = True) -> dict[tuple, Fraction]:
    """Apply the (Koszul-signed) column symmetrizer, divided by its constant."""
    if not vec:
        return {}
    n = len(next(iter(vec)))
    out: dict[tuple, Fraction] = {}
    for perm in itertools.permutations(range(n)):
        sg = sign(Permutation([p + 1 for p in perm]))
        for t, v in act_on_vector(perm, vec, factor_degrees).items():
            out[t] = out.get(t, 0) + sg * v
    c = quasi_idempotence_constant((1,) * n) if normalized else 1
    return {t: Fraction(v) / c for t, v in out.items() if v}


# constructors ---------------------------------------------------------------

def contractible(k: int = 0, dim: int = 1) -> Complex:
    """``Q^dim --id--> Q^dim`` in degrees ``k, k+1``."""
    return Complex({k: dim, k + 1: dim}, {k: Matrix.identity(dim)})


def _left_null_integer_basis(m: Matrix) -> list[list[int]]:
    """Integer row vectors ``y`` with ``y @ m == 0`` spanning the left null space."""
    out = []
    for v in kernel_basis(m.T).vectors():
        den = _lcm_denominator(v)
        out.append([int(x * den) for x in v])
    return out


def random_complex(rng: random.Random, degrees: Sequence[int] = range(-2, 3), max_dim: int = 2,
                   entry_bound: int = 2, min_dim: int = 0) -> Complex:
    """Seeded random complex with small integer differentials."""
    degrees = list(degrees)
    dims = {k: rng.randint(min_dim, max_dim) for k in degrees}
    diffs: dict[int, Matrix] = {}
    prev = None
    for k in degrees:
        if k + 1 not in dims:
            break
        rows, cols = dims[k + 1], dims[k]
        if prev is None:
            allowed = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]
        else:
            allowed = _left_null_integer_basis(prev) if cols else []
        data = []
        for _ in range(rows):
            row = [0] * cols
            for y in allowed:
                c = rng.randint(-entry_bound, entry_bound)
                row = [a + c * b for a, b in zip(row, y)]
            data.append(row)
        m = Matrix(rows, cols, data)
        diffs[k] = m
        prev = m
    return Complex(dims, diffs)
