"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction`.  Matrices are small immutable dense
grids; every basis handed out by this module is in reduced column echelon
form, so the same input always produces the same basis.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "Matrix",
    "Subspace",
    "NotContainedError",
    "to_rational",
    "rational_str",
    "rref",
    "rank",
    "kernel_basis",
    "image_basis",
    "restrict_map",
]

ZERO = Fraction(0)
ONE = Fraction(1)


class NotContainedError(ValueError):
    """A vector (or the image of a map) does not lie in the requested span."""


def to_rational(x) -> Fraction:
    """Parse an int, Fraction or a string such as ``"-3/2"``."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def rational_str(x: Fraction) -> str:
    return str(x)


class Matrix:
    """Immutable dense matrix of Fractions."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, data: Sequence[Sequence] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix dimension")
        self.rows = rows
        self.cols = cols
        if data is None:
            self._data = tuple((ZERO,) * cols for _ in range(rows))
        else:
            if len(data) != rows or any(len(r) != cols for r in data):
                raise ValueError(f"data does not have shape {rows}x{cols}")
            self._data = tuple(tuple(to_rational(x) for x in r) for r in data)

    # construction -----------------------------------------------------
    @classmethod
    def _raw(cls, rows, cols, data):
        m = cls.__new__(cls)
        m.rows, m.cols, m._data = rows, cols, data
        return m

    @classmethod
    def from_rows(cls, data: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        data = list(data)
        if not data:
            return cls(0, cols or 0)
        return cls(len(data), len(data[0]), data)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        columns = [list(c) for c in columns]
        return cls(rows, len(columns), [[c[i] for c in columns] for i in range(rows)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._raw(n, n, tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)))

    @classmethod
    def from_sparse_columns(cls, columns: Sequence[dict], rows: int) -> "Matrix":
        data = [[ZERO] * len(columns) for _ in range(rows)]
        for j, col in enumerate(columns):
            for i, v in col.items():
                data[i][j] = Fraction(v)
        return cls._raw(rows, len(columns), tuple(tuple(r) for r in data))

    # access -----------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._data)

    def to_lists(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def sparse_column(self, j: int) -> dict:
        return {i: r[j] for i, r in enumerate(self._data) if r[j]}

    def is_zero(self) -> bool:
        return all(not x for r in self._data for x in r)

    # arithmetic -------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.rows, self.cols, self._data))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix._raw(self.rows, self.cols, tuple(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix._raw(self.rows, self.cols, tuple(
            tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)))

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, c) -> "Matrix":
        c = to_rational(c)
        return Matrix._raw(self.rows, self.cols, tuple(tuple(c * a for a in r) for r in self._data))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        # skip zeros: most matrices here are sparse
        ocols = other.cols
        out = []
        orows = other._data
        for r in self._data:
            acc = [ZERO] * ocols
            for k, a in enumerate(r):
                if a:
                    ok = orows[k]
                    for j in range(ocols):
                        b = ok[j]
                        if b:
                            acc[j] += a * b
            out.append(tuple(acc))
        return Matrix._raw(self.rows, ocols, tuple(out))

    def apply(self, vec: Sequence) -> tuple:
        if len(vec) != self.cols:
            raise ValueError("vector length does not match column count")
        nz = [(k, to_rational(v)) for k, v in enumerate(vec) if v]
        return tuple(sum((r[k] * v for k, v in nz), ZERO) for r in self._data)

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(self.cols, self.rows, tuple(zip(*self._data)) if self.rows else
                           tuple(() for _ in range(self.cols)))

    def transpose(self) -> "Matrix":
        return self.T

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._raw(len(rows), len(cols), tuple(
            tuple(self._data[i][j] for j in cols) for i in rows))

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise ValueError("row counts differ")
        return Matrix._raw(self.rows, self.cols + other.cols, tuple(
            r + s for r, s in zip(self._data, other._data)))

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise ValueError("column counts differ")
        return Matrix._raw(self.rows + other.rows, self.cols, self._data + other._data)

    @staticmethod
    def block_diag(*blocks: "Matrix") -> "Matrix":
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        data = [[ZERO] * cols for _ in range(rows)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    data[r0 + i][c0 + j] = b._data[i][j]
            r0 += b.rows
            c0 += b.cols
        return Matrix._raw(rows, cols, tuple(tuple(r) for r in data))

    def kron(self, other: "Matrix") -> "Matrix":
        data = []
        for r in self._data:
            for s in other._data:
                data.append(tuple(a * b for a in r for b in s))
        return Matrix._raw(self.rows * other.rows, self.cols * other.cols, tuple(data))

    def _check_same(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    # serialisation ----------------------------------------------------
    def to_json(self) -> list[list[str]]:
        return [[rational_str(x) for x in r] for r in self._data]

    @classmethod
    def from_json(cls, data, rows: int | None = None, cols: int | None = None) -> "Matrix":
        if not isinstance(data, list) or any(not isinstance(r, list) for r in data):
            raise ValueError("matrix JSON must be a list of rows")
        if not data:
            return cls(rows or 0, cols or 0)
        m = cls(len(data), len(data[0]), data)
        if rows is not None and m.rows != rows or cols is not None and m.cols != cols:
            raise ValueError(f"matrix has shape {m.shape}, expected {(rows, cols)}")
        return m

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self._data)
        return f"Matrix({self.rows}x{self.cols}: [{body}])"


def rref(m: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns."""
    rows = [list(r) for r in m.to_lists()]
    pivots = []
    prow = 0
    for c in range(m.cols):
        if prow == len(rows):
            break
        pr = next((i for i in range(prow, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[prow], rows[pr] = rows[pr], rows[prow]
        piv = rows[prow]
        inv = 1 / piv[c]
        if inv != 1:
            piv = rows[prow] = [x * inv for x in piv]
        nzc = [j for j in range(c, m.cols) if piv[j]]
        for i in range(len(rows)):
            if i != prow:
                f = rows[i][c]
                if f:
                    ri = rows[i]
                    for j in nzc:
                        ri[j] -= f * piv[j]
        pivots.append(c)
        prow += 1
    return Matrix(m.rows, m.cols, rows), tuple(pivots)


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


class Subspace:
    """Span of linearly independent columns in Q^ambient_dim.

    Bases built by this module are reduced column echelon: column ``j`` has a
    1 at row ``pivots[j]`` and every other column vanishes there.  Such a basis
    gives coordinates by reading the pivot rows.
    """

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, basis: Matrix, pivots: Sequence[int] | None = None):
        if basis.rows != ambient_dim:
            raise ValueError("basis rows must equal ambient dimension")
        self.ambient_dim = ambient_dim
        self.basis = basis
        if pivots is None:
            if rank(basis) != basis.cols:
                raise ValueError("basis columns are linearly dependent")
        self.pivots = tuple(pivots) if pivots is not None else None

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        vectors = [list(v) for v in vectors]
        if not vectors:
            return cls.zero(ambient_dim)
        return image_basis(Matrix.from_columns(vectors, ambient_dim))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, Matrix(ambient_dim, 0), ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, Matrix.identity(ambient_dim), tuple(range(ambient_dim)))

    @property
    def dim(self) -> int:
        return self.basis.cols

    def vectors(self) -> list[tuple]:
        return [self.basis.column(j) for j in range(self.dim)]

    def canonical(self) -> "Subspace":
        return self if self.pivots is not None else image_basis(self.basis)

    def coordinates(self, vec: Sequence) -> tuple:
        """Coordinates of ``vec`` in this basis; raises if ``vec`` is outside."""
        c = self.canonical()
        vec = tuple(to_rational(x) for x in vec)
        if len(vec) != self.ambient_dim:
            raise ValueError("vector has wrong length")
        coords = tuple(vec[p] for p in c.pivots)
        if c.basis.apply(coords) != vec:
            raise NotContainedError("vector is not in the span of the subspace basis")
        if c is not self:
            # express in the caller's (non-canonical) basis
            return solve_in_columns(self.basis, vec)
        return coords

    def contains(self, vec: Sequence) -> bool:
        try:
            self.coordinates(vec)
            return True
        except NotContainedError:
            return False

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        return a.ambient_dim == b.ambient_dim and a.basis == b.basis

    def __hash__(self):
        c = self.canonical()
        return hash((c.ambient_dim, c.basis))

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimensions differ")
        return image_basis(self.basis.hstack(other.basis))

    def intersection(self, other: "Subspace") -> "Subspace":
        stacked = self.basis.hstack(-other.basis)
        k = kernel_basis(stacked)
        vecs = [self.basis.apply(v[: self.dim]) for v in k.vectors()]
        return Subspace.span(self.ambient_dim, vecs)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def solve_in_columns(cols: Matrix, vec: Sequence) -> tuple:
    """Solve ``cols @ x = vec`` for independent columns; raise if no solution."""
    aug = cols.hstack(Matrix.from_columns([vec], cols.rows))
    r, piv = rref(aug)
    if cols.cols in piv:
        raise NotContainedError("vector is not in the column span")
    x = [ZERO] * cols.cols
    for i, p in enumerate(piv):
        x[p] = r[i, cols.cols]
    return tuple(x)


def kernel_basis(m: Matrix) -> Subspace:
    """Null space of ``m``, in reduced column echelon form."""
    r, piv = rref(m)
    free = [j for j in range(m.cols) if j not in set(piv)]
    vecs = []
    for f in free:
        v = [ZERO] * m.cols
        v[f] = ONE
        for i, p in enumerate(piv):
            v[p] = -r[i, f]
        vecs.append(v)
    if not vecs:
        return Subspace.zero(m.cols)
    return image_basis(Matrix.from_columns(vecs, m.cols))


def image_basis(m: Matrix) -> Subspace:
    """Column space of ``m`` in reduced column echelon form."""
    r, piv = rref(m.T)
    k = len(piv)
    cols = [r.row(i) for i in range(k)]
    return Subspace(m.rows, Matrix.from_columns(cols, m.rows) if k else Matrix(m.rows, 0), piv)


def restrict_map(m: Matrix, source: Subspace, target: Subspace) -> Matrix:
    """Matrix of ``m`` from ``source``'s basis to ``target``'s basis.

    Raises :class:`NotContainedError` when ``m(source)`` leaves ``target``.
    """
    if m.cols != source.ambient_dim or m.rows != target.ambient_dim:
        raise ValueError("map does not match the ambient dimensions")
    images = m @ source.basis
    cols = []
    for j in range(images.cols):
        try:
            cols.append(target.coordinates(images.column(j)))
        except NotContainedError:
            raise NotContainedError(
                f"image of source basis vector {j} is not contained in the target subspace"
            ) from None
    return Matrix.from_columns(cols, target.dim) if cols else Matrix(target.dim, 0)
