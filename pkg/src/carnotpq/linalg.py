"""Dense exact linear algebra over Q(sqrt d).

Vectors are tuples of :class:`FieldElement`.  Subspaces are stored by the
reduced row-echelon form of a spanning set, so two subspaces are equal exactly
when their stored bases coincide.
"""

from __future__ import annotations

from itertools import count
from typing import Iterable, Sequence

from .field import Field, FieldElement, FieldMismatchError, check_field_tag

Vector = tuple


def as_vector(values: Iterable, d: int = 0) -> tuple:
    """Coerce an iterable of scalars into a vector over ``Q(sqrt d)``."""
    F = Field(d)
    return tuple(F(v) for v in values)


def zero_vector(n: int, d: int = 0) -> tuple:
    z = Field(d).zero
    return (z,) * n


def unit_vector(n: int, i: int, d: int = 0) -> tuple:
    F = Field(d)
    return tuple(F.one if k == i else F.zero for k in range(n))


def vec_add(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v: Sequence) -> tuple:
    return tuple(c * a for a in v)


def vec_is_zero(v: Sequence) -> bool:
    return all(x.is_zero() for x in v)


def dot(u: Sequence, v: Sequence):
    total = None
    for a, b in zip(u, v):
        if a.is_zero() or b.is_zero():
            continue
        total = a * b if total is None else total + a * b
    if total is None:
        return u[0] * 0 if len(u) else 0
    return total


def linear_combination(coeffs: Sequence, vectors: Sequence[Sequence], n: int, d: int = 0) -> tuple:
    acc = list(zero_vector(n, d))
    for c, v in zip(coeffs, vectors):
        if c == 0:
            continue
        for k, x in enumerate(v):
            if not x.is_zero():
                acc[k] = acc[k] + c * x
    return tuple(acc)


class Matrix:
    """An immutable dense matrix with entries in ``Q(sqrt d)``."""

    __slots__ = ("rows", "nrows", "ncols", "d")

    def __init__(self, rows: Iterable[Iterable], d: int = 0, ncols: int | None = None):
        check_field_tag(d)
        F = Field(d)
        rows = tuple(tuple(F(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def identity(cls, n: int, d: int = 0) -> "Matrix":
        return cls([unit_vector(n, i, d) for i in range(n)], d, ncols=n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int, d: int = 0) -> "Matrix":
        return cls([zero_vector(ncols, d) for _ in range(nrows)], d, ncols=ncols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int, d: int = 0) -> "Matrix":
        rows = [[columns[j][i] for j in range(len(columns))] for i in range(nrows)]
        return cls(rows, d, ncols=len(columns))

    @classmethod
    def diagonal(cls, entries: Sequence, d: int = 0) -> "Matrix":
        n = len(entries)
        F = Field(d)
        return cls([[F(entries[i]) if i == j else F.zero for j in range(n)] for i in range(n)], d, ncols=n)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i: int) -> tuple:
        return self.rows[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "Matrix":
        return Matrix(self.columns(), self.d, ncols=self.nrows)

    def _check(self, other: "Matrix"):
        if other.d != self.d:
            raise FieldMismatchError(f"matrices over Q(sqrt {self.d}) and Q(sqrt {other.d})")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix([vec_add(a, b) for a, b in zip(self.rows, other.rows)], self.d, ncols=self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix([vec_sub(a, b) for a, b in zip(self.rows, other.rows)], self.d, ncols=self.ncols)

    def __neg__(self) -> "Matrix":
        return Matrix([tuple(-x for x in r) for r in self.rows], self.d, ncols=self.ncols)

    def scale(self, c) -> "Matrix":
        return Matrix([vec_scale(c, r) for r in self.rows], self.d, ncols=self.ncols)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            self._check(other)
            if self.ncols != other.nrows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            cols = other.columns()
            zero = Field(self.d).zero
            out = []
            for r in self.rows:
                nz = [(k, x) for k, x in enumerate(r) if not x.is_zero()]
                row = []
                for c in cols:
                    acc = zero
                    for k, x in nz:
                        y = c[k]
                        if not y.is_zero():
                            acc = acc + x * y
                    row.append(acc)
                out.append(row)
            return Matrix(out, self.d, ncols=other.ncols)
        return self.apply(other)

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.ncols:
            raise ValueError(f"vector of length {len(v)} for matrix with {self.ncols} columns")
        zero = Field(self.d).zero
        nz = [(k, x) for k, x in enumerate(v) if not x.is_zero()]
        out = []
        for r in self.rows:
            acc = zero
            for k, x in nz:
                y = r[k]
                if not y.is_zero():
                    acc = acc + y * x
            out.append(acc)
        return tuple(out)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix([[self.rows[i][j] for j in cols] for i in rows], self.d, ncols=len(cols))

    def is_zero(self) -> bool:
        return all(x.is_zero() for r in self.rows for x in r)

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in r) for r in self.rows)
        return f"Matrix([{body}])"

    # elimination-based operations -------------------------------------------
    def rref(self) -> tuple["Matrix", list[int]]:
        return rref(self)

    def rank(self) -> int:
        return len(rref(self)[1])

    def det(self) -> FieldElement:
        return determinant(self)

    def inverse(self) -> "Matrix":
        return inverse(self)


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row-echelon form and the pivot columns.  Zero rows sink."""
    rows = [list(r) for r in m.rows]
    pivots: list[int] = []
    r = 0
    for c in range(m.ncols):
        p = next((i for i in range(r, m.nrows) if not rows[i][c].is_zero()), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        pivot_row = rows[r]
        for i in range(m.nrows):
            if i != r:
                f = rows[i][c]
                if not f.is_zero():
                    rows[i] = [x - f * y for x, y in zip(rows[i], pivot_row)]
        pivots.append(c)
        r += 1
        if r == m.nrows:
            break
    return Matrix(rows, m.d, ncols=m.ncols), pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def determinant(m: Matrix) -> FieldElement:
    if m.nrows != m.ncols:
        raise ValueError("determinant of a non-square matrix")
    F = Field(m.d)
    rows = [list(r) for r in m.rows]
    n = m.nrows
    det = F.one
    for c in range(n):
        p = next((i for i in range(c, n) if not rows[i][c].is_zero()), None)
        if p is None:
            return F.zero
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            det = -det
        piv = rows[c][c]
        det = det * piv
        inv = piv.inverse()
        for i in range(c + 1, n):
            f = rows[i][c]
            if not f.is_zero():
                f = f * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return det


def inverse(m: Matrix) -> Matrix:
    if m.nrows != m.ncols:
        raise ValueError("inverse of a non-square matrix")
    n = m.nrows
    aug = Matrix([list(m.rows[i]) + list(unit_vector(n, i, m.d)) for i in range(n)], m.d, ncols=2 * n)
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return Matrix([r[n:] for r in red.rows], m.d, ncols=n)


def solve(m: Matrix, b: Sequence) -> tuple | None:
    """One solution of ``m x = b`` (free variables set to zero), or None."""
    aug = Matrix([list(m.rows[i]) + [b[i]] for i in range(m.nrows)], m.d, ncols=m.ncols + 1)
    red, piv = rref(aug)
    if m.ncols in piv:
        return None
    x = list(zero_vector(m.ncols, m.d))
    for r, c in enumerate(piv):
        x[c] = red.rows[r][m.ncols]
    return tuple(x)


def nullspace(m: Matrix) -> "Subspace":
    """Kernel of ``m`` as a subspace of the column space dimension."""
    red, piv = rref(m)
    F = Field(m.d)
    free = [c for c in range(m.ncols) if c not in set(piv)]
    basis = []
    for f in free:
        v = [F.zero] * m.ncols
        v[f] = F.one
        for r, c in enumerate(piv):
            v[c] = -red.rows[r][f]
        basis.append(tuple(v))
    return Subspace(basis, m.ncols, m.d)


class Subspace:
    """A subspace of ``F^n`` stored by the RREF of a spanning set."""

    __slots__ = ("ambient_dim", "d", "basis", "pivots")

    def __init__(self, vectors: Iterable[Sequence], ambient_dim: int, d: int = 0):
        vectors = [tuple(v) for v in vectors]
        for v in vectors:
            if len(v) != ambient_dim:
                raise ValueError(f"vector of length {len(v)} in F^{ambient_dim}")
        if vectors:
            red, piv = rref(Matrix(vectors, d, ncols=ambient_dim))
            basis = red.rows[: len(piv)]
        else:
            basis, piv = (), []
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "basis", tuple(basis))
        object.__setattr__(self, "pivots", tuple(piv))

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @classmethod
    def zero(cls, n: int, d: int = 0) -> "Subspace":
        return cls([], n, d)

    @classmethod
    def full(cls, n: int, d: int = 0) -> "Subspace":
        return cls([unit_vector(n, i, d) for i in range(n)], n, d)

    @classmethod
    def coordinate(cls, indices: Iterable[int], n: int, d: int = 0) -> "Subspace":
        return cls([unit_vector(n, i, d) for i in indices], n, d)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> Matrix:
        return Matrix(self.basis, self.d, ncols=self.ambient_dim)

    def contains(self, v: Sequence) -> bool:
        return subspace_contains(self, v)

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def coordinates(self, v: Sequence) -> tuple | None:
        """Coefficients of ``v`` in the stored basis, or None if ``v`` is outside."""
        coeffs = tuple(v[p] for p in self.pivots)
        recon = linear_combination(coeffs, self.basis, self.ambient_dim, self.d)
        return coeffs if tuple(recon) == tuple(v) else None

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return subspace_sum(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return subspace_intersect(self, other)

    def annihilator(self) -> Matrix:
        """Rows spanning the linear forms vanishing on this subspace."""
        if self.dim == 0:
            return Matrix.identity(self.ambient_dim, self.d)
        ker = nullspace(self.matrix())
        return Matrix(ker.basis, self.d, ncols=self.ambient_dim)

    def image(self, m: Matrix) -> "Subspace":
        return Subspace([m.apply(b) for b in self.basis], m.nrows, self.d)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        vecs = ", ".join("(" + ", ".join(str(x) for x in b) + ")" for b in self.basis)
        return f"Subspace(dim={self.dim}, in F^{self.ambient_dim}, basis=[{vecs}])"


def _same_ambient(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("subspaces live in different ambient spaces")
    if a.d != b.d:
        raise FieldMismatchError("subspaces over different fields")


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _same_ambient(a, b)
    return Subspace(list(a.basis) + list(b.basis), a.ambient_dim, a.d)


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    _same_ambient(a, b)
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient_dim, a.d)
    if b.dim == b.ambient_dim:
        return a
    ann = b.annihilator()
    # coefficient vectors lambda with ann . (lambda^T A) = 0
    system = ann @ a.matrix().transpose()
    ker = nullspace(system)
    vecs = [linear_combination(lam, a.basis, a.ambient_dim, a.d) for lam in ker.basis]
    return Subspace(vecs, a.ambient_dim, a.d)


def subspace_contains(s: Subspace, v: Sequence) -> bool:
    if len(v) != s.ambient_dim:
        raise ValueError("vector length does not match the ambient dimension")
    return s.coordinates(v) is not None


def orthogonal_projection(s: Subspace) -> Matrix:
    """Matrix of the projection onto ``s`` along its standard orthogonal complement.

    Uses ``B^T (B B^T)^{-1} B`` for a basis matrix ``B``.  The Gram matrix must be
    invertible, which always holds over real fields.
    """
    n = s.ambient_dim
    if s.dim == 0:
        return Matrix.zeros(n, n, s.d)
    B = s.matrix()
    gram = B @ B.transpose()
    if determinant(gram).is_zero():
        raise ValueError("degenerate Gram matrix: the standard form is singular on this subspace")
    return B.transpose() @ inverse(gram) @ B


def _curve_points(s: Subspace):
    """Points ``sum t^i b_i`` for t = 1, 2, 3, ... on a moment-type curve in ``s``."""
    F = Field(s.d)
    for t in count(1):
        coeffs = [F(t) ** i for i in range(s.dim)]
        yield t, linear_combination(coeffs, s.basis, s.ambient_dim, s.d)


def point_with_nonzero_coordinates(s: Subspace) -> tuple | None:
    """A vector of ``s`` with every coordinate nonzero, or None if none exists.

    None is returned exactly when some coordinate vanishes on all of ``s``.
    Otherwise each coordinate along the curve is a nonzero polynomial in t of
    degree below ``dim s``, so a valid t appears among the first
    ``n (dim s - 1) + 1`` integers.
    """
    n = s.ambient_dim
    if s.dim == 0:
        return None if n else ()
    if any(all(b[j].is_zero() for b in s.basis) for j in range(n)):
        return None
    limit = n * (s.dim - 1) + 1
    for t, v in _curve_points(s):
        if all(not x.is_zero() for x in v):
            return v
        if t > limit:
            raise AssertionError("search bound exceeded")  # unreachable by the degree argument
    return None


def point_avoiding(s: Subspace, bad: Sequence[Subspace]) -> tuple | None:
    """A vector of ``s`` outside every subspace in ``bad``, or None if impossible.

    Impossible exactly when ``s`` is contained in one of the bad subspaces.
    """
    if any(s.is_subspace_of(b) for b in bad):
        return None
    if s.dim == 0:
        return None if bad else zero_vector(s.ambient_dim, s.d)
    limit = len(bad) * (s.dim - 1) + 1
    for t, v in _curve_points(s):
        if not any(b.contains(v) for b in bad):
            return v
        if t > limit:
            raise AssertionError("search bound exceeded")
    return None


def block_diagonal(blocks: Sequence[Matrix], d: int = 0) -> Matrix:
    n = sum(b.nrows for b in blocks)
    m = sum(b.ncols for b in blocks)
    F = Field(d)
    rows = [[F.zero] * m for _ in range(n)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.nrows):
            for j in range(b.ncols):
                rows[r0 + i][c0 + j] = b.rows[i][j]
        r0 += b.nrows
        c0 += b.ncols
    return Matrix(rows, d, ncols=m)
