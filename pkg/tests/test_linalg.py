from itertools import permutations

from hypothesis import given, strategies as st

from carnotpq.field import Field, FieldElement
from carnotpq.linalg import (
    Matrix,
    Subspace,
    determinant,
    inverse,
    nullspace,
    orthogonal_projection,
    point_with_nonzero_coordinates,
    rref,
    solve,
    subspace_intersect,
    subspace_sum,
)

from conftest import rational_matrices, small_ints


def leibniz_det(rows):
    n = len(rows)
    total = Field(0).zero
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Field(0).one
        for i in range(n):
            term = term * rows[i][perm[i]]
        total = total + (term if inversions % 2 == 0 else -term)
    return total


def is_rref(m: Matrix, pivots) -> bool:
    last = -1
    for r, p in enumerate(pivots):
        row = m.rows[r]
        if any(not x.is_zero() for x in row[:p]) or row[p] != 1 or p <= last:
            return False
        if any(not m.rows[s][p].is_zero() for s in range(m.nrows) if s != r):
            return False
        last = p
    return all(all(x.is_zero() for x in m.rows[r]) for r in range(len(pivots), m.nrows))


def test_rref_examples():
    red, piv = rref(Matrix([[1, 2], [2, 4]]))
    assert piv == [0] and red.rows[0] == (1, 2)
    I3 = Matrix.identity(3)
    assert rref(I3) == (I3, [0, 1, 2])
    F = Field(5)
    a = (F.sqrt_d() - 1) / 2
    red, piv = rref(Matrix([[a, 1]], 5))
    assert piv == [0] and red.rows[0] == (F.one, (F.sqrt_d() + 1) / 2)


@given(rational_matrices(3, 4))
def test_rref_canonical_and_idempotent(rows):
    m = Matrix(rows)
    red, piv = rref(m)
    assert is_rref(red, piv)
    assert rref(red) == (red, piv)
    assert Subspace(red.rows[: len(piv)], 4) == Subspace(m.rows, 4)


@given(rational_matrices(3, 5))
def test_nullspace_by_substitution(rows):
    m = Matrix(rows)
    ns = nullspace(m)
    assert ns.dim == 5 - m.rank()
    for v in ns.basis:
        assert all(x.is_zero() for x in m.apply(v))


def test_nullspace_examples():
    assert nullspace(Matrix.identity(3)).dim == 0
    ns = nullspace(Matrix([[1, 1, 1]]))
    assert ns.dim == 2 and ns.contains((1, -1, 0))


@given(rational_matrices(4, 4))
def test_determinant_matches_leibniz(rows):
    m = Matrix(rows)
    assert determinant(m) == leibniz_det(m.rows)
    if not determinant(m).is_zero():
        assert m @ inverse(m) == Matrix.identity(4)


@given(rational_matrices(3, 3), st.lists(small_ints, min_size=3, max_size=3))
def test_solve_returns_exact_solutions(rows, b):
    m = Matrix(rows)
    x = solve(m, b)
    if x is not None:
        assert m.apply(x) == tuple(Field(0)(v) for v in b)


@given(rational_matrices(2, 4), rational_matrices(2, 4))
def test_dimension_formula(a_rows, b_rows):
    a, b = Subspace(a_rows, 4), Subspace(b_rows, 4)
    s, i = subspace_sum(a, b), subspace_intersect(a, b)
    assert a.dim + b.dim == s.dim + i.dim
    assert i.is_subspace_of(a) and i.is_subspace_of(b)
    assert a.is_subspace_of(s) and b.is_subspace_of(s)


def test_lattice_examples():
    e1, e2 = Subspace([(1, 0, 0)], 3), Subspace([(0, 1, 0)], 3)
    assert (e1 & e2).dim == 0
    assert Subspace([(1, 1, 0)], 3) + Subspace([(1, -1, 0)], 3) == e1 + e2


@given(rational_matrices(2, 4))
def test_orthogonal_projection_idempotent_with_range(rows):
    s = Subspace(rows, 4)
    P = orthogonal_projection(s)
    assert P @ P == P and P.transpose() == P
    assert Subspace(P.columns(), 4) == s


def test_orthogonal_projection_examples():
    h = FieldElement(1, 0) / 2
    assert orthogonal_projection(Subspace([(1, 1)], 2)) == Matrix([[h, h], [h, h]])
    assert orthogonal_projection(Subspace.full(3)) == Matrix.identity(3)
    P = orthogonal_projection(Subspace([(1, 1, 0)], 3))
    assert all(P.rows[i][2].is_zero() and P.rows[2][i].is_zero() for i in range(3))


def test_point_with_nonzero_coordinates_examples():
    assert point_with_nonzero_coordinates(Subspace([(1, 1, 1)], 3)) == (1, 1, 1)
    assert point_with_nonzero_coordinates(Subspace([(1, 0, 0)], 3)) is None
    p = point_with_nonzero_coordinates(Subspace([(1, 1, 0), (0, 1, 1)], 3))
    assert p is not None and all(not x.is_zero() for x in p)


@given(rational_matrices(2, 4))
def test_point_with_nonzero_coordinates_contract(rows):
    s = Subspace(rows, 4)
    p = point_with_nonzero_coordinates(s)
    hyperplane_contains = any(all(b[j].is_zero() for b in s.basis) for j in range(4))
    assert (p is None) == hyperplane_contains
    if p is not None:
        assert s.contains(p) and all(not x.is_zero() for x in p)


def test_subspace_equality_is_basis_equality():
    a = Subspace([(2, 4, 0), (0, 0, 3)], 3)
    b = Subspace([(1, 2, 1), (1, 2, -1)], 3)
    assert a == b and a.basis == b.basis
