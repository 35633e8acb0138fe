import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from carnotpq import catalog
from carnotpq.field import Field
from carnotpq.lie import (
    GradedAlgebra,
    GradedMap,
    bch_conjugate,
    bch_defect,
    bch_inverse,
    bch_multiply,
    complexify,
    direct_sum,
    is_automorphism,
    jc_eigenspace_split,
    quotient,
    validate,
)
from carnotpq.linalg import Matrix, Subspace, vec_add, vec_scale
from carnotpq.product_quotient import build, diagonal_presentation, heisenberg_algebra
from carnotpq.structure import darboux_basis

from conftest import small_fractions

ALGEBRAS = [e for e in catalog.ENTRIES]


def algebra_of(entry):
    obj = entry.build()
    return obj if isinstance(obj, GradedAlgebra) else build(obj).quotient


@pytest.mark.parametrize("entry", ALGEBRAS, ids=lambda e: e.name)
def test_catalog_algebras_validate(entry):
    assert validate(algebra_of(entry)) == []


def test_validate_examples():
    assert validate(heisenberg_algebra(1)) == []
    assert validate(GradedAlgebra([3], {})) == []
    bad = GradedAlgebra([2, 1], {(0, 1): {2: 1}, (1, 0): {2: 1}})
    kinds = {(v.kind, v.witness) for v in validate(bad)}
    assert ("antisymmetry", (0, 1)) in kinds


def test_validate_reports_jacobi_and_grading():
    # [e0,e1]=e2, [e0,e2]=e3 with e3 given degree 2: grading breaks
    g = GradedAlgebra([2, 2], {(0, 1): {2: 1}, (0, 2): {3: 1}})
    assert "grading" in {v.kind for v in validate(g)}
    # [e2, [e0, e1]] = e4 is the only nonzero Jacobi term on (e0, e1, e2)
    g = GradedAlgebra([3, 1, 1], {(0, 1): {3: 1}, (2, 3): {4: 1}})
    assert [v.witness for v in validate(g) if v.kind == "jacobi"] == [(0, 1, 2)]


def test_stratification_violation():
    # V2 not generated by V1
    g = GradedAlgebra([2, 2], {(0, 1): {2: 1}})
    assert "stratification" in {v.kind for v in validate(g)}


def test_bracket_examples():
    h1 = heisenberg_algebra(1)
    X1, X2, Y = (h1.basis_vector(i) for i in range(3))
    assert h1.bracket(X1, X2) == vec_scale(-1, Y)
    bp = build(catalog.get("diag-n3").build())
    q = bp.quotient
    assert q.bracket(vec_add(bp.X(0, 0), bp.X(1, 0)), bp.X(0, 1)) == vec_scale(-1, bp.Y(0))


@given(st.lists(small_fractions, min_size=8, max_size=8))
def test_bracket_self_zero(coords):
    q = build(catalog.get("diag-n3").build()).quotient
    x = q.vector(coords)
    assert all(c.is_zero() for c in q.bracket(x, x))


def test_ranks():
    h2 = heisenberg_algebra(2)
    for i in range(4):
        assert h2.ad_rank(h2.basis_vector(i)) == 1
    bp = build(catalog.get("diag-n3").build())
    assert bp.quotient.ad_rank(vec_add(bp.X(0, 0), bp.X(1, 0))) == 2
    ab = GradedAlgebra([3], {})
    assert ab.ad_rank(ab.vector([1, 2, 3])) == 0


def test_homogeneous_dimension():
    assert heisenberg_algebra(1).homogeneous_dimension() == 4
    assert build(catalog.get("diag-n3").build()).quotient.homogeneous_dimension() == 10
    assert catalog.get("h1c").build().homogeneous_dimension() == 8


def test_direct_sum():
    h1 = heisenberg_algebra(1)
    s = direct_sum([h1, h1])
    assert (s.dim, s.homogeneous_dimension()) == (6, 8)
    assert direct_sum([h1]).structure == h1.structure
    five = direct_sum([h1] * 5)
    assert five.layer_dims == (10, 5)


def test_quotient_examples():
    h1 = heisenberg_algebra(1)
    same, proj = quotient(h1, Subspace.zero(3))
    assert same.structure == h1.structure
    three = direct_sum([h1] * 3)
    q, _ = quotient(three, Subspace([(0,) * 6 + (1, 1, 1)], 9))
    assert (q.dim, q.homogeneous_dimension()) == (8, 10)
    two = direct_sum([h1] * 2)
    q, _ = quotient(two, Subspace([(0,) * 4 + (1, 1)], 6))
    assert len(darboux_basis(q).X) == 4


@pytest.mark.parametrize("name", ["diag-n3", "z5-k2", "two-triples", "h2-diag-n2"])
def test_projection_is_bracket_homomorphism(name):
    bp = build(catalog.get(name).build())
    amb, q, proj = bp.ambient, bp.quotient, bp.projection
    for a in range(amb.dim):
        for b in range(amb.dim):
            ea, eb = amb.basis_vector(a), amb.basis_vector(b)
            assert proj.apply(amb.bracket(ea, eb)) == q.bracket(proj.apply(ea), proj.apply(eb))


def test_quotient_rejects_non_ideal():
    h1 = heisenberg_algebra(1)
    with pytest.raises(ValueError):
        quotient(h1, Subspace([(1, 0, 0)], 3))


def test_complexify():
    ab = complexify(GradedAlgebra([2], {}))
    assert ab.dim == 4 and ab.J is not None and validate(ab) == []
    h1C = complexify(heisenberg_algebra(1))
    assert h1C.dim == 6
    assert h1C.ad_rank(h1C.basis_vector(0), over="complex") == 1
    J = h1C.J
    for i in range(1, 2):
        assert h1C.ad_matrix(h1C.basis_vector(i)) @ J == J @ h1C.ad_matrix(h1C.basis_vector(i))


def test_eigenspace_split():
    gC = complexify(catalog.get("h1c").build())
    plus, minus = jc_eigenspace_split(gC)
    assert plus.dim == minus.dim == 6
    for u in plus.basis:
        for v in minus.basis:
            assert all(x.is_zero() for x in gC.bracket(u, v))
    from carnotpq.lie import conjugation_matrix

    C = conjugation_matrix(catalog.get("h1c").build())
    assert plus.image(C) == minus


def test_center_examples():
    h1 = heisenberg_algebra(1)
    assert h1.center() == Subspace([(0, 0, 1)], 3)
    assert h1.centralizer(h1.basis_vector(0)) & h1.layer_subspace(1) == Subspace([(1, 0, 0)], 3)
    q = build(catalog.get("diag-n3").build()).quotient
    assert q.center() == q.layer_subspace(2) and q.center().dim == 2


# -- group law oracle: 3x3 unipotent matrices for h1 --------------------------


def _heis_matrix(v):
    x1, x2, y = (Fraction(c.a) for c in v)
    return [[0, x1, -y], [0, 0, x2], [0, 0, 0]]


def _mat_mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)] for i in range(3)]


def _exp(n):
    n2 = _mat_mul(n, n)
    return [[(i == j) + n[i][j] + Fraction(n2[i][j]) / 2 for j in range(3)] for i in range(3)]


def _log(m):
    n = [[m[i][j] - (i == j) for j in range(3)] for i in range(3)]
    n2 = _mat_mul(n, n)
    return [[n[i][j] - Fraction(n2[i][j]) / 2 for j in range(3)] for i in range(3)]


@given(st.lists(small_fractions, min_size=6, max_size=6))
def test_bch_matches_matrix_group(c):
    h1 = heisenberg_algebra(1)
    A, B = h1.vector(c[:3]), h1.vector(c[3:])
    prod = _log(_mat_mul(_exp(_heis_matrix(A)), _exp(_heis_matrix(B))))
    assert _heis_matrix(bch_multiply(h1, A, B)) == prod


def test_bch_examples():
    h1 = heisenberg_algebra(1)
    X1, X2, Y = (h1.basis_vector(i) for i in range(3))
    half = Field(0)(Fraction(1, 2))
    assert bch_multiply(h1, X1, h1.zero()) == X1
    assert bch_multiply(h1, X1, X2) == vec_add(vec_add(X1, X2), vec_scale(-half, Y))
    assert bch_conjugate(h1, X1, X2) == vec_add(X2, Y)
    assert bch_conjugate(h1, Y, X2) == X2


@pytest.mark.parametrize("name", ["h2", "diag-n3", "z5-k2"])
def test_bch_group_axioms(name):
    g = algebra_of(catalog.get(name))
    rng = random.Random(1)
    F = g.field
    for _ in range(20):
        A, B, C = (g.vector([F(rng.randint(-3, 3)) for _ in range(g.dim)]) for _ in range(3))
        assert bch_multiply(g, bch_multiply(g, A, B), C) == bch_multiply(g, A, bch_multiply(g, B, C))
        assert bch_multiply(g, A, bch_inverse(g, A)) == g.zero()
        assert bch_defect(g, A, B) == vec_scale(F(1) / 2, g.bracket(A, B))


def test_bch_rejects_step_three():
    g = GradedAlgebra([2, 1, 1], {(0, 1): {2: -1}, (0, 2): {3: -1}})
    with pytest.raises(ValueError):
        bch_multiply(g, g.basis_vector(0), g.basis_vector(1))


def test_graded_map_operations():
    h1 = heisenberg_algebra(1)
    delta = GradedMap.from_blocks([Matrix.diagonal([2, 2]), Matrix.diagonal([4])])
    assert is_automorphism(h1, delta)
    assert delta.compose(delta.inverse()) == GradedMap.from_blocks([Matrix.identity(2), Matrix.identity(1)])
    wrong = GradedMap.from_blocks([Matrix.diagonal([2, 2]), Matrix.diagonal([2])])
    assert not is_automorphism(h1, wrong)
