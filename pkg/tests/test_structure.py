from itertools import combinations

import pytest

from carnotpq import catalog
from carnotpq.field import Field
from carnotpq.lie import GradedAlgebra, GradedMap, complexify, conjugation_matrix, is_automorphism, transport
from carnotpq.linalg import Matrix, Subspace, block_diagonal
from carnotpq.product_quotient import build, complex_first_layer_witnesses, heisenberg_algebra, verify_axioms
from carnotpq.pullback import monomial_generators, sample_automorphisms
from carnotpq.structure import (
    DegenerateFormError,
    classify_trichotomy,
    complex_linearity_classify,
    darboux_basis,
    heisenberg_summands,
    rank_one_sieve,
)


def quotient_of(name):
    return build(catalog.get(name).build())


def check_darboux(g, basis):
    m = len(basis.X) // 2
    for a in range(2 * m):
        for b in range(2 * m):
            expected = [Field(g.d).zero] * g.dim
            if a % 2 == 0 and b == a + 1:
                expected = [-x for x in basis.Y]
            elif b % 2 == 0 and a == b + 1:
                expected = list(basis.Y)
            assert g.bracket(basis.X[a], basis.X[b]) == tuple(expected)


def test_darboux_rescale_example():
    g = GradedAlgebra([2, 1], {(0, 1): {2: 2}})
    basis = darboux_basis(g)
    half = Field(0)(1) / 2
    assert basis.X[0] == (1, 0, 0) and basis.X[1] == (0, -half, 0)
    check_darboux(g, basis)


def test_darboux_standard_is_identity():
    h2 = heisenberg_algebra(2)
    basis = darboux_basis(h2)
    assert basis.X == [h2.basis_vector(i) for i in range(4)]


@pytest.mark.parametrize("name", ["diag-n2", "h2-diag-n2"])
def test_darboux_on_heisenberg_quotients(name):
    q = quotient_of(name).quotient
    basis = darboux_basis(q)
    check_darboux(q, basis)
    assert basis.change_of_basis(q).matrix.det() != 0


def test_darboux_rejects_degenerate():
    g = catalog.get("h1-plus-q").build()
    with pytest.raises((DegenerateFormError, ValueError)):
        darboux_basis(g)


def test_sieve_recovers_diagonal_planes():
    bp = quotient_of("diag-n3")
    sieve = rank_one_sieve(bp.quotient)
    planes = {W for W, _ in sieve.heisenberg_blocks(bp.quotient)}
    expected = {Subspace.coordinate(bp.first_layer(k), bp.quotient.dim) for k in range(3)}
    assert planes == expected


def test_sieve_on_h2_spans_first_layer():
    h2 = heisenberg_algebra(2)
    assert rank_one_sieve(h2).rank_one_span(h2) == h2.layer_subspace(1)


def test_summands_examples():
    dec = heisenberg_summands(quotient_of("diag-n3").quotient)
    assert dec.status == "recognized" and dec.m == [1, 1, 1]
    dec = heisenberg_summands(heisenberg_algebra(2))
    assert dec.status == "recognized" and dec.m == [2]
    dec = heisenberg_summands(catalog.get("h1-plus-q").build())
    assert dec.status == "refuted" and dec.witness is not None


@pytest.mark.parametrize("name", ["diag-n3", "z5-k2", "two-triples", "h1-plus-h2"])
def test_recognized_decomposition_invariants(name):
    obj = catalog.get(name).build()
    g = obj if isinstance(obj, GradedAlgebra) else build(obj).quotient
    dec = heisenberg_summands(g)
    assert dec.status == "recognized"
    assert sum(S.dim for S in dec.first_layers) == g.layer_dims[0]
    for a, b in combinations(dec.first_layers, 2):
        assert (a & b).dim == 0
        assert all(not any(g.bracket(u, v)) for u in a.basis for v in b.basis)


@pytest.mark.parametrize("name", ["diag-n3", "z5-k2"])
def test_decomposition_transported_by_automorphisms(name):
    p = catalog.get(name).build()
    bp = build(p)
    q = bp.quotient
    base = set(heisenberg_summands(q).first_layers)
    for phi in sample_automorphisms(p, 3, seed=5):
        qm = bp.descend_map(phi)
        moved = transport(q, qm.inverse())
        got = set(heisenberg_summands(moved).first_layers)
        assert got == {S.image(qm.matrix.inverse()) for S in base}


def test_classify_examples():
    assert classify_trichotomy(GradedAlgebra([3], {})).kind == "abelian"
    v = classify_trichotomy(heisenberg_algebra(3))
    assert v.label() == "heisenberg(R,3)"
    v = classify_trichotomy(quotient_of("z5-k2").quotient)
    assert (v.kind, v.F, v.n, v.m) == ("product_quotient_candidate", "real", 5, 1)


def test_classify_invariant_subspace():
    v = classify_trichotomy(catalog.get("h1-plus-h2").build())
    assert v.kind == "invariant_subspace" and v.W.dim == 2


def test_complex_sieve_finds_both_eigenspaces():
    bp = quotient_of("h1c-diag-n3")
    v = classify_trichotomy(bp.quotient, (), complex_first_layer_witnesses(bp))
    assert v.kind == "product_quotient_candidate" and v.F == "complex" and v.n == 3


def test_complex_linearity():
    h1c = catalog.get("h1c").build()
    ident = GradedMap(Matrix.identity(h1c.dim, h1c.d), h1c.layer_dims)
    r = complex_linearity_classify(h1c, ident)
    assert r["kind"] == "linear" and r["det_second_layer"].sign() > 0 and r["consistent"]

    conj = GradedMap(conjugation_matrix(heisenberg_algebra(1)), h1c.layer_dims)
    assert is_automorphism(h1c, conj)
    r = complex_linearity_classify(h1c, conj)
    assert r["kind"] == "antilinear" and r["det_second_layer"].sign() < 0 and r["consistent"]

    J = h1c.J
    first = J.submatrix(range(4), range(4))
    Jmap = GradedMap.from_blocks([first, Matrix.identity(2).scale(-1)])
    assert is_automorphism(h1c, Jmap)
    assert complex_linearity_classify(h1c, Jmap)["kind"] == "linear"


@pytest.mark.parametrize("name", ["diag-n3", "z5-k2", "z5-k3", "weighted-n3"])
def test_only_trivial_factor_sums_are_invariant(name):
    p = catalog.get(name).build()
    assert verify_axioms(p).passed
    bp = build(p)
    gens = monomial_generators(p)
    n = p.n
    amb_dim = bp.ambient.dim
    for r in range(1, n):
        for subset in combinations(range(n), r):
            S = Subspace.coordinate([c for k in subset for c in bp.first_layer(k)], amb_dim, p.d)
            invariant = all(S.image(phi.matrix) == S for phi in gens)
            assert not invariant, subset
