import pytest

from carnotpq import catalog
from carnotpq.field import Field
from carnotpq.forms import NEG_INF, LinearCoeff, evaluate, interior, is_closed, theta_monomial, volume_form, weight
from carnotpq.lie import GradedMap
from carnotpq.linalg import Matrix
from carnotpq.product_quotient import aut_verify, build, diagonal_presentation, heisenberg_algebra
from carnotpq.pullback import (
    TrivialKernelError,
    admissible_pair,
    check_block_locality,
    dilation,
    dual_two_forms,
    k_hat_basis,
    kernel_two_vectors,
    make_beta,
    make_gamma,
    make_omega_ij,
    make_tau_diff,
    monomial_generators,
    sample_automorphisms,
    verify_adjugate,
    verify_degree2_suite,
    verify_higher_suite,
    verify_key_wedge_diagonal,
    verify_omega_pullback,
    verify_tau_pullback,
    z_multivector,
)

F0 = Field(0)
DIAG3 = build(diagonal_presentation("real", 1, 3))
Z5K2 = build(catalog.z5_k2())


def transposition(bp, sigma):
    p = bp.presentation
    rows = [[0] * (2 * p.n) for _ in range(2 * p.n)]
    for j in range(p.n):
        for r in range(2):
            rows[sigma[j] * 2 + r][j * 2 + r] = 1
    rep = aut_verify(p, Matrix(rows, p.d))
    assert rep.ok
    return rep.ambient_map


# -- constructors -------------------------------------------------------------


def test_constructor_degrees_and_weights():
    q = DIAG3.quotient
    nu = q.homogeneous_dimension()
    w = make_omega_ij(DIAG3, 0, 1)
    assert w.degree == 3 and weight(q, w) == -4 and is_closed(q, w)
    assert make_omega_ij(DIAG3, 1, 1).is_zero()
    beta = make_beta(DIAG3, 0)
    assert beta.degree == q.dim - 3
    ixb = interior(DIAG3.X(1, 0), beta)
    assert ixb.degree == q.dim - 4 and weight(q, ixb) <= -nu + 5
    assert make_gamma(DIAG3, 2).degree == 2


def test_tau_diff_requires_descent():
    t = make_tau_diff(DIAG3, 0, 2)
    assert t.degree == 1
    assert make_tau_diff(DIAG3, 1, 1).is_zero()


# -- admissibility ------------------------------------------------------------


def test_admissible_diagonal_pair():
    q = DIAG3.quotient
    alpha = make_omega_ij(DIAG3, 0, 1)
    beta = interior(DIAG3.X(1, 0), make_beta(DIAG3, 0))
    rep = admissible_pair(q, alpha, beta)
    assert (rep.deg_alpha, rep.deg_beta, rep.weight_alpha) == (3, 4, -4)
    assert rep.weight_alpha + rep.weight_beta <= -q.homogeneous_dimension() + 1
    assert rep.admissible


def test_volume_form_never_admissible():
    q = DIAG3.quotient
    rep = admissible_pair(q, volume_form(q.dim), theta_monomial(q.dim, [0]))
    assert not rep.degree_ok and not rep.admissible


def test_conformal_pair_admissible():
    bp = Z5K2
    q = bp.quotient
    nu = q.homogeneous_dimension()
    k = 0
    for m in k_hat_basis(bp.presentation, exclude=k):
        beta = interior(bp.X(k, 0), interior(z_multivector(bp, m), bp.omega()))
        rep = admissible_pair(q, make_gamma(bp, 1), beta)
        assert rep.deg_beta == q.dim - 3 and rep.weight_beta <= -nu + 3
        assert rep.admissible


def test_wrong_layer_perturbation_flips_weight_verdict():
    q = DIAG3.quotient
    alpha = make_omega_ij(DIAG3, 0, 1)
    beta = interior(DIAG3.X(1, 0), make_beta(DIAG3, 0))
    # a codegree-4 monomial missing both second-layer indices has weight -4 > -5
    heavy = theta_monomial(q.dim, [2, 3, 4, 5])
    rep = admissible_pair(q, alpha, beta + heavy)
    assert not rep.weight_ok and not rep.admissible


def test_admissibility_report_serializes_neg_inf():
    q = DIAG3.quotient
    zero = theta_monomial(q.dim, [0]).scale(0)
    d = admissible_pair(q, zero, zero).to_dict()
    assert d["weight_alpha"] == "-inf"


# -- key wedge table ---------------------------------------------------------


def _row(report, k, l, m, X):
    return next(r for r in report.rows if (r.k, r.l, r.m, r.X) == (k, l, m, X))


def test_key_wedge_examples():
    rep = verify_key_wedge_diagonal(DIAG3)
    X4 = DIAG3.first_layer(1)[0]
    assert _row(rep, 0, 1, 0, X4).computed == LinearCoeff(0, {X4: -1})
    X0 = DIAG3.first_layer(0)[0]
    assert _row(rep, 0, 1, 2, X0).computed.is_zero()
    assert _row(rep, 0, 1, 1, X0).computed == LinearCoeff(0, {X0: 1})


def test_key_wedge_full_table():
    rep = verify_key_wedge_diagonal(DIAG3)
    assert len(rep.rows) == 27 * 4 and len(rep.closedness) == 12
    assert rep.passed and not rep.global_sign_flip and rep.failures() == []


def test_key_wedge_n4():
    rep = verify_key_wedge_diagonal(diagonal_presentation("real", 1, 4))
    assert rep.passed and len(rep.rows) == 64 * 6


def test_key_wedge_requires_diagonal():
    with pytest.raises(ValueError):
        verify_key_wedge_diagonal(catalog.z5_k2())


# -- diagonal pullback patterns ------------------------------------------------


def test_tau_and_omega_pullbacks_on_sampled_automorphisms():
    for phi in sample_automorphisms(DIAG3.presentation, 10, seed=7):
        t = verify_tau_pullback(DIAG3, phi)
        o = verify_omega_pullback(DIAG3, phi)
        assert t["passed"] and o["passed"]
        assert o["lambda_squared"] == t["lambda"] ** 2


def test_pullback_pattern_Q_sqrt5_lambda_squared_in_field():
    p = diagonal_presentation("real", 1, 3, d=5)
    bp = build(p)
    r = Field(5).sqrt_d()
    delta = dilation(bp.ambient.layer_dims, r, 5)
    o = verify_omega_pullback(bp, delta)
    assert o["passed"] and o["lambda_squared"] == 25


# -- conformal suites -------------------------------------------------------


def test_degree2_identity_and_dilation():
    p = Z5K2.presentation
    ident = GradedMap(Matrix.identity(Z5K2.ambient.dim, 5), Z5K2.ambient.layer_dims)
    assert verify_degree2_suite(Z5K2, ident).passed
    delta = dilation(Z5K2.ambient.layer_dims, 2, 5)
    rep = verify_degree2_suite(Z5K2, delta)
    assert rep.passed


def test_degree2_cyclic_shift():
    phi = transposition(Z5K2, [1, 2, 3, 4, 0])
    rep = verify_degree2_suite(Z5K2, phi)
    assert rep.passed
    assert all(r.checked > 0 for r in rep.results)


def test_adjugate_examples():
    bp = DIAG3
    r = F0(3)
    rep = verify_adjugate(bp, dilation(bp.ambient.layer_dims, r))
    assert rep.passed and rep.info["det"] == r**10 and rep.info["lambda"] == r**2 and rep.info["exponent"] == 5
    swap = transposition(bp, [1, 0, 2])
    rep = verify_adjugate(bp, swap)
    assert rep.passed and rep.info["lambda"] == 1 and abs(rep.info["det"]) == 1
    comp = swap.compose(dilation(bp.ambient.layer_dims, 2))
    rep = verify_adjugate(bp, comp)
    assert rep.passed and rep.info["lambda"] == 4 and abs(rep.info["det"]) == 2**10


@pytest.mark.parametrize("name", ["z5-k2", "z5-k3", "diag-n3"])
def test_conformal_suites_on_sampled_automorphisms(name):
    p = catalog.get(name).build()
    bp = build(p)
    for phi in sample_automorphisms(p, 3, seed=11):
        assert verify_degree2_suite(bp, phi).passed
        assert verify_adjugate(bp, phi).passed


# -- two-vector kernels and the higher suite ---------------------------------


def test_kernel_two_vectors():
    h2 = heisenberg_algebra(2)
    ker = kernel_two_vectors(h2, range(4))
    assert len(ker.pairs) == 6 and ker.dim == 5
    for mv in ker.multivectors():
        image = [F0.zero] * h2.dim
        for (a, b), c in mv.items():
            image = [x + c * y for x, y in zip(image, h2.bracket(h2.basis_vector(a), h2.basis_vector(b)))]
        assert all(x.is_zero() for x in image)
    with pytest.raises(TrivialKernelError):
        kernel_two_vectors(heisenberg_algebra(1), range(2))


def test_dual_two_forms_normalization():
    h2 = heisenberg_algebra(2)
    ker = kernel_two_vectors(h2, range(4))
    duals = dual_two_forms(h2, range(4))
    for i, alpha in enumerate(duals):
        for j, X in enumerate(ker.multivectors()):
            assert evaluate(alpha, X) == (1 if i == j else 0)


def test_higher_suite_h2_pair():
    p = catalog.get("h2-diag-n2").build()
    rep = verify_higher_suite(p)
    assert rep.passed and rep.info["kernel_dims"] == [5, 5]
    names = {r.name for r in rep.results}
    assert "γ ∧ dφ ∧ i_Y i_Y' i_Z ω = -γ(Y,Y') c_Z ω" in names
    assert all(r.checked > 0 for r in rep.results)


def test_higher_suite_complex():
    rep = verify_higher_suite(catalog.get("h1c-diag-n3").build())
    assert rep.passed and rep.info["kernel_dims"] == [4, 4, 4]


def test_higher_suite_rejects_first_heisenberg():
    with pytest.raises(TrivialKernelError):
        verify_higher_suite(DIAG3)


def test_block_locality():
    p = catalog.get("h2-diag-n2").build()
    bp = build(p)
    for phi in sample_automorphisms(p, 3, seed=1):
        assert check_block_locality(bp, bp.descend_map(phi))["passed"]
