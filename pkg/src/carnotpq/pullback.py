"""Closed invariant forms used in pullback arguments, and exact checks of
the wedge identities they satisfy.

A pair ``(alpha, beta)`` of closed left-invariant forms is admissible when
``deg alpha + deg beta = N - 1`` and ``wt alpha + wt beta <= -nu + 1``.  The
checks below never integrate anything: each identity is multilinear in its
vector arguments, so evaluating it on every basis tuple is a complete
verification.  The unknown test function enters only through the formal
one-form ``d phi = sum_i c_i theta_i``, and ``phi d(beta)`` terms are handled
by checking ``d beta = 0`` separately.

Presentations are real ``m = 1`` products for the diagonal and conformal
checks, and ``m >= 2`` or complex products for the two-vector checks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .field import Field
from .forms import (
    NEG_INF,
    Form,
    IdentityResult,
    LinearCoeff,
    MultiVector,
    basis_multivector,
    descend,
    differential,
    evaluate,
    formal_dphi,
    interior,
    is_closed,
    omega_ratio,
    pullback,
    pushforward,
    theta_monomial,
    weight,
    wedge,
    wedge_vectors,
)
from .lie import GradedAlgebra, GradedMap
from .linalg import Matrix, Subspace, nullspace
from .product_quotient import (
    COMPLEX,
    REAL,
    BuiltPresentation,
    Presentation,
    aut_verify,
    build,
    factor_lambda_s_p,
    permutation_matrix,
    realize_monomial,
    stabilizer_second_layer_test,
)


# ---------------------------------------------------------------------------
# admissibility


@dataclass
class AdmissibilityReport:
    deg_alpha: int
    deg_beta: int
    weight_alpha: float | int
    weight_beta: float | int
    closed_alpha: bool
    closed_beta: bool
    N: int
    nu: int

    @property
    def degree_ok(self) -> bool:
        return self.deg_alpha + self.deg_beta == self.N - 1

    @property
    def weight_ok(self) -> bool:
        return self.weight_alpha + self.weight_beta <= -self.nu + 1

    @property
    def admissible(self) -> bool:
        return self.closed_alpha and self.closed_beta and self.degree_ok and self.weight_ok

    def to_dict(self) -> dict:
        def w(x):
            return "-inf" if x == NEG_INF else x

        return {
            "deg_alpha": self.deg_alpha,
            "deg_beta": self.deg_beta,
            "weight_alpha": w(self.weight_alpha),
            "weight_beta": w(self.weight_beta),
            "closed_alpha": self.closed_alpha,
            "closed_beta": self.closed_beta,
            "N": self.N,
            "nu": self.nu,
            "degree_ok": self.degree_ok,
            "weight_ok": self.weight_ok,
            "admissible": self.admissible,
        }


def admissible_pair(g: GradedAlgebra, alpha: Form, beta: Form) -> AdmissibilityReport:
    """Degree, weight and closedness conditions for pulling back ``alpha ^ d(phi beta)``."""
    for f in (alpha, beta):
        if f.n != g.dim:
            raise ValueError("form does not live on the algebra")
    return AdmissibilityReport(
        alpha.degree,
        beta.degree,
        weight(g, alpha),
        weight(g, beta),
        is_closed(g, alpha),
        is_closed(g, beta),
        g.dim,
        g.homogeneous_dimension(),
    )


# ---------------------------------------------------------------------------
# constructors on real m = 1 presentations


def _require_real_h1(bp: BuiltPresentation):
    p = bp.presentation
    if p.F != REAL or p.m != 1:
        raise ValueError("this construction needs a real product of first Heisenberg algebras")


def make_gamma(bp: BuiltPresentation, i: int) -> Form:
    """``theta_{X_{i,0}} ^ theta_{X_{i,1}}`` on the quotient."""
    return bp.gamma(i)


def make_tau_diff(bp: BuiltPresentation, i: int, j: int) -> Form:
    """``tau~_i - tau~_j`` descended to the quotient (fails unless it annihilates K)."""
    _require_real_h1(bp)
    up = bp.tau_tilde(i) - bp.tau_tilde(j)
    return descend(up, bp.ambient, bp.K)


def make_omega_ij(bp: BuiltPresentation, i: int, j: int) -> Form:
    """``(gamma_i + gamma_j) ^ tau_{i,j}``; checked to be closed."""
    if i == j:
        return Form(bp.quotient.dim, 3, {}, bp.quotient.d)
    w = wedge(make_gamma(bp, i) + make_gamma(bp, j), make_tau_diff(bp, i, j))
    if not is_closed(bp.quotient, w):
        raise AssertionError(f"omega_{i}{j} is not closed")
    return w


def make_beta(bp: BuiltPresentation, m: int) -> Form:
    """``i_{Y_m} i_{X_{m,0}} i_{X_{m,1}} omega`` (codegree 3)."""
    _require_real_h1(bp)
    om = bp.omega()
    return interior(bp.Y(m), interior(bp.X(m, 0), interior(bp.X(m, 1), om)))


def _symbolic(coeff, d: int) -> LinearCoeff:
    if isinstance(coeff, LinearCoeff):
        return coeff
    return LinearCoeff(coeff, None, d)


def _sign_against(computed: LinearCoeff, expected: LinearCoeff) -> int:
    """+1 if equal, -1 if exactly opposite and nonzero, 0 otherwise."""
    if computed == expected:
        return 1
    if not expected.is_zero() and computed == -expected:
        return -1
    return 0


def _coeff_dict(c: LinearCoeff) -> dict:
    return {"const": c.const, "terms": {str(k): v for k, v in sorted(c.terms.items())}}


# ---------------------------------------------------------------------------
# diagonal one-dimensional quotients


@dataclass
class KeyWedgeRow:
    k: int
    l: int
    m: int
    X: int
    computed: LinearCoeff
    expected: LinearCoeff

    @property
    def match(self) -> bool:
        return self.computed == self.expected

    @property
    def sign(self) -> int:
        return _sign_against(self.computed, self.expected)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "l": self.l,
            "m": self.m,
            "X": self.X,
            "computed": _coeff_dict(self.computed),
            "expected": _coeff_dict(self.expected),
            "match": self.match,
            "sign": self.sign,
        }


@dataclass
class KeyWedgeReport:
    rows: list[KeyWedgeRow] = field(default_factory=list)
    closedness: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.match for r in self.rows) and all(c["closed"] for c in self.closedness)

    @property
    def global_sign_flip(self) -> bool:
        """True when every row fails only by an overall sign."""
        nonzero = [r for r in self.rows if not r.expected.is_zero()]
        return bool(nonzero) and all(r.sign == -1 for r in nonzero) and all(
            r.match for r in self.rows if r.expected.is_zero()
        )

    def failures(self) -> list[KeyWedgeRow]:
        return [r for r in self.rows if not r.match]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "global_sign_flip": self.global_sign_flip,
            "rows": [r.to_dict() for r in self.rows],
            "closedness": self.closedness,
        }


def is_diagonal_dim1(p: Presentation) -> bool:
    K = p.K_subspace()
    return p.F == REAL and K.dim == 1 and K == Subspace([(1,) * p.n], p.n, p.d)


def verify_key_wedge_diagonal(p: Presentation | BuiltPresentation) -> KeyWedgeReport:
    """Tabulate the coefficient of omega in ``omega_kl ^ d phi ^ i_X beta_m``.

    For each factor m and each first-layer basis vector X outside factor m,
    ``d(i_X beta_m) = 0`` is checked first, so ``d(phi i_X beta_m)`` reduces
    to ``d phi ^ i_X beta_m``.  The expected coefficient is
    ``-(delta_km - delta_lm) c_X``.
    """
    bp = p if isinstance(p, BuiltPresentation) else build(p)
    if not is_diagonal_dim1(bp.presentation):
        raise ValueError("the table needs real first Heisenberg factors with the diagonal K")
    q = bp.quotient
    n = bp.n
    d = q.d
    om = bp.omega()
    dphi = formal_dphi(q.dim, d)
    omegas = {(k, l): make_omega_ij(bp, k, l) for k in range(n) for l in range(n)}
    rep = KeyWedgeReport()
    for m in range(n):
        beta = make_beta(bp, m)
        for j in range(n):
            if j == m:
                continue
            for x in bp.first_layer(j):
                ixb = interior(q.basis_vector(x), beta)
                rep.closedness.append({"m": m, "X": x, "closed": differential(q, ixb).is_zero(), "weight": weight(q, ixb)})
                tail = wedge(dphi, ixb)
                for k in range(n):
                    for l in range(n):
                        top = wedge(omegas[(k, l)], tail)
                        got = _symbolic(omega_ratio(top, om), d)
                        factor = -((k == m) - (l == m))
                        exp = LinearCoeff(0, {x: factor}, d)
                        rep.rows.append(KeyWedgeRow(k, l, m, x, got, exp))
    return rep


def second_layer_permutation(M: Matrix) -> tuple[list[int], list]:
    """For a monomial matrix: ``sigma`` with ``M e_j`` on ``e_{sigma(j)}``, and the entries."""
    sigma, entries = [], []
    for j in range(M.ncols):
        nz = [i for i in range(M.nrows) if not M.rows[i][j].is_zero()]
        if len(nz) != 1:
            raise ValueError("second-layer action is not monomial")
        sigma.append(nz[0])
        entries.append(M.rows[nz[0]][j])
    return sigma, entries


def verify_tau_pullback(bp: BuiltPresentation, phi: GradedMap) -> dict:
    """Check ``Phi^* tau~_i = lam tau~_{sigma^-1(i)}`` with one scalar lam for all i."""
    _require_real_h1(bp)
    n = bp.n
    sigma, entries = second_layer_permutation(phi.block(2))
    inv = [0] * n
    for j, i in enumerate(sigma):
        inv[i] = j
    lam = entries[0]
    ok = all(x == lam for x in entries)
    rows = []
    for i in range(n):
        got = pullback(phi, bp.tau_tilde(i))
        exp = bp.tau_tilde(inv[i]).scale(lam)
        rows.append({"i": i, "match": got == exp})
        ok = ok and got == exp
    return {"passed": ok, "lambda": lam, "sigma": sigma, "rows": rows}


def verify_omega_pullback(bp: BuiltPresentation, phi: GradedMap) -> dict:
    """Check ``Phi^* omega_ij = lam^2 omega_{sigma^-1(i) sigma^-1(j)}`` on the quotient."""
    tau = verify_tau_pullback(bp, phi)
    lam2 = tau["lambda"] * tau["lambda"]
    sigma = tau["sigma"]
    n = bp.n
    inv = [0] * n
    for j, i in enumerate(sigma):
        inv[i] = j
    qmap = bp.descend_map(phi)
    rows = []
    ok = tau["passed"]
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            got = pullback(qmap, make_omega_ij(bp, i, j))
            exp = make_omega_ij(bp, inv[i], inv[j]).scale(lam2)
            rows.append({"i": i, "j": j, "match": got == exp})
            ok = ok and got == exp
    return {"passed": ok, "lambda_squared": lam2, "sigma": sigma, "rows": rows}


# ---------------------------------------------------------------------------
# conformal quotients with dim K >= 1


def dilation(layer_dims: Sequence[int], r, d: int = 0) -> GradedMap:
    """``delta_r``: multiplication by ``r^j`` on layer j."""
    F = Field(d)
    r = F(r)
    return GradedMap.from_blocks([Matrix.diagonal([r**j] * n, d) for j, n in enumerate(layer_dims, 1)], d)


def k_hat_basis(p: Presentation, exclude: int | None = None) -> list[tuple]:
    """Basis of ``{m : sum m_i Y~_i in K}``, optionally intersected with ``e_exclude^perp``."""
    K = p.K_subspace()
    if exclude is not None:
        K = K & Subspace.coordinate([c for c in range(p.n) if c != exclude], p.n, p.d)
    return list(K.basis)


def z_multivector(bp: BuiltPresentation, coeffs: Sequence) -> MultiVector:
    """``sum_i m_i X_{i,0} ^ X_{i,1}`` on the quotient."""
    q = bp.quotient
    out = MultiVector(q.dim, 2, {}, q.d)
    for i, c in enumerate(coeffs):
        if not c.is_zero():
            out = out + bp.Z(i).scale(c)
    return out


@dataclass
class SuiteReport:
    results: list[IdentityResult] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def __getitem__(self, name: str) -> IdentityResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "results": [r.to_dict() for r in self.results], "info": self.info}


def verify_degree2_suite(bp: BuiltPresentation, phi: GradedMap) -> SuiteReport:
    """Closedness of ``i_Z omega`` and ``i_X i_Z omega`` and the wedge identity

    ``Phi^*(gamma_i) ^ d phi ^ i_X i_Z omega = (lam S P m)_i c_X omega``

    for ``Z = sum m_i Z_i``, m in the K-coefficient space (orthogonal to e_k
    for X in factor k), and ``Phi`` a K-preserving ambient automorphism.
    """
    _require_real_h1(bp)
    p = bp.presentation
    q = bp.quotient
    d = q.d
    om = bp.omega()
    dphi = formal_dphi(q.dim, d)
    qmap = bp.descend_map(phi)
    M = phi.block(2)
    lsp = factor_lambda_s_p(M)
    rep = SuiteReport()
    rep.info = {"lambda": lsp.lam, "signs": lsp.signs, "sigma": lsp.sigma}
    recon = IdentityResult("lam S P = second-layer action")
    recon.record(lsp.reconstruct(d) == M, {})
    rep.results.append(recon)

    closed_z = IdentityResult("d(i_Z ω) = 0")
    for a, mvec in enumerate(k_hat_basis(p)):
        closed_z.record(differential(q, interior(z_multivector(bp, mvec), om)).is_zero(), {"m": a})
    rep.results.append(closed_z)

    closed_xz = IdentityResult("d(i_X i_Z ω) = 0")
    wedge_id = IdentityResult("Φ*γ_i ∧ dφ ∧ i_X i_Z ω = (λSPm)_i c_X ω")
    pulled_gamma = [pullback(qmap, bp.gamma(i)) for i in range(p.n)]
    lsp_matrix = lsp.reconstruct(d)
    for k in range(p.n):
        for a, mvec in enumerate(k_hat_basis(p, exclude=k)):
            Z = z_multivector(bp, mvec)
            image = lsp_matrix.apply(mvec)
            for x in bp.first_layer(k):
                ixz = interior(q.basis_vector(x), interior(Z, om))
                closed_xz.record(differential(q, ixz).is_zero(), {"k": k, "m": a, "X": x})
                tail = wedge(dphi, ixz)
                for i in range(p.n):
                    got = _symbolic(omega_ratio(wedge(pulled_gamma[i], tail), om), d)
                    exp = LinearCoeff(0, {x: image[i]}, d)
                    wedge_id.record(got == exp, {"i": i, "k": k, "m": a, "X": x, "computed": _coeff_dict(got), "expected": _coeff_dict(exp)})
    rep.results += [closed_xz, wedge_id]
    return rep


def verify_adjugate(bp: BuiltPresentation, phi: GradedMap) -> SuiteReport:
    """``|det Phi| = lam^(2n - dim K)`` and, for every basis two-form alpha,
    ``Phi^*(i_Z omega) ^ alpha = det Phi alpha(Phi^-1 Z) omega``."""
    _require_real_h1(bp)
    p = bp.presentation
    q = bp.quotient
    d = q.d
    om = bp.omega()
    qmap = bp.descend_map(phi)
    lsp = factor_lambda_s_p(phi.block(2))
    det = qmap.matrix.det()
    dimK = p.K_subspace().dim
    rep = SuiteReport()
    rep.info = {"det": det, "lambda": lsp.lam, "exponent": 2 * p.n - dimK}
    res = IdentityResult("|det Φ| = λ^(2n - dim K)")
    res.record(abs(det) == lsp.lam ** (2 * p.n - dimK), {"det": det, "lambda": lsp.lam})
    rep.results.append(res)
    inv = qmap.inverse()
    res = IdentityResult("Φ*(i_Z ω) ∧ α = det Φ α(Φ⁻¹Z) ω")
    alphas = [(a, b) for a, b in combinations(range(q.dim), 2)]
    for t, mvec in enumerate(k_hat_basis(p)):
        Z = z_multivector(bp, mvec)
        lhs_form = pullback(qmap, interior(Z, om))
        back = pushforward(inv, Z)
        for a, b in alphas:
            alpha = theta_monomial(q.dim, [a, b], d)
            got = omega_ratio(wedge(lhs_form, alpha), om)
            exp = det * evaluate(alpha, back)
            res.record(got == exp, {"m": t, "alpha": [a, b]})
    rep.results.append(res)
    return rep


# ---------------------------------------------------------------------------
# automorphism samples


def first_layer_shear(p: Presentation, factor: int = 0) -> GradedMap:
    """``X_{f,0} -> X_{f,0} + X_{f,1}`` on one factor (C-linearly for complex factors).

    The second layer is fixed, so the map preserves every K.
    """
    F = Field(p.d)
    N1, N2 = p.n * p.factor_first_dim, p.n * p.width
    A = [[F.one if i == j else F.zero for j in range(N1)] for i in range(N1)]
    base = factor * p.factor_first_dim
    A[base + 1][base] = F.one
    if p.F == COMPLEX:
        half = 2 * p.m
        A[base + half + 1][base + half] = F.one
    return GradedMap.from_blocks([Matrix(A, p.d), Matrix.identity(N2, p.d)], p.d)


def monomial_generators(p: Presentation) -> list[GradedMap]:
    """Realized permutations: for each transposition and cycle shape found, one automorphism."""
    from itertools import permutations

    out = []
    seen = set()
    for sigma in permutations(range(p.n)):
        if sigma == tuple(range(p.n)):
            continue
        wit = stabilizer_second_layer_test(p, sigma)
        if wit is None:
            continue
        key = tuple(sorted(len(c) for c in _cycles(sigma)))
        if key in seen and len(out) >= 2 * p.n:
            continue
        seen.add(key)
        out.append(realize_monomial(p, sigma, wit.D, wit.kinds))
    return out


def _cycles(sigma: Sequence[int]) -> list[list[int]]:
    todo = set(range(len(sigma)))
    out = []
    while todo:
        s = min(todo)
        cyc = [s]
        todo.discard(s)
        x = sigma[s]
        while x != s:
            cyc.append(x)
            todo.discard(x)
            x = sigma[x]
        out.append(cyc)
    return out


def sample_automorphisms(p: Presentation, count: int = 10, seed: int = 0, shear: bool = True) -> list[GradedMap]:
    """Products of realized permutations, dilations and (optionally) shears.

    Each sample is re-verified as a K-preserving automorphism.  Shears are
    not second-layer conformal issues (they fix the second layer) but make
    the first-layer action non-monomial.
    """
    amb_layers = (p.n * p.factor_first_dim, p.n * p.width)
    gens = monomial_generators(p)
    gens += [dilation(amb_layers, r, p.d) for r in (2, -1, Field(p.d)(1) / 3)]
    if shear:
        gens.append(first_layer_shear(p, 0))
    rng = random.Random(seed)
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 50 * count:
            raise RuntimeError("could not sample enough automorphisms")
        word = [rng.choice(gens) for _ in range(rng.randint(2, 4))]
        phi = word[0]
        for g in word[1:]:
            phi = phi.compose(g)
        rep = aut_verify(p, phi.block(1))
        if rep.ok:
            out.append(rep.ambient_map)
    return out


# ---------------------------------------------------------------------------
# two-vector kernels for m >= 2 and complex factors


class TrivialKernelError(ValueError):
    """The bracket is injective on two-vectors of the factor."""


@dataclass
class TwoVectorKernel:
    coords: list[int]
    pairs: list[tuple[int, int]]
    subspace: Subspace
    n: int
    d: int

    @property
    def dim(self) -> int:
        return self.subspace.dim

    def multivectors(self) -> list[MultiVector]:
        out = []
        for v in self.subspace.basis:
            mv = MultiVector(self.n, 2, {}, self.d)
            for (a, b), c in zip(self.pairs, v):
                if not c.is_zero():
                    mv = mv + basis_multivector(self.n, [a, b], self.d, c)
            out.append(mv)
        return out


def kernel_two_vectors(g: GradedAlgebra, coords: Sequence[int]) -> TwoVectorKernel:
    """Kernel of ``X ^ Y -> [X, Y]`` on two-vectors over the given first-layer coordinates."""
    coords = sorted(coords)
    pairs = list(combinations(coords, 2))
    cols = [g.bracket(g.basis_vector(a), g.basis_vector(b)) for a, b in pairs]
    L = Matrix.from_columns(cols, g.dim, g.d) if cols else Matrix.zeros(g.dim, 0, g.d)
    ker = nullspace(L)
    if ker.dim == 0:
        raise TrivialKernelError("the bracket is injective on two-vectors of this factor")
    return TwoVectorKernel(coords, pairs, ker, g.dim, g.d)


def dual_two_forms(g: GradedAlgebra, coords: Sequence[int]) -> list[Form]:
    """Two-forms whose restrictions to the kernel are dual to its echelon basis.

    The echelon basis has a unit at each pivot pair and zeros at the other
    pivots, so the monomial form on the pivot pair is the minimal-support
    solution.
    """
    ker = kernel_two_vectors(g, coords)
    return [theta_monomial(g.dim, list(ker.pairs[c]), g.d) for c in ker.subspace.pivots]


def _factors(p: Presentation, bp: BuiltPresentation) -> list[list[int]]:
    return [bp.first_layer(k) for k in range(p.n)]


def verify_higher_suite(p: Presentation | BuiltPresentation) -> SuiteReport:
    """Contraction identities for ``m >= 2`` or complex quotients.

    With Y, Y' in factor k, Z in factor k' != k, X in the two-vector kernel
    of factor k and gamma ranging over two-forms supported on single factors:

    * ``d(i_Y i_Y' i_Z omega) = -i_Z i_[Y,Y'] omega``
    * ``d phi ^ i_Y i_Y' i_Z omega = c_Y i_Y' i_Z omega - c_Y' i_Y i_Z omega + c_Z i_Y i_Y' omega``
    * ``gamma ^ d phi ^ i_Y i_Y' i_Z omega = -gamma(Y ^ Y') c_Z omega``
    * ``gamma ^ d phi ^ i_X i_Z omega = gamma(X) c_Z omega`` and ``d(i_X i_Z omega) = 0``
    * dual forms pair with the kernel basis to the identity matrix
    """
    bp = p if isinstance(p, BuiltPresentation) else build(p)
    p = bp.presentation
    if p.F == REAL and p.m == 1:
        raise TrivialKernelError("first real Heisenberg factors have injective brackets on two-vectors")
    q = bp.quotient
    d = q.d
    n = q.dim
    om = bp.omega()
    dphi = formal_dphi(n, d)
    blocks = _factors(p, bp)
    basis = [q.basis_vector(i) for i in range(n)]

    def c(i):
        return LinearCoeff.symbol(i, d)

    gammas = [(a, b) for blk in blocks for a, b in combinations(blk, 2)]
    gamma_forms = {ab: theta_monomial(n, list(ab), d) for ab in gammas}
    kernels = [kernel_two_vectors(q, blk) for blk in blocks]
    duals = [dual_two_forms(q, blk) for blk in blocks]

    rep = SuiteReport()
    rep.info = {"kernel_dims": [k.dim for k in kernels], "N": n, "nu": q.homogeneous_dimension()}
    r_closed = IdentityResult("d(i_Y i_Y' i_Z ω) = -i_Z i_[Y,Y'] ω")
    r_leib = IdentityResult("dφ ∧ i_Y i_Y' i_Z ω expansion")
    r_gamma = IdentityResult("γ ∧ dφ ∧ i_Y i_Y' i_Z ω = -γ(Y,Y') c_Z ω")
    r_kernel = IdentityResult("γ ∧ dφ ∧ i_X i_Z ω = γ(X) c_Z ω")
    r_kclosed = IdentityResult("d(i_X i_Z ω) = 0")
    r_dual = IdentityResult("α_{k,m'}(X_{k,m}) = δ_{mm'}")

    for k, blk in enumerate(blocks):
        for kk, other in enumerate(blocks):
            if kk == k:
                continue
            for z in other:
                Z = basis[z]
                iz = interior(Z, om)
                for y in blk:
                    for y2 in blk:
                        Y, Y2 = basis[y], basis[y2]
                        eta = interior(Y, interior(Y2, iz))
                        lhs = differential(q, eta)
                        rhs = -interior(Z, interior(q.bracket(Y, Y2), om))
                        r_closed.record(lhs == rhs, {"Y": y, "Y'": y2, "Z": z})
                        got = wedge(dphi, eta)
                        exp = (
                            interior(Y2, iz).scale(c(y))
                            - interior(Y, iz).scale(c(y2))
                            + interior(Y, interior(Y2, om)).scale(c(z))
                        )
                        r_leib.record(got == exp, {"Y": y, "Y'": y2, "Z": z})
                        tail = wedge(dphi, eta)
                        yy = wedge_vectors([Y, Y2], n, d)
                        for ab in gammas:
                            gf = gamma_forms[ab]
                            val = _symbolic(omega_ratio(wedge(gf, tail), om), d)
                            expv = c(z) * (-evaluate(gf, yy))
                            r_gamma.record(val == expv, {"gamma": list(ab), "Y": y, "Y'": y2, "Z": z})
                for t, X in enumerate(kernels[k].multivectors()):
                    ixz = interior(X, iz)
                    r_kclosed.record(differential(q, ixz).is_zero(), {"k": k, "X": t, "Z": z})
                    tail = wedge(dphi, ixz)
                    for ab in gammas:
                        gf = gamma_forms[ab]
                        val = _symbolic(omega_ratio(wedge(gf, tail), om), d)
                        expv = c(z) * evaluate(gf, X)
                        r_kernel.record(val == expv, {"gamma": list(ab), "k": k, "X": t, "Z": z})
                    for s, gf in enumerate(duals[k]):
                        val = _symbolic(omega_ratio(wedge(gf, tail), om), d)
                        expv = c(z) * (1 if s == t else 0)
                        r_kernel.record(val == expv, {"dual": s, "k": k, "X": t, "Z": z})
        for t, X in enumerate(kernels[k].multivectors()):
            for s, gf in enumerate(duals[k]):
                val = evaluate(gf, X)
                r_dual.record(val == (1 if s == t else 0), {"k": k, "m": t, "m'": s})
    rep.results += [r_closed, r_leib, r_gamma, r_kernel, r_kclosed, r_dual]
    return rep


def first_layer_permutation(bp: BuiltPresentation, qmap: GradedMap) -> list[int] | None:
    """``sigma`` with factor j's first layer mapped into factor ``sigma(j)``'s, if block-monomial."""
    A = qmap.block(1)
    blocks = [bp.first_layer(k) for k in range(bp.n)]
    sigma = []
    for j, src in enumerate(blocks):
        targets = set()
        for col in src:
            for t, tgt in enumerate(blocks):
                if any(not A.rows[r][col].is_zero() for r in tgt):
                    targets.add(t)
        if len(targets) != 1:
            return None
        sigma.append(targets.pop())
    return sigma if sorted(sigma) == list(range(bp.n)) else None


def check_block_locality(bp: BuiltPresentation, qmap: GradedMap) -> dict:
    """Pulled-back dual forms of factor k live on factor ``sigma^-1(k)``."""
    sigma = first_layer_permutation(bp, qmap)
    if sigma is None:
        return {"passed": False, "reason": "first-layer action does not permute the factors"}
    inv = [0] * bp.n
    for j, i in enumerate(sigma):
        inv[i] = j
    q = bp.quotient
    rows = []
    ok = True
    for k in range(bp.n):
        allowed = set(bp.first_layer(inv[k]))
        for s, gf in enumerate(dual_two_forms(q, bp.first_layer(k))):
            pulled = pullback(qmap, gf)
            local = all(set(idx) <= allowed for idx, _ in pulled.items())
            rows.append({"k": k, "form": s, "local": local})
            ok = ok and local
    return {"passed": ok, "sigma": sigma, "rows": rows}


def pullback_commutes_with_d(g: GradedAlgebra, phi: GradedMap, max_degree: int | None = None) -> IdentityResult:
    """``d Phi^* alpha = Phi^* d alpha`` on every basis monomial up to ``max_degree``."""
    res = IdentityResult("d Φ* = Φ* d")
    top = g.dim if max_degree is None else max_degree
    for k in range(top + 1):
        for idx in combinations(range(g.dim), k):
            alpha = theta_monomial(g.dim, list(idx), g.d)
            res.record(differential(g, pullback(phi, alpha)) == pullback(phi, differential(g, alpha)), {"monomial": list(idx)})
    return res
