"""Product quotients of Heisenberg algebras.

A presentation is ``(F, m, n, K)``: ``n`` copies of the Heisenberg algebra
``h_m`` over ``F`` (real, or complex viewed as a real algebra) and a subspace
``K`` of the second layer of the product.  The ambient product uses the
layout of :func:`carnotpq.lie.direct_sum`: the first layer lists the factors'
first layers in order, then the second layer lists the factors' second
layers.  Coordinates of K are second-layer coordinates of the product,
``w`` per factor (w = 1 real, w = 2 complex as (Re, Im)).

Within a real factor the first layer is ``X_0, ..., X_{2m-1}`` with
``[X_{2i}, X_{2i+1}] = -Y``.  A complex factor is the complexification of the
real one with first layer ``X_0, ..., X_{2m-1}, iX_0, ..., iX_{2m-1}`` and
second layer ``Y, iY``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Iterator, Sequence

from .field import Field, FieldElement
from .forms import Form, MultiVector, basis_multivector, theta, theta_monomial, volume_form, wedge
from .lie import (
    GradedAlgebra,
    GradedMap,
    complexify,
    complexify_vector,
    direct_sum,
    homomorphism_violation,
    jc_eigenspace_split,
    quotient,
    section_matrix,
)
from .linalg import (
    Matrix,
    Subspace,
    block_diagonal,
    determinant,
    inverse,
    nullspace,
    orthogonal_projection,
    point_avoiding,
    point_with_nonzero_coordinates,
    rref,
    unit_vector,
)

REAL = "real"
COMPLEX = "complex"


def heisenberg_algebra(m: int = 1, d: int = 0, name: str = "") -> GradedAlgebra:
    """Real ``h_m``: ``[X_{2i}, X_{2i+1}] = -Y``."""
    if m < 1:
        raise ValueError("Heisenberg index must be at least 1")
    triples = [(2 * i, 2 * i + 1, 2 * m, -1) for i in range(m)]
    return GradedAlgebra.from_triples([2 * m, 1], triples, d, name=name or f"h{m}")


def complex_heisenberg_algebra(m: int = 1, d: int = 0, name: str = "") -> GradedAlgebra:
    """``h_m`` complexified, as a real algebra with complex structure J."""
    return complexify(heisenberg_algebra(m, d), name=name or f"h{m}C")


@dataclass(frozen=True)
class Presentation:
    """``(F, m, n, K)``; ``K`` is a tuple of spanning vectors in second-layer coordinates."""

    F: str
    m: int
    n: int
    K: tuple
    d: int = 0
    name: str = ""

    def __post_init__(self):
        if self.F not in (REAL, COMPLEX):
            raise ValueError(f"field must be 'real' or 'complex', got {self.F!r}")
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be positive")
        F = Field(self.d)
        K = tuple(tuple(F(x) for x in v) for v in self.K)
        for v in K:
            if len(v) != self.n * self.width:
                raise ValueError(f"K vector of length {len(v)}, expected {self.n * self.width}")
        object.__setattr__(self, "K", K)

    @property
    def width(self) -> int:
        return 1 if self.F == REAL else 2

    @property
    def factor_first_dim(self) -> int:
        return 2 * self.m * self.width

    def K_subspace(self) -> Subspace:
        return Subspace(self.K, self.n * self.width, self.d)

    def factor_algebra(self) -> GradedAlgebra:
        return heisenberg_algebra(self.m, self.d) if self.F == REAL else complex_heisenberg_algebra(self.m, self.d)

    def with_K(self, K: Sequence[Sequence], name: str = "") -> "Presentation":
        return Presentation(self.F, self.m, self.n, tuple(tuple(v) for v in K), self.d, name or self.name)

    def factor_block(self, k: int) -> list[int]:
        """Second-layer coordinates (K coordinates) of factor k."""
        return list(range(k * self.width, (k + 1) * self.width))


def ambient_algebra(p: Presentation) -> GradedAlgebra:
    return direct_sum([p.factor_algebra() for _ in range(p.n)], name=f"{p.name or 'product'} ambient")


@dataclass
class BuiltPresentation:
    """Quotient, ambient product, projection and the factor bookkeeping."""

    presentation: Presentation
    quotient: GradedAlgebra
    ambient: GradedAlgebra
    projection: GradedMap
    K: Subspace

    def __iter__(self) -> Iterator:
        return iter((self.quotient, self.ambient, self.projection))

    @property
    def n(self) -> int:
        return self.presentation.n

    def first_layer(self, k: int) -> list[int]:
        """Coordinates of factor k's first layer (same in ambient and quotient)."""
        f = self.presentation.factor_first_dim
        return list(range(k * f, (k + 1) * f))

    def second_layer(self, k: int) -> list[int]:
        """Ambient coordinates of factor k's second layer."""
        base = self.ambient.layer_start[1]
        return [base + c for c in self.presentation.factor_block(k)]

    def second_layer_vector(self, coords: Sequence) -> tuple:
        """Ambient vector with the given second-layer coordinates."""
        F = self.ambient.field
        v = [F.zero] * self.ambient.dim
        base = self.ambient.layer_start[1]
        for i, x in enumerate(coords):
            v[base + i] = F(x)
        return tuple(v)

    def Y_tilde(self, k: int, r: int = 0) -> tuple:
        return self.ambient.basis_vector(self.second_layer(k)[r])

    def Y(self, k: int, r: int = 0) -> tuple:
        """Image of the factor's second-layer generator in the quotient."""
        return self.projection.apply(self.Y_tilde(k, r))

    def X(self, k: int, a: int) -> tuple:
        return self.quotient.basis_vector(self.first_layer(k)[a])

    def tau_tilde(self, k: int, r: int = 0) -> Form:
        return theta(self.ambient.dim, self.second_layer(k)[r], self.ambient.d)

    def gamma(self, k: int) -> Form:
        """``sum_i theta_{X_{2i}} ^ theta_{X_{2i+1}}`` on factor k (real part for complex factors)."""
        idx = self.first_layer(k)
        n = self.quotient.dim
        out = Form(n, 2, {}, self.quotient.d)
        for i in range(self.presentation.m):
            out = out + theta_monomial(n, [idx[2 * i], idx[2 * i + 1]], self.quotient.d)
        return out

    def Z(self, k: int) -> MultiVector:
        """``X_0 ^ X_1`` of factor k (m = 1)."""
        idx = self.first_layer(k)
        return basis_multivector(self.quotient.dim, [idx[0], idx[1]], self.quotient.d)

    def tau(self) -> Form:
        """Wedge of the quotient's second-layer covectors in order."""
        q = self.quotient
        return theta_monomial(q.dim, list(q.layer_indices(2)), q.d)

    def omega(self) -> Form:
        """``gamma_1 ^ ... ^ gamma_n ^ tau`` for real ``m = 1`` presentations,
        else the coordinate volume form."""
        p = self.presentation
        if p.F == REAL and p.m == 1:
            return wedge(*[self.gamma(k) for k in range(p.n)], self.tau())
        return volume_form(self.quotient.dim, self.quotient.d)

    def descend_map(self, phi: GradedMap) -> GradedMap:
        """The quotient map induced by a K-preserving ambient map."""
        for kappa in self.K.basis:
            if not self.K.contains(phi.apply(kappa)):
                raise ValueError("ambient map does not preserve K")
        sec = section_matrix(self.ambient, self.K)
        M = self.projection.matrix @ phi.matrix @ sec
        return GradedMap(M, self.quotient.layer_dims)


def build(p: Presentation) -> BuiltPresentation:
    ambient = ambient_algebra(p)
    N1 = ambient.layer_dims[0]
    K = Subspace(
        [tuple([ambient.field.zero] * N1) + tuple(v) for v in p.K_subspace().basis],
        ambient.dim,
        p.d,
    )
    q, proj = quotient(ambient, K, name=p.name)
    return BuiltPresentation(p, q, ambient, proj, K)


# ---------------------------------------------------------------------------
# factor-wise automorphisms with prescribed second-layer action


def _second_layer_block(F: Field, kind: str, c: Sequence) -> Matrix:
    """Second-layer action of one factor: real scalar, or 2x2 for C-linear / antilinear."""
    if kind == REAL:
        return Matrix([[c[0]]], F.d)
    p, q = c
    if kind == "linear":
        return Matrix([[p, -q], [q, p]], F.d)
    if kind == "antilinear":
        return Matrix([[p, q], [q, -p]], F.d)
    raise ValueError(f"unknown factor action {kind!r}")


def _first_layer_block(F: Field, m: int, kind: str, c: Sequence) -> Matrix:
    """First-layer map of one factor realizing the given second-layer action."""
    if kind == REAL:
        diag = []
        for _ in range(m):
            diag += [c[0], 1]
        return Matrix.diagonal(diag, F.d)
    p, q = c
    n2 = 2 * m
    rows = [[F.zero] * (2 * n2) for _ in range(2 * n2)]
    for a in range(n2):
        re, im = a, n2 + a
        if a % 2 == 0:
            if kind == "linear":
                # e -> c e, ie -> i c e
                rows[re][re], rows[im][re] = F(p), F(q)
                rows[re][im], rows[im][im] = F(-q), F(p)
            else:
                # e -> c e, ie -> -i c e
                rows[re][re], rows[im][re] = F(p), F(q)
                rows[re][im], rows[im][im] = F(q), F(-p)
        else:
            rows[re][re] = F.one
            rows[im][im] = F.one if kind == "linear" else -F.one
    return Matrix(rows, F.d)


def realize_monomial(
    p: Presentation,
    sigma: Sequence[int],
    D: Sequence,
    kinds: Sequence[str] | None = None,
) -> GradedMap:
    """Ambient automorphism sending factor j to factor ``sigma[j]``.

    ``D[i]`` is the second-layer action landing on factor i: a scalar for real
    presentations, a pair ``(p, q)`` meaning ``p + qi`` for complex ones, with
    ``kinds[i]`` choosing ``linear`` (``z -> c z``) or ``antilinear``
    (``z -> c conj(z)``).  The result has second-layer matrix ``D P_sigma``.
    """
    F = Field(p.d)
    n, f, w = p.n, p.factor_first_dim, p.width
    if kinds is None:
        kinds = [REAL if p.F == REAL else "linear"] * n
    coeffs = [[F(x)] for x in D] if p.F == REAL else [[F(x) for x in c] for c in D]
    N1, N2 = n * f, n * w
    rows = [[F.zero] * (N1 + N2) for _ in range(N1 + N2)]
    for j in range(n):
        t = sigma[j]
        kind = REAL if p.F == REAL else kinds[t]
        A = _first_layer_block(F, p.m, kind, coeffs[t])
        B = _second_layer_block(F, kind, coeffs[t])
        for a in range(f):
            for b in range(f):
                rows[t * f + a][j * f + b] = A.rows[a][b]
        for a in range(w):
            for b in range(w):
                rows[N1 + t * w + a][N1 + j * w + b] = B.rows[a][b]
    M = Matrix(rows, p.d)
    return GradedMap(M, (N1, N2))


def permutation_matrix(sigma: Sequence[int], d: int = 0, width: int = 1) -> Matrix:
    """``(P)_{ij} = delta_{i sigma(j)}`` on blocks of the given width."""
    n = len(sigma)
    F = Field(d)
    rows = [[F.zero] * (n * width) for _ in range(n * width)]
    for j, i in enumerate(sigma):
        for r in range(width):
            rows[i * width + r][j * width + r] = F.one
    return Matrix(rows, d)


@dataclass
class StabilizerWitness:
    sigma: tuple
    D: list
    kinds: list

    def second_layer_matrix(self, p: Presentation) -> Matrix:
        F = Field(p.d)
        blocks = []
        for i in range(p.n):
            c = [self.D[i]] if p.F == REAL else self.D[i]
            blocks.append(_second_layer_block(F, REAL if p.F == REAL else self.kinds[i], c))
        return block_diagonal(blocks, p.d) @ permutation_matrix(self.sigma, p.d, p.width)


def _unknown_blocks(p: Presentation, kinds: Sequence[str]) -> list[list[list[tuple[int, int]]]]:
    """For factor i, entry (a, b) of its second-layer block as a sparse list of
    (unknown index, sign) pairs."""
    out = []
    for i in range(p.n):
        if p.F == REAL:
            out.append([[[(i, 1)]]])
            continue
        P, Q = 2 * i, 2 * i + 1
        if kinds[i] == "linear":
            out.append([[[(P, 1)], [(Q, -1)]], [[(Q, 1)], [(P, 1)]]])
        else:
            out.append([[[(P, 1)], [(Q, 1)]], [[(Q, 1)], [(P, -1)]]])
    return out


def stabilizer_second_layer_test(
    p: Presentation, sigma: Sequence[int], pointwise: bool = False, kinds: Sequence[str] | None = None
) -> StabilizerWitness | None:
    """Find a diagonal D with ``D P_sigma`` mapping K into K (or fixing K pointwise).

    Nonzero diagonal entries always extend to factor-wise automorphisms, so a
    witness certifies that ``sigma`` is realized by a K-stabilizing
    automorphism acting on the second layer by ``D P_sigma``.  For complex
    presentations ``kinds`` fixes each factor's action as ``linear`` or
    ``antilinear``; when omitted every pattern is tried.
    """
    if p.F == COMPLEX and kinds is None:
        for pattern in product(("linear", "antilinear"), repeat=p.n):
            wit = stabilizer_second_layer_test(p, sigma, pointwise, pattern)
            if wit is not None:
                return wit
        return None
    kinds = list(kinds) if kinds is not None else [REAL] * p.n
    F = Field(p.d)
    n, w = p.n, p.width
    nu = n * w  # unknowns (plus t when pointwise)
    K = p.K_subspace()
    inv = [0] * n
    for j, i in enumerate(sigma):
        inv[i] = j
    blocks = _unknown_blocks(p, kinds)
    total = nu + (1 if pointwise else 0)

    def image_rows(kappa):
        """Rows expressing coordinates of D P_sigma kappa linearly in the unknowns."""
        rows = []
        for i in range(n):
            src = inv[i]
            for a in range(w):
                row = [F.zero] * total
                for b in range(w):
                    x = kappa[src * w + b]
                    if x.is_zero():
                        continue
                    for u, s in blocks[i][a][b]:
                        row[u] = row[u] + x * s
                rows.append(row)
        return rows

    system = []
    if pointwise:
        for kappa in K.basis:
            for c, row in enumerate(image_rows(kappa)):
                row = list(row)
                row[nu] = -kappa[c]
                system.append(row)
    else:
        ann = K.annihilator()
        for kappa in K.basis:
            rows = image_rows(kappa)
            for a in ann.rows:
                comb = [F.zero] * total
                for c, coeff in enumerate(a):
                    if coeff.is_zero():
                        continue
                    for u in range(total):
                        if not rows[c][u].is_zero():
                            comb[u] = comb[u] + coeff * rows[c][u]
                system.append(comb)
    if system:
        S = nullspace(Matrix(system, p.d, ncols=total))
    else:
        S = Subspace.full(total, p.d)
    if p.F == REAL:
        point = point_with_nonzero_coordinates(S)
    else:
        bad = [Subspace.coordinate([u for u in range(total) if u not in (2 * i, 2 * i + 1)], total, p.d) for i in range(n)]
        if pointwise:
            bad.append(Subspace.coordinate(range(nu), total, p.d))
        point = point_avoiding(S, bad)
    if point is None:
        return None
    if pointwise:
        t = point[nu]
        point = tuple(x / t for x in point[:nu])
    if p.F == REAL:
        D = list(point)
    else:
        D = [(point[2 * i], point[2 * i + 1]) for i in range(n)]
    return StabilizerWitness(tuple(sigma), D, kinds)


def _permutations_with(n: int, source: int, target: int):
    rest_src = [j for j in range(n) if j != source]
    rest_tgt = [j for j in range(n) if j != target]
    for perm in permutations(rest_tgt):
        sigma = [0] * n
        sigma[source] = target
        for j, t in zip(rest_src, perm):
            sigma[j] = t
        yield tuple(sigma)


# ---------------------------------------------------------------------------
# axioms


@dataclass
class AxiomResult:
    passed: bool
    witness: object = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {"passed": self.passed, "witness": self.witness, "detail": self.detail}


@dataclass
class AxiomReport:
    results: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def __getitem__(self, key) -> AxiomResult:
        return self.results[key]


MAX_FACTORS_FOR_ENUMERATION = 8


def check_axiom_trivial_intersection(p: Presentation) -> AxiomResult:
    K = p.K_subspace()
    for k in range(p.n):
        block = Subspace.coordinate(p.factor_block(k), p.n * p.width, p.d)
        inter = K & block
        if inter.dim:
            return AxiomResult(False, {"factor": k, "vector": inter.basis[0]}, f"K meets factor {k}")
    return AxiomResult(True, None, "K meets no factor")


def check_axiom_distinct_lines(p: Presentation) -> AxiomResult:
    K = p.K_subspace()
    N2 = p.n * p.width
    if p.F == REAL:
        spans = [K + Subspace.coordinate(p.factor_block(k), N2, p.d) for k in range(p.n)]
        for j in range(p.n):
            for k in range(j + 1, p.n):
                if spans[j] == spans[k]:
                    pair = K & Subspace.coordinate(p.factor_block(j) + p.factor_block(k), N2, p.d)
                    wit = pair.basis[0] if pair.dim else None
                    return AxiomResult(False, {"factors": [j, k], "vector": wit}, f"factors {j} and {k} have the same image line")
        return AxiomResult(True, None, "factor lines are distinct")
    # complex: compare the projected J-eigenlines inside the complexified ambient
    amb = ambient_algebra(p)
    gC = complexify(amb)
    plus, minus = jc_eigenspace_split(gC)
    base = amb.layer_start[1]
    KC_vecs = []
    realK = []  # K as ambient vectors
    for v in K.basis:
        full = [amb.field.zero] * amb.dim
        for i, x in enumerate(v):
            full[base + i] = x
        realK.append(tuple(full))
    for v in realK:
        vc = complexify_vector(amb, v)
        KC_vecs.append(vc)
        KC_vecs.append(gC.J.apply(vc))
    KC = Subspace(KC_vecs, gC.dim, p.d)
    pairs = []
    for k in range(p.n):
        coords = [base + c for c in p.factor_block(k)]
        ambient_vecs = [amb.basis_vector(c) for c in coords]
        vecs = []
        for v in ambient_vecs:
            vc = complexify_vector(amb, v)
            vecs += [vc, gC.J.apply(vc)]
        Vk = Subspace(vecs, gC.dim, p.d)
        A, B = (Vk & plus) + KC, (Vk & minus) + KC
        if A == B:
            return AxiomResult(False, {"factor": k}, f"eigenlines of factor {k} coincide modulo K")
        pairs.append({A, B})
    for j in range(p.n):
        for k in range(j + 1, p.n):
            if pairs[j] == pairs[k]:
                return AxiomResult(False, {"factors": [j, k]}, f"factors {j} and {k} have the same eigenline pair")
    return AxiomResult(True, None, "eigenline pairs are distinct")


def stab_orbit_of_first_factor(p: Presentation) -> tuple[set, dict]:
    """Factors reachable from factor 0 by K-stabilizing monomial automorphisms."""
    if p.n > MAX_FACTORS_FOR_ENUMERATION:
        raise ValueError(f"permutation enumeration is limited to n <= {MAX_FACTORS_FOR_ENUMERATION}")
    reached = {0: StabilizerWitness(tuple(range(p.n)), [1] * p.n if p.F == REAL else [(1, 0)] * p.n, [REAL if p.F == REAL else "linear"] * p.n)}
    for k in range(1, p.n):
        for sigma in _permutations_with(p.n, 0, k):
            wit = stabilizer_second_layer_test(p, sigma)
            if wit is not None:
                reached[k] = wit
                break
    return set(reached), reached


def check_axiom_transitive(p: Presentation) -> AxiomResult:
    orbit, wits = stab_orbit_of_first_factor(p)
    detail = {k: {"sigma": list(w.sigma), "D": w.D, "kinds": w.kinds} for k, w in wits.items()}
    if len(orbit) == p.n:
        return AxiomResult(True, detail, "stabilizer acts transitively on factors")
    missing = min(set(range(p.n)) - orbit)
    return AxiomResult(False, {"unreachable": missing, "orbit": sorted(orbit)}, f"factor {missing} is not reached from factor 0")


def verify_axioms(p: Presentation) -> AxiomReport:
    """Check trivial intersection with factors, distinct factor lines and transitivity."""
    rep = AxiomReport()
    rep.results["trivial_intersection"] = check_axiom_trivial_intersection(p)
    rep.results["distinct_lines"] = check_axiom_distinct_lines(p)
    rep.results["transitive"] = check_axiom_transitive(p)
    return rep


# ---------------------------------------------------------------------------
# normalization and partitions


def diagonal_presentation(F: str, m: int, n: int, d: int = 0, name: str = "") -> Presentation:
    if F == REAL:
        K = (tuple([1] * n),)
    else:
        K = (tuple([1, 0] * n), tuple([0, 1] * n))
    return Presentation(F, m, n, K, d, name or f"diag-{F}-m{m}-n{n}")


def normalize_dim1(p: Presentation) -> tuple[Presentation, GradedMap, GradedMap]:
    """Rescale factors so that a one-dimensional K becomes the diagonal.

    Returns the diagonal presentation, the ambient automorphism ``Psi`` of
    the product with ``Psi(diagonal) = K`` (factor i scaled by ``mu_i`` on
    the second layer), and the induced isomorphism between the quotients.
    """
    if p.F != REAL:
        raise ValueError("normalization is implemented for real presentations")
    K = p.K_subspace()
    if K.dim != 1:
        raise ValueError("K is not one-dimensional")
    # keep the caller's scaling of the spanning vector
    mu = next(v for v in p.K if any(not x.is_zero() for x in v))
    if any(x.is_zero() for x in mu):
        raise ValueError("K has a zero coordinate: the presentation is not transitive")
    diag = diagonal_presentation(REAL, p.m, p.n, p.d, name=(p.name or "K") + "-normalized")
    psi = realize_monomial(p, range(p.n), list(mu))
    src = build(diag)
    tgt = build(p)
    for kappa in src.K.basis:
        if not tgt.K.contains(psi.apply(kappa)):
            raise AssertionError("normalization map does not carry the diagonal to K")
    sec = section_matrix(src.ambient, src.K)
    induced = GradedMap(tgt.projection.matrix @ psi.matrix @ sec, src.quotient.layer_dims, tgt.quotient.layer_dims)
    return diag, psi, induced


def finest_partition(p: Presentation) -> list[list[int]]:
    """Finest partition of the factors compatible with K.

    A partition is compatible when K is the direct sum of its intersections
    with the blocks, i.e. when the orthogonal projection onto K has no
    nonzero entries between different blocks.  The finest one is the set of
    connected components of the graph joining factors with a nonzero
    off-diagonal block.
    """
    K = p.K_subspace()
    P = orthogonal_projection(K)
    parent = list(range(p.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in range(p.n):
        for b in range(a + 1, p.n):
            if any(not P.rows[i][j].is_zero() for i in p.factor_block(a) for j in p.factor_block(b)):
                parent[find(a)] = find(b)
    groups: dict[int, list[int]] = {}
    for a in range(p.n):
        groups.setdefault(find(a), []).append(a)
    return sorted(groups.values())


def restrict_to_block(p: Presentation, block: Sequence[int]) -> Presentation:
    """Sub-presentation on the given factors with ``K`` intersected with their span."""
    K = p.K_subspace()
    coords = [c for k in block for c in p.factor_block(k)]
    inter = K & Subspace.coordinate(coords, p.n * p.width, p.d)
    local = [tuple(v[c] for c in coords) for v in inter.basis]
    name = f"{p.name or 'K'}[{','.join(str(k) for k in block)}]"
    return Presentation(p.F, p.m, len(block), tuple(local), p.d, name)


def conformal_decompose(p: Presentation) -> list[tuple[list[int], Presentation]]:
    """Split along :func:`finest_partition` into sub-presentations."""
    parts = finest_partition(p)
    out = [(blk, restrict_to_block(p, blk)) for blk in parts]
    if sum(sub.K_subspace().dim for _, sub in out) != p.K_subspace().dim:
        raise AssertionError("block intersections do not add up to K")
    return out


# ---------------------------------------------------------------------------
# automorphisms


@dataclass
class AutReport:
    ok: bool
    reason: str = ""
    witness: object = None
    second_layer: Matrix | None = None
    ambient_map: GradedMap | None = None
    quotient_map: GradedMap | None = None


def aut_verify(p: Presentation, A1: Matrix, A2: Matrix | None = None) -> AutReport:
    """Check that a first-layer map of the product extends to a K-preserving automorphism.

    The second-layer action is forced by ``M [e_a, e_b] = [A1 e_a, A1 e_b]``;
    it is solved from a basis of brackets and checked on every pair.  When
    ``A2`` is supplied it must equal the forced action.
    """
    bp = build(p)
    amb = bp.ambient
    N1, N2 = amb.layer_dims
    if A1.shape != (N1, N1):
        return AutReport(False, f"first-layer map must be {N1}x{N1}")
    if determinant(A1).is_zero():
        return AutReport(False, "first-layer map is singular")
    F = amb.field
    pairs, Bcols, Tcols = [], [], []
    for a in range(N1):
        for b in range(a + 1, N1):
            ea, eb = amb.basis_vector(a), amb.basis_vector(b)
            br = amb.bracket(ea, eb)[N1:]
            ia = tuple(A1.column(a)) + (F.zero,) * N2
            ib = tuple(A1.column(b)) + (F.zero,) * N2
            tr = amb.bracket(ia, ib)[N1:]
            pairs.append((a, b))
            Bcols.append(br)
            Tcols.append(tr)
    Bm = Matrix.from_columns(Bcols, N2, p.d)
    _, piv = rref(Bm)
    if len(piv) != N2:
        return AutReport(False, "brackets do not span the second layer")
    Bp = Matrix.from_columns([Bcols[c] for c in piv], N2, p.d)
    Tp = Matrix.from_columns([Tcols[c] for c in piv], N2, p.d)
    M = Tp @ inverse(Bp)
    for (a, b), bc, tc in zip(pairs, Bcols, Tcols):
        if M.apply(bc) != tuple(tc):
            return AutReport(False, "not a Lie algebra homomorphism", {"pair": [a, b]}, M)
    if A2 is not None and A2 != M:
        return AutReport(False, "supplied second-layer map differs from the forced one", None, M)
    if determinant(M).is_zero():
        return AutReport(False, "second-layer map is singular", None, M)
    K = p.K_subspace()
    for kappa in K.basis:
        if not K.contains(M.apply(kappa)):
            return AutReport(False, "K is not preserved", {"vector": kappa}, M)
    phi = GradedMap.from_blocks([A1, M], p.d)
    if homomorphism_violation(amb, amb, phi) is not None:
        return AutReport(False, "not a Lie algebra homomorphism", None, M)
    qmap = bp.descend_map(phi)
    return AutReport(True, "K-preserving automorphism", None, M, phi, qmap)


@dataclass
class LambdaSP:
    """``M = lam * S * P`` with ``S = diag(signs)`` and ``(P)_{ij} = delta_{i sigma(j)}``."""

    lam: FieldElement
    signs: list[int]
    sigma: list[int]

    def matrices(self, d: int = 0) -> tuple[Matrix, Matrix]:
        return Matrix.diagonal(self.signs, d), permutation_matrix(self.sigma, d)

    def reconstruct(self, d: int = 0) -> Matrix:
        S, P = self.matrices(d)
        return (S @ P).scale(self.lam)


def factor_lambda_s_p(M: Matrix) -> LambdaSP:
    """Factor a monomial second-layer matrix with entries of equal modulus."""
    if M.nrows != M.ncols:
        raise ValueError("second-layer matrix must be square")
    if M.d < 0:
        raise ValueError("moduli need a real field")
    n = M.nrows
    sigma = []
    for j in range(n):
        nz = [i for i in range(n) if not M.rows[i][j].is_zero()]
        if len(nz) != 1:
            raise ValueError(f"not monomial: column {j} has {len(nz)} nonzero entries")
        sigma.append(nz[0])
    if sorted(sigma) != list(range(n)):
        raise ValueError("not monomial: two columns share a row")
    mu = [M.rows[sigma[j]][j] for j in range(n)]
    lam = abs(mu[0])
    for x in mu:
        if abs(x) != lam:
            raise ValueError("unequal moduli: the second-layer action is not conformal")
    signs = [0] * n
    for j in range(n):
        signs[sigma[j]] = mu[j].sign()
    return LambdaSP(lam, signs, sigma)


@dataclass
class HPrimeReport:
    orbits: list[list[int]]
    realizable: dict
    block_dims: list[int]

    @property
    def blocks_one_dimensional(self) -> bool:
        return all(x == 1 for x in self.block_dims)


def hprime_orbits(p: Presentation) -> HPrimeReport:
    """Orbits of the permutations realized by automorphisms fixing K pointwise,
    and the dimension of K projected onto each orbit."""
    if p.F != REAL:
        raise ValueError("pointwise orbits are implemented for real presentations")
    if p.n > MAX_FACTORS_FOR_ENUMERATION:
        raise ValueError(f"permutation enumeration is limited to n <= {MAX_FACTORS_FOR_ENUMERATION}")
    parent = list(range(p.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    realizable = {}
    for sigma in permutations(range(p.n)):
        wit = stabilizer_second_layer_test(p, sigma, pointwise=True)
        if wit is None:
            continue
        realizable[sigma] = wit.D
        for j, t in enumerate(sigma):
            parent[find(j)] = find(t)
    groups: dict[int, list[int]] = {}
    for a in range(p.n):
        groups.setdefault(find(a), []).append(a)
    orbits = sorted(groups.values())
    K = p.K_subspace()
    dims = []
    for orb in orbits:
        proj = Subspace([tuple(v[c] for c in orb) for v in K.basis], len(orb), p.d)
        dims.append(proj.dim)
    return HPrimeReport(orbits, realizable, dims)


def complex_first_layer_witnesses(bp: BuiltPresentation) -> list[tuple]:
    """Elements ``X -/+ i J X`` of the complexified quotient for first-layer basis X.

    J is the factor-wise complex structure, which is defined on the first
    layer of every complex presentation even when K is not J-invariant.
    """
    p = bp.presentation
    if p.F != COMPLEX:
        return []
    q = bp.quotient
    amb = bp.ambient
    out = []
    for a in range(amb.layer_dims[0]):
        Je = amb.J.column(a)
        for sgn in (1, -1):
            real = q.basis_vector(a)
            imag = [q.field.zero] * q.dim
            for b, x in enumerate(Je[: amb.layer_dims[0]]):
                imag[b] = -sgn * x
            out.append(complexify_vector(q, real, imag))
    return out
