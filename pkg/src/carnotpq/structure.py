"""Recognition of Heisenberg structure inside step-2 graded algebras.

The central object is the set of first-layer elements of rank at most one,
where ``rank X = dim [X, g]``.  Rank-one elements sharing a bracket line
``L`` fill the subspace ``W_L = {X in V_1 : [X, g] in L}``, which is linear in
X.  The sieve below enumerates candidate lines from brackets of basis pairs
(and of user witnesses), so it finds the blocks of algebras presented in a
factor-adapted basis but is not complete in general; when it cannot certify
its result the classification is ``inconclusive``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .field import Field
from .lie import (
    GradedAlgebra,
    GradedMap,
    complexify,
    complexification_coordinates,
    conjugation_matrix,
)
from .linalg import (
    Matrix,
    Subspace,
    determinant,
    nullspace,
    vec_is_zero,
    vec_scale,
    vec_sub,
    vec_add,
    linear_combination,
)


class DegenerateFormError(ValueError):
    """Raised when the bracket form on the first layer is degenerate."""


@dataclass
class DarbouxBasis:
    """First-layer vectors with ``[X_{2i}, X_{2i+1}] = -Y`` and all other
    brackets zero (0-based pairs)."""

    X: list[tuple]
    Y: tuple

    def change_of_basis(self, g: GradedAlgebra) -> GradedMap:
        cols = list(self.X) + [self.Y]
        return GradedMap(Matrix.from_columns(cols, g.dim, g.d), g.layer_dims)


def darboux_basis(g: GradedAlgebra) -> DarbouxBasis:
    """Symplectic Gram-Schmidt on the bracket form of a step-2 algebra with
    one-dimensional second layer.

    The form is ``w(x, y)`` = coefficient of ``[x, y]`` along the second-layer
    basis vector.  Each step takes the first remaining vector u, the first
    remaining v with ``w(u, v) != 0`` rescaled to ``w(u, v) = -1``, and
    projects the rest by ``z -> z + w(z, v) u - w(z, u) v``.
    """
    if g.step != 2 or g.layer_dims[1] != 1:
        raise ValueError("darboux basis needs step 2 and a one-dimensional second layer")
    y_index = g.layer_start[1]
    Y = g.basis_vector(y_index)

    def w(x, y):
        return g.bracket(x, y)[y_index]

    remaining = [g.basis_vector(i) for i in g.layer_indices(1)]
    out: list[tuple] = []
    while remaining:
        u = remaining.pop(0)
        k = next((t for t, v in enumerate(remaining) if not w(u, v).is_zero()), None)
        if k is None:
            raise DegenerateFormError("bracket form is degenerate on the first layer")
        v = remaining.pop(k)
        v = vec_scale(-1 / w(u, v), v)
        rest = []
        for z in remaining:
            z = vec_add(vec_add(z, vec_scale(w(z, v), u)), vec_scale(-w(z, u), v))
            rest.append(z)
        remaining = rest
        out.extend([u, v])
    return DarbouxBasis(out, Y)


# ---------------------------------------------------------------------------
# sieve


@dataclass
class SieveResult:
    """Lines found, their blocks ``W_L``, and the rank bookkeeping."""

    over: str
    lines: list[Subspace] = field(default_factory=list)
    blocks: list[Subspace] = field(default_factory=list)
    rank_zero: list[tuple] = field(default_factory=list)
    rank_one: list[tuple] = field(default_factory=list)

    def rank_one_span(self, g: GradedAlgebra) -> Subspace:
        vecs = [b for blk in self.blocks for b in blk.basis] + list(self.rank_one)
        return Subspace(vecs, g.dim, g.d)

    def heisenberg_blocks(self, g: GradedAlgebra) -> list[tuple[Subspace, Subspace]]:
        """Blocks of dimension >= 2 over the field with ``[W_L, W_L] = L``."""
        scale = 2 if self.over == "complex" else 1
        out = []
        for L, W in zip(self.lines, self.blocks):
            if W.dim >= 2 * scale and g.bracket_span(W, W) == L:
                out.append((W, L))
        return out


def _span_over(g: GradedAlgebra, vectors: Sequence[tuple], over: str) -> Subspace:
    vecs = list(vectors)
    if over == "complex":
        vecs += [g.J.apply(v) for v in vectors]
    return Subspace(vecs, g.dim, g.d)


def _first_layer_generators(g: GradedAlgebra) -> list[tuple]:
    gens = [g.basis_vector(i) for i in g.layer_indices(1)]
    if g.J is not None and g.J_inherited is not None:
        half = g.field(1) / 2
        JJ = g.J @ g.J_inherited
        extra = []
        for e in gens:
            je = JJ.apply(e)
            extra.append(vec_scale(half, vec_sub(e, je)))
            extra.append(vec_scale(half, vec_add(e, je)))
        gens += [v for v in extra if not vec_is_zero(v)]
    return gens


def block_of_line(g: GradedAlgebra, L: Subspace) -> Subspace:
    """``W_L = {X in V_1 : [X, e_b] in L for every basis vector e_b}``."""
    ann = L.annihilator()
    v1 = list(g.layer_indices(1))
    F = g.field
    rows = []
    for b in range(g.dim):
        for r in ann.rows:
            row = []
            for a in v1:
                acc = F.zero
                for k, c in g.bracket_basis(a, b).items():
                    x = r[k]
                    if not x.is_zero():
                        acc = acc + x * c
                row.append(acc)
            if any(not x.is_zero() for x in row):
                rows.append(row)
    if rows:
        ker = nullspace(Matrix(rows, g.d, ncols=len(v1)))
        kbasis = ker.basis
    else:
        kbasis = [tuple(F.one if t == s else F.zero for t in range(len(v1))) for s in range(len(v1))]
    vecs = []
    for k in kbasis:
        v = [F.zero] * g.dim
        for a, x in zip(v1, k):
            v[a] = x
        vecs.append(tuple(v))
    return Subspace(vecs, g.dim, g.d)


def _normalized(v: tuple) -> tuple:
    lead = next(x for x in v if not x.is_zero())
    inv = lead.inverse()
    return tuple(x * inv for x in v)


def rank_one_sieve(g: GradedAlgebra, witnesses: Sequence[Sequence] = (), over: str = "base") -> SieveResult:
    """Enumerate candidate bracket lines and the rank-at-most-one blocks they carry.

    Candidate lines are the spans (complex spans when ``over='complex'``) of
    nonzero brackets ``[u, e_b]`` for first-layer generators u, and of
    ``[w, g]`` for witnesses w of rank one.  Generators are the first-layer
    basis, extended by the eigenspace projections of ``J_inherited`` when
    present.
    """
    if over == "complex" and g.J is None:
        raise ValueError("complex sieve needs a complex structure J")
    res = SieveResult(over)
    F = g.field
    for w in witnesses:
        w = tuple(F(x) for x in w)
        if any(not x.is_zero() for i, x in enumerate(w) if g.degree[i] != 1):
            raise ValueError("witnesses must lie in the first layer")
        r = g.ad_rank(w, over)
        if r == 0:
            res.rank_zero.append(w)
        elif r == 1:
            res.rank_one.append(w)
    lines: list[Subspace] = []
    seen: set[tuple] = set()
    expected = 2 if over == "complex" else 1

    def add_line(vectors):
        L = _span_over(g, vectors, over)
        if L.dim == expected and L not in lines:
            lines.append(L)
            for b in L.basis:
                seen.add(_normalized(b))

    def add_vector(br):
        if vec_is_zero(br):
            return
        key = _normalized(br)
        if key in seen:
            return
        seen.add(key)
        add_line([br])

    for w in res.rank_one:
        add_line([g.bracket(w, g.basis_vector(b)) for b in range(g.dim)])
    gens = _first_layer_generators(g)
    basis = [g.basis_vector(b) for b in range(g.dim)]
    for u in gens:
        for eb in basis:
            add_vector(g.bracket(u, eb))
    for u in gens:
        for v in gens:
            add_vector(g.bracket(u, v))
    for L in lines:
        W = block_of_line(g, L)
        if W.dim:
            res.lines.append(L)
            res.blocks.append(W)
    return res


# ---------------------------------------------------------------------------
# decomposition


@dataclass
class Decomposition:
    """Outcome of :func:`heisenberg_summands`.

    ``status`` is ``recognized``, ``refuted`` or ``inconclusive``.  For a
    recognized decomposition ``first_layers[j]`` and ``second_layers[j]`` are
    the first layer and bracket line of summand j and ``m[j]`` its Heisenberg
    index over the field named by ``over``.
    """

    status: str
    over: str
    first_layers: list[Subspace] = field(default_factory=list)
    second_layers: list[Subspace] = field(default_factory=list)
    m: list[int] = field(default_factory=list)
    reason: str = ""
    witness: tuple | None = None

    @property
    def n(self) -> int:
        return len(self.first_layers)


def heisenberg_summands(
    g: GradedAlgebra,
    witnesses: Sequence[Sequence] = (),
    over: str = "base",
    sieve: SieveResult | None = None,
) -> Decomposition:
    """Split a step-2 algebra into commuting Heisenberg summands along the
    rank-one sieve.

    Refuted when the first layer meets the center.  Recognized when the
    Heisenberg blocks of the sieve form a direct sum equal to ``V_1``,
    commute pairwise and have distinct bracket lines; the decomposition is
    then the unique one.  Otherwise inconclusive.
    """
    if g.step != 2:
        raise ValueError("heisenberg_summands needs a step-2 algebra")
    V1 = g.layer_subspace(1)
    z1 = g.center() & V1
    if z1.dim:
        return Decomposition("refuted", over, reason="first layer meets the center", witness=z1.basis[0])
    if sieve is None:
        sieve = rank_one_sieve(g, witnesses, over)
    blocks = sieve.heisenberg_blocks(g)
    if not blocks:
        return Decomposition("inconclusive", over, reason="no Heisenberg block found by the sieve")
    total = sum(W.dim for W, _ in blocks)
    span = Subspace([b for W, _ in blocks for b in W.basis], g.dim, g.d)
    if span.dim != total:
        return Decomposition("inconclusive", over, reason="sieve blocks are not independent")
    if span != V1:
        return Decomposition("inconclusive", over, reason="sieve blocks do not span the first layer")
    for a in range(len(blocks)):
        for b in range(a + 1, len(blocks)):
            if g.bracket_span(blocks[a][0], blocks[b][0]).dim:
                return Decomposition("inconclusive", over, reason="sieve blocks do not commute")
    scale = 4 if over == "complex" else 2
    out = Decomposition("recognized", over)
    for W, L in blocks:
        if W.dim % scale:
            return Decomposition("inconclusive", over, reason="block of odd dimension")
        out.first_layers.append(W)
        out.second_layers.append(L)
        out.m.append(W.dim // scale)
    return out


# ---------------------------------------------------------------------------
# trichotomy


@dataclass
class TrichotomyVerdict:
    """Classification of a graded algebra.

    ``kind`` is one of ``abelian``, ``heisenberg``, ``product_quotient_candidate``,
    ``invariant_subspace`` or ``inconclusive``.  ``summands`` lists the real
    first layers of the recognized summands.
    """

    kind: str
    F: str | None = None
    n: int | None = None
    m: int | None = None
    W: Subspace | None = None
    summands: list[Subspace] = field(default_factory=list)
    reason: str = ""

    def label(self) -> str:
        if self.kind == "heisenberg":
            return f"heisenberg({'R' if self.F == 'real' else 'C'},{self.m})"
        if self.kind == "product_quotient_candidate":
            return f"product_quotient_candidate({'R' if self.F == 'real' else 'C'},{self.n},{self.m})"
        if self.kind == "invariant_subspace":
            return f"invariant_subspace(dim {self.W.dim})"
        return self.kind


def _from_decomposition(g: GradedAlgebra, F: str, firsts: list[Subspace], ms: list[int]) -> TrichotomyVerdict:
    if len(set(ms)) > 1:
        m0 = min(ms)
        W = Subspace([b for S, m in zip(firsts, ms) if m == m0 for b in S.basis], g.dim, g.d)
        return TrichotomyVerdict(
            "invariant_subspace", F, W=W, summands=firsts, reason=f"sum of the index-{m0} summands"
        )
    if len(firsts) == 1:
        return TrichotomyVerdict("heisenberg", F, n=1, m=ms[0], summands=firsts)
    return TrichotomyVerdict("product_quotient_candidate", F, n=len(firsts), m=ms[0], summands=firsts)


def automatic_complex_witnesses(g: GradedAlgebra) -> list[tuple]:
    """Elements ``e_a -/+ i J e_a`` of ``complexify(g)`` for first-layer basis vectors."""
    if g.J is None:
        return []
    re, im = complexification_coordinates(g)
    F = g.field
    out = []
    for a in g.layer_indices(1):
        Je = g.J.column(a)
        for sgn in (1, -1):
            v = [F.zero] * (2 * g.dim)
            v[re[a]] = F.one
            for b, x in enumerate(Je):
                if not x.is_zero():
                    v[im[b]] = v[im[b]] - sgn * x
            out.append(tuple(v))
    return out


def real_points(g: GradedAlgebra, S: Subspace) -> Subspace:
    """``S`` intersected with the real form, in the coordinates of ``g``."""
    re, im = complexification_coordinates(g)
    N = 2 * g.dim
    real_sub = Subspace.coordinate(re, N, g.d)
    inter = S & real_sub
    vecs = [tuple(v[re[a]] for a in range(g.dim)) for v in inter.basis]
    return Subspace(vecs, g.dim, g.d)


def classify_trichotomy(
    g: GradedAlgebra,
    witnesses: Sequence[Sequence] = (),
    complex_witnesses: Sequence[Sequence] = (),
) -> TrichotomyVerdict:
    """Decide which branch of the rank-one trichotomy describes ``g``.

    ``witnesses`` are first-layer elements of g; ``complex_witnesses`` are
    first-layer elements of ``complexify(g)``.  An algebra carrying J
    contributes its own complex witnesses.
    """
    if all(not entry for entry in g.structure.values()):
        return TrichotomyVerdict("abelian")
    V1 = g.layer_subspace(1)
    z1 = g.center() & V1
    if z1.dim:
        return TrichotomyVerdict("invariant_subspace", W=z1, reason="first layer meets the center")
    sieve = rank_one_sieve(g, witnesses, "base")
    W = sieve.rank_one_span(g)
    if W.dim:
        if W != V1:
            return TrichotomyVerdict(
                "inconclusive", W=W, reason="rank-one elements span a proper subspace; sieve completeness not certified"
            )
        if g.step != 2:
            return TrichotomyVerdict("inconclusive", reason="rank-one span is the first layer but step exceeds 2")
        dec = heisenberg_summands(g, witnesses, "base", sieve=sieve)
        if dec.status != "recognized":
            return TrichotomyVerdict("inconclusive", reason=dec.reason)
        return _from_decomposition(g, "real", dec.first_layers, dec.m)
    if g.step != 2:
        return TrichotomyVerdict("inconclusive", reason="no rank-one element found")
    gC = complexify(g)
    cw = [tuple(g.field(x) for x in w) for w in complex_witnesses] + automatic_complex_witnesses(g)
    dec = heisenberg_summands(gC, cw, "complex")
    if dec.status != "recognized":
        return TrichotomyVerdict("inconclusive", reason="no rank-one element over R or C: " + dec.reason)
    conj = conjugation_matrix(g)
    blocks = dec.first_layers
    partner = []
    for S in blocks:
        cS = S.image(conj)
        match = [k for k, T in enumerate(blocks) if T == cS]
        partner.append(match[0] if match else None)
    if any(p is None for p in partner) or any(p == k for k, p in enumerate(partner)):
        return TrichotomyVerdict("inconclusive", reason="complex blocks are not exchanged by conjugation")
    firsts, ms, seen = [], [], set()
    for k, p in enumerate(partner):
        if k in seen:
            continue
        seen.update({k, p})
        firsts.append(real_points(g, blocks[k] + blocks[p]))
        ms.append(dec.m[k])
    return _from_decomposition(g, "complex", firsts, ms)


def complex_linearity_classify(g: GradedAlgebra, phi: GradedMap) -> dict:
    """Whether an automorphism of a complex step-2 algebra is C-linear or C-antilinear.

    Linear maps satisfy ``phi J = J phi`` and have positive determinant on
    the second layer; antilinear maps satisfy ``phi J = -J phi`` and have
    negative determinant there (second layer of complex dimension one).
    """
    if g.J is None:
        raise ValueError("algebra carries no complex structure")
    M = phi.matrix
    JM, MJ = g.J @ M, M @ g.J
    if JM == MJ:
        kind = "linear"
    elif JM == -MJ:
        kind = "antilinear"
    else:
        diff = [j for j in range(g.dim) if JM.column(j) != MJ.column(j) and JM.column(j) != tuple(-x for x in MJ.column(j))]
        return {"kind": "neither", "witness": diff[0] if diff else None, "consistent": False}
    det2 = determinant(phi.block(2)) if g.step >= 2 else Field(g.d).one
    sign = det2.sign()
    consistent = (kind == "linear" and sign > 0) or (kind == "antilinear" and sign < 0)
    if g.layer_dims[1] != 2:
        consistent = kind == "linear" or kind == "antilinear"
    return {"kind": kind, "det_second_layer": det2, "consistent": consistent}
