"""Stratified graded nilpotent Lie algebras in a fixed graded basis.

Coordinates are 0-based and layers are contiguous: layer 1 occupies the first
``layer_dims[0]`` coordinates, layer 2 the next ``layer_dims[1]``, and so on.
Brackets are given by sparse structure constants ``[e_i, e_j] = sum_k c_ij^k e_k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .field import Field, FieldElement
from .linalg import (
    Matrix,
    Subspace,
    block_diagonal,
    inverse,
    linear_combination,
    nullspace,
    rank,
    unit_vector,
    vec_add,
    vec_is_zero,
    vec_scale,
    vec_sub,
    zero_vector,
)


@dataclass(frozen=True)
class Violation:
    """A failed structural check with a witness."""

    kind: str
    witness: tuple
    message: str


class GradedAlgebra:
    """A graded Lie algebra given by structure constants.

    ``structure`` maps an ordered pair ``(i, j)`` to a sparse vector
    ``{k: c_ij^k}``.  Entries are stored as given; a missing ``(j, i)`` entry is
    filled in by antisymmetry.  ``J`` is an optional complex structure and
    ``J_inherited`` the complex structure carried over by complexifying an
    algebra that already had one.
    """

    def __init__(
        self,
        layer_dims: Sequence[int],
        structure: Mapping[tuple[int, int], Mapping[int, object]],
        d: int = 0,
        J: Matrix | None = None,
        J_inherited: Matrix | None = None,
        name: str = "",
    ):
        F = Field(d)
        self.layer_dims = tuple(int(x) for x in layer_dims)
        self.dim = sum(self.layer_dims)
        self.d = d
        self.field = F
        self.name = name
        self.J = J
        self.J_inherited = J_inherited
        self.degree = []
        self.layer_start = []
        pos = 0
        for j, n in enumerate(self.layer_dims, start=1):
            self.layer_start.append(pos)
            self.degree.extend([j] * n)
            pos += n
        self.degree = tuple(self.degree)
        raw: dict[tuple[int, int], dict[int, FieldElement]] = {}
        for (i, j), vec in structure.items():
            if not (0 <= i < self.dim and 0 <= j < self.dim):
                raise ValueError(f"bracket index out of range: ({i}, {j})")
            entry = {}
            for k, v in vec.items():
                if not 0 <= k < self.dim:
                    raise ValueError(f"bracket output index out of range: {k}")
                val = F(v)
                if not val.is_zero():
                    entry[int(k)] = val
            if entry:
                raw[(int(i), int(j))] = entry
        full = dict(raw)
        for (i, j), entry in raw.items():
            if (j, i) not in raw:
                full[(j, i)] = {k: -v for k, v in entry.items()}
        self.structure = full
        self._given = raw
        self._by_first: dict[int, list[tuple[int, dict[int, FieldElement]]]] = {}
        for (i, j), entry in full.items():
            self._by_first.setdefault(i, []).append((j, entry))
        self._dtheta = None
        self._dcache: dict[int, dict[int, object]] = {}

    # basic data ---------------------------------------------------------------
    @classmethod
    def from_triples(cls, layer_dims, triples: Iterable[Sequence], d: int = 0, **kw) -> "GradedAlgebra":
        structure: dict[tuple[int, int], dict[int, object]] = {}
        for i, j, k, v in triples:
            structure.setdefault((i, j), {})
            F = Field(d)
            structure[(i, j)][k] = structure[(i, j)].get(k, F.zero) + F(v)
        return cls(layer_dims, structure, d, **kw)

    def triples(self) -> list[tuple[int, int, int, FieldElement]]:
        """Canonical sparse triples: every given entry with i < j, plus any
        entry that is not the negative of its transpose."""
        out = []
        for (i, j), entry in self.structure.items():
            if i < j:
                out.extend((i, j, k, v) for k, v in entry.items())
            elif i > j:
                partner = self.structure.get((j, i), {})
                for k, v in entry.items():
                    if partner.get(k, self.field.zero) != -v:
                        out.append((i, j, k, v))
        return sorted(out, key=lambda t: (t[0], t[1], t[2]))

    @property
    def step(self) -> int:
        return len(self.layer_dims)

    def layer_indices(self, j: int) -> range:
        """Coordinates of layer ``j`` (1-based layer number)."""
        s = self.layer_start[j - 1]
        return range(s, s + self.layer_dims[j - 1])

    def layer_subspace(self, j: int) -> Subspace:
        return Subspace.coordinate(self.layer_indices(j), self.dim, self.d)

    def basis_vector(self, i: int) -> tuple:
        return unit_vector(self.dim, i, self.d)

    def zero(self) -> tuple:
        return zero_vector(self.dim, self.d)

    def vector(self, values) -> tuple:
        vals = tuple(self.field(v) for v in values)
        if len(vals) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(vals)}")
        return vals

    def layer_projection(self, x: Sequence, j: int) -> tuple:
        idx = set(self.layer_indices(j))
        z = self.field.zero
        return tuple(x[i] if i in idx else z for i in range(self.dim))

    def homogeneous_dimension(self) -> int:
        return sum(j * n for j, n in enumerate(self.layer_dims, start=1))

    def bracket_basis(self, i: int, j: int) -> dict[int, FieldElement]:
        return self.structure.get((i, j), {})

    # brackets -----------------------------------------------------------------
    def bracket(self, x: Sequence, y: Sequence) -> tuple:
        acc = [self.field.zero] * self.dim
        ynz = {j: v for j, v in enumerate(y) if not v.is_zero()}
        if not ynz:
            return tuple(acc)
        for i, xi in enumerate(x):
            if xi.is_zero():
                continue
            for j, entry in self._by_first.get(i, ()):
                yj = ynz.get(j)
                if yj is None:
                    continue
                c = xi * yj
                for k, v in entry.items():
                    acc[k] = acc[k] + c * v
        return tuple(acc)

    def ad_matrix(self, x: Sequence) -> Matrix:
        cols = [self.bracket(x, self.basis_vector(j)) for j in range(self.dim)]
        return Matrix.from_columns(cols, self.dim, self.d)

    def is_complex(self) -> bool:
        return self.J is not None

    def ad_rank(self, x: Sequence, over: str = "base") -> int:
        """Rank of ``ad_x``.  With ``over='complex'`` the algebra must carry J and
        the rank is half the real rank of the (J-invariant) image."""
        r = rank(self.ad_matrix(x))
        if over == "complex":
            if self.J is None:
                raise ValueError("complex rank needs a complex structure J")
            if r % 2:
                raise ValueError("image of ad is not J-invariant")
            return r // 2
        return r

    def rank_on(self, x: Sequence, indices: Iterable[int], over: str = "base") -> int:
        """Dimension of ``ad_x`` applied to the span of the given coordinates."""
        cols = [self.bracket(x, self.basis_vector(j)) for j in indices]
        if not cols:
            return 0
        r = Subspace(cols, self.dim, self.d).dim
        if over == "complex":
            img = Subspace(cols + [self.J.apply(c) for c in cols], self.dim, self.d)
            return img.dim // 2
        return r

    def rank_I(self, x: Sequence, layers: Iterable[int], over: str = "base") -> int:
        """``rank_I(x) = dim ad_x(V_I)`` for a set ``I`` of layer numbers."""
        idx = [i for j in layers for i in self.layer_indices(j)]
        return self.rank_on(x, idx, over)

    def center(self) -> Subspace:
        # x is central iff [x, e_j] = 0 for all j: linear in x
        rows = []
        for j in range(self.dim):
            ej = self.basis_vector(j)
            cols = [self.bracket(self.basis_vector(i), ej) for i in range(self.dim)]
            m = Matrix.from_columns(cols, self.dim, self.d)
            rows.extend(m.rows)
        return nullspace(Matrix(rows, self.d, ncols=self.dim))

    def centralizer(self, x: Sequence) -> Subspace:
        return nullspace(self.ad_matrix(x))

    def bracket_span(self, a: Subspace, b: Subspace) -> Subspace:
        return Subspace([self.bracket(u, v) for u in a.basis for v in b.basis], self.dim, self.d)

    # dual data used by the exterior calculus ---------------------------------
    def dtheta(self) -> list[dict[int, FieldElement]]:
        """``d theta_k`` as sparse 2-forms keyed by bitmask: ``-sum_{i<j} c_ij^k``."""
        if self._dtheta is None:
            out: list[dict[int, FieldElement]] = [dict() for _ in range(self.dim)]
            for (i, j), entry in self.structure.items():
                if i >= j:
                    continue
                mask = (1 << i) | (1 << j)
                for k, v in entry.items():
                    out[k][mask] = out[k].get(mask, self.field.zero) - v
            self._dtheta = [{m: v for m, v in f.items() if not v.is_zero()} for f in out]
        return self._dtheta

    def __repr__(self):
        tag = f" {self.name!r}" if self.name else ""
        return f"GradedAlgebra{tag}(layers={self.layer_dims}, d={self.d})"


# ---------------------------------------------------------------------------
# validation


def validate(g: GradedAlgebra) -> list[Violation]:
    """All violated axioms: antisymmetry, Jacobi, grading, stratification, J."""
    out: list[Violation] = []
    F = g.field
    for (i, j), entry in g._given.items():
        partner = g.structure.get((j, i), {})
        keys = set(entry) | set(partner)
        for k in sorted(keys):
            if entry.get(k, F.zero) + partner.get(k, F.zero) != 0:
                out.append(Violation("antisymmetry", (i, j), f"[e{i}, e{j}] != -[e{j}, e{i}]"))
                break
    for i in range(g.dim):
        if g.structure.get((i, i)):
            out.append(Violation("antisymmetry", (i, i), f"[e{i}, e{i}] != 0"))
    for (i, j), entry in g.structure.items():
        target = g.degree[i] + g.degree[j]
        for k in entry:
            if g.degree[k] != target:
                out.append(
                    Violation("grading", (i, j, k), f"[V{g.degree[i]}, V{g.degree[j]}] has a V{g.degree[k]} component")
                )
    jac = jacobi_violation(g)
    if jac is not None:
        out.append(Violation("jacobi", jac, f"Jacobi identity fails on (e{jac[0]}, e{jac[1]}, e{jac[2]})"))
    if any(n <= 0 for n in g.layer_dims):
        out.append(Violation("stratification", (), "empty layer"))
    else:
        v1 = list(g.layer_indices(1))
        for j in range(1, g.step):
            span = Subspace(
                [g.bracket(g.basis_vector(a), g.basis_vector(b)) for a in v1 for b in g.layer_indices(j)],
                g.dim,
                g.d,
            )
            if span != g.layer_subspace(j + 1):
                out.append(
                    Violation("stratification", (j,), f"[V1, V{j}] has dimension {span.dim}, expected V{j + 1}")
                )
        top = g.step
        for a in v1:
            for b in g.layer_indices(top):
                if g.structure.get((a, b)):
                    out.append(Violation("stratification", (a, b), "top layer is not central"))
    if g.J is not None:
        out.extend(_validate_J(g, g.J, "J"))
    if g.J_inherited is not None:
        out.extend(_validate_J(g, g.J_inherited, "J_inherited"))
        if g.J is not None and (g.J @ g.J_inherited) != (g.J_inherited @ g.J):
            out.append(Violation("J", (), "J and J_inherited do not commute"))
    return out


def _validate_J(g: GradedAlgebra, J: Matrix, label: str) -> list[Violation]:
    out = []
    if J.shape != (g.dim, g.dim):
        return [Violation("J", (), f"{label} has shape {J.shape}")]
    if J @ J != -Matrix.identity(g.dim, g.d):
        out.append(Violation("J", (), f"{label}^2 != -1"))
    for j in range(g.dim):
        col = J.column(j)
        for k, x in enumerate(col):
            if not x.is_zero() and g.degree[k] != g.degree[j]:
                out.append(Violation("J", (j, k), f"{label} does not preserve layers"))
                return out
    for a in g.layer_indices(1):
        for b in g.layer_indices(1):
            ea, eb = g.basis_vector(a), g.basis_vector(b)
            if g.bracket(J.apply(ea), eb) != J.apply(g.bracket(ea, eb)):
                out.append(Violation("J", (a, b), f"bracket is not {label}-bilinear on the first layer"))
                return out
    return out


def jacobi_violation(g: GradedAlgebra) -> tuple | None:
    basis = [g.basis_vector(i) for i in range(g.dim)]
    for i, j, k in combinations(range(g.dim), 3):
        x, y, z = basis[i], basis[j], basis[k]
        s = vec_add(
            vec_add(g.bracket(x, g.bracket(y, z)), g.bracket(y, g.bracket(z, x))),
            g.bracket(z, g.bracket(x, y)),
        )
        if not vec_is_zero(s):
            return (i, j, k)
    return None


# ---------------------------------------------------------------------------
# graded linear maps


class GradedMap:
    """A linear map between graded algebras, stored as a full matrix.

    Column ``j`` holds the image of source basis vector ``j``.
    """

    __slots__ = ("matrix", "source_layers", "target_layers")

    def __init__(self, matrix: Matrix, source_layers: Sequence[int], target_layers: Sequence[int] | None = None):
        self.matrix = matrix
        self.source_layers = tuple(source_layers)
        self.target_layers = tuple(target_layers if target_layers is not None else source_layers)
        if matrix.shape != (sum(self.target_layers), sum(self.source_layers)):
            raise ValueError("matrix shape does not match the layer dimensions")

    @classmethod
    def from_blocks(cls, blocks: Sequence[Matrix], d: int = 0) -> "GradedMap":
        m = block_diagonal(blocks, d)
        return cls(m, [b.ncols for b in blocks], [b.nrows for b in blocks])

    @property
    def d(self) -> int:
        return self.matrix.d

    def _ranges(self, layers):
        out, pos = [], 0
        for n in layers:
            out.append(range(pos, pos + n))
            pos += n
        return out

    def block(self, j: int) -> Matrix:
        src = self._ranges(self.source_layers)[j - 1]
        tgt = self._ranges(self.target_layers)[j - 1]
        return self.matrix.submatrix(list(tgt), list(src))

    def blocks(self) -> list[Matrix]:
        return [self.block(j) for j in range(1, len(self.source_layers) + 1)]

    def is_graded(self) -> bool:
        src = self._ranges(self.source_layers)
        tgt = self._ranges(self.target_layers)
        for js, rs in enumerate(src):
            for jt, rt in enumerate(tgt):
                if js == jt:
                    continue
                for i in rt:
                    for c in rs:
                        if not self.matrix.rows[i][c].is_zero():
                            return False
        return True

    def apply(self, v: Sequence) -> tuple:
        return self.matrix.apply(v)

    def compose(self, other: "GradedMap") -> "GradedMap":
        """``self o other``."""
        return GradedMap(self.matrix @ other.matrix, other.source_layers, self.target_layers)

    def inverse(self) -> "GradedMap":
        return GradedMap(inverse(self.matrix), self.target_layers, self.source_layers)

    def __eq__(self, other):
        return isinstance(other, GradedMap) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"GradedMap({self.matrix!r})"


def homomorphism_violation(source: GradedAlgebra, target: GradedAlgebra, phi: GradedMap) -> tuple | None:
    """First basis pair ``(i, j)`` with ``phi[e_i, e_j] != [phi e_i, phi e_j]``."""
    images = [phi.apply(source.basis_vector(i)) for i in range(source.dim)]
    for i in range(source.dim):
        for j in range(i + 1, source.dim):
            lhs = phi.apply(source.bracket(source.basis_vector(i), source.basis_vector(j)))
            rhs = target.bracket(images[i], images[j])
            if lhs != rhs:
                return (i, j)
    return None


def is_automorphism(g: GradedAlgebra, phi: GradedMap) -> bool:
    if phi.source_layers != g.layer_dims or phi.target_layers != g.layer_dims:
        return False
    if not phi.is_graded():
        return False
    if phi.matrix.det().is_zero():
        return False
    return homomorphism_violation(g, g, phi) is None


def transport(g: GradedAlgebra, change: GradedMap, name: str = "") -> GradedAlgebra:
    """The same algebra written in the basis given by the columns of ``change``.

    New basis vector ``f_i = change e_i``; the returned structure constants are
    those of the brackets ``[f_i, f_j]`` expressed in the ``f`` basis.
    """
    P = change.matrix
    Pinv = inverse(P)
    cols = P.columns()
    structure = {}
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            br = Pinv.apply(g.bracket(cols[i], cols[j]))
            entry = {k: v for k, v in enumerate(br) if not v.is_zero()}
            if entry:
                structure[(i, j)] = entry
    J = Pinv @ g.J @ P if g.J is not None else None
    Ji = Pinv @ g.J_inherited @ P if g.J_inherited is not None else None
    return GradedAlgebra(g.layer_dims, structure, g.d, J=J, J_inherited=Ji, name=name or g.name)


# ---------------------------------------------------------------------------
# constructions


def summand_coordinates(algebras: Sequence[GradedAlgebra]) -> list[list[int]]:
    """For each summand of :func:`direct_sum`, its coordinates in the sum."""
    step = max(a.step for a in algebras)
    layer_dims = [sum(a.layer_dims[j] if j < a.step else 0 for a in algebras) for j in range(step)]
    maps: list[list[int]] = [[0] * a.dim for a in algebras]
    pos = 0
    for j in range(step):
        for t, a in enumerate(algebras):
            if j < a.step:
                for r, i in enumerate(a.layer_indices(j + 1)):
                    maps[t][i] = pos + r
                pos += a.layer_dims[j]
    assert pos == sum(layer_dims)
    return maps


def direct_sum(algebras: Sequence[GradedAlgebra], name: str = "") -> GradedAlgebra:
    """Layerwise direct sum: layer j of the sum concatenates the layers j."""
    if not algebras:
        raise ValueError("empty direct sum")
    d = algebras[0].d
    if any(a.d != d for a in algebras):
        raise ValueError("summands over different fields")
    step = max(a.step for a in algebras)
    layer_dims = [sum(a.layer_dims[j] if j < a.step else 0 for a in algebras) for j in range(step)]
    maps = summand_coordinates(algebras)
    N = sum(layer_dims)
    structure: dict[tuple[int, int], dict[int, FieldElement]] = {}
    for a, m in zip(algebras, maps):
        for (i, j), entry in a._given.items():
            structure[(m[i], m[j])] = {m[k]: v for k, v in entry.items()}

    def lift(attr):
        mats = [getattr(a, attr) for a in algebras]
        if any(x is None for x in mats):
            return None
        F = Field(d)
        rows = [[F.zero] * N for _ in range(N)]
        for a, mp, M in zip(algebras, maps, mats):
            for i in range(a.dim):
                for j in range(a.dim):
                    rows[mp[i]][mp[j]] = M.rows[i][j]
        return Matrix(rows, d, ncols=N)

    return GradedAlgebra(layer_dims, structure, d, J=lift("J"), J_inherited=lift("J_inherited"), name=name)


def quotient_complement(g: GradedAlgebra, K: Subspace) -> list[int]:
    """Coordinates kept by :func:`quotient`: the non-pivot columns of K's echelon basis."""
    piv = set(K.pivots)
    return [i for i in range(g.dim) if i not in piv]


def check_graded_ideal(g: GradedAlgebra, K: Subspace) -> str | None:
    """Reason why ``K`` cannot be quotiented by, or None if it is a graded ideal in one layer."""
    if K.ambient_dim != g.dim:
        return "K lives in the wrong ambient space"
    layers = {g.degree[p] for p in K.pivots}
    if len(layers) > 1:
        return "K is not contained in a single layer"
    if layers:
        (layer,) = layers
        idx = set(g.layer_indices(layer))
        for b in K.basis:
            if any(not x.is_zero() for i, x in enumerate(b) if i not in idx):
                return "K is not contained in a single layer"
        for b in K.basis:
            for i in range(g.dim):
                if not K.contains(g.bracket(g.basis_vector(i), b)):
                    return "K is not an ideal"
    return None


def quotient(g: GradedAlgebra, K: Subspace, name: str = "") -> tuple[GradedAlgebra, GradedMap]:
    """Quotient by a graded ideal ``K`` lying in one layer, with the projection.

    The quotient basis is the image of the coordinates that are not pivots of
    K's echelon basis.  A pivot coordinate ``p`` of echelon row ``r`` maps to
    ``-sum_c K[r][c] e'_c`` over the kept coordinates ``c``.
    """
    reason = check_graded_ideal(g, K)
    if reason:
        raise ValueError(reason)
    keep = quotient_complement(g, K)
    pos = {c: q for q, c in enumerate(keep)}
    F = g.field
    n = len(keep)
    cols = []
    pivot_row = {p: r for r, p in enumerate(K.pivots)}
    for i in range(g.dim):
        col = [F.zero] * n
        if i in pos:
            col[pos[i]] = F.one
        else:
            row = K.basis[pivot_row[i]]
            for c in keep:
                if not row[c].is_zero():
                    col[pos[c]] = -row[c]
        cols.append(col)
    proj_matrix = Matrix.from_columns(cols, n, g.d)
    kept_per_layer = [sum(1 for c in keep if g.degree[c] == j) for j in range(1, g.step + 1)]
    proj = GradedMap(proj_matrix, g.layer_dims, kept_per_layer)
    layer_dims = list(kept_per_layer)
    while layer_dims and layer_dims[-1] == 0:
        layer_dims.pop()
    structure = {}
    for a in range(n):
        for b in range(a + 1, n):
            br = proj_matrix.apply(g.bracket(g.basis_vector(keep[a]), g.basis_vector(keep[b])))
            entry = {k: v for k, v in enumerate(br) if not v.is_zero()}
            if entry:
                structure[(a, b)] = entry

    def descend(M):
        if M is None:
            return None
        if not all(K.contains(M.apply(b)) for b in K.basis):
            return None
        sec = Matrix.from_columns([g.basis_vector(c) for c in keep], g.dim, g.d)
        return proj_matrix @ M @ sec

    q = GradedAlgebra(layer_dims, structure, g.d, J=descend(g.J), J_inherited=descend(g.J_inherited), name=name)
    return q, proj


def section_matrix(g: GradedAlgebra, K: Subspace) -> Matrix:
    """The lift of quotient basis vectors to the kept ambient coordinates."""
    keep = quotient_complement(g, K)
    return Matrix.from_columns([g.basis_vector(c) for c in keep], g.dim, g.d)


def complexify(g: GradedAlgebra, name: str = "") -> GradedAlgebra:
    """Realification of ``g (x) C``.

    Layer j of the result lists ``e_a`` for ``a`` in layer j and then ``i e_a``.
    ``J`` of the result is multiplication by i; when ``g`` carries its own
    complex structure, its extension is returned as ``J_inherited``.
    """
    F = g.field
    layer_dims = [2 * n for n in g.layer_dims]
    N = 2 * g.dim
    re, im = complexification_coordinates(g)
    structure: dict[tuple[int, int], dict[int, FieldElement]] = {}
    for (a, b), entry in g._given.items():
        structure[(re[a], re[b])] = {re[k]: v for k, v in entry.items()}
        structure[(re[a], im[b])] = {im[k]: v for k, v in entry.items()}
        structure[(im[a], re[b])] = {im[k]: v for k, v in entry.items()}
        structure[(im[a], im[b])] = {re[k]: -v for k, v in entry.items()}
    rows = [[F.zero] * N for _ in range(N)]
    for a in range(g.dim):
        rows[im[a]][re[a]] = F.one
        rows[re[a]][im[a]] = -F.one
    J = Matrix(rows, g.d, ncols=N)
    Ji = None
    if g.J is not None:
        rows = [[F.zero] * N for _ in range(N)]
        for a in range(g.dim):
            for b in range(g.dim):
                x = g.J.rows[a][b]
                if not x.is_zero():
                    rows[re[a]][re[b]] = x
                    rows[im[a]][im[b]] = x
        Ji = Matrix(rows, g.d, ncols=N)
    return GradedAlgebra(layer_dims, structure, g.d, J=J, J_inherited=Ji, name=name)


def complexification_coordinates(g: GradedAlgebra) -> tuple[list[int], list[int]]:
    """Positions of ``e_a`` and ``i e_a`` in :func:`complexify` of ``g``."""
    re = [0] * g.dim
    im = [0] * g.dim
    pos = 0
    for j in range(1, g.step + 1):
        idx = list(g.layer_indices(j))
        for r, a in enumerate(idx):
            re[a] = pos + r
            im[a] = pos + len(idx) + r
        pos += 2 * len(idx)
    return re, im


def complexify_vector(g: GradedAlgebra, real: Sequence, imag: Sequence | None = None) -> tuple:
    """The vector ``real + i imag`` of ``g`` in the coordinates of ``complexify(g)``."""
    re, im = complexification_coordinates(g)
    F = g.field
    out = [F.zero] * (2 * g.dim)
    for a in range(g.dim):
        out[re[a]] = F(real[a])
        if imag is not None:
            out[im[a]] = F(imag[a])
    return tuple(out)


def complexify_matrix(g: GradedAlgebra, M: Matrix, target: GradedAlgebra | None = None) -> Matrix:
    """The complex-linear extension of a real linear map ``g -> target``."""
    target = target or g
    re_s, im_s = complexification_coordinates(g)
    re_t, im_t = complexification_coordinates(target)
    F = g.field
    rows = [[F.zero] * (2 * g.dim) for _ in range(2 * target.dim)]
    for i in range(target.dim):
        for j in range(g.dim):
            x = M.rows[i][j]
            if not x.is_zero():
                rows[re_t[i]][re_s[j]] = x
                rows[im_t[i]][im_s[j]] = x
    return Matrix(rows, g.d, ncols=2 * g.dim)


def conjugation_matrix(g: GradedAlgebra) -> Matrix:
    """Complex conjugation of ``complexify(g)`` fixing the real form ``g``."""
    re, im = complexification_coordinates(g)
    diag = [None] * (2 * g.dim)
    for a in range(g.dim):
        diag[re[a]] = 1
        diag[im[a]] = -1
    return Matrix.diagonal(diag, g.d)


def jc_eigenspace_split(gC: GradedAlgebra) -> tuple[Subspace, Subspace]:
    """The ``+i`` and ``-i`` eigenspaces of ``J_inherited`` with i acting as ``J``."""
    if gC.J is None or gC.J_inherited is None:
        raise ValueError("eigenspace split needs both J and J_inherited")
    plus = nullspace(gC.J_inherited - gC.J)
    minus = nullspace(gC.J_inherited + gC.J)
    return plus, minus


# ---------------------------------------------------------------------------
# group law for step <= 2


def _require_step2(g: GradedAlgebra):
    if g.step > 2:
        raise ValueError("closed-form group law implemented for step <= 2 only")


def bch_multiply(g: GradedAlgebra, A: Sequence, B: Sequence) -> tuple:
    """``A * B = A + B + [A, B]/2`` in exponential coordinates."""
    _require_step2(g)
    half = g.field(1) / 2
    return vec_add(vec_add(A, B), vec_scale(half, g.bracket(A, B)))


def bch_defect(g: GradedAlgebra, A: Sequence, B: Sequence) -> tuple:
    """``N(A, B) = A * B - A - B``."""
    return vec_sub(vec_sub(bch_multiply(g, A, B), A), B)


def bch_inverse(g: GradedAlgebra, A: Sequence) -> tuple:
    return vec_scale(g.field(-1), A)


def bch_conjugate(g: GradedAlgebra, A: Sequence, B: Sequence) -> tuple:
    """``(-A) * B * A``."""
    return bch_multiply(g, bch_multiply(g, bch_inverse(g, A), B), A)


def commutes_with_upper_layers(g: GradedAlgebra, A: Sequence) -> bool:
    """Whether ``[A, V_j] = 0`` for all j >= 2."""
    return all(
        vec_is_zero(g.bracket(A, g.basis_vector(i))) for j in range(2, g.step + 1) for i in g.layer_indices(j)
    )


def generated_subalgebra(g: GradedAlgebra, W: Subspace) -> Subspace:
    """``W + [W, W] + [W, [W, W]] + ...``."""
    span = W
    current = W
    while True:
        nxt = g.bracket_span(W, current)
        new = span + nxt
        if new == span:
            return span
        span, current = new, nxt


def combination(g: GradedAlgebra, coeffs: Sequence, vectors: Sequence[Sequence]) -> tuple:
    return linear_combination(coeffs, vectors, g.dim, g.d)
