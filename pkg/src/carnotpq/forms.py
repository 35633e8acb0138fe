"""Left-invariant forms and multivectors on a graded Lie algebra.

A form is a sparse map from index sets to coefficients.  Index sets are
bitmasks over the basis ``0 .. n-1``; ``theta_I`` for a sorted set ``I`` is
the wedge of the dual covectors in increasing order.

Conventions:

* ``theta_I(e_J) = delta_IJ`` for sorted ``I`` and ``J`` (determinant pairing).
* ``(i_X alpha)(Z) = alpha(X ^ Z)``, hence ``i_X i_Y = i_{Y ^ X}``.
* ``d alpha(X_0, ..., X_k) = sum_{i<j} (-1)^{i+j} alpha([X_i, X_j], X_0, ...)``
  with the two arguments omitted; for one-forms ``d alpha(X, Y) = -alpha([X, Y])``.
* ``(Phi^* alpha)(X, ...) = alpha(Phi X, ...)``.

Coefficients are field elements or :class:`LinearCoeff` values, which carry a
formal differential ``d phi = sum_i c_i theta_i`` through wedge products.
"""

from __future__ import annotations

import math
import random
from itertools import combinations, product
from typing import Iterable, Sequence

from .field import Field, FieldElement
from .lie import GradedAlgebra, GradedMap
from .linalg import Matrix, Subspace, determinant, vec_is_zero

NEG_INF = -math.inf


class SymbolicProductError(ValueError):
    """Raised when two non-constant formal coefficients are multiplied."""


class LinearCoeff:
    """``const + sum_i terms[i] * c_i`` with exact coefficients.

    The symbols ``c_i`` stand for the derivatives of an unknown function along
    the basis vectors, so only products with constants are meaningful.
    """

    __slots__ = ("const", "terms", "d")

    def __init__(self, const=0, terms: dict[int, object] | None = None, d: int = 0):
        F = Field(d)
        self.const = F(const)
        self.terms = {int(k): F(v) for k, v in (terms or {}).items() if not F(v).is_zero()}
        self.d = d

    @classmethod
    def symbol(cls, i: int, d: int = 0) -> "LinearCoeff":
        return cls(0, {i: 1}, d)

    def is_zero(self) -> bool:
        return self.const.is_zero() and not self.terms

    def is_constant(self) -> bool:
        return not self.terms

    def _lift(self, other) -> "LinearCoeff | None":
        if isinstance(other, LinearCoeff):
            return other
        if isinstance(other, (FieldElement, int)):
            return LinearCoeff(other, None, self.d)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for k, v in o.terms.items():
            terms[k] = terms.get(k, 0) + v
        return LinearCoeff(self.const + o.const, terms, self.d)

    __radd__ = __add__

    def __neg__(self):
        return LinearCoeff(-self.const, {k: -v for k, v in self.terms.items()}, self.d)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, LinearCoeff):
            if other.is_constant():
                other = other.const
            elif self.is_constant():
                return other * self.const
            else:
                raise SymbolicProductError("product of two non-constant formal coefficients")
        if isinstance(other, (FieldElement, int)):
            return LinearCoeff(self.const * other, {k: v * other for k, v in self.terms.items()}, self.d)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, LinearCoeff):
            if not other.is_constant():
                raise SymbolicProductError("division by a non-constant formal coefficient")
            other = other.const
        inv = Field(self.d)(other).inverse()
        return self * inv

    def coefficient(self, i: int):
        return self.terms.get(i, Field(self.d).zero)

    def __eq__(self, other):
        o = self._lift(other) if not isinstance(other, LinearCoeff) else other
        if o is None:
            return NotImplemented
        return self.const == o.const and self.terms == o.terms

    def __hash__(self):
        return hash((self.const, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        parts = [] if self.const.is_zero() else [str(self.const)]
        parts += [f"({v})*c{k}" for k, v in sorted(self.terms.items())]
        return " + ".join(parts) if parts else "0"


def _is_zero(c) -> bool:
    return c.is_zero() if hasattr(c, "is_zero") else c == 0


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def merge_sign(A: int, B: int) -> int:
    """Sign of the shuffle putting the concatenation ``A, B`` in increasing order."""
    cnt = 0
    b = B
    while b:
        low = b & -b
        cnt += (A & ~((low << 1) - 1)).bit_count()
        b ^= low
    return -1 if cnt & 1 else 1


def permutation_sign_of(indices: Sequence[int]) -> int:
    inv = sum(1 for a, b in combinations(range(len(indices)), 2) if indices[a] > indices[b])
    return -1 if inv & 1 else 1


class _Graded:
    __slots__ = ("n", "degree", "terms", "d")

    def __init__(self, n: int, degree: int, terms: dict[int, object] | None = None, d: int = 0):
        self.n = n
        self.degree = degree
        self.d = d
        clean = {}
        for m, c in (terms or {}).items():
            if _is_zero(c):
                continue
            if m.bit_count() != degree:
                raise ValueError(f"term of degree {m.bit_count()} in a degree {degree} element")
            if m >> n:
                raise ValueError("index out of range")
            clean[m] = c
        self.terms = clean

    def _new(self, degree, terms):
        return type(self)(self.n, degree, terms, self.d)

    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.n != self.n:
            raise ValueError("dimension mismatch")

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        self._check(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if other.degree != self.degree:
            raise ValueError("cannot add elements of different degrees")
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms[m] + c if m in terms else c
        return self._new(self.degree, terms)

    def __neg__(self):
        return self._new(self.degree, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return self._new(self.degree, {m: x * c for m, x in self.terms.items()})

    def __mul__(self, c):
        if isinstance(c, _Graded):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def coefficient(self, indices: Iterable[int]):
        idx = list(indices)
        m = mask_of(idx)
        c = self.terms.get(m)
        if c is None:
            return Field(self.d).zero
        return c * permutation_sign_of(idx)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        if self.n != other.n:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, self.degree, tuple(sorted(self.terms.items(), key=lambda t: t[0]))))

    def items(self) -> list[tuple[tuple[int, ...], object]]:
        return [(tuple(_bits(m)), c) for m, c in sorted(self.terms.items())]

    def __repr__(self):
        sym = "theta" if isinstance(self, Form) else "e"
        body = " + ".join(f"({c})*{sym}{list(idx)}" for idx, c in self.items()) or "0"
        return f"{type(self).__name__}[deg {self.degree}]({body})"


class Form(_Graded):
    """An exterior form on ``F^n``."""

    __slots__ = ()


class MultiVector(_Graded):
    """An element of the exterior algebra of ``F^n`` (a k-vector)."""

    __slots__ = ()


def _wedge_terms(a: dict, b: dict) -> dict:
    out: dict[int, object] = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            if ma & mb:
                continue
            c = ca * cb
            if merge_sign(ma, mb) < 0:
                c = -c
            m = ma | mb
            out[m] = out[m] + c if m in out else c
    return out


def wedge(*items):
    """Wedge product of forms, or of multivectors, in order."""
    result = items[0]
    for other in items[1:]:
        result._check(other)
        result = result._new(result.degree + other.degree, _wedge_terms(result.terms, other.terms))
    return result


def theta(n: int, i: int, d: int = 0, coeff=1) -> Form:
    return Form(n, 1, {1 << i: Field(d)(coeff)}, d)


def theta_monomial(n: int, indices: Sequence[int], d: int = 0, coeff=1) -> Form:
    """``coeff * theta_{i_1} ^ ... ^ theta_{i_k}`` in the given order."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return Form(n, len(idx), {}, d)
    c = Field(d)(coeff) * permutation_sign_of(idx)
    return Form(n, len(idx), {mask_of(idx): c}, d)


def scalar_form(n: int, c, d: int = 0) -> Form:
    return Form(n, 0, {0: c}, d)


def volume_form(n: int, d: int = 0) -> Form:
    return theta_monomial(n, range(n), d)


def one_form(coeffs: Sequence, d: int = 0) -> Form:
    return Form(len(coeffs), 1, {1 << i: c for i, c in enumerate(coeffs)}, d)


def basis_multivector(n: int, indices: Sequence[int], d: int = 0, coeff=1) -> MultiVector:
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return MultiVector(n, len(idx), {}, d)
    c = Field(d)(coeff) * permutation_sign_of(idx)
    return MultiVector(n, len(idx), {mask_of(idx): c}, d)


def vector_to_multivector(v: Sequence, d: int = 0) -> MultiVector:
    return MultiVector(len(v), 1, {1 << i: x for i, x in enumerate(v)}, d)


def wedge_vectors(vectors: Sequence[Sequence], n: int | None = None, d: int = 0) -> MultiVector:
    if not vectors:
        return MultiVector(n or 0, 0, {0: Field(d).one}, d)
    mvs = [vector_to_multivector(v, d) for v in vectors]
    return wedge(*mvs)


def formal_dphi(n: int, d: int = 0) -> Form:
    """The formal one-form ``d phi = sum_i c_i theta_i``."""
    return Form(n, 1, {1 << i: LinearCoeff.symbol(i, d) for i in range(n)}, d)


def as_multivector(x, d: int = 0) -> MultiVector:
    if isinstance(x, MultiVector):
        return x
    return vector_to_multivector(tuple(x), d)


# ---------------------------------------------------------------------------
# contraction and pairing


def interior(X, alpha: Form) -> Form:
    """``i_X alpha`` with ``(i_X alpha)(Z) = alpha(X ^ Z)``."""
    X = as_multivector(X, alpha.d)
    if X.n != alpha.n:
        raise ValueError("dimension mismatch")
    if X.degree > alpha.degree:
        return Form(alpha.n, 0, {}, alpha.d)
    out: dict[int, object] = {}
    for mj, xj in X.terms.items():
        for mi, ai in alpha.terms.items():
            if mj & ~mi:
                continue
            rest = mi ^ mj
            c = ai * xj
            if merge_sign(mj, rest) < 0:
                c = -c
            out[rest] = out[rest] + c if rest in out else c
    return Form(alpha.n, alpha.degree - X.degree, out, alpha.d)


def evaluate(alpha: Form, X) -> object:
    """``alpha(X)`` for a k-vector X of the same degree."""
    X = as_multivector(X, alpha.d)
    if X.degree != alpha.degree and not (X.is_zero() or alpha.is_zero()):
        raise ValueError("degree mismatch in pairing")
    total = Field(alpha.d).zero
    for m, c in alpha.terms.items():
        x = X.terms.get(m)
        if x is not None:
            total = c * x + total
    return total


def evaluate_vectors(alpha: Form, vectors: Sequence[Sequence]):
    return evaluate(alpha, wedge_vectors(vectors, alpha.n, alpha.d))


# ---------------------------------------------------------------------------
# exterior derivative and weights


def _d_monomial(g: GradedAlgebra, mask: int) -> dict[int, FieldElement]:
    hit = g._dcache.get(mask)
    if hit is not None:
        return hit
    dth = g.dtheta()
    out: dict[int, FieldElement] = {}
    for r, i in enumerate(_bits(mask)):
        rest = mask ^ (1 << i)
        for m2, c in dth[i].items():
            if m2 & rest:
                continue
            val = c if r % 2 == 0 else -c
            if merge_sign(m2, rest) < 0:
                val = -val
            m = m2 | rest
            out[m] = out[m] + val if m in out else val
    out = {m: c for m, c in out.items() if not c.is_zero()}
    g._dcache[mask] = out
    return out


def differential(g: GradedAlgebra, alpha: Form) -> Form:
    """Exterior derivative of a left-invariant form."""
    if alpha.n != g.dim:
        raise ValueError("form and algebra have different dimensions")
    out: dict[int, object] = {}
    for m, c in alpha.terms.items():
        for m2, v in _d_monomial(g, m).items():
            x = c * v
            out[m2] = out[m2] + x if m2 in out else x
    return Form(alpha.n, alpha.degree + 1, out, alpha.d)


def differential_by_evaluation(g: GradedAlgebra, alpha: Form) -> Form:
    """Exterior derivative computed from the invariant evaluation formula.

    Independent of :func:`differential`; used as a cross-check.
    """
    k = alpha.degree
    out = {}
    basis = [g.basis_vector(i) for i in range(g.dim)]
    for idx in combinations(range(g.dim), k + 1):
        total = Field(g.d).zero
        for a, b in combinations(range(k + 1), 2):
            br = g.bracket(basis[idx[a]], basis[idx[b]])
            if vec_is_zero(br):
                continue
            rest = [basis[idx[t]] for t in range(k + 1) if t not in (a, b)]
            val = evaluate_vectors(alpha, [br] + rest)
            total = total + val if (a + b) % 2 == 0 else total - val
        if not _is_zero(total):
            out[mask_of(idx)] = total
    return Form(g.dim, k + 1, out, g.d)


def is_closed(g: GradedAlgebra, alpha: Form) -> bool:
    return differential(g, alpha).is_zero()


def weight(g: GradedAlgebra, alpha: Form):
    """``max_I -sum_{i in I} deg(i)`` over the support; ``-inf`` for zero."""
    if alpha.is_zero():
        return NEG_INF
    return max(-sum(g.degree[i] for i in _bits(m)) for m in alpha.terms)


def lie_derivative(g: GradedAlgebra, x, alpha: Form) -> Form:
    """Cartan's formula ``L_X = d i_X + i_X d`` for a vector X."""
    return differential(g, interior(x, alpha)) + interior(x, differential(g, alpha))


# ---------------------------------------------------------------------------
# maps


def _matrix_of(phi) -> Matrix:
    return phi.matrix if isinstance(phi, GradedMap) else phi


def pullback(phi, alpha: Form) -> Form:
    """``Phi^* alpha`` for a linear map ``Phi`` (columns are images of basis vectors)."""
    M = _matrix_of(phi)
    if M.nrows != alpha.n:
        raise ValueError("form does not live on the target of the map")
    n_src = M.ncols
    if alpha.is_zero():
        return Form(n_src, alpha.degree, {}, alpha.d)
    if alpha.degree == 0:
        return Form(n_src, 0, dict(alpha.terms), alpha.d)
    if alpha.degree == alpha.n == n_src:
        (c,) = alpha.terms.values()
        return Form(n_src, alpha.degree, {(1 << n_src) - 1: c * determinant(M)}, alpha.d)
    ones = []
    for i in range(M.nrows):
        ones.append({1 << j: x for j, x in enumerate(M.rows[i]) if not x.is_zero()})
    memo: dict[int, dict] = {0: {0: Field(alpha.d).one}}

    def monomial(mask: int) -> dict:
        hit = memo.get(mask)
        if hit is not None:
            return hit
        top = mask.bit_length() - 1
        res = _wedge_terms(monomial(mask ^ (1 << top)), ones[top])
        memo[mask] = res
        return res

    out: dict[int, object] = {}
    for m, c in alpha.terms.items():
        for m2, v in monomial(m).items():
            x = c * v
            out[m2] = out[m2] + x if m2 in out else x
    return Form(n_src, alpha.degree, out, alpha.d)


def pushforward(phi, X: MultiVector) -> MultiVector:
    """``Phi_* X`` for a k-vector X on the source of ``Phi``."""
    M = _matrix_of(phi)
    X = as_multivector(X, M.d)
    if X.n != M.ncols:
        raise ValueError("multivector does not live on the source of the map")
    cols = [{1 << i: x for i, x in enumerate(M.column(j)) if not x.is_zero()} for j in range(M.ncols)]
    out: dict[int, object] = {}
    for m, c in X.terms.items():
        acc = {0: Field(M.d).one}
        for j in _bits(m):
            acc = _wedge_terms(acc, cols[j])
        for m2, v in acc.items():
            x = c * v
            out[m2] = out[m2] + x if m2 in out else x
    return MultiVector(M.nrows, X.degree, out, M.d)


def descend(alpha: Form, ambient: GradedAlgebra, K: Subspace) -> Form:
    """The form on ``ambient / K`` whose lift is ``alpha``.

    Requires ``i_kappa alpha = 0`` for every kappa in K; the quotient basis is
    the one used by :func:`carnotpq.lie.quotient`.
    """
    for kappa in K.basis:
        if not interior(kappa, alpha).is_zero():
            raise ValueError("form does not annihilate K and cannot descend")
    piv = set(K.pivots)
    keep = [i for i in range(ambient.dim) if i not in piv]
    pos = {c: q for q, c in enumerate(keep)}
    out = {}
    for m, c in alpha.terms.items():
        bits = _bits(m)
        if any(b in piv for b in bits):
            continue
        out[mask_of(pos[b] for b in bits)] = c
    return Form(len(keep), alpha.degree, out, alpha.d)


def lift(alpha: Form, projection) -> Form:
    """Pullback of a quotient form along the projection."""
    return pullback(projection, alpha)


def omega_ratio(top: Form, omega: Form):
    """The coefficient c with ``top = c * omega`` for top-degree forms."""
    if omega.degree != omega.n or omega.is_zero():
        raise ValueError("reference form must be a nonzero top-degree form")
    if top.is_zero():
        return Field(omega.d).zero
    if top.degree != top.n:
        raise ValueError("form is not of top degree")
    full = (1 << omega.n) - 1
    return top.terms[full] / omega.terms[full]


# ---------------------------------------------------------------------------
# identity suite


class IdentityResult:
    """Outcome of one identity: how many instances were checked, first failure."""

    __slots__ = ("name", "checked", "failure")

    def __init__(self, name: str):
        self.name = name
        self.checked = 0
        self.failure: dict | None = None

    @property
    def passed(self) -> bool:
        return self.failure is None

    def record(self, ok: bool, witness: dict):
        self.checked += 1
        if not ok and self.failure is None:
            self.failure = witness

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checked": self.checked, "failure": self.failure}

    def __repr__(self):
        return f"IdentityResult({self.name}, passed={self.passed}, checked={self.checked})"


def _random_vector(g: GradedAlgebra, rng: random.Random, support: Sequence[int] | None = None) -> tuple:
    F = g.field
    idx = range(g.dim) if support is None else support
    vals = [F.zero] * g.dim
    for i in idx:
        a = rng.randint(-3, 3)
        if g.d:
            vals[i] = F(a, rng.randint(-2, 2))
        else:
            vals[i] = F(a)
    return tuple(vals)


def identity_suite(
    g: GradedAlgebra,
    random_samples: int = 5,
    seed: int = 0,
    commutator_full_limit: int = 8,
) -> list[IdentityResult]:
    """Check the standard contraction identities for the volume form of ``g``.

    With ``omega`` the volume form and basis vectors X, Y, Z, ...:

    * ``d d alpha = 0`` on every basis monomial,
    * ``d(i_X omega) = 0`` and ``L_X omega = 0``,
    * ``d(i_X i_Y omega) = i_[X,Y] omega``,
    * ``d(i_X i_Y i_Z omega) = i_A omega`` with
      ``A = X ^ [Y,Z] + Y ^ [Z,X] + Z ^ [X,Y]``,
    * ``d(i_Z i_X'' i_X' i_X omega) = -i_Z d(i_X'' i_X' i_X omega)`` when Z commutes
      with X, X', X'',
    * ``i_[X,Y] = L_X i_Y - i_Y L_X`` on forms.

    Every basis tuple is checked, followed by ``random_samples`` random
    non-basis tuples per identity.  The commutator rule runs on every basis
    monomial when ``dim g <= commutator_full_limit`` and otherwise on all
    monomials of degree at most 2 or codegree at most 2.
    """
    n = g.dim
    d = g.d
    omega = volume_form(n, d)
    basis = [g.basis_vector(i) for i in range(n)]
    rng = random.Random(seed)
    results = []

    res = IdentityResult("d∘d = 0")
    for mask in range(1 << n):
        bits = _bits(mask)
        alpha = Form(n, len(bits), {mask: Field(d).one}, d)
        res.record(differential(g, differential(g, alpha)).is_zero(), {"monomial": bits})
    results.append(res)

    def vectors(k: int):
        for tup in product(range(n), repeat=k):
            yield tup, [basis[i] for i in tup]
        for s in range(random_samples):
            yield ("random", s), [_random_vector(g, rng) for _ in range(k)]

    res = IdentityResult("d(i_X ω) = 0")
    res_l = IdentityResult("L_X ω = 0")
    for tag, (x,) in vectors(1):
        ix = interior(x, omega)
        res.record(differential(g, ix).is_zero(), {"X": tag})
        res_l.record(lie_derivative(g, x, omega).is_zero(), {"X": tag})
    results += [res, res_l]

    res = IdentityResult("d(i_X i_Y ω) = i_[X,Y] ω")
    for tag, (x, y) in vectors(2):
        lhs = differential(g, interior(x, interior(y, omega)))
        rhs = interior(g.bracket(x, y), omega)
        res.record(lhs == rhs, {"X,Y": tag})
    results.append(res)

    res = IdentityResult("d(i_X i_Y i_Z ω) = i_A ω")
    for tag, (x, y, z) in vectors(3):
        lhs = differential(g, interior(x, interior(y, interior(z, omega))))
        A = (
            wedge_vectors([x, g.bracket(y, z)], n, d)
            + wedge_vectors([y, g.bracket(z, x)], n, d)
            + wedge_vectors([z, g.bracket(x, y)], n, d)
        )
        rhs = interior(A, omega)
        res.record(lhs == rhs, {"X,Y,Z": tag})
    results.append(res)

    res = IdentityResult("d(i_Z i_X'' i_X' i_X ω) = -i_Z d(i_X'' i_X' i_X ω)")
    for tag, (z, x, x1, x2) in vectors(4):
        if tag[0] == "random":
            # random tuples: draw X's from the centralizer of Z
            cz = g.centralizer(z)
            picks = []
            for _ in range(3):
                coeffs = [rng.randint(-3, 3) for _ in cz.basis]
                picks.append(tuple(sum((c * b[k] for c, b in zip(coeffs, cz.basis)), Field(d).zero) for k in range(n)))
            x, x1, x2 = picks
        if not all(vec_is_zero(g.bracket(v, z)) for v in (x, x1, x2)):
            continue
        inner = interior(x2, interior(x1, interior(x, omega)))
        lhs = differential(g, interior(z, inner))
        rhs = -interior(z, differential(g, inner))
        res.record(lhs == rhs, {"Z,X,X',X''": tag})
    results.append(res)

    res = IdentityResult("i_[X,Y] = [L_X, i_Y]")
    if n <= commutator_full_limit:
        masks = range(1 << n)
    else:
        masks = [m for m in range(1 << n) if m.bit_count() <= 2 or m.bit_count() >= n - 2]
    forms = [Form(n, m.bit_count(), {m: Field(d).one}, d) for m in masks]
    for i in range(n):
        for j in range(n):
            x, y = basis[i], basis[j]
            br = g.bracket(x, y)
            for alpha in forms:
                lhs = interior(br, alpha)
                rhs = lie_derivative(g, x, interior(y, alpha)) - interior(y, lie_derivative(g, x, alpha))
                res.record(lhs == rhs, {"X": i, "Y": j, "alpha": _bits(next(iter(alpha.terms)))})
    for s in range(random_samples):
        x, y = _random_vector(g, rng), _random_vector(g, rng)
        k = rng.randint(0, n)
        alpha = Form(n, k, {mask_of(rng.sample(range(n), k)): Field(d).one}, d)
        alpha = alpha + Form(n, k, {mask_of(rng.sample(range(n), k)): Field(d)(2)}, d)
        lhs = interior(g.bracket(x, y), alpha)
        rhs = lie_derivative(g, x, interior(y, alpha)) - interior(y, lie_derivative(g, x, alpha))
        res.record(lhs == rhs, {"random": s})
    results.append(res)
    return results
