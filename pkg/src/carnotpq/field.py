"""Exact arithmetic in Q and in quadratic fields Q(sqrt d).

An element is a pair of rationals ``a + b*sqrt(d)``.  The tag ``d`` is a
squarefree integer other than 1; ``d = 0`` means plain Q.  Elements with
different tags never combine: mixing fields is an error, not a coercion.
Python ints and ``Fraction`` values coerce into whichever field they meet.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Union


class FieldMismatchError(ValueError):
    """Raised when elements of different quadratic fields are combined."""


@lru_cache(maxsize=None)
def check_field_tag(d: int) -> int:
    """Return ``d`` if it is a valid field tag, else raise ``ValueError``."""
    if not isinstance(d, int) or isinstance(d, bool):
        raise ValueError(f"field tag must be an int, got {d!r}")
    if d == 0:
        return d
    if d == 1:
        raise ValueError("d = 1 does not define a quadratic extension")
    m = abs(d)
    p = 2
    while p * p <= m:
        if m % (p * p) == 0:
            raise ValueError(f"field tag {d} is not squarefree")
        p += 1
    return d


Scalar = Union["FieldElement", int, Fraction]


class FieldElement:
    """An immutable element ``a + b*sqrt(d)`` with rational ``a`` and ``b``."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a: int | Fraction | str = 0, b: int | Fraction | str = 0, d: int = 0):
        a = Fraction(a)
        b = Fraction(b)
        check_field_tag(d)
        if d == 0 and b != 0:
            raise ValueError("irrational part requires a nonzero field tag")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction, d: int) -> "FieldElement":
        obj = object.__new__(cls)
        object.__setattr__(obj, "a", a)
        object.__setattr__(obj, "b", b)
        object.__setattr__(obj, "d", d)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    # coercion ---------------------------------------------------------------
    def _coerce(self, other) -> "FieldElement | None":
        if isinstance(other, FieldElement):
            if other.d != self.d:
                raise FieldMismatchError(f"cannot combine Q(sqrt {self.d}) with Q(sqrt {other.d})")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return FieldElement._raw(Fraction(other), Fraction(0), self.d)
        return None

    # predicates -------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.a and not self.b

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def is_rational(self) -> bool:
        return self.b == 0

    # arithmetic -------------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement._raw(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement._raw(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement._raw(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.b == 0 and o.b == 0:
            return FieldElement._raw(self.a * o.a, Fraction(0), self.d)
        return FieldElement._raw(
            self.a * o.a + self.b * o.b * self.d,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Field norm ``a^2 - d b^2``; zero only for the zero element."""
        return self.a * self.a - self.d * self.b * self.b

    def conjugate(self) -> "FieldElement":
        """Galois conjugate ``a - b sqrt(d)`` (complex conjugation when d < 0)."""
        return FieldElement._raw(self.a, -self.b, self.d)

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.b == 0:
            return FieldElement._raw(1 / self.a, Fraction(0), self.d)
        n = self.norm()
        return FieldElement._raw(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = FieldElement._raw(Fraction(1), Fraction(0), self.d)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # order (real fields only) ----------------------------------------------
    def sign(self) -> int:
        """Sign under the real embedding with sqrt(d) > 0.  Requires d >= 0."""
        if self.d < 0:
            raise ValueError("sign is undefined in an imaginary quadratic field")
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 d
        return sa if self.a * self.a > self.b * self.b * self.d else sb

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    # identity ----------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.a == other.a and self.b == other.b and (self.d == other.d or self.b == 0)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __repr__(self):
        return f"FieldElement({self})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        root = f"sqrt({self.d})"
        if self.a == 0:
            return f"{self.b}*{root}"
        sign = "+" if self.b > 0 else "-"
        return f"{self.a} {sign} {abs(self.b)}*{root}"


class Field:
    """Factory for elements of a fixed field ``Q(sqrt d)``."""

    __slots__ = ("d", "zero", "one")

    def __init__(self, d: int = 0):
        check_field_tag(d)
        self.d = d
        self.zero = FieldElement._raw(Fraction(0), Fraction(0), d)
        self.one = FieldElement._raw(Fraction(1), Fraction(0), d)

    def __call__(self, a: Scalar | str = 0, b: int | Fraction | str = 0) -> FieldElement:
        if isinstance(a, FieldElement):
            if a.d != self.d and a.b == 0:
                return FieldElement._raw(a.a, a.b, self.d)
            if a.d != self.d:
                raise FieldMismatchError(f"element of Q(sqrt {a.d}) given to Q(sqrt {self.d})")
            return a
        return FieldElement(a, b, self.d)

    def sqrt_d(self) -> FieldElement:
        if self.d == 0:
            raise ValueError("Q has no adjoined square root")
        return FieldElement(0, 1, self.d)

    def __eq__(self, other):
        return isinstance(other, Field) and other.d == self.d

    def __hash__(self):
        return hash(("Field", self.d))

    def __repr__(self):
        return "Field(Q)" if self.d == 0 else f"Field(Q(sqrt {self.d}))"


def common_field(values, default: int = 0) -> int:
    """Return the single field tag used by ``values`` (ints count as any field)."""
    tag = None
    for v in values:
        if isinstance(v, FieldElement) and (v.b != 0 or v.d != 0):
            if tag is None:
                tag = v.d
            elif tag != v.d:
                raise FieldMismatchError(f"values from Q(sqrt {tag}) and Q(sqrt {v.d})")
    return default if tag is None else tag
