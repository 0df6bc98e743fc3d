"""Exact field elements over Q, Q(sqrt d) and GF(p).

A :class:`Scalar` carries its :class:`FieldTag`; arithmetic between different
tags raises :class:`FieldMismatch`.  Python ``int`` and ``Fraction`` operands are
coerced into the scalar's field, so ``2 * x`` and ``x == 0`` work as expected.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from .errors import (
    BadPrime,
    DivisionByZero,
    FieldMismatch,
    NonRepresentable,
    NoSquareRoot,
    ParseError,
)

_Q, _QD, _GF = "Q", "QD", "GF"


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def _is_squarefree(d: int) -> bool:
    m = abs(d)
    f = 2
    while f * f <= m:
        if m % (f * f) == 0:
            return False
        f += 1
    return True


class FieldTag:
    """Identifies the base field. Instances are interned, compare with ``is``."""

    __slots__ = ("kind", "n", "_zero", "_one")

    def __new__(cls, kind: str, n: int = 0):
        return _tag(kind, n)

    @classmethod
    def _create(cls, kind, n):
        self = object.__new__(cls)
        self.kind = kind
        self.n = n
        return self

    @property
    def zero(self) -> "Scalar":
        return self._zero

    @property
    def one(self) -> "Scalar":
        return self._one

    @property
    def is_finite(self) -> bool:
        return self.kind == _GF

    @property
    def characteristic(self) -> int:
        return self.n if self.kind == _GF else 0

    def __repr__(self):
        return f"FieldTag({self})"

    def __str__(self):
        if self.kind == _Q:
            return "Q"
        if self.kind == _QD:
            return "Q(i)" if self.n == -1 else f"Q(sqrt({self.n}))"
        return f"GF({self.n})"

    def __reduce__(self):
        return (FieldTag, (self.kind, self.n))

    def __call__(self, value) -> "Scalar":
        """Coerce an int, Fraction, numeric string or Scalar into this field."""
        if isinstance(value, Scalar):
            if value.tag is not self:
                raise FieldMismatch(f"{value.tag} element used in {self}")
            return value
        if isinstance(value, str):
            return parse_scalar(value, self)
        return Scalar.from_rational(self, value)

    def gen(self) -> "Scalar":
        """sqrt(d) for a quadratic extension."""
        if self.kind != _QD:
            raise FieldMismatch(f"{self} has no quadratic generator")
        return Scalar(self, Fraction(0), Fraction(1))


@lru_cache(maxsize=None)
def _tag(kind: str, n: int) -> FieldTag:
    if kind == _Q:
        n = 0
    elif kind == _QD:
        if n in (0, 1) or not _is_squarefree(n):
            raise ValueError(f"quadratic extension needs squarefree d not in {{0,1}}, got {n}")
    elif kind == _GF:
        if not _is_prime(n):
            raise ValueError(f"GF(p) needs p prime, got {n}")
    else:
        raise ValueError(f"unknown field kind {kind!r}")
    t = FieldTag._create(kind, n)
    if kind == _GF:
        t._zero, t._one = Scalar(t, 0), Scalar(t, 1)
    else:
        t._zero, t._one = Scalar(t, Fraction(0)), Scalar(t, Fraction(1))
    return t


def rationals() -> FieldTag:
    return FieldTag(_Q)


def quadratic(d: int) -> FieldTag:
    return FieldTag(_QD, d)


def gaussian() -> FieldTag:
    return FieldTag(_QD, -1)


def prime_field(p: int) -> FieldTag:
    return FieldTag(_GF, p)


_FIELD_RE = re.compile(r"^\s*(?:(Q)|Q\(\s*i\s*\)|Q\(\s*sqrt\(\s*(-?\d+)\s*\)\s*\)|GF\(\s*(\d+)\s*\))\s*$")


def parse_field(text: str) -> FieldTag:
    """Parse ``Q``, ``Q(i)``, ``Q(sqrt(d))`` or ``GF(p)``."""
    m = _FIELD_RE.match(text)
    if not m:
        raise ParseError(f"unknown field {text!r}")
    try:
        if m.group(1):
            return QQ
        if m.group(2):
            return quadratic(int(m.group(2)))
        if m.group(3):
            return prime_field(int(m.group(3)))
        return QQ_I
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _frac_text(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _rational_sqrt(q: Fraction):
    if q < 0:
        return None
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


class Scalar:
    """Immutable exact field element."""

    __slots__ = ("tag", "a", "b")

    def __init__(self, tag: FieldTag, a, b=0):
        self.tag = tag
        self.a = a
        self.b = b

    @staticmethod
    def from_rational(tag: FieldTag, value) -> "Scalar":
        if isinstance(value, Scalar):
            if value.tag is not tag:
                raise FieldMismatch(f"{value.tag} element used in {tag}")
            return value
        if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
            raise TypeError(f"cannot coerce {value!r} into {tag}")
        if tag.kind == _GF:
            p = tag.n
            if isinstance(value, int):
                return Scalar(tag, value % p)
            if value.denominator % p == 0:
                raise BadPrime(f"denominator {value.denominator} divisible by {p}")
            return Scalar(tag, value.numerator * pow(value.denominator, -1, p) % p)
        if tag.kind == _Q:
            return Scalar(tag, Fraction(value))
        return Scalar(tag, Fraction(value), Fraction(0))

    # -- coercion helpers -------------------------------------------------
    def _other(self, o):
        if o.__class__ is Scalar:
            if o.tag is not self.tag:
                raise FieldMismatch(f"cannot combine {self.tag} with {o.tag}")
            return o
        if isinstance(o, (int, Fraction)) and not isinstance(o, bool):
            return Scalar.from_rational(self.tag, o)
        return None

    # -- arithmetic -------------------------------------------------------
    def __add__(self, o):
        o = self._other(o)
        if o is None:
            return NotImplemented
        t = self.tag
        k = t.kind
        if k == _Q:
            return Scalar(t, self.a + o.a)
        if k == _GF:
            return Scalar(t, (self.a + o.a) % t.n)
        return Scalar(t, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._other(o)
        if o is None:
            return NotImplemented
        t = self.tag
        k = t.kind
        if k == _Q:
            return Scalar(t, self.a - o.a)
        if k == _GF:
            return Scalar(t, (self.a - o.a) % t.n)
        return Scalar(t, self.a - o.a, self.b - o.b)

    def __rsub__(self, o):
        o = self._other(o)
        return NotImplemented if o is None else o - self

    def __neg__(self):
        t = self.tag
        k = t.kind
        if k == _Q:
            return Scalar(t, -self.a)
        if k == _GF:
            return Scalar(t, -self.a % t.n)
        return Scalar(t, -self.a, -self.b)

    def __pos__(self):
        return self

    def __mul__(self, o):
        o = self._other(o)
        if o is None:
            return NotImplemented
        t = self.tag
        k = t.kind
        if k == _Q:
            return Scalar(t, self.a * o.a)
        if k == _GF:
            return Scalar(t, self.a * o.a % t.n)
        a, b, c, d = self.a, self.b, o.a, o.b
        return Scalar(t, a * c + t.n * b * d, a * d + b * c)

    __rmul__ = __mul__

    def inv(self) -> "Scalar":
        t = self.tag
        k = t.kind
        if not self:
            raise DivisionByZero("inverse of zero")
        if k == _Q:
            return Scalar(t, 1 / self.a)
        if k == _GF:
            return Scalar(t, pow(self.a, -1, t.n))
        norm = self.a * self.a - t.n * self.b * self.b
        return Scalar(t, self.a / norm, -self.b / norm)

    def __truediv__(self, o):
        o = self._other(o)
        return NotImplemented if o is None else self * o.inv()

    def __rtruediv__(self, o):
        o = self._other(o)
        return NotImplemented if o is None else o * self.inv()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("exponent must be an integer")
        if k < 0:
            return self.inv() ** (-k)
        result, base = self.tag.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- predicates -------------------------------------------------------
    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def is_zero(self) -> bool:
        return not self

    def is_rational(self) -> bool:
        return self.tag.kind != _GF and not self.b

    def conjugate(self) -> "Scalar":
        if self.tag.kind != _QD:
            return self
        return Scalar(self.tag, self.a, -self.b)

    def norm(self) -> "Scalar":
        return self * self.conjugate()

    def __eq__(self, o):
        if o.__class__ is not Scalar:
            if isinstance(o, (int, Fraction)) and not isinstance(o, bool):
                try:
                    o = Scalar.from_rational(self.tag, o)
                except BadPrime:
                    return False
            else:
                return NotImplemented
        return self.tag is o.tag and self.a == o.a and self.b == o.b

    def __ne__(self, o):
        r = self.__eq__(o)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self.tag.kind != _GF and not self.b:
            return hash(self.a)
        return hash((self.tag.kind, self.tag.n, self.a, self.b))

    # -- conversions ------------------------------------------------------
    def to_fraction(self) -> Fraction:
        if self.tag.kind == _GF or self.b:
            raise NonRepresentable(f"{self} is not rational")
        return self.a

    def to_int(self) -> int:
        """Integer value for exponents: rational integers, or the GF residue."""
        if self.tag.kind == _GF:
            return self.a
        q = self.to_fraction()
        if q.denominator != 1:
            raise NonRepresentable(f"{self} is not an integer")
        return q.numerator

    def sqrt(self) -> "Scalar":
        """A square root inside the same field, or NonRepresentable."""
        t = self.tag
        if t.kind == _GF:
            p = t.n
            for r in range(p):
                if r * r % p == self.a:
                    return Scalar(t, r)
            raise NonRepresentable(f"{self} is not a square in {t}")
        if t.kind == _Q:
            r = _rational_sqrt(self.a)
            if r is None:
                raise NonRepresentable(f"sqrt({self}) is not in {t}")
            return Scalar(t, r)
        d = t.n
        a, b = self.a, self.b
        if not b:
            r = _rational_sqrt(a)
            if r is not None:
                return Scalar(t, r, Fraction(0))
            r = _rational_sqrt(a / d)
            if r is not None:
                return Scalar(t, Fraction(0), r)
            raise NonRepresentable(f"sqrt({self}) is not in {t}")
        s = _rational_sqrt(a * a - d * b * b)
        if s is not None:
            for x2 in ((a + s) / 2, (a - s) / 2):
                x = _rational_sqrt(x2)
                if x:
                    return Scalar(t, x, b / (2 * x))
        raise NonRepresentable(f"sqrt({self}) is not in {t}")

    def __str__(self):
        t = self.tag
        if t.kind == _GF:
            return str(self.a)
        if t.kind == _Q or not self.b:
            return _frac_text(self.a)
        unit = "i" if t.n == -1 else f"sqrt({t.n})"
        b = self.b
        if b == 1:
            im = unit
        elif b == -1:
            im = "-" + unit
        else:
            im = f"{_frac_text(b)}*{unit}"
        if not self.a:
            return im
        return _frac_text(self.a) + (im if im.startswith("-") else "+" + im)

    def __repr__(self):
        return f"Scalar({self}, {self.tag})"


QQ = rationals()
QQ_I = gaussian()


def parse_scalar(text: str, tag: FieldTag) -> Scalar:
    """Parse a constant scalar expression such as ``(1+sqrt(-3))/2``."""
    from .expr import evaluate, parse_expr

    node = parse_expr(text)
    return evaluate(node, {}, tag)


def _smallest_root_mod(d: int, p: int) -> int:
    d %= p
    for r in range(p):
        if r * r % p == d:
            return r
    raise NoSquareRoot(f"{d} is not a square mod {p}")


def reduce_mod_p(x: Scalar, p: int) -> Scalar:
    """Ring homomorphism Z_(p)[sqrt d] -> GF(p); sqrt d goes to its smallest root."""
    target = prime_field(p)
    t = x.tag
    if t.kind == _GF:
        if t.n != p:
            raise FieldMismatch(f"cannot reduce {t} element mod {p}")
        return x
    a = Scalar.from_rational(target, x.a)
    if t.kind == _Q or not x.b:
        return a
    r = _smallest_root_mod(t.n, p)
    return a + Scalar.from_rational(target, x.b) * r


def sqrt_mod_p(d: int, p: int) -> int:
    """Smallest nonnegative square root of d modulo p."""
    return _smallest_root_mod(d, p)


def common_field(*tags: FieldTag) -> FieldTag:
    """The smallest listed field containing all of ``tags`` (Q embeds everywhere in char 0)."""
    out = QQ
    for t in tags:
        if t is QQ:
            continue
        if out is QQ:
            out = t
        elif t is not out:
            raise FieldMismatch(f"no common field for {out} and {t}")
    return out


def embed(x: Scalar, tag: FieldTag) -> Scalar:
    """Map a scalar into a field containing its own (Q into Q(sqrt d) or GF(p))."""
    if x.tag is tag:
        return x
    if x.tag is QQ:
        return Scalar.from_rational(tag, x.a)
    raise FieldMismatch(f"cannot embed {x.tag} into {tag}")
