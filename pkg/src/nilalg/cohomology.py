"""Second cohomology of an algebra with trivial coefficients, relative to a variety.

Bilinear forms are stored as length n*n coordinate vectors: index i*n + j holds
the coefficient of D(i+1, j+1), the form sending (e_i, e_j) to 1.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from . import linalg as la
from .algebra import Algebra, format_coefficient
from .errors import DimensionMismatch, FieldMismatch, NonMultilinearVariety, ParseError
from .expr import evaluate, parse_expr
from .identities import BasisEvaluator, IdentityTemplate, builtin
from .scalars import FieldTag, Scalar


@dataclass(frozen=True)
class BilinearForm:
    dim: int
    field: FieldTag
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.dim * self.dim:
            raise DimensionMismatch(f"form on dimension {self.dim} needs {self.dim ** 2} coefficients")

    # constructors
    @classmethod
    def zero(cls, n: int, tag: FieldTag) -> "BilinearForm":
        return cls(n, tag, (tag.zero,) * (n * n))

    @classmethod
    def delta(cls, n: int, tag: FieldTag, i: int, j: int) -> "BilinearForm":
        """D(i+1, j+1) for 0-based i, j."""
        return cls(n, tag, la.unit_vector(n * n, i * n + j, tag))

    @classmethod
    def from_matrix(cls, m) -> "BilinearForm":
        n = len(m)
        tag = m[0][0].tag
        return cls(n, tag, tuple(x for row in m for x in row))

    @classmethod
    def from_vector(cls, n: int, tag: FieldTag, v: Sequence[Scalar]) -> "BilinearForm":
        return cls(n, tag, tuple(v))

    # views
    def matrix(self) -> tuple:
        n = self.dim
        return tuple(self.coeffs[i * n:(i + 1) * n] for i in range(n))

    def entry(self, i: int, j: int) -> Scalar:
        return self.coeffs[i * self.dim + j]

    def __call__(self, x, y) -> Scalar:
        n, acc = self.dim, self.field.zero
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    c = self.coeffs[i * n + j]
                    if yj and c:
                        acc = acc + xi * c * yj
        return acc

    # arithmetic
    def _check(self, other):
        if not isinstance(other, BilinearForm):
            return False
        if other.dim != self.dim:
            raise DimensionMismatch("forms on different dimensions")
        if other.field is not self.field:
            raise FieldMismatch(f"forms over {self.field} and {other.field}")
        return True

    def __add__(self, other):
        if not self._check(other):
            return NotImplemented
        return BilinearForm(self.dim, self.field, la.vec_add(self.coeffs, other.coeffs))

    def __sub__(self, other):
        if not self._check(other):
            return NotImplemented
        return BilinearForm(self.dim, self.field, la.vec_sub(self.coeffs, other.coeffs))

    def __neg__(self):
        return BilinearForm(self.dim, self.field, tuple(-c for c in self.coeffs))

    def __mul__(self, c):
        if isinstance(c, BilinearForm):
            return NotImplemented
        c = self.field(c)
        return BilinearForm(self.dim, self.field, la.vec_scale(c, self.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * self.field(c).inv()

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __str__(self):
        return format_form(self.coeffs, self.dim)


def format_form(coeffs: Sequence[Scalar], n: int) -> str:
    """Compact D(i,j) combination, e.g. 'D(1,3)-2*D(3,1)'."""
    parts = []
    for idx, c in enumerate(coeffs):
        if c:
            prefix = format_coefficient(c, not parts).replace(" ", "")
            parts.append(f"{prefix}D({idx // n + 1},{idx % n + 1})")
    return "".join(parts) if parts else "0"


def parse_form(text: str, n: int, tag: FieldTag, env: dict | None = None) -> BilinearForm:
    """Parse a D(i,j) combination such as ``alpha*D(2,2) + D(1,3) - 2*D(3,1)``.

    ``env`` may bind parameter names to scalars and names to other forms.
    """

    def D(i, j):
        i, j = i.to_int(), j.to_int()
        if not (1 <= i <= n and 1 <= j <= n):
            raise ParseError(f"D({i},{j}) outside dimension {n}")
        return BilinearForm.delta(n, tag, i - 1, j - 1)

    value = evaluate(parse_expr(text), env or {}, tag, {"D": D})
    if isinstance(value, Scalar):
        if value:
            raise ParseError(f"{text!r} is a scalar, not a bilinear form")
        return BilinearForm.zero(n, tag)
    return value


# -- variety handling ---------------------------------------------------------------

def variety_templates(variety) -> tuple:
    """Resolve a variety name (or template collection) to templates.

    Named varieties other than 'cd' are taken together with the cd identities,
    so their cocycles are those of the corresponding subvariety.
    """
    if isinstance(variety, str):
        if variety == "cd":
            return builtin("cd")
        return builtin("cd") + builtin(variety)
    templates = tuple(variety)
    if not all(isinstance(t, IdentityTemplate) for t in templates):
        raise TypeError("variety must be a name or a collection of IdentityTemplate")
    return templates


def _outer(u: dict, v: dict, n: int, row: list, coef):
    for i, a in u.items():
        for j, b in v.items():
            idx = i * n + j
            row[idx] = row[idx] + coef * a * b


def constraint_rows(A: Algebra, templates: Iterable[IdentityTemplate]):
    """Linear conditions on a form: each identity with its outermost product replaced by the form."""
    n, F = A.dim, A.field
    ev = BasisEvaluator(A)
    for t in templates:
        if not t.is_multilinear:
            raise NonMultilinearVariety(f"template {t.name} is not multilinear")
        if any(isinstance(tree, int) for _, tree in t.terms):
            raise NonMultilinearVariety(f"template {t.name} has a monomial without a product")
        coefs = [F(c) for c, _ in t.terms]
        for assign in itertools.product(range(n), repeat=t.arity):
            row = [F.zero] * (n * n)
            for c, (_, tree) in zip(coefs, t.terms):
                left, right = ev.children(tree, assign)
                if left and right:
                    _outer(left, right, n, row, c)
            if any(row):
                yield tuple(row), (t.name, tuple(i + 1 for i in assign))


def literal_cd_rows(A: Algebra):
    """The three cd cocycle conditions written out term by term (independent cross-check)."""
    n, F = A.dim, A.field
    e = [A.unit(i) for i in range(n)]
    m = A.product
    sub = la.vec_sub

    def add(row, u, v, c):
        for i, a in enumerate(u):
            if a:
                for j, b in enumerate(v):
                    if b:
                        row[i * n + j] = row[i * n + j] + c * a * b

    one = F.one
    for xi, yi, ai, bi in itertools.product(range(n), repeat=4):
        x, y, a, b = e[xi], e[yi], e[ai], e[bi]
        xy = m(x, y)
        conds = [
            # t((xy)a,b) - t((xy)b,a) - t((xa)b - (xb)a, y) - t(x, (ya)b - (yb)a)
            [(m(xy, a), b, one), (m(xy, b), a, -one),
             (sub(m(m(x, a), b), m(m(x, b), a)), y, -one), (x, sub(m(m(y, a), b), m(m(y, b), a)), -one)],
            # t(a(xy),b) - t(a,(xy)b) - t((ax)b - a(xb), y) - t(x, (ay)b - a(yb))
            [(m(a, xy), b, one), (a, m(xy, b), -one),
             (sub(m(m(a, x), b), m(a, m(x, b))), y, -one), (x, sub(m(m(a, y), b), m(a, m(y, b))), -one)],
            # t(a,b(xy)) - t(b,a(xy)) - t(a(bx) - b(ax), y) - t(x, a(by) - b(ay))
            [(a, m(b, xy), one), (b, m(a, xy), -one),
             (sub(m(a, m(b, x)), m(b, m(a, x))), y, -one), (x, sub(m(a, m(b, y)), m(b, m(a, y))), -one)],
        ]
        for terms in conds:
            row = [F.zero] * (n * n)
            for u, v, c in terms:
                add(row, u, v, c)
            if any(row):
                yield tuple(row)


@lru_cache(maxsize=512)
def _cocycles_cached(A: Algebra, templates: tuple) -> la.Subspace:
    n = A.dim
    rows = (r for r, _ in constraint_rows(A, templates))
    return la.kernel(rows, n * n, A.field)


def cocycle_space(A: Algebra, variety="cd") -> la.Subspace:
    """Z^2 of A for the variety, as a subspace of n*n form coordinates."""
    return _cocycles_cached(A, variety_templates(variety))


def literal_cd_cocycle_space(A: Algebra) -> la.Subspace:
    return la.kernel(literal_cd_rows(A), A.dim * A.dim, A.field)


def violated_instance(A: Algebra, form: BilinearForm, variety="cd"):
    """First (template, basis tuple) whose condition the form violates, or None."""
    for row, where in constraint_rows(A, variety_templates(variety)):
        if la.dot(row, form.coeffs):
            return where
    return None


def coboundary(A: Algebra, f: Sequence[Scalar]) -> BilinearForm:
    """delta f with (delta f)(e_i, e_j) = f(e_i e_j) for a functional f."""
    n = A.dim
    coeffs = [A.field.zero] * (n * n)
    for (i, j), terms in A.table.items():
        acc = A.field.zero
        for k, c in terms:
            if f[k]:
                acc = acc + c * f[k]
        coeffs[i * n + j] = acc
    return BilinearForm(n, A.field, tuple(coeffs))


@lru_cache(maxsize=512)
def coboundary_space(A: Algebra) -> la.Subspace:
    n = A.dim
    gens = [coboundary(A, A.unit(k)).coeffs for k in range(n)]
    return la.span(gens, n * n, A.field)


@dataclass(frozen=True)
class Cohomology:
    cocycles: la.Subspace
    coboundaries: la.Subspace
    representatives: tuple  # BilinearForms

    @property
    def dims(self) -> tuple:
        return self.cocycles.dim, self.coboundaries.dim, len(self.representatives)


def h2(A: Algebra, variety="cd") -> Cohomology:
    """Z^2, B^2 and canonical representatives of a basis of H^2 = Z^2 / B^2."""
    Z = cocycle_space(A, variety)
    B = coboundary_space(A)
    if not B.is_subspace_of(Z):
        raise AssertionError("coboundaries are not cocycles; the variety is not satisfied by the algebra")
    reps = tuple(BilinearForm(A.dim, A.field, v) for v in la.quotient_basis(B, Z))
    return Cohomology(Z, B, reps)


def cocycle_annihilator(A: Algebra, forms: Sequence[BilinearForm]) -> la.Subspace:
    """{x : theta(x, A) = theta(A, x) = 0 for every theta in ``forms``}."""
    n, rows = A.dim, []
    for th in forms:
        m = th.matrix()
        for j in range(n):
            rows.append(tuple(m[i][j] for i in range(n)))
            rows.append(m[j])
    return la.kernel(rows, n, A.field)


def classes_independent(A: Algebra, forms: Sequence[BilinearForm]) -> bool:
    B = coboundary_space(A)
    total = la.span(list(B.rows) + [f.coeffs for f in forms], A.dim ** 2, A.field)
    return total.dim == B.dim + len(forms)


def ts_membership(A: Algebra, forms: Sequence[BilinearForm], variety="cd") -> bool:
    """Cocycles with independent classes whose joint annihilator meets Ann(A) trivially."""
    if not forms:
        return False
    Z = cocycle_space(A, variety)
    if not all(Z.contains(f.coeffs) for f in forms):
        return False
    if not classes_independent(A, forms):
        return False
    return la.intersection(cocycle_annihilator(A, forms), A.annihilator()).dim == 0
