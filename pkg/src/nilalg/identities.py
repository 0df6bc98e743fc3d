"""Polynomial identities as signed sums of parenthesized monomials.

A monomial is a binary tree whose leaves are variable indices; the text form
uses juxtaposition, e.g. ``((xy)a)b - x((ya)b)``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import Algebra
from .errors import DimensionMismatch, NonMultilinearVariety, ParseError, UnknownTemplate

_VAR = re.compile(r"[A-Za-z][0-9]*")


def _leaves(tree):
    if isinstance(tree, int):
        return [tree]
    return _leaves(tree[0]) + _leaves(tree[1])


def _tree_text(tree, names) -> str:
    if isinstance(tree, int):
        return names[tree]
    left, right = tree

    def wrap(t):
        s = _tree_text(t, names)
        return s if isinstance(t, int) else f"({s})"

    return wrap(left) + wrap(right)


@dataclass(frozen=True)
class IdentityTemplate:
    """sum coef * monomial = 0, each monomial a tree over variables 0..arity-1."""

    name: str
    variables: tuple
    terms: tuple  # ((Fraction, tree), ...)

    @property
    def arity(self) -> int:
        return len(self.variables)

    @property
    def is_multilinear(self) -> bool:
        want = list(range(self.arity))
        return all(sorted(_leaves(t)) == want for _, t in self.terms)

    def text(self) -> str:
        out = []
        for idx, (c, tree) in enumerate(self.terms):
            mono = _tree_text(tree, self.variables)
            neg = c < 0
            mag = -c if neg else c
            coef = "" if mag == 1 else f"{mag}*"
            if idx == 0:
                out.append(("-" if neg else "") + coef + mono)
            else:
                out.append((" - " if neg else " + ") + coef + mono)
        return "".join(out)

    def __str__(self):
        return f"{self.name}: {self.text()}"


class _MonomialParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.names: list = []

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def fail(self, msg):
        raise ParseError(f"{msg} in identity {self.text!r}", column=self.pos + 1)

    def var(self):
        m = _VAR.match(self.text, self.pos)
        if not m:
            self.fail("expected a variable")
        self.pos = m.end()
        name = m.group(0)
        if name not in self.names:
            self.names.append(name)
        return self.names.index(name)

    def factor(self):
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            node = self.product()
            if self.peek() != ")":
                self.fail("expected ')'")
            self.pos += 1
            return node
        return self.var()

    def product(self):
        left = self.factor()
        ch = self.peek()
        if ch == "(" or (ch and ch.isalpha()):
            right = self.factor()
            nxt = self.peek()
            if nxt == "(" or (nxt and nxt.isalpha()):
                self.fail("ambiguous product of three factors; add parentheses")
            return (left, right)
        return left

    def parse(self):
        terms = []
        first = True
        while True:
            ch = self.peek()
            if not ch:
                break
            sign = 1
            if ch in "+-":
                sign = -1 if ch == "-" else 1
                self.pos += 1
            elif not first:
                self.fail("expected '+' or '-'")
            self.skip()
            m = re.compile(r"(\d+(?:/\d+)?)\s*\*?").match(self.text, self.pos)
            coef = Fraction(1)
            if m:
                coef = Fraction(m.group(1))
                self.pos = m.end()
            terms.append((sign * coef, self.product()))
            first = False
        if not terms:
            self.fail("empty identity")
        return terms


def parse_template(name: str, text: str, variables: Sequence[str] | None = None) -> IdentityTemplate:
    """Parse ``text`` (juxtaposition products, signed integer/fraction coefficients)."""
    p = _MonomialParser(text)
    if variables:
        p.names = list(variables)
    terms = p.parse()
    return IdentityTemplate(name, tuple(p.names), tuple(terms))


# -- evaluation -----------------------------------------------------------------

def _mul_sparse(A: Algebra, u: dict, v: dict) -> dict:
    out: dict = {}
    table = A.table
    for i, a in u.items():
        for j, b in v.items():
            terms = table.get((i, j))
            if terms:
                s = a * b
                for k, c in terms:
                    val = out.get(k)
                    out[k] = s * c if val is None else val + s * c
    return {k: c for k, c in out.items() if c}


def evaluate(t: IdentityTemplate, A: Algebra, args: Sequence) -> tuple:
    """Value of the template at the given argument vectors."""
    if len(args) != t.arity:
        raise DimensionMismatch(f"{t.name} takes {t.arity} arguments, got {len(args)}")
    for v in args:
        if len(v) != A.dim:
            raise DimensionMismatch(f"argument of length {len(v)} in dimension {A.dim}")
    sparse_args = [{k: c for k, c in enumerate(v) if c} for v in args]
    cache: dict = {}

    def ev(tree):
        if isinstance(tree, int):
            return sparse_args[tree]
        got = cache.get(tree)
        if got is None:
            got = _mul_sparse(A, ev(tree[0]), ev(tree[1]))
            cache[tree] = got
        return got

    out = [A.field.zero] * A.dim
    for coef, tree in t.terms:
        c = A.field(coef)
        for k, val in ev(tree).items():
            out[k] = out[k] + c * val
    return tuple(out)


class BasisEvaluator:
    """Evaluates monomials on basis tuples, sharing subtree values across tuples."""

    def __init__(self, A: Algebra):
        self.A = A
        self.cache: dict = {}

    def monomial(self, tree, assign: tuple) -> dict:
        if isinstance(tree, int):
            return {assign[tree]: self.A.field.one}
        key = (tree, tuple(assign[i] for i in _leaves(tree)))
        got = self.cache.get(key)
        if got is None:
            got = _mul_sparse(self.A, self.monomial(tree[0], assign), self.monomial(tree[1], assign))
            self.cache[key] = got
        return got

    def children(self, tree, assign: tuple):
        """Sparse values of the two factors of the outermost product."""
        return self.monomial(tree[0], assign), self.monomial(tree[1], assign)


@dataclass(frozen=True)
class TemplateResult:
    name: str
    holds: bool
    instances: int
    counterexample: tuple | None = None  # 1-based basis indices
    value: tuple | None = None


@dataclass(frozen=True)
class IdentityReport:
    results: tuple

    @property
    def all_hold(self) -> bool:
        return all(r.holds for r in self.results)

    @property
    def instances(self) -> int:
        return sum(r.instances for r in self.results)

    def first_failure(self) -> TemplateResult | None:
        return next((r for r in self.results if not r.holds), None)


def holds(templates: Sequence[IdentityTemplate], A: Algebra) -> IdentityReport:
    """Check each template on every basis tuple in lexicographic order."""
    results = []
    ev = BasisEvaluator(A)
    n = A.dim
    for t in templates:
        if not t.is_multilinear:
            raise NonMultilinearVariety(f"template {t.name} is not multilinear")
        coefs = [A.field(c) for c, _ in t.terms]
        failure = None
        count = 0
        for assign in itertools.product(range(n), repeat=t.arity):
            count += 1
            acc: dict = {}
            for c, (_, tree) in zip(coefs, t.terms):
                for k, val in ev.monomial(tree, assign).items():
                    acc[k] = acc[k] + c * val if k in acc else c * val
            if any(acc.values()):
                vec = [A.field.zero] * n
                for k, val in acc.items():
                    vec[k] = val
                failure = (tuple(i + 1 for i in assign), tuple(vec))
                break
        if failure:
            results.append(TemplateResult(t.name, False, count, failure[0], failure[1]))
        else:
            results.append(TemplateResult(t.name, True, count))
    return IdentityReport(tuple(results))


# -- built-in varieties -------------------------------------------------------------

CD_IDENTITIES = (
    ("cd1", "((xy)a)b - ((xy)b)a - ((xa)b)y + ((xb)a)y - x((ya)b) + x((yb)a)"),
    ("cd2", "(a(xy))b - a((xy)b) - ((ax)b)y + (a(xb))y - x((ay)b) + x(a(yb))"),
    ("cd3", "a(b(xy)) - b(a(xy)) - (a(bx))y + (b(ax))y - x(a(by)) + x(b(ay))"),
)


def _jordan_linearized() -> IdentityTemplate:
    # polarize ((xx)y)x - (xx)(yx) in x: sum over placements of x1, x2, x3
    variables = ("x1", "x2", "x3", "y")
    terms = []
    for p, q, r in itertools.permutations(range(3)):
        terms.append((Fraction(1), (((p, q), 3), r)))
        terms.append((Fraction(-1), ((p, q), (3, r))))
    return IdentityTemplate("jordan", variables, tuple(terms))


def _build():
    cd = tuple(parse_template(n, s, ("x", "y", "a", "b")) for n, s in CD_IDENTITIES)
    comm = parse_template("commutative", "xy - yx")
    anti = parse_template("anticommutative", "xy + yx")
    return {
        "cd": cd,
        "lie": (anti, parse_template("jacobi", "(xy)z + (yz)x + (zx)y")),
        "jordan-linearized": (comm, _jordan_linearized()),
        "leibniz": (parse_template("leibniz", "(xy)z - (xz)y - x(yz)"),),
        "left-leibniz": (parse_template("left-leibniz", "x(yz) - (xy)z - y(xz)"),),
        "trivial": (parse_template("left-trivial", "(xy)z"), parse_template("right-trivial", "x(yz)")),
        "commutative": (comm,),
        "anticommutative": (anti,),
    }


_BUILTINS = _build()
VARIETY_NAMES = tuple(_BUILTINS)


def builtin(name: str) -> tuple:
    """Template set for a named variety; 'jordan' is accepted for 'jordan-linearized'."""
    key = "jordan-linearized" if name == "jordan" else name
    try:
        return _BUILTINS[key]
    except KeyError:
        raise UnknownTemplate(f"unknown identity set {name!r}; known: {', '.join(VARIETY_NAMES)}") from None
