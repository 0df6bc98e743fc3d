"""Small arithmetic expression language.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' unary)?
    atom   := NUMBER | NAME | NAME '(' expr (',' expr)* ')' | '(' expr ')'

Nodes are plain tuples so they hash and pickle cheaply.  Evaluation is generic:
values only need ``+ - * /`` and unary minus, so the same trees evaluate to
scalars, bilinear forms, or anything else that supplies those operators.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, Mapping

from .errors import FieldMismatch, ParseError, UnknownParameter
from .scalars import FieldTag, Scalar

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^(),]))")


def _tokenize(text: str):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:pos + 1]!r} in {text!r}", column=pos + 1)
        num, name, op = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            out.append(("num", int(num), start))
        elif name is not None:
            out.append(("name", name, start))
        else:
            out.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            self.fail(f"expected {op!r}", tok)
        return tok

    def fail(self, msg, tok):
        raise ParseError(f"{msg} in {self.text!r}", column=tok[2] + 1)

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty expression", self.peek())
        node = self.expr()
        if self.peek()[0] != "end":
            self.fail("unexpected trailing input", self.peek())
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            node = ("add" if op == "+" else "sub", node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            node = ("mul" if op == "*" else "div", node, self.unary())
        return node

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.take()
            return ("neg", self.unary())
        if tok[0] == "op" and tok[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            return ("pow", base, self.unary())
        return base

    def atom(self):
        tok = self.take()
        kind, val = tok[0], tok[1]
        if kind == "num":
            return ("num", val)
        if kind == "name":
            if self.peek()[0] == "op" and self.peek()[1] == "(":
                self.take()
                args = [self.expr()]
                while self.peek()[0] == "op" and self.peek()[1] == ",":
                    self.take()
                    args.append(self.expr())
                self.expect(")")
                return ("call", val, tuple(args))
            return ("var", val)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        self.fail("unexpected token", tok)


def parse_expr(text: str):
    """Parse ``text`` into an expression tree."""
    return _Parser(text).parse()


def free_names(node) -> set:
    """Variable names referenced by a tree (function names excluded)."""
    kind = node[0]
    if kind == "var":
        return {node[1]}
    if kind == "num":
        return set()
    if kind == "neg":
        return free_names(node[1])
    if kind == "call":
        out = set()
        for a in node[2]:
            out |= free_names(a)
        return out
    return free_names(node[1]) | free_names(node[2])


def _as_int(value) -> int:
    if isinstance(value, int):
        return value
    if isinstance(value, Scalar):
        return value.to_int()
    raise ParseError(f"exponent {value!r} is not an integer")


def evaluate(node, env: Mapping, tag: FieldTag, functions: Mapping[str, Callable] | None = None):
    """Evaluate a tree.

    ``env`` maps variable names to values.  The name ``i`` (when unbound) is the
    imaginary unit and is only valid in Q(i).  ``sqrt`` is built in; extra
    callables can be supplied through ``functions`` (they receive raw argument
    trees already evaluated, plus nothing else).
    """
    kind = node[0]
    if kind == "num":
        return Scalar.from_rational(tag, node[1])
    if kind == "var":
        name = node[1]
        if name in env:
            return env[name]
        if name == "i":
            if tag.kind == "QD" and tag.n == -1:
                return tag.gen()
            raise FieldMismatch(f"'i' is not an element of {tag}")
        raise UnknownParameter(f"unbound name {name!r}")
    if kind == "neg":
        return -evaluate(node[1], env, tag, functions)
    if kind == "call":
        name = node[1]
        args = [evaluate(a, env, tag, functions) for a in node[2]]
        if functions and name in functions:
            return functions[name](*args)
        if name == "sqrt" and len(args) == 1:
            return args[0].sqrt()
        raise UnknownParameter(f"unknown function {name!r}")
    left = evaluate(node[1], env, tag, functions)
    if kind == "pow":
        return left ** _as_int(evaluate(node[2], env, tag, functions))
    right = evaluate(node[2], env, tag, functions)
    if kind == "add":
        return left + right
    if kind == "sub":
        return left - right
    if kind == "mul":
        return left * right
    if kind == "div":
        return left / right
    raise ParseError(f"bad node {node!r}")


_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "neg": 3, "pow": 4}


def to_text(node, parent: int = 0) -> str:
    """Compact canonical text for a tree (reparses to an equal tree)."""
    kind = node[0]
    if kind == "num":
        return str(node[1])
    if kind == "var":
        return node[1]
    if kind == "call":
        return f"{node[1]}(" + ",".join(to_text(a) for a in node[2]) + ")"
    prec = _PREC[kind]
    if kind == "neg":
        s = "-" + to_text(node[1], prec)
    elif kind == "pow":
        s = to_text(node[1], prec + 1) + "^" + to_text(node[2], prec)
    else:
        sym = {"add": "+", "sub": "-", "mul": "*", "div": "/"}[kind]
        s = to_text(node[1], prec) + sym + to_text(node[2], prec + 1)
    return f"({s})" if prec < parent else s


def rational_value(text: str) -> Fraction:
    """Evaluate a constant rational expression (used for CLI parameters)."""
    from .scalars import QQ

    return evaluate(parse_expr(text), {}, QQ).to_fraction()
