"""Text format for parameterized multiplication tables.

    algebra NAME dim N over FIELD [section S] [params p ...]
        [derive q = EXPR; ...] [solve p = EXPR; ...] [where CONSTRAINT; ...] [external]
    {
        eI*eJ = COEFF eK [+ COEFF eK]...;
    }

``#`` starts a comment.  Omitted products are zero.  A constraint is
``EXPR != EXPR``.  ``derive`` computes a parameter from the others; ``solve``
tells how to recover a free parameter from a derived one.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import DuplicateProduct, ParseError, UnknownParameter
from ..expr import free_names, parse_expr, to_text
from ..scalars import parse_field

_KEYWORDS = ("section", "params", "derive", "solve", "where", "external")
_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*$")
_PRODUCT = re.compile(r"\s*e(\d+)\s*\*\s*e(\d+)\s*=\s*(.*)$", re.S)
_BASIS = re.compile(r"\be(\d+)\b")


@dataclass(frozen=True)
class Term:
    sign: int          # +1 or -1
    coefficient: str   # expression text, "" for 1
    index: int         # 0-based basis index

    def text(self, first: bool) -> str:
        coef = f"{self.coefficient} " if self.coefficient else ""
        if first:
            return ("-" if self.sign < 0 else "") + f"{coef}e{self.index + 1}"
        return (" - " if self.sign < 0 else " + ") + f"{coef}e{self.index + 1}"


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    dim: int
    field: str
    section: str = ""
    params: tuple = ()
    derived: tuple = ()       # ((name, expr text), ...)
    solvers: tuple = ()       # ((name, expr text), ...)
    constraints: tuple = ()   # (text, ...)  each "lhs != rhs"
    table: tuple = ()         # (((i, j), (Term, ...)), ...)
    external: bool = False
    line: int = field(default=0, compare=False)
    notes: tuple = field(default=(), compare=False)

    @property
    def all_params(self) -> tuple:
        return self.params + tuple(n for n, _ in self.derived)

    @property
    def is_family(self) -> bool:
        return bool(self.params)

    def products(self) -> dict:
        return dict(self.table)


def _strip_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0] for line in text.splitlines())


def _line_col(text: str, pos: int):
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def _split_terms(rhs: str, where):
    """Split 'e3 + alpha e4 - (1-Theta)^2/lambda e4' after each top-level basis symbol."""
    terms, depth, start = [], 0, 0
    i = 0
    while i < len(rhs):
        ch = rhs[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0:
            m = _BASIS.match(rhs, i)
            if m and (i == 0 or not (rhs[i - 1].isalnum() or rhs[i - 1] == "_")):
                terms.append((rhs[start:i], int(m.group(1))))
                i = m.end()
                start = i
                continue
        i += 1
    if rhs[start:].strip():
        raise ParseError(f"trailing text {rhs[start:].strip()!r} after the last basis vector", *where)
    out = []
    for idx, (coef, k) in enumerate(terms):
        c = coef.strip()
        sign = 1
        if c.startswith("+"):
            c = c[1:].strip()
        elif c.startswith("-"):
            sign, c = -1, c[1:].strip()
        elif idx > 0:
            raise ParseError(f"expected '+' or '-' before e{k}", *where)
        if c.endswith("*"):
            c = c[:-1].strip()
        if c:
            try:
                node = parse_expr(c)
            except ParseError as exc:
                raise ParseError(f"bad coefficient {c!r}: {exc}", *where) from None
            # sums get parentheses; a leading minus moves into the sign
            c = to_text(node, 2)
            while c.startswith("-"):
                sign, c = -sign, to_text(parse_expr(c[1:]), 2)
            if c == "1":
                c = ""
        out.append(Term(sign, c, k - 1))
    return tuple(out)


def _parse_header(header: str, offset: int, source: str):
    where = _line_col(source, offset)
    toks = header.split()
    if len(toks) < 6 or toks[0] != "algebra" or toks[2] != "dim" or toks[4] != "over":
        raise ParseError("expected 'algebra NAME dim N over FIELD'", *where)
    name = toks[1]
    if not _NAME.match(name):
        raise ParseError(f"invalid algebra name {name!r}", *where)
    try:
        dim = int(toks[3])
    except ValueError:
        raise ParseError(f"dimension {toks[3]!r} is not an integer", *where) from None
    fld = toks[5]
    parse_field(fld)  # validates
    rest = header.split(None, 6)[6] if len(toks) > 6 else ""
    pieces = re.split(r"\b(" + "|".join(_KEYWORDS) + r")\b", rest)
    if pieces[0].strip():
        raise ParseError(f"unexpected {pieces[0].strip()!r} in header", *where)
    info = {"section": "", "params": (), "derived": [], "solvers": [], "constraints": [], "external": False}
    for kw, body in zip(pieces[1::2], pieces[2::2]):
        body = body.strip()
        if kw == "section":
            info["section"] = body
        elif kw == "params":
            names = tuple(body.replace(",", " ").split())
            for p in names:
                if not _NAME.match(p) or p in ("i", "sqrt", "D"):
                    raise ParseError(f"invalid parameter name {p!r}", *where)
            info["params"] = names
        elif kw == "external":
            if body:
                raise ParseError("'external' takes no arguments", *where)
            info["external"] = True
        else:
            for item in filter(None, (s.strip() for s in body.split(";"))):
                if kw == "where":
                    if "!=" not in item:
                        raise ParseError(f"constraint {item!r} must have the form 'lhs != rhs'", *where)
                    lhs, rhs = (s.strip() for s in item.split("!=", 1))
                    info["constraints"].append(f"{to_text(parse_expr(lhs))} != {to_text(parse_expr(rhs))}")
                else:
                    if "=" not in item:
                        raise ParseError(f"expected 'name = expression' in {kw}", *where)
                    lhs, rhs = (s.strip() for s in item.split("=", 1))
                    if not _NAME.match(lhs):
                        raise ParseError(f"invalid name {lhs!r} in {kw}", *where)
                    info["derived" if kw == "derive" else "solvers"].append((lhs, to_text(parse_expr(rhs))))
    return name, dim, fld, info


def _check_names(entry: CatalogEntry, where):
    known = set(entry.all_params)
    exprs = [t.coefficient for _, terms in entry.table for t in terms if t.coefficient]
    exprs += [e for _, e in entry.derived] + [e for _, e in entry.solvers]
    exprs += [part for c in entry.constraints for part in c.split("!=")]
    for e in exprs:
        unknown = free_names(parse_expr(e)) - known - {"i"}
        if unknown:
            raise UnknownParameter(f"{entry.name}: unknown parameter(s) {', '.join(sorted(unknown))} in {e!r}")
    for n, _ in entry.solvers:
        if n not in entry.params:
            raise UnknownParameter(f"{entry.name}: solve clause for non-parameter {n!r}")


def parse_algebra_file(text: str) -> list:
    """Parse every ``algebra`` block in ``text``."""
    src = _strip_comments(text)
    entries, pos = [], 0
    while True:
        m = re.compile(r"\S").search(src, pos)
        if not m:
            break
        start = m.start()
        brace = src.find("{", start)
        if brace < 0:
            raise ParseError("missing '{'", *_line_col(src, start))
        close = src.find("}", brace)
        if close < 0:
            raise ParseError("missing '}'", *_line_col(src, brace))
        name, dim, fld, info = _parse_header(src[start:brace], start, src)
        products, seen = [], set()
        body_start = brace + 1
        for stmt_match in re.finditer(r"[^;]+", src[body_start:close]):
            stmt = stmt_match.group(0)
            if not stmt.strip():
                continue
            spos = body_start + stmt_match.start() + (len(stmt) - len(stmt.lstrip()))
            where = _line_col(src, spos)
            pm = _PRODUCT.match(stmt)
            if not pm:
                raise ParseError(f"expected 'eI*eJ = ...', got {stmt.strip()!r}", *where)
            i, j = int(pm.group(1)) - 1, int(pm.group(2)) - 1
            if not (0 <= i < dim and 0 <= j < dim):
                raise ParseError(f"e{i + 1}*e{j + 1} outside dimension {dim}", *where)
            if (i, j) in seen:
                raise DuplicateProduct(f"{name}: product e{i + 1}*e{j + 1} defined twice (line {where[0]})")
            seen.add((i, j))
            terms = _split_terms(pm.group(3).strip(), where)
            for t in terms:
                if not 0 <= t.index < dim:
                    raise ParseError(f"e{t.index + 1} outside dimension {dim}", *where)
            if terms:
                products.append(((i, j), terms))
        entry = CatalogEntry(name, dim, fld, info["section"], info["params"], tuple(info["derived"]),
                             tuple(info["solvers"]), tuple(info["constraints"]), tuple(sorted(products)),
                             info["external"], _line_col(src, start)[0])
        _check_names(entry, _line_col(src, start))
        entries.append(entry)
        pos = close + 1
    return entries


def parse_single(text: str) -> CatalogEntry:
    entries = parse_algebra_file(text)
    if len(entries) != 1:
        raise ParseError(f"expected exactly one algebra, found {len(entries)}")
    return entries[0]


def unparse(entry: CatalogEntry) -> str:
    """Canonical text; parse(unparse(e)) == e."""
    head = [f"algebra {entry.name} dim {entry.dim} over {entry.field}"]
    if entry.section:
        head.append(f"section {entry.section}")
    if entry.params:
        head.append("params " + " ".join(entry.params))
    if entry.derived:
        head.append("derive " + " ".join(f"{n} = {e};" for n, e in entry.derived))
    if entry.solvers:
        head.append("solve " + " ".join(f"{n} = {e};" for n, e in entry.solvers))
    if entry.constraints:
        head.append("where " + " ".join(f"{c};" for c in entry.constraints))
    if entry.external:
        head.append("external")
    lines = [" ".join(head) + " {"]
    for (i, j), terms in entry.table:
        rhs = "".join(t.text(k == 0) for k, t in enumerate(terms))
        lines.append(f"  e{i + 1}*e{j + 1} = {rhs};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def algebra_to_text(A, name: str | None = None) -> str:
    """Serialize a concrete Algebra in the same format."""
    from ..algebra import format_coefficient

    lines = [f"algebra {name or A.name or 'A'} dim {A.dim} over {A.field} {{"]
    for (i, j), terms in A.table.items():
        parts = []
        for idx, (k, c) in enumerate(terms):
            pre = format_coefficient(c, idx == 0)
            pre = pre[:-1] + " " if pre.endswith("*") else pre
            parts.append(f"{pre}e{k + 1}")
        lines.append(f"  e{i + 1}*e{j + 1} = {''.join(parts)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
