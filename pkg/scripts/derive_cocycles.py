"""Express the e4-part of every one-dimensional extension table in its section's nabla basis.

Writes src/nilalg/catalog/data/cocycles.json, mapping entry name to a cocycle
expression in N1..N8.  Needs sympy (maintenance only; the library does not).
"""
from __future__ import annotations

import json
import re
import pathlib
import sys

import sympy as sp

ROOT = pathlib.Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from nilalg.catalog import builtin_catalog  # noqa: E402
from nilalg.catalog.claims import NABLA, PARENTS  # noqa: E402

OUT = ROOT / "src" / "nilalg" / "catalog" / "data" / "cocycles.json"


def _clean(text: str) -> str:
    return re.sub(r"\blambda\b", "lam_", text.replace("^", "**"))


def sym(text: str, names: dict):
    text = _clean(text)
    return sp.sympify(text, locals={**names, "i": sp.I, "D": None})


def nabla_matrix(text: str, names: dict) -> sp.Matrix:
    M = sp.zeros(3, 3)
    D = {}
    for a in range(3):
        for b in range(3):
            E = sp.zeros(3, 3)
            E[a, b] = 1
            D[(a + 1, b + 1)] = E
    expr = _clean(text)
    return sp.sympify(expr, locals={**names, "i": sp.I, "D": lambda a, b: D[(int(a), int(b))]}) + M


def to_expr_text(e) -> str:
    s = sp.sstr(sp.factor(e) if e.free_symbols else sp.nsimplify(e))
    return s.replace("**", "^").replace("I", "i").replace("lam_", "lambda")


def main():
    out = {}
    for entry in builtin_catalog():
        if entry.section not in NABLA or entry.external:
            continue
        names = {_clean(p): sp.Symbol(_clean(p)) for p in entry.all_params}
        derived = {names[_clean(n)]: sym(t, names) for n, t in entry.derived}
        M = sp.zeros(3, 3)
        for (i, j), terms in entry.table:
            for t in terms:
                if t.index == 3:
                    M[i, j] += t.sign * (sym(t.coefficient, names) if t.coefficient else 1)
        M = M.subs(derived)
        parent, pexpr = PARENTS[entry.name]
        lam = sym(pexpr.get("lambda", "0"), names).subs(derived)
        basis = [nabla_matrix(n, {"lam_": lam}) for n in NABLA[entry.section]]
        cs = sp.symbols(f"c1:{len(basis) + 1}")
        eqs = list(sum((c * B for c, B in zip(cs, basis)), sp.zeros(3, 3)) - M)
        sol = sp.solve(eqs, cs, dict=True)
        if len(sol) != 1 or set(sol[0]) != set(cs):
            raise SystemExit(f"{entry.name}: table is not a unique nabla combination: {sol}")
        parts = []
        for k, c in enumerate(cs, 1):
            v = sp.simplify(sol[0][c])
            if v == 0:
                continue
            txt = to_expr_text(v)
            if v == 1:
                parts.append(f"N{k}")
            elif v == -1:
                parts.append(f"-N{k}")
            else:
                parts.append(f"({txt})*N{k}")
        out[entry.name] = "+".join(parts).replace("+-", "-")
        print(f"{entry.name:8s} {out[entry.name]}")
    OUT.write_text(json.dumps(out, indent=1, sort_keys=True) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
