"""Find exact isomorphisms for the recorded isomorphism relations.

Ansatz: an automorphism of the common three-dimensional parent taken from its
family (parameters on a small grid) acting on e1..e3, plus an unknown last row
(w1, w2, w3, c).  For fixed family parameters the multiplicativity equations
are linear in (w1, w2, w3, c).  Writes src/nilalg/catalog/data/witnesses.json.
"""
from __future__ import annotations

import itertools
import json
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from nilalg import linalg as la  # noqa: E402
from nilalg.catalog.claims import PARENTS, iso_claims, iso_sides, relation_key  # noqa: E402
from nilalg.errors import ConstraintViolated, NoSolution  # noqa: E402
from nilalg.iso import verify_witness  # noqa: E402
from nilalg.orbit import AUT_FAMILIES, sample_family  # noqa: E402

OUT = ROOT / "src" / "nilalg" / "catalog" / "data" / "witnesses.json"


def complete(A, B, F):
    """Extend a 3x3 block to a 4x4 isomorphism A -> B, or None."""
    tag = A.field
    rows, rhs = [], []
    cols = [tuple(F[r][k] for r in range(3)) + (tag.zero,) for k in range(3)]
    for i in range(3):
        for j in range(3):
            a = A.basis_product(i, j)
            target = B.product(cols[i], cols[j])
            head = [sum((a[k] * F[r][k] for k in range(3)), tag.zero) for r in range(3)]
            if tuple(head) != tuple(target[:3]):
                return None
            rows.append((a[0], a[1], a[2], a[3]))
            rhs.append(target[3])
    try:
        x = la.solve(tuple(rows), tuple(rhs))
    except NoSolution:
        return None
    w, c = x[:3], x[3]
    if not c:
        return None
    M = tuple(tuple(F[r]) + (tag.zero,) for r in range(3)) + (tuple(w) + (c,),)
    return M if verify_witness(A, B, M) else None


SMALL = (1, -1, 0, 2, -2)
WIDE = (0, 1, -1, "1/2", "-1/2", "3/2", "-3/2")


def search(A, B, fam, lam, values=SMALL):
    tag = A.field
    grid = [tag(v) for v in values]
    if tag.kind == "QD":
        grid += [g * tag.gen() for g in grid if g]
    free = [p for p in fam.params if p not in fam.discrete]
    discrete = [dict(zip(fam.discrete, v)) for v in itertools.product(*fam.discrete.values())] or [{}]
    for disc in discrete:
        for vals in itertools.product(grid, repeat=len(free)):
            a = {**dict(zip(free, vals)), **{k: tag(v) for k, v in disc.items()}}
            if fam.parent_params:
                a["lam"] = lam
            try:
                F = sample_family(fam, a, tag)
            except ConstraintViolated:
                continue
            M = complete(A, B, F)
            if M is not None:
                return M
    return None


def main():
    out = {}
    for claim in iso_claims():
        A, B = iso_sides(claim)
        parent, pparams = PARENTS[claim.name]
        fam = AUT_FAMILIES[parent]
        lam = None
        if "lambda" in pparams:
            lam = dict(A.params)["lambda"] if pparams["lambda"] == "lambda" else A.field(pparams["lambda"])
        M = search(A, B, fam, lam) or search(A, B, fam, lam, WIDE)
        key = relation_key(claim.name, claim.left, claim.right)
        if M is None:
            print(f"{key}: no witness found in the ansatz")
            continue
        out[key] = [[str(x) for x in row] for row in M]
        print(f"{key}: {out[key]}")
    OUT.write_text(json.dumps(out, indent=1) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
