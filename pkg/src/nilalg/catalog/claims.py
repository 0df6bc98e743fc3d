"""Recorded facts about catalog entries: parents and cocycles, annihilator
dimensions, variety memberships, isomorphisms with witnesses, and pairs that
should be distinct.

Cocycles of one-dimensional extensions are written in the basis N1..N8 of the
parent's second cohomology listed in ``NABLA``; those expressions are
generated by ``scripts/derive_cocycles.py`` into ``data/cocycles.json``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Mapping

from ..algebra import Algebra
from ..cohomology import BilinearForm, parse_form
from ..errors import ConstraintViolated, NonRepresentable
from ..expr import evaluate, parse_expr
from ..scalars import FieldTag, Scalar, parse_field
from . import builtin_catalog, entry, instantiate
from .fileformat import CatalogEntry

# H^2 bases of the three-dimensional parents, as D(i,j) combinations.
NABLA = {
    "2.2": ("D(1,2)", "D(2,2)", "D(1,3)-2*D(3,1)"),
    "2.3": ("(lambda-2)*D(1,3)-(2*lambda-1)*D(3,1)", "D(2,1)", "D(2,2)"),
    "2.4": ("D(1,2)+D(2,1)", "D(1,3)+D(3,1)", "D(2,3)+D(3,2)", "D(3,3)",
            "D(2,1)", "D(2,2)", "D(3,1)", "D(3,2)"),
    "2.5": ("D(1,1)", "D(1,2)+D(2,1)", "D(1,3)+D(3,1)", "D(2,3)+D(3,2)",
            "D(2,1)", "D(3,1)", "D(3,2)", "D(3,3)"),
    "2.6": ("D(1,3)-D(3,1)", "D(2,3)-D(3,2)", "D(1,1)", "D(1,2)",
            "D(1,3)", "D(2,2)", "D(2,3)", "D(3,3)"),
    "2.7": ("D(1,1)", "D(1,2)", "D(1,3)", "D(2,1)", "D(2,3)", "D(3,1)", "D(3,2)", "D(3,3)"),
}

_LAMBDA = {"lambda": "lambda"}
_LAMBDA0 = {"lambda": "0"}

# entry -> (parent entry, parent parameter expressions in the entry's parameters)
PARENTS: dict = {
    "CD2s01": ("zero1", {}),
    **{f"CD3_0{k}": ("CD2s01", {}) for k in (1, 2, 3, 4)},
    "CD3s02": ("zero2", {}), "CD3s03": ("zero2", {}), "CD3s04": ("zero2", {}),
    "CD4_05": ("CD2s01", {}), "CD4_06": ("CD2s01", {}), "CD4_07": ("CD2s01", {}),
    "CD4_08": ("CD3_03", {}), "CD4_09": ("CD3_03", {}),
    "CD4_10": ("CD3_04", {"lambda": "1"}), "CD4_11": ("CD3_04", _LAMBDA), "CD4_12": ("CD3_04", _LAMBDA),
    **{f"CD4_{k}": ("CD3s01", {}) for k in range(13, 39)},
    **{f"CD4_{k}": ("CD3s02", {}) for k in range(39, 71)},
    **{f"CD4_{k}": ("CD3s03", {}) for k in range(71, 87)},
    **{f"CD4_{k}": ("CD3s04", _LAMBDA) for k in (87, 88, 89, 90, 91, 92, 97, 98, 102, 105, 107, 108,
                                                    109, 110, 111, 112)},
    **{f"CD4_{k}": ("CD3s04", _LAMBDA0) for k in (93, 94, 95, 96, 99, 101, 103, 104, 106)},
    "CD4_100": ("CD3s04", {"lambda": "1/4"}),
    "D4_00": ("CD3s04", _LAMBDA0),
}

# Cocycles written directly in D(i,j) form (several new basis vectors, or small parents).
DIRECT_COCYCLES = {
    "CD2s01": ("D(1,1)",),
    "CD3_01": ("D(2,2)",),
    "CD3_02": ("D(2,1)+D(2,2)",),
    "CD3_03": ("D(2,1)",),
    "CD3_04": ("D(1,2)+lambda*D(2,1)",),
    "CD3s02": ("D(1,1)+D(2,2)",),
    "CD3s03": ("D(1,2)-D(2,1)",),
    "CD3s04": ("lambda*D(1,1)+D(2,1)+D(2,2)",),
    "CD4_05": ("D(2,2)", "D(2,1)"),
    "CD4_06": ("D(2,1)", "D(1,2)"),
    "CD4_07": ("D(2,2)", "D(1,2)+lambda*D(2,1)"),
}

ANN_DIMS = {"CD3s01": 2, "CD4_05": 2, "CD4_06": 2, "CD4_07": 2}

VARIETIES = {
    "CD3s01": ("jordan",), "CD3s02": ("jordan",), "CD3s03": ("lie",),
    "CD4_37": ("jordan",), "CD4_38": ("jordan",),
    "CD4_68": ("jordan",), "CD4_69": ("jordan",), "CD4_70": ("jordan",),
    "CD4_86": ("lie",),
    "D4_00": ("left-leibniz",),
}

NOTES = {
    "CD4_13": "stored constraint is alpha != 1/2; the orbit analysis would exclude alpha = -1/2 instead",
    "CD4_08": "no constraint on alpha is stored; the orbit analysis would exclude alpha = -1",
    "D4_00": "extension of CD3s04 at lambda = 0; Leibniz in the left convention x(yz) = (xy)z + y(xz)",
}

THETA_SAMPLES = (2, -1, 3)
_GENERIC = (Fraction(2), Fraction(-1), Fraction(3), Fraction(5), Fraction(-3), Fraction(1, 3), Fraction(7))


@dataclass(frozen=True)
class ExtensionClaim:
    name: str
    section: str
    parent: str
    parent_params: Mapping
    cocycles: tuple          # expression texts, in D(i,j) or N1..N8
    basis: tuple = ()        # nabla basis texts, when cocycles use N1..N8
    ann_dim: int = 1
    varieties: tuple = ()
    note: str = ""


@dataclass(frozen=True)
class IsoClaim:
    """entry(left) is isomorphic to entry(right); ``witness`` maps left to right (columns = images)."""

    name: str
    left: Mapping
    right: Mapping
    field: str
    witness: tuple | None = None
    relation: str = ""


@dataclass(frozen=True)
class DistinctClaim:
    left: tuple   # (entry name, params)
    right: tuple
    field: str = "Q"
    note: str = ""


@lru_cache(maxsize=1)
def _cocycle_texts() -> dict:
    path = resources.files(__package__) / "data" / "cocycles.json"
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        return {}


@lru_cache(maxsize=1)
def extension_claims() -> tuple:
    out = []
    texts = _cocycle_texts()
    for e in builtin_catalog():
        if e.external:
            continue
        parent, pparams = PARENTS.get(e.name, ("", {}))
        if e.name in DIRECT_COCYCLES:
            cocycles, basis = DIRECT_COCYCLES[e.name], ()
        elif e.name in texts:
            cocycles, basis = (texts[e.name],), NABLA[e.section]
        else:
            cocycles, basis = (), ()
        out.append(ExtensionClaim(e.name, e.section, parent, pparams, cocycles, basis,
                                  ANN_DIMS.get(e.name, 1), VARIETIES.get(e.name, ()), NOTES.get(e.name, "")))
    return tuple(out)


def extension_claim(name: str) -> ExtensionClaim:
    for c in extension_claims():
        if c.name == name:
            return c
    raise KeyError(name)


def _env(params: Mapping, tag: FieldTag) -> dict:
    return {k: (v if isinstance(v, Scalar) else tag(v)) for k, v in params.items()}


def parent_algebra(claim: ExtensionClaim, child: Algebra) -> Algebra:
    """Instantiate the claimed parent at the child's parameter values."""
    tag = child.field
    env = _env(dict(child.params), tag)
    if claim.parent.startswith("zero"):
        return Algebra.zero(int(claim.parent[4:]), tag)
    pvals = {k: evaluate(parse_expr(v), env, tag) for k, v in claim.parent_params.items()}
    return instantiate(entry(claim.parent), pvals, field=tag)


def claimed_cocycles(claim: ExtensionClaim, child: Algebra, parent: Algebra) -> tuple:
    tag, n = child.field, parent.dim
    env = _env(dict(child.params), tag)
    penv = _env(dict(parent.params), tag)
    forms_env = dict(env)
    for k, text in enumerate(claim.basis, 1):
        forms_env[f"N{k}"] = parse_form(text, n, tag, penv)
    return tuple(parse_form(t, n, tag, forms_env) for t in claim.cocycles)


def sample_assignments(e: CatalogEntry, count: int = 3) -> list:
    """Deterministic admissible parameter values; Theta-families use Theta in {2, -1, 3}."""
    if not e.params:
        return [{}]
    tag = parse_field(e.field)
    theta_family = bool(e.derived)
    out = []
    for s in range(len(_GENERIC) * 2):
        if len(out) >= count:
            break
        a = {}
        for k, p in enumerate(e.params):
            if theta_family and p == "Theta":
                if s >= len(THETA_SAMPLES):
                    break
                a[p] = Fraction(THETA_SAMPLES[s])
            else:
                a[p] = _GENERIC[(s + 2 * k) % len(_GENERIC)]
        else:
            try:
                instantiate(e, a, field=tag)
            except (ConstraintViolated, NonRepresentable):
                continue
            out.append(a)
            continue
        break
    return out


# Relations from the exception lists, each at one parameter point.
ISO_RELATIONS = (
    ("CD4_43", {"alpha": 2}, {"alpha": -2}, "Q(i)", "alpha -> -alpha"),
    ("CD4_44", {"alpha": 1, "beta": 2, "gamma": 3}, {"alpha": 1, "beta": -2, "gamma": -3}, "Q(i)",
     "(alpha, beta, gamma) -> (alpha, -beta, -gamma)"),
    ("CD4_47", {"alpha": 2, "beta": 3}, {"alpha": 2, "beta": -3}, "Q(i)", "(alpha, beta) -> (alpha, -beta)"),
    ("CD4_50", {"alpha": 2}, {"alpha": -2}, "Q(i)", "alpha -> -alpha"),
    ("CD4_54", {"alpha": 3}, {"alpha": -4}, "Q(i)", "alpha -> -alpha-1"),
    ("CD4_57", {"alpha": 1, "beta": 3}, {"alpha": 4, "beta": -3}, "Q(i)", "(alpha, beta) -> (alpha+beta, -beta)"),
    ("CD4_59", {"alpha": 2, "beta": 3}, {"alpha": 2, "beta": -3}, "Q(i)", "(alpha, beta) -> (alpha, -beta)"),
    ("CD4_91", {"Theta": 2, "alpha": 1}, {"Theta": 2, "alpha": -1}, "Q", "alpha -> -alpha"),
    ("CD4_92", {"Theta": 2, "alpha": 1}, {"Theta": 2, "alpha": -1}, "Q", "alpha -> -alpha"),
    ("CD4_93", {"alpha": 2}, {"alpha": -2}, "Q", "alpha -> -alpha"),
    ("CD4_94", {"alpha": 2, "beta": 3}, {"alpha": -2, "beta": 3}, "Q", "(alpha, beta) -> (-alpha, beta)"),
    ("CD4_95", {"alpha": 2}, {"alpha": -2}, "Q", "alpha -> -alpha"),
    ("CD4_100", {"alpha": 1}, {"alpha": -1}, "Q", "alpha -> -alpha"),
    ("CD4_101", {"alpha": 1, "beta": 2}, {"alpha": -1, "beta": -2}, "Q", "(alpha, beta) -> (-alpha, -beta)"),
    ("CD4_109", {"lambda": -2, "alpha": 1}, {"lambda": -2, "alpha": -1}, "Q", "alpha -> -alpha"),
    ("CD4_112", {"lambda": -2, "alpha": 1, "beta": 1, "gamma": 1},
     {"lambda": -2, "alpha": -1, "beta": 1, "gamma": -1}, "Q", "(alpha, gamma) -> (-alpha, -gamma)"),
    ("CD4_112", {"lambda": -2, "alpha": 1, "beta": 1, "gamma": 1},
     {"lambda": -2, "alpha": 0, "beta": "-3/2", "gamma": "-i"}, "Q(i)",
     "(alpha, beta, gamma) -> ((gamma-alpha*beta)s, 1/lambda-beta, (gamma/lambda-alpha/lambda-beta*gamma)s), "
     "s^2 = -lambda/(1-beta+lambda*beta^2)"),
)


@lru_cache(maxsize=1)
def _witness_texts() -> dict:
    path = resources.files(__package__) / "data" / "witnesses.json"
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        return {}


def relation_key(name: str, left: Mapping, right: Mapping) -> str:
    fmt = lambda d: ",".join(f"{k}={v}" for k, v in d.items())  # noqa: E731
    return f"{name}({fmt(left)})~({fmt(right)})"


@lru_cache(maxsize=1)
def iso_claims() -> tuple:
    stored = _witness_texts()
    out = []
    for name, left, right, fld, rel in ISO_RELATIONS:
        key = relation_key(name, left, right)
        out.append(IsoClaim(name, left, right, fld, tuple(map(tuple, stored[key])) if key in stored else None, rel))
    return tuple(out)


def iso_sides(claim: IsoClaim):
    tag = parse_field(claim.field)
    e = entry(claim.name)
    A = instantiate(e, {k: tag(v) for k, v in claim.left.items()}, field=tag)
    B = instantiate(e, {k: tag(v) for k, v in claim.right.items()}, field=tag)
    return A, B


def witness_matrix(claim: IsoClaim):
    if claim.witness is None:
        return None
    tag = parse_field(claim.field)
    return tuple(tuple(evaluate(parse_expr(str(x)), {}, tag) for x in row) for row in claim.witness)


DISTINCT_PAIRS = (
    DistinctClaim(("CD4_05", {}), ("CD4_06", {})),
    DistinctClaim(("CD4_08", {"alpha": 0}), ("CD4_08", {"alpha": 1})),
    DistinctClaim(("CD4_39", {}), ("CD4_41", {}), "Q(i)"),
    DistinctClaim(("CD4_08", {"alpha": 1}), ("CD4_09", {})),
    DistinctClaim(("CD4_10", {"alpha": 0}), ("CD4_10", {"alpha": 1})),
    DistinctClaim(("CD4_11", {"lambda": 0}), ("CD4_12", {"alpha": 0, "lambda": 0})),
    DistinctClaim(("CD4_13", {"alpha": 0}), ("CD4_13", {"alpha": 1})),
    DistinctClaim(("CD4_16", {}), ("CD4_22", {})),
    DistinctClaim(("CD4_19", {}), ("CD4_20", {})),
    DistinctClaim(("CD4_33", {}), ("CD4_34", {})),
    DistinctClaim(("CD4_37", {}), ("CD4_38", {})),
    DistinctClaim(("CD4_40", {}), ("CD4_42", {}), "Q(i)"),
    DistinctClaim(("CD4_52", {}), ("CD4_67", {}), "Q(i)"),
    DistinctClaim(("CD4_69", {}), ("CD4_70", {}), "Q(i)"),
    DistinctClaim(("CD4_71", {}), ("CD4_72", {})),
    DistinctClaim(("CD4_84", {}), ("CD4_85", {})),
    DistinctClaim(("CD4_77", {}), ("CD4_86", {})),
    DistinctClaim(("CD4_103", {}), ("CD4_104", {})),
    DistinctClaim(("CD4_110", {"lambda": 1}), ("CD4_111", {"lambda": 1})),
    DistinctClaim(("D4_00", {}), ("CD4_93", {"alpha": 0})),
)


def distinct_sides(claim: DistinctClaim):
    tag = parse_field(claim.field)
    (na, pa), (nb, pb) = claim.left, claim.right
    return (instantiate(entry(na), {k: tag(v) for k, v in pa.items()}, field=tag),
            instantiate(entry(nb), {k: tag(v) for k, v in pb.items()}, field=tag))
