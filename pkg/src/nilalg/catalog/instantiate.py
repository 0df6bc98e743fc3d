"""Turn a catalog entry plus parameter values into a concrete Algebra."""
from __future__ import annotations

from typing import Mapping

from ..algebra import Algebra
from ..errors import (ConstraintViolated, DivisionByZero, MissingParameter, NonRepresentable,
                      NoSquareRoot, UnknownParameter)
from ..expr import evaluate, parse_expr
from ..scalars import FieldTag, Scalar, common_field, parse_field
from .fileformat import CatalogEntry


def _field_for(entry: CatalogEntry, assignment: Mapping, field: FieldTag | None) -> FieldTag:
    if field is not None:
        return field
    tag = parse_field(entry.field)
    for v in assignment.values():
        if isinstance(v, Scalar) and v.tag is not tag:
            tag = common_field(tag, v.tag)
    return tag


def resolve_parameters(entry: CatalogEntry, assignment: Mapping, field: FieldTag | None = None) -> dict:
    """Complete an assignment: apply solve clauses, compute derived values, check constraints.

    Returns a dict over every free and derived parameter name.
    """
    tag = _field_for(entry, assignment, field)
    known = set(entry.all_params)
    for name in assignment:
        if name not in known:
            raise UnknownParameter(f"{entry.name} has no parameter {name!r}")
    env = {k: tag(v) for k, v in assignment.items()}
    derived_names = {n for n, _ in entry.derived}
    for name, text in entry.solvers:
        if name in env:
            continue
        needed = {n for n in derived_names if n in env}
        if not needed:
            continue
        try:
            env[name] = evaluate(parse_expr(text), env, tag)
        except NoSquareRoot as exc:
            raise NonRepresentable(
                f"{entry.name}: {name} = {text} is not in {tag} ({exc}); pass {name} directly or use a larger field"
            ) from None
    missing = [p for p in entry.params if p not in env]
    if missing:
        raise MissingParameter(f"{entry.name} needs values for: {', '.join(missing)}")
    for name, text in entry.derived:
        value = evaluate(parse_expr(text), env, tag)
        if name in env and env[name] != value:
            raise ConstraintViolated(f"{entry.name}: supplied {name}={env[name]} but {name} = {text} gives {value}")
        env[name] = value
    for c in entry.constraints:
        lhs, rhs = (evaluate(parse_expr(s), env, tag) for s in c.split("!="))
        if lhs == rhs:
            shown = ", ".join(f"{k}={v}" for k, v in env.items())
            raise ConstraintViolated(f"{entry.name}: constraint {c} fails at {shown}")
    return env


def instantiate(entry: CatalogEntry, assignment: Mapping | None = None, field: FieldTag | None = None) -> Algebra:
    if entry.external:
        raise NonRepresentable(f"{entry.name} is a stub for an externally published table")
    assignment = dict(assignment or {})
    env = resolve_parameters(entry, assignment, field)
    tag = _field_for(entry, assignment, field)
    products = {}
    for (i, j), terms in entry.table:
        acc = {}
        for t in terms:
            try:
                c = evaluate(parse_expr(t.coefficient), env, tag) if t.coefficient else tag.one
            except DivisionByZero as exc:
                raise ConstraintViolated(f"{entry.name}: coefficient {t.coefficient} undefined ({exc})") from None
            c = c if t.sign > 0 else -c
            acc[t.index] = acc.get(t.index, tag.zero) + c
        products[(i, j)] = acc
    params = tuple((k, env[k]) for k in entry.all_params if k in env)
    return Algebra.from_products(entry.dim, tag, products, name=entry.name, params=params)
