"""Central extensions A + V with product xy + theta(x, y), and their inverse."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import linalg as la
from .algebra import Algebra
from .cohomology import (BilinearForm, classes_independent, cocycle_annihilator, cocycle_space,
                         violated_instance)
from .errors import DimensionMismatch, FieldMismatch, NotACocycle, TrivialAnnihilator


@dataclass(frozen=True)
class ExtensionSpec:
    parent: Algebra
    cocycles: tuple
    names: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "cocycles", tuple(self.cocycles))
        for th in self.cocycles:
            if th.dim != self.parent.dim:
                raise DimensionMismatch(f"cocycle on dimension {th.dim} for a parent of dimension {self.parent.dim}")
            if th.field is not self.parent.field:
                raise FieldMismatch(f"cocycle over {th.field} for a parent over {self.parent.field}")
        if not self.names:
            n = self.parent.dim
            object.__setattr__(self, "names", tuple(f"e{n + t + 1}" for t in range(len(self.cocycles))))


def check_cocycles(spec: ExtensionSpec, variety="cd") -> None:
    Z = cocycle_space(spec.parent, variety)
    for t, th in enumerate(spec.cocycles):
        if not Z.contains(th.coeffs):
            where = violated_instance(spec.parent, th, variety)
            raise NotACocycle(f"component {t + 1} ({th}) violates {where[0]} at basis tuple {where[1]}",
                              instance=(t, where))


def extend(spec: ExtensionSpec, check: bool = True) -> Algebra:
    """Structure constants of the extension; new basis vectors come last."""
    if check:
        check_cocycles(spec)
    A, n, s = spec.parent, spec.parent.dim, len(spec.cocycles)
    products = {}
    for i in range(n):
        for j in range(n):
            terms = dict(A.table.get((i, j), ()))
            for t, th in enumerate(spec.cocycles):
                c = th.entry(i, j)
                if c:
                    terms[n + t] = c
            if terms:
                products[(i, j)] = terms
    return Algebra.from_products(n + s, A.field, products)


def is_nonsplit(spec: ExtensionSpec) -> bool:
    """Independent classes in H^2 and Ann(theta) meeting Ann(parent) trivially."""
    check_cocycles(spec)
    if not spec.cocycles:
        return False
    if not classes_independent(spec.parent, spec.cocycles):
        return False
    ann = la.intersection(cocycle_annihilator(spec.parent, spec.cocycles), spec.parent.annihilator())
    return ann.dim == 0


@dataclass(frozen=True)
class RecoveredParent:
    parent: Algebra
    cocycles: tuple
    split: tuple  # columns: images in B of the extension's basis

    def spec(self) -> ExtensionSpec:
        return ExtensionSpec(self.parent, self.cocycles)


def recover_parent(B: Algebra) -> RecoveredParent:
    """Write B as a central extension of B/Ann(B).

    The parent lives on the coordinates of B outside the pivots of Ann(B) and
    component r of the cocycle is the coefficient of the r-th echelon basis
    vector of Ann(B).  ``split`` is an isomorphism extend(parent, cocycles) -> B.
    """
    ann = B.annihilator()
    if ann.dim == 0:
        raise TrivialAnnihilator("the annihilator is zero, so the algebra is not a central extension")
    parent, _ = B.quotient_by_annihilator_complement(ann)
    keep = [c for c in range(B.dim) if c not in set(ann.pivots)]
    m, F = len(keep), B.field
    coeffs = [[F.zero] * (m * m) for _ in ann.rows]
    for a, i in enumerate(keep):
        for b, j in enumerate(keep):
            v = B.basis_product(i, j)
            for r, p in enumerate(ann.pivots):
                coeffs[r][a * m + b] = v[p]
    cocycles = tuple(BilinearForm(m, F, tuple(c)) for c in coeffs)
    columns = [la.unit_vector(B.dim, c, F) for c in keep] + list(ann.rows)
    split = la.transpose(tuple(columns))
    return RecoveredParent(parent, cocycles, split)


def extension_from_forms(parent: Algebra, forms: Sequence[BilinearForm], check: bool = True) -> Algebra:
    return extend(ExtensionSpec(parent, tuple(forms)), check=check)
