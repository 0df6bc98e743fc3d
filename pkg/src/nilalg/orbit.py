"""Automorphism actions on bilinear forms, parameterized automorphism families,
and regression data for the transformation formulas of cocycle coordinates."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg as la
from .algebra import Algebra
from .cohomology import BilinearForm
from .errors import ConstraintViolated, DimensionMismatch, FormulaMismatch, MissingParameter, SingularMatrix
from .expr import evaluate, parse_expr
from .scalars import QQ, FieldTag, Scalar


def act(phi, theta: BilinearForm) -> BilinearForm:
    """(phi theta)(x, y) = theta(phi x, phi y); matrix form phi^T M phi."""
    n = theta.dim
    if len(phi) != n or any(len(r) != n for r in phi):
        raise DimensionMismatch(f"{len(phi)}x{len(phi[0]) if phi else 0} matrix acting on forms of dimension {n}")
    if not la.is_invertible(phi):
        raise SingularMatrix("automorphism matrix is singular")
    m = la.matmul(la.matmul(la.transpose(phi), theta.matrix()), phi)
    return BilinearForm.from_matrix(m)


def is_automorphism(A: Algebra, phi) -> bool:
    """phi (columns = images of basis vectors) is invertible and multiplicative."""
    n = A.dim
    if len(phi) != n or any(len(r) != n for r in phi):
        raise DimensionMismatch(f"matrix of shape {la.shape(phi)} for an algebra of dimension {n}")
    if not la.is_invertible(phi):
        return False
    cols = la.transpose(phi)
    for i in range(n):
        for j in range(n):
            lhs = la.mat_vec(phi, A.basis_product(i, j))
            if lhs != A.product(cols[i], cols[j]):
                return False
    return True


def _eval_env(values: Mapping, tag: FieldTag) -> dict:
    return {k: (v if isinstance(v, Scalar) else tag(v)) for k, v in values.items()}


def _eval_matrix(rows, env, tag):
    return tuple(tuple(evaluate(parse_expr(e), env, tag) for e in row) for row in rows)


@dataclass(frozen=True)
class AutFamily:
    """A matrix of expressions that is an automorphism at every admissible assignment."""

    parent: str
    params: tuple
    matrix: tuple
    constraint: str = "1"
    parent_params: tuple = ()
    discrete: Mapping = field(default_factory=dict)  # param -> allowed values

    def admissible(self, assignment: Mapping, tag: FieldTag = QQ) -> bool:
        env = _eval_env(assignment, tag)
        return bool(evaluate(parse_expr(self.constraint), env, tag))


def sample_family(f: AutFamily, assignment: Mapping, tag: FieldTag = QQ):
    """Concrete matrix at ``assignment`` (family and parent parameters)."""
    env = _eval_env(assignment, tag)
    missing = [p for p in f.params + f.parent_params if p not in env]
    if missing:
        raise MissingParameter(f"missing value for {', '.join(missing)}")
    for p, allowed in f.discrete.items():
        if env[p] not in [tag(a) for a in allowed]:
            raise ConstraintViolated(f"{p} must be one of {allowed}")
    if not evaluate(parse_expr(f.constraint), env, tag):
        raise ConstraintViolated(f"{f.constraint} vanishes at {dict(assignment)}")
    return _eval_matrix(f.matrix, env, tag)


def random_assignment(f: AutFamily, rng: random.Random, fixed: Mapping | None = None, lo=-9, hi=9,
                      tag: FieldTag = QQ, tries: int = 1000) -> dict:
    """Uniform small-integer assignment satisfying the constraint (rejection sampling)."""
    fixed = dict(fixed or {})
    for _ in range(tries):
        a = dict(fixed)
        for p in f.params:
            if p in fixed:
                continue
            a[p] = rng.choice(f.discrete[p]) if p in f.discrete else rng.randint(lo, hi)
        if f.admissible(a, tag):
            return a
    raise ConstraintViolated(f"no admissible sample found for the {f.parent} family")


_PHI_22 = (("x", "0", "0"), ("y", "x^2", "0"), ("z", "x*y", "x^3"))
_PHI_23 = (("x", "0", "0"), ("y", "x^2", "0"), ("z", "(lam+1)*x*y", "x^3"))
_PHI_24 = (("x", "0", "0"), ("y", "x^2", "u"), ("z", "0", "v"))
_PHI_25 = (("x", "y", "0"), ("-(-1)^n*y", "(-1)^n*x", "0"), ("z", "u", "x^2+y^2"))
_PHI_26 = (("x", "y", "0"), ("z", "u", "0"), ("v", "w", "x*u-y*z"))
_PHI_27 = (("x", "y", "0"), ("-lam*y", "x-y", "0"), ("z", "u", "x^2-x*y+lam*y^2"))

AUT_FAMILIES = {
    "CD3_01": AutFamily("CD3_01", ("x", "y"), (("x", "0", "0"), ("0", "x^2", "0"), ("y", "0", "x^4")), "x"),
    "CD3_02": AutFamily("CD3_02", ("x",), (("1", "0", "0"), ("0", "1", "0"), ("x", "0", "1"))),
    "CD3_03": AutFamily("CD3_03", ("x", "y", "z"), _PHI_22, "x"),
    "CD3_04": AutFamily("CD3_04", ("x", "y", "z"), _PHI_23, "x", ("lam",)),
    "CD3s01": AutFamily("CD3s01", ("x", "y", "z", "u", "v"), _PHI_24, "x*v"),
    "CD3s02": AutFamily("CD3s02", ("x", "y", "z", "u", "n"), _PHI_25, "x^2+y^2", (), {"n": (0, 1)}),
    "CD3s03": AutFamily("CD3s03", ("x", "y", "z", "u", "v", "w"), _PHI_26, "x*u-y*z"),
    "CD3s04": AutFamily("CD3s04", ("x", "y", "z", "u"), _PHI_27, "x^2-x*y+lam*y^2", ("lam",)),
}


@dataclass(frozen=True)
class ActionBlock:
    """How the coordinates a1..a8 of a cocycle transform under a family of automorphisms.

    ``cocycle`` is the coefficient matrix of a generic cocycle in a1..a8;
    ``result`` is the expected phi^T M phi written with the transformed
    coordinates A1..A8 and with auxiliary entries (S, SS) that are simply read
    off the computed matrix at ``reads``.
    """

    block: str
    parent: str
    family: AutFamily
    cocycle: tuple
    result: tuple
    reads: Mapping
    formulas: Mapping
    coordinates: tuple = ("a1", "a2", "a3")
    parent_params: tuple = ()
    derived: Mapping = field(default_factory=dict)

    def evaluate_at(self, assignment: Mapping, tag: FieldTag = QQ):
        """(computed phi^T M phi, expected matrix) at one assignment."""
        env = _eval_env(assignment, tag)
        for name, text in self.derived.items():
            env[name] = evaluate(parse_expr(text), env, tag)
        phi = sample_family(self.family, {k: v for k, v in env.items()
                                          if k in self.family.params + self.family.parent_params}, tag)
        M = _eval_matrix(self.cocycle, env, tag)
        R = la.matmul(la.matmul(la.transpose(phi), M), phi)
        for name, (i, j) in self.reads.items():
            env[name] = R[i][j]
        for name, text in self.formulas.items():
            env[name] = evaluate(parse_expr(text), env, tag)
        return R, _eval_matrix(self.result, env, tag)


ACTION_BLOCKS = {
    "2.2": ActionBlock(
        "2.2", "CD3_03", AUT_FAMILIES["CD3_03"],
        (("0", "a1", "a3"), ("0", "a2", "0"), ("-2*a3", "0", "0")),
        (("S", "A1", "A3"), ("SS", "A2", "0"), ("-2*A3", "0", "0")),
        {"S": (0, 0), "SS": (1, 0)},
        {"A1": "x^2*(a1*x+(a2+a3)*y)", "A2": "a2*x^4", "A3": "a3*x^4"},
    ),
    "2.3": ActionBlock(
        "2.3", "CD3_04", AUT_FAMILIES["CD3_04"],
        (("0", "0", "(lam-2)*a1"), ("a2", "a3", "0"), ("-(2*lam-1)*a1", "0", "0")),
        (("S", "SS", "(lam-2)*A1"), ("A2+lam*SS", "A3", "0"), ("-(2*lam-1)*A1", "0", "0")),
        {"S": (0, 0), "SS": (0, 1)},
        {"A1": "a1*x^4", "A2": "x^2*((1-lam)*(a1*(lam+1)^2+a3)*y+a2*x)", "A3": "a3*x^4"},
        parent_params=("lam",),
    ),
    "2.4": ActionBlock(
        "2.4", "CD3s01", AUT_FAMILIES["CD3s01"],
        (("0", "a1", "a2"), ("a1+a5", "a6", "a3"), ("a2+a7", "a3+a8", "a4")),
        (("S", "A1", "A2"), ("A1+A5", "A6", "A3"), ("A2+A7", "A3+A8", "A4")),
        {"S": (0, 0)},
        {
            "A1": "x^2*(a1*x+(a3+a8)*z+a6*y)",
            "A2": "a1*u*x+a2*v*x+a3*v*y+a4*v*z+a6*u*y+(a3+a8)*u*z",
            "A3": "x^2*(a3*v+a6*u)",
            "A4": "a4*v^2+a6*u^2+(2*a3+a8)*u*v",
            "A5": "x^2*(a5*x-a8*z)",
            "A6": "a6*x^4",
            "A7": "u*(a5*x-a8*z)+v*(a7*x+a8*y)",
            "A8": "a8*v*x^2",
        },
        coordinates=tuple(f"a{k}" for k in range(1, 9)),
    ),
    "2.5": ActionBlock(
        "2.5", "CD3s02", AUT_FAMILIES["CD3s02"],
        (("a1", "a2", "a3"), ("a2+a5", "0", "a4"), ("a3+a6", "a4+a7", "a8")),
        (("A1+S", "A2", "A3"), ("A2+A5", "S", "A4"), ("A3+A6", "A4+A7", "A8")),
        {"S": (1, 1)},
        {
            "A1": "a1*(x^2-y^2)-2*s*(2*a2+a5)*x*y-s*(2*a4+a7)*(u*x+y*z)+(2*a3+a6)*(x*z-u*y)+a8*(z^2-u^2)",
            "A2": "s*a2*x^2+a1*x*y-s*(a2+a5)*y^2+(a3*x-s*a4*y+a8*z)*u+(s*a4*x+a3*y+s*a7*x+a6*y)*z",
            "A3": "(a3*x-s*a4*y+a8*z)*(x^2+y^2)",
            "A4": "(s*a4*x+a3*y+a8*u)*(x^2+y^2)",
            "A5": "s*a5*(x^2+y^2)+u*(a6*x-s*a7*y)-z*(s*a7*x+a6*y)",
            "A6": "(a6*x-s*a7*y)*(x^2+y^2)",
            "A7": "(s*a7*x+a6*y)*(x^2+y^2)",
            "A8": "a8*(x^2+y^2)^2",
        },
        coordinates=tuple(f"a{k}" for k in range(1, 9)),
        derived={"s": "(-1)^n"},
    ),
    "2.6": ActionBlock(
        "2.6", "CD3s03", AUT_FAMILIES["CD3s03"],
        (("a3", "a4", "a1+a5"), ("0", "a6", "a2+a7"), ("-a1", "-a2", "a8")),
        (("A3", "A4-S", "A1+A5"), ("S", "A6", "A2+A7"), ("-A1", "-A2", "A8")),
        {"S": (1, 0)},
        {
            "A1": "(x*u-y*z)*(a1*x+a2*z-a8*v)",
            "A2": "(x*u-y*z)*(a1*y+a2*u-a8*w)",
            "A3": "a3*x^2+a5*v*x+a8*v^2+z*(a4*x+a6*z+a7*v)",
            "A4": "x*(2*a3*y+a4*u+a5*w)+z*(a4*y+2*a6*u+a7*w)+v*(a5*y+a7*u+2*a8*w)",
            "A5": "(x*u-y*z)*(a5*x+a7*z+2*a8*v)",
            "A6": "a3*y^2+a4*u*y+a6*u^2+w*(a5*y+a7*u+a8*w)",
            "A7": "(x*u-y*z)*(a5*y+a7*u+2*a8*w)",
            "A8": "a8*(x*u-y*z)^2",
        },
        coordinates=tuple(f"a{k}" for k in range(1, 9)),
    ),
    "2.7": ActionBlock(
        "2.7", "CD3s04", AUT_FAMILIES["CD3s04"],
        (("a1", "a2", "a3"), ("a4", "0", "a5"), ("a6", "a7", "a8")),
        (("A1+lam*S", "A2", "A3"), ("A4+S", "S", "A5"), ("A6", "A7", "A8")),
        {"S": (1, 1)},
        {
            "A1": "a1*x^2+lam*(-a1+a2+a4)*y^2+a8*z^2-lam*a8*u^2-2*lam*(a2+a4)*x*y+(a3+a6)*x*z"
                  "-lam*(a5+a7)*y*z-lam*(a5+a7)*u*x+lam*(-a3+a5-a6+a7)*u*y",
            "A2": "a2*x^2-lam*a4*y^2+(a1-a2)*x*y+a7*x*z+(a6-a7)*y*z-a5*lam*u*y+a3*u*x+a8*u*z",
            "A3": "q*(a3*x-lam*a5*y+a8*z)",
            "A4": "a4*x^2+(-a1+(1-lam)*a2+a4)*y^2-a8*u^2+(a1-a2-2*a4)*x*y+(a3-a5)*y*z+a5*x*z"
                  "+(-a5+a6-a7)*u*x+(-a3+a5-a6+(1-lam)*a7)*u*y+a8*u*z",
            "A5": "q*(a5*x+(a3-a5)*y+a8*u)",
            "A6": "q*(a6*x-lam*a7*y+a8*z)",
            "A7": "q*(a7*x+(a6-a7)*y+a8*u)",
            "A8": "q^2*a8",
        },
        coordinates=tuple(f"a{k}" for k in range(1, 9)),
        parent_params=("lam",),
        derived={"q": "x^2-x*y+lam*y^2"},
    ),
}

LAMBDA_SWEEP = (Fraction(0), Fraction(1, 4), Fraction(1), Fraction(-1), Fraction(2))


@dataclass(frozen=True)
class BlockReport:
    block: str
    samples: int
    passed: bool
    failure: Mapping | None = None


def verify_action_block(block, samples: int = 20, seed: int = 0, lambdas: Sequence = LAMBDA_SWEEP,
                        raise_on_failure: bool = True) -> BlockReport:
    """Compare phi^T M phi with the stored formulas at random admissible samples.

    ``block`` is a block id or an ActionBlock.  The parent parameter lam, when
    present, cycles through ``lambdas``.
    """
    b = ACTION_BLOCKS[block] if isinstance(block, str) else block
    rng = random.Random(f"{b.block}:{seed}")
    for k in range(samples):
        fixed = {}
        if "lam" in b.parent_params:
            fixed["lam"] = lambdas[k % len(lambdas)]
        assignment = random_assignment(b.family, rng, fixed)
        for c in b.coordinates:
            assignment[c] = rng.randint(-9, 9)
        R, expected = b.evaluate_at(assignment)
        if R != expected:
            bad = next((i, j) for i in range(len(R)) for j in range(len(R)) if R[i][j] != expected[i][j])
            detail = {"assignment": {k_: str(v) for k_, v in assignment.items()},
                      "entry": (bad[0] + 1, bad[1] + 1),
                      "computed": str(R[bad[0]][bad[1]]), "expected": str(expected[bad[0]][bad[1]])}
            if raise_on_failure:
                raise FormulaMismatch(
                    f"block {b.block}: entry {detail['entry']} is {detail['computed']}, formula gives "
                    f"{detail['expected']}", assignment=detail["assignment"])
            return BlockReport(b.block, k + 1, False, detail)
    return BlockReport(b.block, samples, True)
