"""Dense exact linear algebra over a single field.

Vectors are tuples of :class:`Scalar`; matrices are tuples of row tuples.
Everything is fraction-full Gauss-Jordan, which is plenty at the sizes used
here (a few hundred rows, at most a few dozen columns).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionMismatch, NoSolution, NotASubspace, SingularMatrix
from .scalars import FieldTag, Scalar

Vector = tuple
Matrix = tuple


def zero_vector(n: int, tag: FieldTag) -> Vector:
    return (tag.zero,) * n


def unit_vector(n: int, i: int, tag: FieldTag) -> Vector:
    v = [tag.zero] * n
    v[i] = tag.one
    return tuple(v)


def identity(n: int, tag: FieldTag) -> Matrix:
    return tuple(unit_vector(n, i, tag) for i in range(n))


def zero_matrix(rows: int, cols: int, tag: FieldTag) -> Matrix:
    return tuple((tag.zero,) * cols for _ in range(rows))


def to_matrix(rows: Iterable[Iterable], tag: FieldTag) -> Matrix:
    """Coerce nested ints/Fractions/strings/Scalars into a Matrix over ``tag``."""
    return tuple(tuple(tag(x) for x in row) for row in rows)


def shape(m: Matrix) -> tuple:
    return (len(m), len(m[0]) if m else 0)


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m)) if m else ()


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise DimensionMismatch(f"cannot multiply {shape(a)} by {shape(b)}")
    bt = transpose(b)
    out = []
    for row in a:
        nz = [(k, x) for k, x in enumerate(row) if x]
        out_row = []
        for col in bt:
            acc = col[0].tag.zero if col else None
            for k, x in nz:
                y = col[k]
                if y:
                    acc = acc + x * y
            out_row.append(acc)
        out.append(tuple(out_row))
    return tuple(out)


def mat_vec(m: Matrix, v: Vector) -> Vector:
    if m and len(m[0]) != len(v):
        raise DimensionMismatch(f"matrix with {len(m[0])} columns applied to length-{len(v)} vector")
    out = []
    nz = [(k, x) for k, x in enumerate(v) if x]
    for row in m:
        acc = row[0].tag.zero if row else None
        for k, x in nz:
            y = row[k]
            if y:
                acc = acc + y * x
        out.append(acc)
    return tuple(out)


def vec_add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c: Scalar, v: Vector) -> Vector:
    return tuple(c * a for a in v)


def is_zero_vector(v: Vector) -> bool:
    return not any(v)


class _Echelon:
    """Incrementally maintained reduced row echelon basis."""

    def __init__(self, ncols: int, tag: FieldTag):
        self.ncols = ncols
        self.tag = tag
        self.rows: dict[int, list] = {}
        self.order: list[int] = []

    def reduce(self, v: Sequence[Scalar]) -> list:
        v = list(v)
        for p in self.order:
            c = v[p]
            if c:
                row = self.rows[p]
                for q in range(p, self.ncols):
                    r = row[q]
                    if r:
                        v[q] = v[q] - c * r
        return v

    def add(self, v: Sequence[Scalar]) -> bool:
        """Insert ``v``; returns True when it was independent."""
        if len(v) != self.ncols:
            raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {self.ncols}")
        v = self.reduce(v)
        q = next((k for k, x in enumerate(v) if x), None)
        if q is None:
            return False
        inv = v[q].inv()
        v = [x * inv if x else x for x in v]
        for p in self.order:
            row = self.rows[p]
            c = row[q]
            if c:
                for k in range(q, self.ncols):
                    if v[k]:
                        row[k] = row[k] - c * v[k]
        self.rows[q] = v
        self.order.append(q)
        self.order.sort()
        return True

    @property
    def rank(self) -> int:
        return len(self.order)

    def result(self):
        return tuple(tuple(self.rows[p]) for p in self.order), tuple(self.order)


def rref(m: Matrix, ncols: int | None = None, tag: FieldTag | None = None):
    """Reduced row echelon form with zero rows dropped; returns (rows, pivots)."""
    if ncols is None or tag is None:
        if not m:
            raise DimensionMismatch("empty matrix needs explicit ncols and tag")
        ncols = len(m[0])
        tag = m[0][0].tag if ncols else tag
    ech = _Echelon(ncols, tag)
    for row in m:
        if any(row):
            ech.add(row)
    return ech.result()


def rank(m: Matrix) -> int:
    if not m or not m[0]:
        return 0
    return len(rref(m)[1])


@dataclass(frozen=True)
class Subspace:
    """Subspace of tag^ambient_dim with its canonical RREF basis."""

    ambient_dim: int
    tag: FieldTag
    rows: tuple
    pivots: tuple

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def basis(self) -> tuple:
        return self.rows

    def reduce(self, v: Sequence[Scalar]) -> Vector:
        """Normal form of ``v`` modulo this subspace (zero at every pivot)."""
        if len(v) != self.ambient_dim:
            raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {self.ambient_dim}")
        v = list(v)
        for p, row in zip(self.pivots, self.rows):
            c = v[p]
            if c:
                for q in range(p, self.ambient_dim):
                    r = row[q]
                    if r:
                        v[q] = v[q] - c * r
        return tuple(v)

    def contains(self, v: Sequence[Scalar]) -> bool:
        return not any(self.reduce(v))

    __contains__ = contains

    def coordinates(self, v: Sequence[Scalar]) -> Vector:
        """Coefficients of ``v`` in the RREF basis (raises NoSolution if outside)."""
        if not self.contains(v):
            raise NoSolution("vector is not in the subspace")
        return tuple(v[p] for p in self.pivots)

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(r) for r in self.rows)

    def __le__(self, other: "Subspace") -> bool:
        return self.is_subspace_of(other)

    def __str__(self):
        body = "; ".join("(" + ", ".join(str(x) for x in r) + ")" for r in self.rows)
        return f"span{{{body}}}"


def span(vectors: Iterable[Sequence[Scalar]], n: int, tag: FieldTag) -> Subspace:
    ech = _Echelon(n, tag)
    for v in vectors:
        if any(v):
            ech.add(v)
        elif len(v) != n:
            raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {n}")
    rows, pivots = ech.result()
    return Subspace(n, tag, rows, pivots)


def full_space(n: int, tag: FieldTag) -> Subspace:
    return Subspace(n, tag, identity(n, tag), tuple(range(n)))


def zero_space(n: int, tag: FieldTag) -> Subspace:
    return Subspace(n, tag, (), ())


def _nullspace_from_rref(rows, pivots, ncols, tag) -> list:
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [tag.zero] * ncols
        v[f] = tag.one
        for p, row in zip(pivots, rows):
            if row[f]:
                v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def kernel(m: Iterable[Sequence[Scalar]], ncols: int, tag: FieldTag) -> Subspace:
    """Right kernel {v : m v = 0} as a canonical Subspace."""
    ech = _Echelon(ncols, tag)
    for row in m:
        if len(row) != ncols:
            raise DimensionMismatch(f"row of length {len(row)}, expected {ncols}")
        if any(row):
            ech.add(row)
            if ech.rank == ncols:
                break
    rows, pivots = ech.result()
    return span(_nullspace_from_rref(rows, pivots, ncols, tag), ncols, tag)


def membership(v: Sequence[Scalar], s: Subspace) -> bool:
    return s.contains(v)


def sum_spaces(*spaces: Subspace) -> Subspace:
    n, tag = spaces[0].ambient_dim, spaces[0].tag
    return span((r for s in spaces for r in s.rows), n, tag)


def annihilating_equations(s: Subspace) -> tuple:
    """Rows a with a.v = 0 exactly for v in s (a basis of the orthogonal complement)."""
    rows = _nullspace_from_rref(s.rows, s.pivots, s.ambient_dim, s.tag)
    return tuple(rows)


def intersection(u: Subspace, w: Subspace) -> Subspace:
    eqs = annihilating_equations(w)
    if not eqs or not u.rows:
        return u if not eqs else span((), u.ambient_dim, u.tag)
    # x = sum c_r u_r ; require eq . x = 0
    constraints = []
    for a in eqs:
        constraints.append(tuple(_dot(a, r, u.tag) for r in u.rows))
    coeffs = kernel(constraints, u.dim, u.tag)
    vecs = []
    for c in coeffs.rows:
        v = [u.tag.zero] * u.ambient_dim
        for ci, r in zip(c, u.rows):
            if ci:
                for k in range(u.ambient_dim):
                    if r[k]:
                        v[k] = v[k] + ci * r[k]
        vecs.append(tuple(v))
    return span(vecs, u.ambient_dim, u.tag)


def _dot(a, b, tag):
    acc = tag.zero
    for x, y in zip(a, b):
        if x and y:
            acc = acc + x * y
    return acc


def dot(a: Sequence[Scalar], b: Sequence[Scalar]) -> Scalar:
    if len(a) != len(b):
        raise DimensionMismatch("dot product of vectors with different lengths")
    return _dot(a, b, a[0].tag)


def quotient_basis(sub: Subspace, sup: Subspace) -> list:
    """Canonical coset representatives of sup / sub.

    Each representative is reduced modulo ``sub`` (zero at sub's pivots); the
    set is echelonized and ordered by (number of nonzero entries, leading index)
    so that single-coordinate cosets come first.
    """
    if sub.ambient_dim != sup.ambient_dim:
        raise DimensionMismatch("subspaces live in different ambient spaces")
    if not sub.is_subspace_of(sup):
        raise NotASubspace("sub is not contained in sup")
    normal = [sub.reduce(r) for r in sup.rows]
    reps = span(normal, sup.ambient_dim, sup.tag).rows
    reps = [sub.reduce(r) for r in reps]
    return sorted(reps, key=lambda r: (sum(1 for x in r if x), next(k for k, x in enumerate(r) if x)))


def solve(m: Matrix, b: Sequence[Scalar]) -> Vector:
    """One solution x of m x = b, or NoSolution."""
    if len(m) != len(b):
        raise DimensionMismatch(f"{len(m)} equations but right-hand side of length {len(b)}")
    if not m:
        return ()
    ncols = len(m[0])
    tag = b[0].tag if b else m[0][0].tag
    aug = [tuple(row) + (bi,) for row, bi in zip(m, b)]
    rows, pivots = rref(aug, ncols + 1, tag)
    if ncols in pivots:
        raise NoSolution("inconsistent linear system")
    x = [tag.zero] * ncols
    for p, row in zip(pivots, rows):
        x[p] = row[ncols]
    return tuple(x)


def inverse(m: Matrix) -> Matrix:
    n = len(m)
    if any(len(r) != n for r in m):
        raise DimensionMismatch("inverse of a non-square matrix")
    if n == 0:
        return ()
    tag = m[0][0].tag
    aug = [tuple(row) + unit_vector(n, i, tag) for i, row in enumerate(m)]
    rows, pivots = rref(aug, 2 * n, tag)
    if tuple(pivots[:n]) != tuple(range(n)) or len(pivots) < n:
        raise SingularMatrix("matrix is not invertible")
    return tuple(tuple(r[n:]) for r in rows[:n])


def is_invertible(m: Matrix) -> bool:
    n = len(m)
    return all(len(r) == n for r in m) and rank(m) == n


def determinant(m: Matrix) -> Scalar:
    n = len(m)
    tag = m[0][0].tag
    a = [list(r) for r in m]
    det = tag.one
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            return tag.zero
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        piv = a[c][c]
        det = det * piv
        inv = piv.inv()
        for r in range(c + 1, n):
            f = a[r][c]
            if f:
                f = f * inv
                for k in range(c, n):
                    if a[c][k]:
                        a[r][k] = a[r][k] - f * a[c][k]
    return det


def format_matrix(m: Matrix) -> str:
    return "[" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in m) + "]"
