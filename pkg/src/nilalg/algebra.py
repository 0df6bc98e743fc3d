"""Finite-dimensional algebras given by structure constants."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from . import linalg as la
from .errors import DimensionMismatch, NotInAnnihilator, NotNilpotent, SingularMatrix
from .scalars import FieldTag, Scalar, embed, prime_field, reduce_mod_p


@dataclass(frozen=True, eq=False)
class Algebra:
    """An algebra on basis e_1..e_n (0-based internally).

    ``table`` maps (i, j) to a tuple of (k, c) pairs with c != 0, meaning
    e_i e_j = sum c e_k.  Missing pairs multiply to zero.
    """

    dim: int
    field: FieldTag
    table: Mapping
    name: str = ""
    params: tuple = ()
    _dense: dict = field(default_factory=dict, repr=False, compare=False)

    # -- construction -------------------------------------------------------
    @classmethod
    def from_products(cls, dim: int, fld: FieldTag, products: Mapping, name: str = "", params=()):
        """Build from {(i, j): {k: coefficient}} with 0-based indices.

        Coefficients may be ints, Fractions, strings or Scalars of ``fld``.
        """
        table = {}
        for (i, j), terms in products.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise DimensionMismatch(f"product e{i + 1}e{j + 1} outside dimension {dim}")
            items = terms.items() if isinstance(terms, Mapping) else terms
            acc: dict = {}
            for k, c in items:
                if not 0 <= k < dim:
                    raise DimensionMismatch(f"basis vector e{k + 1} outside dimension {dim}")
                c = fld(c)
                acc[k] = acc[k] + c if k in acc else c
            row = tuple(sorted((k, c) for k, c in acc.items() if c))
            if row:
                table[(i, j)] = row
        return cls(dim, fld, dict(sorted(table.items())), name, tuple(params))

    @classmethod
    def zero(cls, dim: int, fld: FieldTag, name: str = ""):
        return cls(dim, fld, {}, name or f"zero{dim}")

    @classmethod
    def from_basis_products(cls, dim: int, fld: FieldTag, prod, name: str = ""):
        """Build from a callable (i, j) -> dense vector."""
        products = {}
        for i in range(dim):
            for j in range(dim):
                v = prod(i, j)
                terms = {k: c for k, c in enumerate(v) if c}
                if terms:
                    products[(i, j)] = terms
        return cls.from_products(dim, fld, products, name)

    # -- basic access ---------------------------------------------------------
    def basis_product(self, i: int, j: int) -> tuple:
        """Dense vector e_i e_j."""
        key = (i, j)
        v = self._dense.get(key)
        if v is None:
            out = [self.field.zero] * self.dim
            for k, c in self.table.get(key, ()):
                out[k] = c
            v = tuple(out)
            self._dense[key] = v
        return v

    def coefficient(self, i: int, j: int, k: int) -> Scalar:
        for kk, c in self.table.get((i, j), ()):
            if kk == k:
                return c
        return self.field.zero

    def product(self, x, y) -> tuple:
        """Bilinear product of two coordinate vectors."""
        n = self.dim
        if len(x) != n or len(y) != n:
            raise DimensionMismatch(f"product of length {len(x)} and {len(y)} vectors in dimension {n}")
        out = [self.field.zero] * n
        for (i, j), terms in self.table.items():
            xi, yj = x[i], y[j]
            if xi and yj:
                s = xi * yj
                for k, c in terms:
                    out[k] = out[k] + s * c
        return tuple(out)

    def unit(self, i: int) -> tuple:
        return la.unit_vector(self.dim, i, self.field)

    def is_zero_algebra(self) -> bool:
        return not self.table

    def __eq__(self, other):
        if not isinstance(other, Algebra):
            return NotImplemented
        return self.dim == other.dim and self.field is other.field and self.table == other.table

    def __hash__(self):
        return hash((self.dim, self.field, tuple(self.table.items())))

    def same_table(self, other: "Algebra") -> bool:
        return self == other

    def with_name(self, name: str, params=()) -> "Algebra":
        return Algebra(self.dim, self.field, self.table, name, tuple(params))

    def __repr__(self):
        label = self.name or "Algebra"
        return f"<{label} dim={self.dim} over {self.field}: {self.table_text()}>"

    def table_text(self, sep: str = "; ") -> str:
        parts = []
        for (i, j), terms in self.table.items():
            parts.append(f"e{i + 1}*e{j + 1} = " + format_combination(terms, "e"))
        return sep.join(parts) if parts else "(zero product)"

    # -- subspaces ------------------------------------------------------------
    def _ann_rows(self, left: bool, right: bool):
        n, rows = self.dim, []
        for j in range(n):
            for k in range(n):
                if left:   # x e_j = sum_i x_i c^k_ij
                    rows.append(tuple(self.coefficient(i, j, k) for i in range(n)))
                if right:  # e_j x
                    rows.append(tuple(self.coefficient(j, i, k) for i in range(n)))
        return rows

    def annihilator(self) -> la.Subspace:
        return la.kernel(self._ann_rows(True, True), self.dim, self.field)

    def left_annihilator(self) -> la.Subspace:
        """{x : x A = 0}."""
        return la.kernel(self._ann_rows(True, False), self.dim, self.field)

    def right_annihilator(self) -> la.Subspace:
        """{x : A x = 0}."""
        return la.kernel(self._ann_rows(False, True), self.dim, self.field)

    def product_space(self, u: la.Subspace, w: la.Subspace) -> la.Subspace:
        """span{a b : a in u, b in w}."""
        vecs = [self.product(a, b) for a in u.rows for b in w.rows]
        return la.span(vecs, self.dim, self.field)

    def powers(self, upto: int) -> list:
        """[A^1, ..., A^upto] for the series A^m = sum_{i+j=m} A^i A^j."""
        out = [la.full_space(self.dim, self.field)]
        cache: dict = {}
        while len(out) < upto:
            m = len(out) + 1
            if not out[-1].dim:
                out.append(out[-1])
                continue
            vecs = []
            for i in range(1, m):
                key = (i, m - i)
                if key not in cache:
                    cache[key] = self.product_space(out[i - 1], out[m - i - 1]).rows
                vecs.extend(cache[key])
            out.append(la.span(vecs, self.dim, self.field))
        return out

    def nilpotency_cap(self) -> int:
        # Products of m factors with m > 2^(n-1) vanish in any nilpotent algebra
        # of dimension n: along the descending chain of ideals each strict step
        # at most doubles the admissible tree depth.
        return 2 ** max(self.dim - 1, 0) + 1

    def power_series(self):
        """(dims of A^1 .. A^(k-1), k) where k is the least index with A^k = 0."""
        cap = self.nilpotency_cap()
        series = [la.full_space(self.dim, self.field)]
        cache: dict = {}
        while series[-1].dim:
            m = len(series) + 1
            if m > cap:
                raise NotNilpotent(
                    f"A^{m - 1} has dimension {series[-1].dim} beyond the nilpotency bound {cap}")
            vecs = []
            for i in range(1, m):
                key = (i, m - i)
                if key not in cache:
                    cache[key] = self.product_space(series[i - 1], series[m - i - 1]).rows
                vecs.extend(cache[key])
            series.append(la.span(vecs, self.dim, self.field))
        dims = tuple(s.dim for s in series[:-1])
        return dims, len(series)

    def nilpotency_index(self) -> int:
        return self.power_series()[1]

    def is_nilpotent(self) -> bool:
        try:
            self.power_series()
        except NotNilpotent:
            return False
        return True

    def derivations(self) -> la.Subspace:
        """Derivations as a subspace of n*n coordinates, index a*n + i for D[a][i].

        Columns of D are images: D(e_i) = sum_a D[a][i] e_a.
        """
        n, F = self.dim, self.field
        zero = F.zero
        rows = []
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    row = [zero] * (n * n)
                    # D(e_i e_j)_k = sum_a c^a_ij D[k][a]
                    for a, c in self.table.get((i, j), ()):
                        row[k * n + a] = row[k * n + a] + c
                    # - (D e_i) e_j : sum_a D[a][i] c^k_aj
                    for a in range(n):
                        c = self.coefficient(a, j, k)
                        if c:
                            row[a * n + i] = row[a * n + i] - c
                        c = self.coefficient(i, a, k)
                        if c:
                            row[a * n + j] = row[a * n + j] - c
                    if any(row):
                        rows.append(tuple(row))
        return la.kernel(rows, n * n, F)

    def squares_span(self) -> la.Subspace:
        """span{x x : x in A}, spanned by e_i e_i and e_i e_j + e_j e_i (odd or zero characteristic)."""
        n, vecs = self.dim, []
        for i in range(n):
            vecs.append(self.basis_product(i, i))
            for j in range(i + 1, n):
                vecs.append(la.vec_add(self.basis_product(i, j), self.basis_product(j, i)))
        return la.span(vecs, n, self.field)

    def is_commutative(self) -> bool:
        return all(self.basis_product(i, j) == self.basis_product(j, i)
                   for i in range(self.dim) for j in range(i + 1, self.dim))

    def is_anticommutative(self) -> bool:
        n = self.dim
        for i in range(n):
            if any(self.basis_product(i, i)):
                return False
            for j in range(i + 1, n):
                if any(la.vec_add(self.basis_product(i, j), self.basis_product(j, i))):
                    return False
        return True

    def fingerprint(self) -> "Fingerprint":
        p = self.powers(4)
        return Fingerprint(
            p[1].dim, p[2].dim, p[3].dim,
            self.annihilator().dim, self.left_annihilator().dim, self.right_annihilator().dim,
            self.derivations().dim, self.squares_span().dim,
            self.is_commutative(), self.is_anticommutative(),
        )

    # -- derived algebras -------------------------------------------------------
    def quotient_by_annihilator_complement(self, ideal: la.Subspace):
        """Quotient by a subspace of the annihilator, realised on the coordinate complement.

        Returns (quotient algebra, projection matrix of shape m x n).  The kept
        coordinates are the non-pivot columns of the ideal's echelon basis, in
        increasing order.
        """
        if ideal.ambient_dim != self.dim:
            raise DimensionMismatch("ideal lives in a different ambient space")
        if not ideal.is_subspace_of(self.annihilator()):
            raise NotInAnnihilator("subspace is not contained in the annihilator")
        keep = [c for c in range(self.dim) if c not in set(ideal.pivots)]
        proj = projection_matrix(ideal, keep)
        products = {}
        for a, i in enumerate(keep):
            for b, j in enumerate(keep):
                v = ideal.reduce(self.basis_product(i, j))
                terms = {c: v[k] for c, k in enumerate(keep) if v[k]}
                if terms:
                    products[(a, b)] = terms
        return Algebra.from_products(len(keep), self.field, products), proj

    def transport(self, phi) -> "Algebra":
        """The algebra B on the same space for which ``phi`` (columns = images) is an iso A -> B."""
        n = self.dim
        if len(phi) != n or any(len(r) != n for r in phi):
            raise DimensionMismatch("transport matrix has the wrong shape")
        inv = la.inverse(phi)
        cols = la.transpose(inv)  # cols[i] = phi^{-1}(e_i)

        def prod(i, j):
            return la.mat_vec(phi, self.product(cols[i], cols[j]))

        return Algebra.from_basis_products(n, self.field, prod, self.name)

    def to_field(self, tag: FieldTag) -> "Algebra":
        if tag is self.field:
            return self
        table = {key: tuple((k, embed(c, tag)) for k, c in terms) for key, terms in self.table.items()}
        return Algebra(self.dim, tag, table, self.name, self.params)

    def reduce_mod_p(self, p: int) -> "Algebra":
        products = {key: {k: reduce_mod_p(c, p) for k, c in terms} for key, terms in self.table.items()}
        return Algebra.from_products(self.dim, prime_field(p), products, self.name, self.params)

    def dense_tensor(self) -> tuple:
        """c[i][j][k] as nested tuples."""
        return tuple(tuple(self.basis_product(i, j) for j in range(self.dim)) for i in range(self.dim))


@dataclass(frozen=True)
class Fingerprint:
    """Basis-invariant numerical summary of an algebra."""

    dim_a2: int
    dim_a3: int
    dim_a4: int
    dim_ann: int
    dim_left_ann: int
    dim_right_ann: int
    dim_der: int
    dim_squares: int
    commutative: bool
    anticommutative: bool

    def as_tuple(self) -> tuple:
        return (self.dim_a2, self.dim_a3, self.dim_a4, self.dim_ann, self.dim_left_ann,
                self.dim_right_ann, self.dim_der, self.dim_squares, self.commutative, self.anticommutative)

    def differences(self, other: "Fingerprint") -> list:
        names = self.__dataclass_fields__.keys()
        return [(k, getattr(self, k), getattr(other, k)) for k in names if getattr(self, k) != getattr(other, k)]


def projection_matrix(ideal: la.Subspace, keep: Iterable[int]) -> tuple:
    """Rows give the kept coordinates of v reduced modulo ``ideal``."""
    n, F = ideal.ambient_dim, ideal.tag
    keep = list(keep)
    images = [ideal.reduce(la.unit_vector(n, c, F)) for c in range(n)]
    return tuple(tuple(images[c][k] for c in range(n)) for k in keep)


def format_coefficient(c: Scalar, first: bool) -> str:
    """Sign-and-coefficient prefix for ``c * symbol`` inside a sum."""
    s = str(c)
    if c.tag.kind == "QD" and c.a and c.b:
        body, neg = f"({s})", False
    else:
        neg = s.startswith("-")
        body = s[1:] if neg else s
    if body == "1":
        body = ""
    elif body:
        body += "*"
    if first:
        return ("-" if neg else "") + body
    return (" - " if neg else " + ") + body


def format_combination(terms, symbol: str = "e") -> str:
    """Render sum c e_k for (k, c) pairs, e.g. '2*e3 - e4'."""
    out = []
    for idx, (k, c) in enumerate(terms):
        out.append(format_coefficient(c, idx == 0) + f"{symbol}{k + 1}")
    return "".join(out) if out else "0"
