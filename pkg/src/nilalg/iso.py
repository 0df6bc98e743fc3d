"""Isomorphism testing: exact witnesses, invariant separation, and exhaustive search over GF(p)."""
from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg as la
from .algebra import Algebra
from .errors import BadPrime, DimensionMismatch, FieldMismatch, NoSquareRoot
from .scalars import FieldTag, Scalar, common_field, parse_scalar

DEFAULT_PRIMES = (5, 7, 11)


# -- verdicts -------------------------------------------------------------------

@dataclass(frozen=True)
class IsoVerdict:
    """kind is 'isomorphic', 'non-isomorphic' or 'unknown'."""

    kind: str
    witness: tuple | None = None
    evidence: str = ""
    caveat: str | None = None
    details: dict = field(default_factory=dict)

    @property
    def is_isomorphic(self) -> bool:
        return self.kind == "isomorphic"

    @property
    def is_nonisomorphic(self) -> bool:
        return self.kind == "non-isomorphic"

    def summary(self) -> str:
        if self.kind == "isomorphic":
            return f"Isomorphic ({self.evidence})"
        if self.kind == "non-isomorphic":
            tag = f" [{self.caveat}]" if self.caveat else ""
            return f"NonIsomorphic ({self.evidence}){tag}"
        return f"Unknown ({self.evidence})"

    def to_json(self) -> dict:
        out = {"verdict": self.kind, "evidence": self.evidence, "caveat": self.caveat}
        if self.witness is not None:
            out["witness"] = witness_to_json(self.witness)["rows"]
        out.update({k: v for k, v in self.details.items()})
        return out


def isomorphic(witness, evidence: str, **details) -> IsoVerdict:
    return IsoVerdict("isomorphic", witness, evidence, details=details)


def nonisomorphic(evidence: str, caveat: str | None = None, **details) -> IsoVerdict:
    return IsoVerdict("non-isomorphic", None, evidence, caveat, details)


def unknown(reason: str, **details) -> IsoVerdict:
    return IsoVerdict("unknown", None, reason, details=details)


# -- exact checks ------------------------------------------------------------------

def verify_witness(A: Algebra, B: Algebra, phi) -> bool:
    """phi (columns = images of A's basis in B) is an invertible homomorphism A -> B."""
    n = A.dim
    if B.dim != n:
        raise DimensionMismatch(f"dimensions {A.dim} and {B.dim} differ")
    if len(phi) != n or any(len(r) != n for r in phi):
        raise DimensionMismatch(f"witness of shape {la.shape(phi)} for dimension {n}")
    if A.field is not B.field:
        raise FieldMismatch(f"algebras over {A.field} and {B.field}")
    if not la.is_invertible(phi):
        return False
    cols = la.transpose(phi)
    for i in range(n):
        for j in range(n):
            if la.mat_vec(phi, A.basis_product(i, j)) != B.product(cols[i], cols[j]):
                return False
    return True


@dataclass(frozen=True)
class Separation:
    distinct: bool
    differences: tuple = ()

    def __str__(self):
        if not self.distinct:
            return "Inconclusive"
        return "Distinct (" + ", ".join(f"{k}: {a} vs {b}" for k, a, b in self.differences) + ")"


def fingerprint_separate(A: Algebra, B: Algebra) -> Separation:
    if A.dim != B.dim:
        raise DimensionMismatch(f"dimensions {A.dim} and {B.dim} differ")
    diffs = A.fingerprint().differences(B.fingerprint())
    return Separation(bool(diffs), tuple(diffs))


# -- witness files ----------------------------------------------------------------------

def witness_to_json(phi) -> dict:
    return {"rows": [[str(x) for x in row] for row in phi]}


def witness_from_json(doc, tag: FieldTag):
    if isinstance(doc, str):
        doc = json.loads(doc)
    rows = doc["rows"] if isinstance(doc, dict) else doc
    return tuple(tuple(parse_scalar(str(x), tag) for x in row) for row in rows)


# -- GF(p) search ---------------------------------------------------------------------------

def _tensor(A: Algebra) -> np.ndarray:
    n = A.dim
    c = np.zeros((n, n, n), dtype=np.int64)
    for (i, j), terms in A.table.items():
        for k, v in terms:
            c[i, j, k] = v.to_int()
    return c


def _rref_mod(rows: np.ndarray, p: int):
    """Row echelon basis mod p; returns (rows, pivots)."""
    m = [list(map(int, r)) for r in rows]
    out, pivots = [], []
    for r in m:
        r = [x % p for x in r]
        for piv, row in zip(pivots, out):
            if r[piv]:
                f = r[piv]
                r = [(a - f * b) % p for a, b in zip(r, row)]
        lead = next((k for k, x in enumerate(r) if x), None)
        if lead is None:
            continue
        inv = pow(r[lead], -1, p)
        r = [x * inv % p for x in r]
        for idx, row in enumerate(out):
            if row[lead]:
                f = row[lead]
                out[idx] = [(a - f * b) % p for a, b in zip(row, r)]
        out.append(r)
        pivots.append(lead)
    return out, pivots


def _solve_coords(basis: list, v: list, p: int):
    """Coordinates of v in the given independent vectors mod p (or None)."""
    if not basis:
        return [] if not any(x % p for x in v) else None
    M = np.array(basis, dtype=np.int64).T % p  # n x m
    n, m = M.shape
    aug = [list(map(int, M[i])) + [int(v[i]) % p] for i in range(n)]
    piv_cols, r = [], 0
    for c in range(m + 1):
        pr = next((i for i in range(r, n) if aug[i][c]), None)
        if pr is None:
            continue
        if c == m:
            return None
        aug[r], aug[pr] = aug[pr], aug[r]
        inv = pow(aug[r][c], -1, p)
        aug[r] = [x * inv % p for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(a - f * b) % p for a, b in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    x = [0] * m
    for i, c in enumerate(piv_cols):
        x[c] = aug[i][m]
    return x


class _WordPlan:
    """Generators of A and a basis of A made of products of generators.

    Words are grouped by level (the last generator they involve); the
    relations of a level express products of words up to that level in the
    words up to that level.
    """

    def __init__(self, cA: np.ndarray, p: int):
        self.p = p
        self.c = cA
        n = cA.shape[0]
        self.n = n
        sq = [cA[i, j] % p for i in range(n) for j in range(n)]
        self.square_rows, _ = _rref_mod(np.array(sq) if sq else np.zeros((0, n)), p)
        self.words: list = []      # (kind, data): ('gen', g) or ('mul', a, b)
        self.vectors: list = []    # coordinates in A
        self.level_of: list = []
        self.gens: list = []       # (basis index, outside_square?)
        self.relations: dict = {}  # level -> [(a, b, coords)]
        self._build()

    def _mul(self, u, v):
        return list(np.einsum("i,j,ijk->k", np.array(u), np.array(v), self.c) % self.p)

    def _independent(self, vecs, v) -> bool:
        rows, _ = _rref_mod(np.array(vecs + [v]), self.p)
        return len(rows) == len(vecs) + 1

    def _close(self, level):
        changed = True
        while changed:
            changed = False
            m = len(self.vectors)
            for a in range(m):
                for b in range(m):
                    v = self._mul(self.vectors[a], self.vectors[b])
                    if any(v) and self._independent(self.vectors, v):
                        self.words.append(("mul", a, b))
                        self.vectors.append(v)
                        self.level_of.append(level)
                        changed = True

    def _build(self):
        n, p = self.n, self.p
        level = 0
        for outside in (True, False):
            for i in range(n):
                if len(self.vectors) == n:
                    break
                e = [0] * n
                e[i] = 1
                base = (self.square_rows + [g for g in self._gen_vectors()]) if outside else self.vectors
                if not self._independent(base, e):
                    continue
                self.gens.append((i, outside))
                self.words.append(("gen", len(self.gens) - 1))
                self.vectors.append(e)
                self.level_of.append(level)
                self._close(level)
                level += 1
        for a in range(n):
            for b in range(n):
                lvl = max(self.level_of[a], self.level_of[b])
                v = self._mul(self.vectors[a], self.vectors[b])
                prefix = [k for k in range(n) if self.level_of[k] <= lvl]
                coords = _solve_coords([self.vectors[k] for k in prefix], v, p)
                full = [0] * n
                for k, c in zip(prefix, coords):
                    full[k] = c
                self.relations.setdefault(lvl, []).append((a, b, full))

    def _gen_vectors(self):
        return [self.vectors[k] for k, w in enumerate(self.words) if w[0] == "gen"]

    @property
    def levels(self) -> int:
        return len(self.gens)


def _det_mod(M: np.ndarray, p: int) -> np.ndarray:
    """Determinants mod p of a stack of small integer matrices (Leibniz expansion)."""
    n = M.shape[-1]
    total = np.zeros(M.shape[:-2], dtype=np.int64)
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        term = np.ones(M.shape[:-2], dtype=np.int64)
        for i, j in enumerate(perm):
            term = term * M[..., i, j] % p
        total = (total + sign * term) % p
    return total


class _Timeout(Exception):
    pass


def search_iso_gfp(A: Algebra, B: Algebra, budget: float = 60.0, chunk: int = 65536) -> IsoVerdict:
    """Exhaustive search for an isomorphism A -> B over GF(p).

    Generator images are enumerated level by level; every product relation among
    the word basis that is decided at a level prunes the candidates, so a
    NonIsomorphic result means the search space was exhausted.
    """
    if A.dim != B.dim:
        raise DimensionMismatch(f"dimensions {A.dim} and {B.dim} differ")
    if A.field is not B.field or not A.field.is_finite:
        raise FieldMismatch("search needs two algebras over the same prime field")
    p, n = A.field.characteristic, A.dim
    start = time.monotonic()
    deadline = start + budget
    cA, cB = _tensor(A), _tensor(B)
    plan = _WordPlan(cA, p)
    if len(plan.vectors) < n:
        return unknown("algebra is not generated by its basis words")

    cand = np.array(list(itertools.product(range(p), repeat=n)), dtype=np.int64)
    # quotient map B -> B / B^2 (rows), used to keep generator images independent modulo B^2
    sqB, pivB = _rref_mod(np.array([cB[i, j] % p for i in range(n) for j in range(n)]), p)
    free = [c for c in range(n) if c not in pivB]

    def mod_square(vs: np.ndarray) -> np.ndarray:
        vs = vs.copy()
        for piv, row in zip(pivB, sqB):
            f = vs[..., piv:piv + 1]
            vs = (vs - f * np.array(row)) % p
        return vs[..., free]

    def mul(X, Y):
        return np.einsum("...i,...j,ijk->...k", X, Y, cB) % p

    words_by_level = {}
    for k, lvl in enumerate(plan.level_of):
        words_by_level.setdefault(lvl, []).append(k)
    stats = {"nodes": 0}
    gen_word = {w[1]: k for k, w in enumerate(plan.words) if w[0] == "gen"}

    def expand(level: int, imgs: np.ndarray):
        """imgs: (S, n_words_so_far, n) partial images; yields full witnesses."""
        if time.monotonic() > deadline:
            raise _Timeout
        S = imgs.shape[0]
        N = cand.shape[0]
        outside = plan.gens[level][1]
        # combine each state with each candidate
        state = np.repeat(imgs, N, axis=0)                   # (S*N, m, n)
        newgen = np.tile(cand, (S, 1))                       # (S*N, n)
        keep = np.ones(S * N, dtype=bool)
        if outside:
            prev = [gen_word[g] for g in range(level)]
            stack = np.concatenate([state[:, prev, :], newgen[:, None, :]], axis=1) if prev else newgen[:, None, :]
            q = mod_square(stack)
            keep &= _rank_full(q, p)
        else:
            keep &= np.any(newgen != 0, axis=1)
        state, newgen = state[keep], newgen[keep]
        cols = {}
        for k in words_by_level[level]:
            w = plan.words[k]
            if w[0] == "gen":
                cols[k] = newgen
            else:
                a, b = w[1], w[2]
                X = cols[a] if a in cols else state[:, a, :]
                Y = cols[b] if b in cols else state[:, b, :]
                cols[k] = mul(X, Y)
        new_ids = words_by_level[level]
        full = np.concatenate([state] + [cols[k][:, None, :] for k in new_ids], axis=1)
        m = full.shape[1]
        ok = np.ones(full.shape[0], dtype=bool)
        for a, b, coords in plan.relations.get(level, ()):
            lhs = mul(full[:, a, :], full[:, b, :])
            rhs = np.einsum("k,skn->sn", np.array(coords[:m], dtype=np.int64), full) % p
            ok &= np.all(lhs == rhs, axis=1)
            if not ok.any():
                break
        full = full[ok]
        stats["nodes"] += int(full.shape[0])
        if level + 1 == plan.levels:
            if full.shape[0]:
                d = _det_mod(full, p)
                hit = np.nonzero(d)[0]
                if hit.size:
                    yield full[hit[0]]
            return
        for s in range(0, full.shape[0], max(1, chunk // N)):
            yield from expand(level + 1, full[s:s + max(1, chunk // N)])

    root = np.zeros((1, 0, n), dtype=np.int64)
    try:
        found = next(expand(0, root), None)
    except _Timeout:
        return unknown(f"GF({p}) search exceeded {budget:g}s", prime=p, nodes=stats["nodes"])
    elapsed = round(time.monotonic() - start, 3)
    if found is None:
        return nonisomorphic(f"exhausted GF({p}) search", prime=p, nodes=stats["nodes"], seconds=elapsed)
    # phi W = IMG, with W columns the word vectors of A and IMG columns their images
    F = A.field
    W = tuple(tuple(F(int(plan.vectors[k][i])) for k in range(n)) for i in range(n))
    IMG = tuple(tuple(F(int(found[k][i])) for k in range(n)) for i in range(n))
    phi = la.matmul(IMG, la.inverse(W))
    if not verify_witness(A, B, phi):
        raise AssertionError("GF(p) search produced an invalid witness")
    return isomorphic(phi, f"GF({p}) witness", prime=p, seconds=elapsed)


def _rank_full(q: np.ndarray, p: int) -> np.ndarray:
    """For a stack (S, r, c) of matrices mod p, whether each has rank r."""
    q = q.copy() % p
    S, r, c = q.shape
    ok = np.ones(S, dtype=bool)
    if r > c:
        return np.zeros(S, dtype=bool)
    inv_table = np.array([0] + [pow(x, -1, p) for x in range(1, p)], dtype=np.int64)
    for i in range(r):
        row = q[:, i, :]
        # pivot: first nonzero entry in this row
        nz = row != 0
        has = nz.any(axis=1)
        ok &= has
        lead = np.argmax(nz, axis=1)
        piv = row[np.arange(S), lead]
        inv = inv_table[piv]
        row = row * inv[:, None] % p
        q[:, i, :] = row
        for j in range(i + 1, r):
            f = q[np.arange(S), j, lead]
            q[:, j, :] = (q[:, j, :] - f[:, None] * row) % p
    return ok


# -- pipeline -------------------------------------------------------------------------------

def decide(A: Algebra, B: Algebra, witness=None, primes: Sequence[int] = DEFAULT_PRIMES,
           budget: float = 60.0, use_fingerprint: bool = True) -> IsoVerdict:
    """witness -> fingerprint -> GF(p) search, as far as needed."""
    if A.dim != B.dim:
        return nonisomorphic(f"dimensions {A.dim} and {B.dim} differ")
    tag = common_field(A.field, B.field) if not (A.field.is_finite or B.field.is_finite) else A.field
    if A.field.is_finite or B.field.is_finite:
        if A.field is not B.field:
            raise FieldMismatch(f"cannot compare algebras over {A.field} and {B.field}")
    A2, B2 = A.to_field(tag), B.to_field(tag)
    notes = {}
    if witness is not None:
        if verify_witness(A2, B2, witness):
            return isomorphic(witness, "witness verified")
        notes["witness"] = "rejected"
    if use_fingerprint:
        sep = fingerprint_separate(A2, B2)
        if sep.distinct:
            return nonisomorphic("fingerprint differs: " + ", ".join(f"{k} {a} vs {b}" for k, a, b in sep.differences),
                                 **notes)
    if tag.is_finite:
        return search_iso_gfp(A2, B2, budget)
    tried = []
    for p in primes:
        try:
            Ap, Bp = A2.reduce_mod_p(p), B2.reduce_mod_p(p)
        except (BadPrime, NoSquareRoot) as exc:
            tried.append(f"{p}: skipped ({type(exc).__name__})")
            continue
        v = search_iso_gfp(Ap, Bp, budget)
        if v.is_nonisomorphic:
            return nonisomorphic(v.evidence, caveat="mod-p", prime=p, tried=tried, **notes)
        tried.append(f"{p}: {'isomorphic mod p' if v.is_isomorphic else v.evidence}")
    return unknown("no characteristic-0 witness; " + "; ".join(tried) if tried else "no usable prime", tried=tried,
                   **notes)
