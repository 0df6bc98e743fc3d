import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nilalg import linalg as la
from nilalg.catalog import load
from nilalg.cohomology import cocycle_space, constraint_rows
from nilalg.errors import NoSolution, NotASubspace
from nilalg.identities import builtin
from nilalg.scalars import QQ, QQ_I

from helpers import form_vec, mat, vec


def test_rref_identity():
    rows, pivots = la.rref(la.identity(3, QQ))
    assert rows == la.identity(3, QQ) and pivots == (0, 1, 2)


def test_rref_rank_one():
    rows, pivots = la.rref(mat([[2, 4], [1, 2]]))
    assert rows == (vec(1, 2),) and pivots == (0,)


def test_rref_gaussian_rows_proportional():
    i = QQ_I.gen()
    m = ((i, QQ_I(1)), (QQ_I(1), -i))
    rows, pivots = la.rref(m)
    assert rows == ((QQ_I(1), -i),) and pivots == (0,)


def test_kernel_of_zero_matrix():
    K = la.kernel([], 3, QQ)
    assert K.dim == 3


def test_kernel_single_row():
    K = la.kernel(mat([[1, 0, -1]]), 3, QQ)
    assert K == la.span([vec(1, 0, 1), vec(0, 1, 0)], 3, QQ)


def test_cocycle_kernel_of_cd3_03():
    A = load("CD3_03")
    rows = [r for r, _ in constraint_rows(A, builtin("cd"))]
    assert la.kernel(rows, 9, QQ).dim == 5


def test_quotient_of_equal_spaces_is_empty():
    S = la.span([vec(1, 2, 3)], 3, QQ)
    assert la.quotient_basis(S, S) == []


def test_quotient_of_plane_by_line():
    sub = la.span([vec(1, 0)], 2, QQ)
    assert la.quotient_basis(sub, la.full_space(2, QQ)) == [vec(0, 1)]


def test_quotient_of_cd3_03_cocycles():
    Z = cocycle_space(load("CD3_03"))
    sub = la.span([form_vec(3, (1, 1, 1)), form_vec(3, (1, 2, 1))], 9, QQ)
    reps = la.quotient_basis(sub, Z)
    assert reps == [form_vec(3, (1, 1, 2)), form_vec(3, (1, 2, 2)), form_vec(3, (1, 1, 3), (-2, 3, 1))]


def test_quotient_requires_containment():
    with pytest.raises(NotASubspace):
        la.quotient_basis(la.full_space(2, QQ), la.span([vec(1, 0)], 2, QQ))


def test_membership_examples():
    Z = cocycle_space(load("CD3_03"))
    assert la.membership(form_vec(3), Z)
    assert la.membership(form_vec(3, (1, 1, 3), (-2, 3, 1)), Z)
    assert not la.membership(form_vec(3, (1, 3, 1)), Z)


def test_solve_and_no_solution():
    m = mat([[1, 1], [1, -1]])
    assert la.solve(m, vec(3, 1)) == vec(2, 1)
    with pytest.raises(NoSolution):
        la.solve(mat([[1, 1], [2, 2]]), vec(1, 3))


def test_inverse_and_determinant():
    m = mat([[2, 1], [7, 4]])
    assert la.determinant(m) == QQ(1)
    assert la.matmul(m, la.inverse(m)) == la.identity(2, QQ)


def test_intersection():
    u = la.span([vec(1, 0, 0), vec(0, 1, 0)], 3, QQ)
    w = la.span([vec(0, 1, 0), vec(0, 0, 1)], 3, QQ)
    assert la.intersection(u, w) == la.span([vec(0, 1, 0)], 3, QQ)


small = st.fractions(min_value=-5, max_value=5, max_denominator=3)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return tuple(tuple(QQ(draw(small)) for _ in range(c)) for _ in range(r))


@given(matrices())
def test_rank_nullity(m):
    c = len(m[0])
    assert la.rank(m) + la.kernel(m, c, QQ).dim == c


@given(matrices())
def test_kernel_vectors_are_annihilated(m):
    for v in la.kernel(m, len(m[0]), QQ).rows:
        assert la.is_zero_vector(la.mat_vec(m, v))


@given(matrices())
def test_rref_is_idempotent(m):
    rows, pivots = la.rref(m)
    if rows:
        assert la.rref(rows) == (rows, pivots)


def test_rank_nullity_seeded_sweep():
    rng = random.Random(7)
    for _ in range(200):
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        m = tuple(tuple(QQ(Fraction(rng.randint(-3, 3), rng.randint(1, 2))) for _ in range(c)) for _ in range(r))
        assert la.rank(m) + la.kernel(m, c, QQ).dim == c
