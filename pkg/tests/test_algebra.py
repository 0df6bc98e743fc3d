import random

import pytest
from hypothesis import given, strategies as st

from nilalg import linalg as la
from nilalg.algebra import Algebra
from nilalg.catalog import load
from nilalg.errors import DimensionMismatch, NotInAnnihilator, NotNilpotent
from nilalg.scalars import QQ

from helpers import vec


def e(n, i):
    return la.unit_vector(n, i - 1, QQ)


def test_products_from_tables():
    assert load("CD2s01").product(e(2, 1), e(2, 1)) == e(2, 2)
    A = load("CD3_04", **{"lambda": 2})
    assert A.product(e(3, 2), e(3, 1)) == vec(0, 0, 2)
    assert A.product(vec(0, 0, 0), vec(1, 2, 3)) == vec(0, 0, 0)


def test_annihilators():
    assert load("CD2s01").annihilator() == la.span([e(2, 2)], 2, QQ)
    assert load("CD3s01").annihilator() == la.span([e(3, 2), e(3, 3)], 3, QQ)
    assert Algebra.zero(3, QQ).annihilator().dim == 3


def test_one_sided_annihilators():
    A = load("CD3_03")
    assert A.left_annihilator() == la.span([e(3, 3)], 3, QQ)
    assert A.right_annihilator() == la.span([e(3, 2), e(3, 3)], 3, QQ)


@pytest.mark.parametrize("lam", [0, 1, -1, 2, 3])
def test_power_series_cd3_04(lam):
    assert load("CD3_04", **{"lambda": lam}).power_series() == ((3, 2, 1), 4)


def test_power_series_small_cases():
    assert Algebra.zero(3, QQ).power_series() == ((3,), 2)
    unital = Algebra.from_products(1, QQ, {(0, 0): {0: QQ(1)}})
    with pytest.raises(NotNilpotent):
        unital.power_series()


def test_nilpotency_index_of_cd4_08():
    # A^2 = <e2,e3,e4>, A^3 = <e3,e4>, A^4 = <e4>, A^5 = 0
    assert load("CD4_08", alpha=1).power_series() == ((4, 3, 2, 1), 5)


@pytest.mark.parametrize("name,dim", [("CD2s01", 2), ("CD3s03", 6)])
def test_derivation_dimensions(name, dim):
    assert load(name).derivations().dim == dim


def test_derivations_of_zero_algebra():
    assert Algebra.zero(2, QQ).derivations().dim == 4


def test_quotient_recovers_cd3_03():
    B = load("CD4_08", alpha=1)
    Q, _ = B.quotient_by_annihilator_complement(la.span([e(4, 4)], 4, QQ))
    assert Q.table == load("CD3_03").table


def test_quotient_by_zero_is_identity():
    A = load("CD3_03")
    Q, _ = A.quotient_by_annihilator_complement(la.zero_space(3, QQ))
    assert Q.table == A.table


def test_quotient_recovers_cd2s01():
    B = load("CD4_05")
    Q, _ = B.quotient_by_annihilator_complement(la.span([e(4, 3), e(4, 4)], 4, QQ))
    assert Q.table == load("CD2s01").table


def test_quotient_needs_annihilator_subspace():
    with pytest.raises(NotInAnnihilator):
        load("CD3_03").quotient_by_annihilator_complement(la.span([e(3, 1)], 3, QQ))


def test_fingerprint_fixtures():
    assert Algebra.zero(4, QQ).fingerprint().as_tuple() == (0, 0, 0, 4, 4, 4, 16, 0, True, True)
    assert load("CD3_03").fingerprint().as_tuple()[:3] == (2, 1, 0)
    # recorded outcome for CD4_05 vs CD4_06: they differ in A^4, Der and the span of squares
    f5, f6 = load("CD4_05").fingerprint(), load("CD4_06").fingerprint()
    assert [d[0] for d in f5.differences(f6)] == ["dim_a4", "dim_der", "dim_squares"]


def test_from_products_rejects_out_of_range_index():
    with pytest.raises(DimensionMismatch):
        Algebra.from_products(2, QQ, {(0, 0): {2: QQ(1)}})


def test_transport_by_identity():
    A = load("CD4_08", alpha=1)
    assert A.transport(la.identity(4, QQ)).table == A.table


def random_invertible(n, rng):
    while True:
        m = tuple(tuple(QQ(rng.randint(-3, 3)) for _ in range(n)) for _ in range(n))
        if la.is_invertible(m):
            return m


@given(st.integers(0, 10 ** 6), st.sampled_from(["CD3_03", "CD3s01", "CD4_05", "CD4_16"]))
def test_fingerprint_is_basis_invariant(seed, name):
    A = load(name)
    phi = random_invertible(A.dim, random.Random(seed))
    assert A.transport(phi).fingerprint() == A.fingerprint()
