import pytest

from nilalg import linalg as la
from nilalg.algebra import Algebra
from nilalg.catalog import load
from nilalg.cohomology import BilinearForm, coboundary_space, parse_form
from nilalg.errors import NotACocycle, TrivialAnnihilator
from nilalg.extension import ExtensionSpec, extend, is_nonsplit, recover_parent
from nilalg.scalars import QQ


def forms(n, *texts):
    return tuple(parse_form(t, n, QQ) for t in texts)


def test_extension_gives_cd4_08():
    E = extend(ExtensionSpec(load("CD3_03"), forms(3, "D(2,2) + D(1,3) - 2*D(3,1)")))
    assert E.table_text() == "e1*e1 = e2; e1*e3 = e4; e2*e1 = e3; e2*e2 = e4; e3*e1 = -2*e4"
    assert E.table == load("CD4_08", alpha=1).table


def test_two_dimensional_extension_gives_cd4_05():
    E = extend(ExtensionSpec(load("CD2s01"), forms(2, "D(2,2)", "D(2,1)")))
    assert E.table == load("CD4_05").table


def test_zero_cocycle_splits():
    spec = ExtensionSpec(load("CD3_03"), forms(3, "0"))
    assert extend(spec).annihilator().dim == 2
    assert not is_nonsplit(spec)


def test_nonsplit_examples():
    assert is_nonsplit(ExtensionSpec(load("CD3_03"), forms(3, "D(1,3) - 2*D(3,1)")))
    assert not is_nonsplit(ExtensionSpec(load("CD3_03"), forms(3, "D(1,1)")))


def test_dependent_classes_split():
    # the second component differs from the first by the coboundary D(1,1)
    spec = ExtensionSpec(load("CD2s01"), forms(2, "D(2,2)", "D(2,2) + D(1,1)"))
    assert not is_nonsplit(spec)


def test_non_cocycle_is_rejected():
    with pytest.raises(NotACocycle):
        extend(ExtensionSpec(load("CD3_03"), forms(3, "D(3,1)")))


def test_recover_parent_of_cd4_08():
    B = load("CD4_08", alpha=1)
    R = recover_parent(B)
    assert R.parent.table == load("CD3_03").table
    expected = parse_form("D(2,2) + D(1,3) - 2*D(3,1)", 3, QQ)
    diff = R.cocycles[0] - expected
    assert coboundary_space(R.parent).contains(diff.coeffs)
    assert extend(R.spec()).transport(R.split).table == B.table


def test_recover_parent_of_cd4_05():
    R = recover_parent(load("CD4_05"))
    assert R.parent.table == load("CD2s01").table
    B2 = coboundary_space(R.parent)
    got = la.span(list(B2.rows) + [c.coeffs for c in R.cocycles], 4, QQ)
    want = la.span(list(B2.rows) + [f.coeffs for f in forms(2, "D(2,2)", "D(2,1)")], 4, QQ)
    assert got == want and len(R.cocycles) == 2


def test_recover_parent_of_zero_algebra_is_degenerate():
    R = recover_parent(Algebra.zero(3, QQ))
    assert R.parent.dim == 0 and len(R.cocycles) == 3


def test_recover_parent_needs_annihilator():
    unital = Algebra.from_products(1, QQ, {(0, 0): {0: QQ(1)}})
    with pytest.raises(TrivialAnnihilator):
        recover_parent(unital)


@pytest.mark.parametrize("name,params", [("CD4_16", {}), ("CD4_54", {"alpha": 3}), ("CD4_87", {"Theta": 2}),
                                         ("CD4_112", {"lambda": -2, "alpha": 1, "beta": 1, "gamma": 1})])
def test_round_trip_on_catalog_entries(name, params):
    B = load(name, **params)
    R = recover_parent(B)
    assert extend(R.spec()).transport(R.split).table == B.table
