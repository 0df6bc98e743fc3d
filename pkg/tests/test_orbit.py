import dataclasses
import random

import pytest
from hypothesis import given, settings, strategies as st

from nilalg import linalg as la
from nilalg.catalog import load
from nilalg.cohomology import BilinearForm, coboundary_space, cocycle_space, parse_form
from nilalg.errors import ConstraintViolated, DimensionMismatch, FormulaMismatch, SingularMatrix
from nilalg.orbit import (ACTION_BLOCKS, AUT_FAMILIES, act, is_automorphism, random_assignment, sample_family,
                          verify_action_block)
from nilalg.scalars import QQ

from helpers import mat


def cd3_03_phi(x, y, z):
    return mat([[x, 0, 0], [y, x * x, 0], [z, x * y, x ** 3]])


def test_identity_action():
    theta = parse_form("D(1,2) - 3*D(3,1)", 3, QQ)
    assert act(la.identity(3, QQ), theta) == theta


def test_action_on_nabla_coordinates():
    # theta = nabla1 + nabla2 + nabla3 with nabla1 = D12, nabla2 = D22, nabla3 = D13 - 2 D31
    theta = parse_form("D(1,2) + D(2,2) + D(1,3) - 2*D(3,1)", 3, QQ)
    out = act(cd3_03_phi(2, 0, 0), theta)
    assert (out.entry(0, 1), out.entry(1, 1), out.entry(0, 2)) == (QQ(8), QQ(16), QQ(16))
    assert out.entry(2, 0) == QQ(-32)


def test_action_is_a_right_action():
    rng = random.Random(3)
    theta = parse_form("D(1,2) + 5*D(2,2) + D(1,3) - 2*D(3,1)", 3, QQ)
    for _ in range(10):
        p = cd3_03_phi(rng.randint(1, 5), rng.randint(-5, 5), rng.randint(-5, 5))
        q = cd3_03_phi(rng.randint(1, 5), rng.randint(-5, 5), rng.randint(-5, 5))
        assert act(la.matmul(p, q), theta) == act(q, act(p, theta))


def test_action_rejects_bad_matrices():
    theta = parse_form("D(1,1)", 2, QQ)
    with pytest.raises(DimensionMismatch):
        act(la.identity(3, QQ), theta)
    with pytest.raises(SingularMatrix):
        act(mat([[1, 1], [1, 1]]), theta)


def test_automorphism_examples():
    A = load("CD3_03")
    assert is_automorphism(A, cd3_03_phi(2, 3, 5))
    assert is_automorphism(A, la.identity(3, QQ))
    bad = mat([[2, 0, 0], [3, 4, 0], [5, 4 * 3, 8]])  # x^2 y in place of x y
    assert not is_automorphism(A, bad)


def test_sample_family_examples():
    phi = sample_family(AUT_FAMILIES["CD3s02"], {"x": 1, "y": 2, "z": 0, "u": 0, "n": 0})
    assert phi[1] == (QQ(-2), QQ(1), QQ(0))
    phi = sample_family(AUT_FAMILIES["CD3s04"], {"x": 1, "y": 1, "z": 0, "u": 0, "lam": 1})
    assert phi[2][2] == QQ(1)
    with pytest.raises(ConstraintViolated):
        sample_family(AUT_FAMILIES["CD3_03"], {"x": 0, "y": 1, "z": 1})


PARENT_PARAMS = {"CD3_04": "lambda", "CD3s04": "lambda"}


@pytest.mark.parametrize("name", sorted(AUT_FAMILIES))
def test_families_are_automorphisms(name):
    f = AUT_FAMILIES[name]
    rng = random.Random(name)
    for k in range(10):
        fixed = {"lam": [0, 1, -1, 2, 3][k % 5]} if f.parent_params else {}
        a = random_assignment(f, rng, fixed)
        A = load(name, **({PARENT_PARAMS[name]: a["lam"]} if f.parent_params else {}))
        assert is_automorphism(A, sample_family(f, a))


@pytest.mark.parametrize("block", sorted(ACTION_BLOCKS))
def test_action_blocks(block):
    report = verify_action_block(block, samples=20)
    assert report.passed and report.samples == 20


def test_corrupted_block_is_caught():
    b = ACTION_BLOCKS["2.2"]
    broken = dataclasses.replace(b, formulas={**b.formulas, "A2": "a2*x^3"})
    with pytest.raises(FormulaMismatch):
        verify_action_block(broken, samples=5)
    report = verify_action_block(broken, samples=5, raise_on_failure=False)
    assert not report.passed and report.failure["entry"] == (2, 2)


@settings(max_examples=25)
@given(st.integers(0, 10 ** 6))
def test_action_preserves_cocycles_and_coboundaries(seed):
    rng = random.Random(seed)
    A = load("CD3_03")
    Z, B = cocycle_space(A), coboundary_space(A)
    phi = cd3_03_phi(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(-4, 4), rng.randint(-4, 4))
    z = BilinearForm.from_vector(3, QQ, la.vec_scale(QQ(rng.randint(-3, 3)), Z.rows[rng.randrange(Z.dim)]))
    b = BilinearForm.from_vector(3, QQ, B.rows[rng.randrange(B.dim)])
    assert Z.contains(act(phi, z).coeffs)
    assert B.contains(act(phi, b).coeffs)
