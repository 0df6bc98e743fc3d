from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nilalg.errors import BadPrime, DivisionByZero, FieldMismatch, NonRepresentable, NoSquareRoot, ParseError
from nilalg.scalars import (QQ, QQ_I, parse_field, parse_scalar, prime_field, quadratic, reduce_mod_p,
                            sqrt_mod_p)

Q3 = quadratic(-3)
GF5 = prime_field(5)


def test_parse_negative_half():
    x = parse_scalar("-1/2", QQ)
    assert x.to_fraction() == Fraction(-1, 2)
    assert x.to_fraction().numerator == -1 and x.to_fraction().denominator == 2


def test_parse_gaussian():
    x = parse_scalar("1/2 - 3*i", QQ_I)
    assert (x.a, x.b) == (Fraction(1, 2), Fraction(-3))


def test_parse_theta_at_lambda_one():
    theta = parse_scalar("(1+sqrt(-3))/2", Q3)
    assert (theta.a, theta.b) == (Fraction(1, 2), Fraction(1, 2))
    lam = parse_scalar("1", Q3)
    assert theta * theta - theta + lam == Q3.zero


def test_i_only_in_gaussian_field():
    with pytest.raises(FieldMismatch):
        parse_scalar("i", QQ)


def test_sqrt_outside_field():
    with pytest.raises(NonRepresentable):
        parse_scalar("sqrt(2)", QQ_I)
    assert parse_scalar("sqrt(9/4)", QQ) == QQ(Fraction(3, 2))


def test_norm_identity():
    assert parse_scalar("(1+i)*(1-i)", QQ_I) == QQ_I(2)


def test_inverse_of_theta():
    theta = parse_scalar("1/2 + 1/2*sqrt(-3)", Q3)
    inv = theta.inv()
    assert (inv.a, inv.b) == (Fraction(1, 2), Fraction(-1, 2))
    assert theta * inv == Q3.one


def test_gf5_addition():
    assert GF5(3) + GF5(4) == GF5(2)
    assert (GF5(3) + GF5(4)).to_int() == 2


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        QQ(1) / QQ(0)
    with pytest.raises(DivisionByZero):
        GF5(1) / GF5(5)


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatch):
        QQ_I(1) + Q3(1)


def test_reduce_mod_p_examples():
    assert reduce_mod_p(QQ(Fraction(-1, 2)), 5).to_int() == 2
    assert reduce_mod_p(QQ_I.gen(), 5).to_int() == 2
    with pytest.raises(NoSquareRoot):
        reduce_mod_p(QQ_I.gen(), 7)


def test_reduce_bad_prime():
    with pytest.raises(BadPrime):
        reduce_mod_p(QQ(Fraction(1, 5)), 5)


def test_sqrt_mod_p_smallest_root():
    assert sqrt_mod_p(-1, 13) == 5
    assert sqrt_mod_p(4, 7) == 2


@pytest.mark.parametrize("text,expected", [("Q", "Q"), ("Q(i)", "Q(i)"), ("Q(sqrt(-3))", "Q(sqrt(-3))"),
                                           ("GF(7)", "GF(7)")])
def test_parse_field_round_trip(text, expected):
    assert str(parse_field(text)) == expected


def test_parse_field_rejects_composite_modulus():
    with pytest.raises(ParseError):
        parse_field("GF(6)")


def test_malformed_text():
    with pytest.raises(ParseError):
        parse_scalar("1/+", QQ)


def test_string_forms():
    assert str(parse_scalar("1/2 - 3*i", QQ_I)) == "1/2-3*i"
    assert str(parse_scalar("-i", QQ_I)) == "-i"
    assert str(parse_scalar("(1+sqrt(-3))/2", Q3)) == "1/2+1/2*sqrt(-3)"


rationals = st.fractions(max_denominator=50).filter(lambda q: abs(q.numerator) < 10 ** 6)
gaussians = st.builds(lambda a, b: QQ_I(a) + QQ_I(b) * QQ_I.gen(), rationals, rationals)


@given(gaussians, gaussians, gaussians)
def test_field_axioms_gaussian(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    if x:
        assert x * x.inv() == QQ_I.one


@given(gaussians)
def test_norm_is_rational(x):
    n = x * x.conjugate()
    assert n.is_rational() and n.to_fraction() >= 0


@given(st.integers(-200, 200), st.integers(-200, 200), st.sampled_from([5, 13, 17]))
def test_reduction_is_a_ring_map(a, b, p):
    x, y = QQ_I(a) + QQ_I.gen(), QQ_I(b) - QQ_I(2) * QQ_I.gen()
    assert reduce_mod_p(x * y, p) == reduce_mod_p(x, p) * reduce_mod_p(y, p)
    assert reduce_mod_p(x + y, p) == reduce_mod_p(x, p) + reduce_mod_p(y, p)
