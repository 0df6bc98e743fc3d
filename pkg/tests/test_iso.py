import random

import pytest
from hypothesis import given, settings, strategies as st

from nilalg import linalg as la
from nilalg.catalog import load
from nilalg.catalog.claims import DISTINCT_PAIRS, distinct_sides, iso_claims, iso_sides, witness_matrix
from nilalg.errors import BadPrime, DimensionMismatch, NoSquareRoot
from nilalg.iso import (decide, fingerprint_separate, search_iso_gfp, verify_witness, witness_from_json,
                        witness_to_json)
from nilalg.scalars import QQ, QQ_I, prime_field

GF5 = prime_field(5)


def diag(*xs, tag=QQ):
    n = len(xs)
    return tuple(tuple(tag(xs[i]) if i == j else tag.zero for j in range(n)) for i in range(n))


def random_invertible(n, tag, rng):
    while True:
        m = tuple(tuple(tag(rng.randint(-4, 4)) for _ in range(n)) for _ in range(n))
        if la.is_invertible(m):
            return m


def test_identity_witness():
    A = load("CD4_16")
    assert verify_witness(A, A, la.identity(4, QQ))


def test_sign_flip_witness_for_cd4_43():
    A, B = load("CD4_43", alpha=2), load("CD4_43", alpha=-2)
    assert verify_witness(A, B, diag(1, -1, 1, 1, tag=QQ_I))
    assert not verify_witness(A, B, la.identity(4, QQ_I))


def test_witness_shape_is_checked():
    with pytest.raises(DimensionMismatch):
        verify_witness(load("CD4_16"), load("CD4_16"), la.identity(3, QQ))


def test_fingerprint_separation():
    assert fingerprint_separate(load("CD3s03"), load("CD3_01")).distinct
    assert "anticommutative" in dict((k, 0) for k, _, _ in fingerprint_separate(load("CD3s03"),
                                                                                   load("CD3_01")).differences)
    A = load("CD4_16")
    assert not fingerprint_separate(A, A).distinct


def test_cd4_08_vs_cd4_09_needs_search():
    A, B = load("CD4_08", alpha=1), load("CD4_09")
    assert not fingerprint_separate(A, B).distinct
    v = decide(A, B)
    assert v.is_nonisomorphic and v.caveat == "mod-p"


def test_search_finds_self_isomorphism_over_gf5():
    A = load("CD4_16").reduce_mod_p(5)
    phi = random_invertible(4, GF5, random.Random(11))
    B = A.transport(phi)
    v = search_iso_gfp(A, B, budget=60)
    assert v.is_isomorphic and verify_witness(A, B, v.witness)


def test_search_cd4_43_mod_5():
    A, B = load("CD4_43", alpha=2).reduce_mod_p(5), load("CD4_43", alpha=-2).reduce_mod_p(5)
    assert search_iso_gfp(A, B).is_isomorphic


def test_search_exhausts_cd4_05_vs_cd4_06():
    v = search_iso_gfp(load("CD4_05").reduce_mod_p(5), load("CD4_06").reduce_mod_p(5))
    assert v.is_nonisomorphic


def test_decide_with_stored_witness():
    claim = next(c for c in iso_claims() if c.name == "CD4_54")
    A, B = iso_sides(claim)
    v = decide(A, B, witness=witness_matrix(claim))
    assert v.is_isomorphic and v.summary() == "Isomorphic (witness verified)"


def test_decide_mod_p_for_three_dimensional_pair():
    v = decide(load("CD3_01"), load("CD3_02"), use_fingerprint=False)
    assert v.is_nonisomorphic and v.details["prime"] == 5


def test_decide_family_members():
    v = decide(load("CD4_08", alpha=0), load("CD4_08", alpha=1), use_fingerprint=False)
    assert v.is_nonisomorphic and v.caveat == "mod-p"


def test_rejected_witness_falls_through():
    A, B = load("CD4_43", alpha=2), load("CD4_43", alpha=-2)
    v = decide(A, B, witness=la.identity(4, QQ_I), primes=(5,))
    assert v.details.get("witness") == "rejected"
    assert v.kind == "unknown" and v.details["tried"] == ["5: isomorphic mod p"]


def test_dimension_mismatch_is_nonisomorphic():
    assert decide(load("CD3_03"), load("CD4_16")).is_nonisomorphic


def test_witness_json_round_trip():
    w = diag(1, -1, "1/2", "i", tag=QQ_I)
    assert witness_from_json(witness_to_json(w), QQ_I) == w


def test_verdict_json_shape():
    v = decide(load("CD4_05"), load("CD4_06"))
    doc = v.to_json()
    assert doc["verdict"] == "non-isomorphic" and doc["evidence"].startswith("fingerprint differs")


@settings(max_examples=20)
@given(st.integers(0, 10 ** 6), st.sampled_from(["CD3_03", "CD4_16", "CD4_37"]))
def test_witnesses_compose(seed, name):
    rng = random.Random(seed)
    A = load(name)
    phi, psi = random_invertible(A.dim, QQ, rng), random_invertible(A.dim, QQ, rng)
    B = A.transport(phi)
    C = B.transport(psi)
    assert verify_witness(A, B, phi) and verify_witness(B, C, psi)
    assert verify_witness(A, C, la.matmul(psi, phi))
    assert verify_witness(B, A, la.inverse(phi))


# pairs cheap enough to also exhaust over GF(7)
SEVEN_TOO = {"CD4_05", "CD4_08", "CD4_11", "CD4_33", "CD4_52", "CD4_103"}


def test_fingerprint_distinct_pairs_are_exhausted_mod_p():
    checked = 0
    for claim in DISTINCT_PAIRS:
        A, B = distinct_sides(claim)
        if not fingerprint_separate(A, B).distinct:
            continue
        for p in (5, 7) if claim.left[0] in SEVEN_TOO else (5,):
            try:
                Ap, Bp = A.reduce_mod_p(p), B.reduce_mod_p(p)
            except (BadPrime, NoSquareRoot):
                continue
            assert search_iso_gfp(Ap, Bp).is_nonisomorphic, (claim, p)
        checked += 1
    assert checked >= 10
