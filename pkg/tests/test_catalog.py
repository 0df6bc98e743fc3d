import json

import pytest

from nilalg.catalog import (UnknownEntry, builtin_catalog, entry, instantiate, load, parse_algebra_file,
                            parse_single, section, unparse)
from nilalg.catalog.claims import (DISTINCT_PAIRS, ISO_RELATIONS, extension_claim, extension_claims, iso_claims,
                                   sample_assignments)
from nilalg.catalog.verify import coverage, export_catalog, verify_entry
from nilalg.errors import (ConstraintViolated, DuplicateProduct, MissingParameter, NonRepresentable, ParseError,
                           UnknownParameter)
from nilalg.scalars import QQ, quadratic


def test_parse_minimal_entry():
    (e,) = parse_algebra_file("algebra CD2s01 dim 2 over Q { e1*e1 = e2; }")
    assert (e.name, e.dim, e.field, e.params) == ("CD2s01", 2, "Q", ())
    assert instantiate(e).table == load("CD2s01").table


def test_parse_family():
    e = parse_single("algebra F dim 4 over Q params alpha { e1*e1 = e2; e2*e1 = e3; e2*e2 = alpha e4; }")
    assert e.params == ("alpha",) and e.is_family


def test_duplicate_product():
    with pytest.raises(DuplicateProduct):
        parse_single("algebra X dim 3 over Q { e1*e1 = e2; e1*e1 = e3; }")


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_algebra_file("algebra X dim 2 over Q {\n  e1*e1 = e3;\n}")
    assert info.value.line == 2


def test_unknown_symbol_in_coefficient():
    with pytest.raises(UnknownParameter):
        parse_single("algebra X dim 2 over Q { e1*e1 = beta e2; }")


def test_comments_are_ignored():
    text = "# two entries\nalgebra A dim 2 over Q { e1*e1 = e2; } # trailing\nalgebra B dim 2 over Q { }"
    assert [e.name for e in parse_algebra_file(text)] == ["A", "B"]


def test_instantiate_cd3_04():
    A = load("CD3_04", **{"lambda": 2})
    assert A.table_text() == "e1*e1 = e2; e1*e2 = e3; e2*e1 = 2*e3"


def test_theta_family_at_theta_two_is_rational():
    B = load("CD4_87", Theta=2)
    assert dict(B.params)["lambda"] == QQ(-2)
    assert all(c.tag is QQ for terms in B.table.values() for _, c in terms)


def test_theta_family_from_lambda_needs_the_right_field():
    e = entry("CD4_87")
    with pytest.raises(NonRepresentable):
        instantiate(e, {"lambda": 1})
    Q3 = quadratic(-3)
    B = instantiate(e, {"lambda": 1}, field=Q3)
    theta = dict(B.params)["Theta"]
    assert theta * theta - theta + Q3(1) == Q3.zero


def test_constraint_violation():
    with pytest.raises(ConstraintViolated):
        load("CD4_28", alpha=1)


def test_missing_and_unknown_parameters():
    with pytest.raises(MissingParameter):
        load("CD4_08")
    with pytest.raises(UnknownParameter):
        load("CD4_08", alpha=1, beta=2)
    with pytest.raises(UnknownEntry):
        entry("CD9_99")


def test_external_entries_are_stubs():
    with pytest.raises(NonRepresentable):
        load("D4_01")


def test_section_counts():
    assert len(section("2.6")) == 16
    assert [e.name for e in section("2.6")][0] == "CD4_71"
    assert [e.name for e in section("2.6")][-1] == "CD4_86"
    assert sum(1 for e in builtin_catalog() if not e.external) == 118
    assert coverage(["2.7"])["2.7"] == {"tables": 27, "external": 40}


def test_every_entry_round_trips():
    for e in builtin_catalog():
        assert parse_single(unparse(e)) == e


def test_cocycle_claim_for_cd4_08():
    c = extension_claim("CD4_08")
    assert c.parent == "CD3_03" and c.cocycles == ("(alpha)*N2+N3",)


def test_claim_coverage():
    names = {c.name for c in extension_claims()}
    assert names == {e.name for e in builtin_catalog() if not e.external}


def test_iso_and_distinct_lists():
    assert len(ISO_RELATIONS) == 17 and len(iso_claims()) == 17
    assert all(c.witness is not None for c in iso_claims())
    assert len(DISTINCT_PAIRS) == 20
    c54 = next(c for c in iso_claims() if c.name == "CD4_54")
    assert c54.left == {"alpha": 3} and c54.right == {"alpha": -4}


def test_sample_assignments_respect_constraints():
    samples = sample_assignments(entry("CD4_13"), 3)
    assert len(samples) == 3
    for a in samples:
        instantiate(entry("CD4_13"), a)
    assert [a["Theta"] for a in sample_assignments(entry("CD4_87"), 3)] == [2, -1, 3]


@pytest.mark.parametrize("name", ["CD2s01", "CD4_05", "CD4_08", "CD4_54", "CD4_87", "CD4_112", "D4_00"])
def test_verify_entry(name):
    report = verify_entry(name, samples=3)
    assert report.ok, report.line()


def test_export(tmp_path):
    index = json.loads(export_catalog(tmp_path).read_text())
    assert len(index) == len(builtin_catalog())
    item = next(i for i in index if i["name"] == "CD4_43")
    assert item["isomorphisms"][0]["relation"] == "alpha -> -alpha"
    assert parse_single((tmp_path / "CD4_43.alg").read_text()) == entry("CD4_43")
