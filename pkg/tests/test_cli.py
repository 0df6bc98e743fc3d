import io
import json
import pathlib

import pytest

from nilalg.catalog import parse_single
from nilalg.cli import run

DATA = pathlib.Path(__file__).parent / "data"
GOLDEN = pathlib.Path(__file__).parent / "golden"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, _ = call(*argv, "--format", "json")
    doc = json.loads(out)
    assert doc["exit_code"] == code
    return code, doc


@pytest.mark.parametrize("golden,argv", [
    ("check_cd4_08.txt", ("check", DATA / "cd4_08.alg", "--params", "alpha=1")),
    ("cohomology_cd3_03.txt", ("cohomology", DATA / "cd3_03.alg")),
    ("iso_cd4_43.txt", ("iso", DATA / "cd4_43_p.alg", DATA / "cd4_43_m.alg", "--witness", DATA / "diag.json")),
])
def test_golden_outputs(golden, argv):
    code, out, err = call(*argv)
    assert code == 0 and err == ""
    assert out == (GOLDEN / golden).read_text(encoding="utf-8")


def test_check_json():
    code, doc = call_json("check", "@CD4_08", "--params", "alpha=1")
    assert code == 0
    assert doc["identities"]["instances"] == 768 and doc["nilpotency_index"] == 5
    assert doc["power_dims"] == [4, 3, 2, 1] and doc["annihilator"]["two_sided"] == 1


def test_check_failure_exits_one():
    code, out, _ = call("check", "@CD3_01", "--variety", "anticommutative")
    assert code == 1
    assert "first counterexample: anticommutative at (e1, e1)" in out


def test_check_with_theta_field_override():
    code, doc = call_json("check", "@CD4_87", "--params", "lambda=1", "--field", "Q(sqrt(-3))")
    assert code == 0 and doc["field"] == "Q(sqrt(-3))"


def test_cohomology_subvariety():
    code, doc = call_json("cohomology", "@CD3s03", "--variety", "lie")
    assert code == 0 and doc["H2"] == 2


def test_extend_prints_a_parseable_algebra():
    code, out, _ = call("extend", DATA / "cd3_03.alg", "--cocycle", "D(2,2) + D(1,3) - 2*D(3,1)",
                        "--out-name", "E")
    assert code == 0
    e = parse_single(out)
    assert e.name == "E" and e.dim == 4


def test_extend_with_non_cocycle_exits_one():
    code, out, _ = call("extend", DATA / "cd3_03.alg", "--cocycle", "D(3,1)")
    assert code == 1 and out.startswith("not a cocycle")


def test_extend_needs_a_cocycle():
    assert call("extend", DATA / "cd3_03.alg")[0] == 2


def test_iso_without_witness():
    code, doc = call_json("iso", "@CD4_05", "@CD4_06")
    assert code == 0 and doc["verdict"] == "non-isomorphic"


def test_iso_rejected_witness_exits_one():
    code, out, _ = call("iso", DATA / "cd4_43_p.alg", DATA / "cd4_43_m.alg", "--witness", DATA / "identity.json",
                        "--primes", "5")
    assert code == 1 and "not an isomorphism" in out


def test_fingerprint_command():
    code, out, _ = call("fingerprint", DATA / "cd3_03.alg")
    assert code == 0 and out.startswith("dim_a2=2, dim_a3=1, dim_a4=0")


def test_catalog_verify_section():
    code, doc = call_json("catalog", "verify", "--section", "1.3", "--samples", "3", "--workers", "1")
    assert code == 0 and doc["passed"] and [e["name"] for e in doc["entries"]] == ["CD2s01"]


def test_catalog_list_and_show():
    code, out, _ = call("catalog", "list", "--section", "2.6")
    assert code == 0 and len(out.splitlines()) == 16
    code, out, _ = call("catalog", "show", "CD4_08")
    assert code == 0 and out.startswith("algebra CD4_08 dim 4 over Q section 2.2 params alpha {")


def test_catalog_export(tmp_path):
    code, _, _ = call("catalog", "export", tmp_path)
    assert code == 0 and (tmp_path / "index.json").exists()


def test_action_verify():
    code, out, _ = call("action", "verify", "--block", "2.3", "--samples", "20")
    assert code == 0 and out == "block 2.3: PASS (20 samples)\n"


@pytest.mark.parametrize("argv", [
    ("check", DATA / "missing.alg"),
    ("check", DATA / "broken.alg"),
    ("check", "@CD4_28", "--params", "alpha=1"),
    ("check", "@CD4_08"),
    ("check", "@NOPE"),
    ("frobnicate",),
    ("cohomology", DATA / "cd3_03.alg", "--variety", "unknown"),
    ("iso", DATA / "cd4_43_p.alg", DATA / "cd4_43_m.alg", "--budget", "soon"),
    ("iso", DATA / "cd4_43_p.alg", DATA / "cd4_43_m.alg", "--witness", DATA / "missing.json"),
    ("catalog", "export"),
    ("action", "verify", "--block", "9.9"),
])
def test_usage_errors_exit_two(argv):
    code, _, err = call(*argv)
    assert code == 2 and err.startswith("nilalg: ")


def test_parse_error_reports_line():
    _, _, err = call("check", DATA / "broken.alg")
    assert "line 2" in err


def test_json_errors():
    code, out, _ = call("check", "@CD4_28", "--params", "alpha=1", "--format", "json")
    doc = json.loads(out)
    assert code == 2 and doc["error"] == "ConstraintViolated" and doc["exit_code"] == 2
