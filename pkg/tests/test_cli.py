from __future__ import annotations

import io
import json

import pytest

from rootgrade.cli import run


def _run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv) + ["--no-timestamp"], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_weyl_spectrum_of_g2():
    code, out, _ = _run("weyl", "spectrum", "--system", "G2", "--flavor", "large")
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["spectrum"]["eigenvalues"] == [["0", 1], ["10", 6], ["12", 5]]
    assert doc["config"]["system"] == "G2" and doc["config"]["seed"] == 0


def test_check_good_f4_to_g2():
    code, out, _ = _run("reduce", "check-good", "--builtin", "F4-G2")
    assert code == 0
    assert json.loads(out)["result"]["certificate"]["good"]


def test_borel_core_bc2_all():
    code, out, _ = _run("borel", "core", "--system", "BC2", "--all")
    rows = json.loads(out)["result"]["borel_sets"]
    assert code == 0 and len(rows) == 8
    assert all(len(row["core"]) + len(row["boundary"]) == len(row["positives"]) for row in rows)


def test_output_is_byte_identical_without_timestamp():
    assert _run("weyl", "diameter", "--system", "B3")[1] == _run("weyl", "diameter", "--system", "B3")[1]
    assert "timestamp" not in json.loads(_run("roots", "build", "--system", "A2")[1])


def test_timestamp_present_by_default():
    out = io.StringIO()
    assert run(["roots", "build", "--system", "A2"], stdout=out) == 0
    assert "timestamp" in json.loads(out.getvalue())


@pytest.mark.parametrize("argv", [["bogus"], ["weyl"], ["weyl", "spectrum"], ["weyl", "spectrum", "--system", "Q4"],
                                  ["steinberg", "model", "--system", "A2"], ["reduce", "check-good"]])
def test_usage_errors_exit_2(argv):
    code, _, err = _run(*argv)
    assert code == 2
    assert json.loads(err)["usage_error"]


def test_verification_failure_exits_1_with_witness():
    code, out, _ = _run("steinberg", "unitary", "--n", "2", "--ring", "F9*", "--odd", "--e3", "minus_st")
    assert code == 1
    e3 = next(r for r in json.loads(out)["result"]["relations"] if r["name"] == "E3")
    assert e3["failures"] > 0 and e3["first_failure"]["params"]


def test_bound_constraint_violation_exits_1():
    code, out, _ = _run("spectra", "bounds", "--name", "core_epsilon", "--inputs", '{"N": 2, "roots": 6}')
    assert code == 1 and "N > 2" in json.loads(out)["result"]["error"]


def test_dot_and_csv_formats():
    code, out, _ = _run("weyl", "small", "--system", "A2", "--format", "dot")
    assert code == 0 and out.startswith("graph")
    code, out, _ = _run("chevalley", "table", "--system", "B2", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "alpha,beta,N"


def test_output_file(tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = _run("weyl", "path-constant", "--system", "B2", "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["result"]["C"] == "3"


def test_model_from_json_spec():
    spec = json.dumps({"kind": "unitary", "n": 2, "ring": "Z/4*", "omega": -1})
    code, out, _ = _run("steinberg", "strong", "--model", spec)
    assert code == 0 and json.loads(out)["result"]["strong"]


def test_spectra_commands():
    assert _run("spectra", "codist", "--heisenberg", "3")[0] == 0
    assert _run("spectra", "codist", "--abelian", "3,3")[0] == 0
    code, out, _ = _run("spectra", "bounds")
    assert code == 0 and len(json.loads(out)["result"]["bounds"]) == 13
