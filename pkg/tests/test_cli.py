from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from twisted_pairing import documents as docs
from twisted_pairing.cli import EXIT_AXIOM, EXIT_DEFECT, EXIT_OK, EXIT_SCHEMA, main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()



def value(text, key):
    for line in text.splitlines():
        if line.startswith(key + " "):
            return line[len(key):].strip()
    raise KeyError(key)


def as_json(*argv):
    code, out, _ = run(*argv, "--report", "json")
    doc = json.loads(out)
    assert doc["exit"] == code
    return code, doc


@pytest.mark.parametrize("field,expected", [("q", "2"), ("p:3", "2"), ("p:5", "2"), ("p:7", "2"), ("p:2", "0")])
def test_bullet_figure_eight(field, expected):
    code, doc = as_json("bullet", "figure_eight", "--field", field)
    assert code == EXIT_OK
    assert doc["results"]["bullet"] == expected
    assert doc["results"]["symmetry law"] is True


def test_bullet_empty_records():
    code, out, _ = run("bullet", "--records", str(docs.resolve("empty_records")))
    assert code == EXIT_OK and value(out, "bullet") == "0"


def test_bullet_empty_file(tmp_path):
    empty = tmp_path / "none.json"
    empty.write_text("")
    code, out, _ = run("bullet", "--records", str(empty))
    assert code == EXIT_OK and value(out, "bullet") == "0"


@pytest.mark.parametrize("field", ["q", "p:3", "p:5"])
def test_bullet_equals_pair_on_torus(field):
    _, b = as_json("bullet", "torus", "--cycles", "L0", "L1", "--field", field)
    code, p = as_json("pair", "torus", "--classes", "L0", "L1", "--field", field)
    assert code == EXIT_OK
    assert b["results"]["bullet"] == p["results"]["bullet"] == "1"
    if field == "q":
        assert p["results"]["I (covering route)"].startswith("n/a")
    else:
        assert p["results"]["I (covering route)"] == b["results"]["bullet"]
        assert p["results"]["cover equals bullet"] is True
    assert p["results"]["cone equals -1 * bullet"] is True


def test_pair_cone_value():
    code, doc = as_json("pair", "torus", "--field", "p:5", "--route", "cone")
    assert code == EXIT_OK and doc["results"]["I (cone route)"] == "4"
    assert "I (covering route)" not in doc["results"]


def test_cohomology_commands():
    code, doc = as_json("cohomology", "circle_complex")
    assert code == EXIT_OK
    code, out, _ = run("cohomology", "torus", "--field", "p:3")
    assert code == EXIT_OK
    code, out, _ = run("cohomology", "genus2", "--beta", "beta")
    assert code == EXIT_OK


def test_cover_command():
    code, doc = as_json("cover", "genus2", "--p", "3", "--beta", "beta")
    assert code == EXIT_OK
    res = doc["results"]
    assert res["sheets"] == 3


@pytest.mark.parametrize("name", ["torus_model", "synthetic_model", "exterior_model"])
def test_cone_check_passes(name):
    code, out, err = run("cone-check", name)
    assert code == EXIT_OK, out + err


def test_cone_check_reports_weak_associativity():
    code, out, _ = run("cone-check", "torus_model")
    assert "holds on cohomology" in out


def test_cone_check_corrupted_model():
    code, out, _ = run("cone-check", "corrupted_model")
    assert code == EXIT_AXIOM
    assert "A4" in out and "fail" in out


def test_bound_command():
    code, doc = as_json("bound", "family")
    assert code == EXIT_OK
    res = doc["results"]
    assert res["euler verdict"] == "independent"
    assert res["shift identity"] is True


def test_bound_defect_exit(tmp_path):
    doc = docs.load("family")
    doc["expected_diagonal"] = ["1", "1"]
    path = tmp_path / "bad_family.json"
    path.write_text(docs.dumps(doc))
    code, _, _ = run("bound", str(path))
    assert code == EXIT_DEFECT


@pytest.mark.parametrize("argv", [
    ("bullet", "no_such_fixture"),
    ("bullet", "figure_eight", "--field", "p:4"),
    ("pair", "figure_eight"),
    ("bound", "torus"),
    ("frobnicate",),
    (),
])
def test_schema_exit(argv):
    code, _, _ = run(*argv)
    assert code == EXIT_SCHEMA


def test_schema_exit_on_bad_document(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"format": "twisted-pairing", "version": 1, "kind": "complex", "field": "q"}')
    code, _, err = run("cohomology", str(bad))
    assert code == EXIT_SCHEMA and "schema error" in err


def test_axiom_exit_on_obstructed_potential(tmp_path):
    doc = docs.load("torus")
    doc["cycles"]["L0"]["beta"] = "alpha"
    path = tmp_path / "obstructed.json"
    path.write_text(docs.dumps(doc))
    code, _, err = run("pair", str(path), "--beta", "alpha")
    assert code == EXIT_AXIOM


def test_fixture_env_override(tmp_path, monkeypatch):
    (tmp_path / "eight.json").write_text(docs.read_text("figure_eight"))
    monkeypatch.setenv(docs.FIXTURE_ENV, str(tmp_path))
    code, out, _ = run("bullet", "eight")
    assert code == EXIT_OK and value(out, "bullet") == "2"
    code, _, _ = run("bullet", "figure_eight")
    assert code == EXIT_SCHEMA


@pytest.mark.parametrize("argv", [("pair", "torus", "--field", "p:3"), ("cone-check", "synthetic_model"),
                                  ("bound", "family", "--report", "json")])
def test_deterministic_output(argv):
    first = run(*argv)
    assert all(run(*argv) == first for _ in range(2))


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "twisted_pairing.cli", "bullet", "figure_eight"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "2" in proc.stdout
