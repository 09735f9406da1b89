from __future__ import annotations

import json
import random

import pytest

import instances
from twisted_pairing import documents as docs
from twisted_pairing.complexes import random_complex
from twisted_pairing.errors import SchemaError
from twisted_pairing.field import GF, QQ, Field
from twisted_pairing.simplicial import Cochain

FIXTURES = sorted(p.stem for p in docs.fixture_dir().glob("*.json"))


def test_fixture_set():
    assert {"figure_eight", "torus", "genus2", "family", "corrupted_model"} <= set(FIXTURES)


@pytest.mark.parametrize("name", FIXTURES)
def test_fixtures_are_canonical(name):
    text = docs.read_text(name)
    doc = docs.loads(text)
    assert docs.dumps(docs.canonical(doc)) == text
    assert docs.dumps(docs.loads(docs.dumps(doc))) == text


@pytest.mark.parametrize("p", [0, 5])
def test_complex_round_trip(p):
    rng = random.Random(p)
    F = Field(p)
    for _ in range(10):
        C, _ = random_complex(F, rng)
        doc = docs.complex_to_doc(C)
        text = docs.dumps(doc)
        back = docs.complex_from_doc(docs.loads(text), F)
        assert back.dims == C.dims
        assert all(back.differential(k) == C.differential(k) for k in C.degrees)
        assert docs.dumps(docs.complex_to_doc(back)) == text


def test_cochain_round_trip(rng):
    spec = {"builtin": "torus"}
    K = docs.complex_of_spec(spec)
    for F in (QQ, GF(7)):
        x = Cochain.random(K, F, 1, rng)
        doc = docs.cochain_to_doc(x, spec)
        y = docs.cochain_from_doc(docs.loads(docs.dumps(doc)), F)
        assert y.values == x.values and y.degree == 1


def test_records_round_trip(rng):
    for F in (QQ, GF(3)):
        recs = instances.records(rng, F, 5)
        doc = docs.records_to_doc(recs, F, (1, 2))
        text = docs.dumps(doc)
        back, codims = docs.records_from_doc(docs.loads(text), F)
        assert codims == (1, 2)
        assert [(r.sign, F(r.gamma1), F(r.gamma0)) for r in back] == [(r.sign, r.gamma1, r.gamma0) for r in recs]
        assert docs.dumps(docs.records_to_doc(back, F, codims)) == text


def test_canonical_rewrites_scalars():
    doc = docs.header("decorated_cycle", GF(5))
    doc["records"] = [{"sign": 1, "gamma1": 7, "gamma0": "3 mod 5"}]
    out = docs.canonical(doc)
    assert out["records"][0] == {"sign": 1, "gamma1": "2 mod 5", "gamma0": "3 mod 5"}


def test_surface_document():
    data = docs.surface_from_doc(docs.load("torus"), QQ)
    assert set(data.cochains) == {"alpha", "beta"}
    assert set(data.cycles) == {"L0", "L1"}
    with pytest.raises(SchemaError):
        data.beta()
    with pytest.raises(SchemaError):
        data.cycle("L9")


@pytest.mark.parametrize("spec", [{"builtin": "torus"}, {"builtin": "sphere"}, {"builtin": "genus:2"},
                                  {"facets": [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]}])
def test_complex_specs(spec):
    K = docs.complex_of_spec(spec)
    assert K.fundamental_cycle is not None


def _bad(mutate):
    doc = json.loads(docs.read_text("figure_eight"))
    mutate(doc)
    return json.dumps(doc)


@pytest.mark.parametrize("mutate", [
    lambda d: d.update(format="other"),
    lambda d: d.update(version=2),
    lambda d: d.update(kind="poem"),
    lambda d: d.update(field="p:4"),
    lambda d: d.pop("records"),
    lambda d: d["records"][0].update(sign=2),
    lambda d: d["records"][0].update(gamma1="x"),
    lambda d: d["records"][0].update(gamma1=1.5),
    lambda d: d.update(codims=[1]),
])
def test_schema_errors(mutate):
    with pytest.raises(SchemaError):
        docs.loads(_bad(mutate))


def test_not_json():
    with pytest.raises(SchemaError):
        docs.loads("{")
    with pytest.raises(SchemaError):
        docs.loads("[]")


def test_complex_schema_errors():
    doc = docs.header("complex", QQ)
    doc.update(dims={"0": 1, "1": 1, "2": 1}, differentials={"0": [["1"]], "1": [["1"]]})
    with pytest.raises(SchemaError):
        docs.loads(json.dumps(doc))
    doc.update(dims={"0": -1})
    with pytest.raises(SchemaError):
        docs.loads(json.dumps(doc))


def test_family_schema_errors():
    doc = docs.header("family", QQ)
    doc["n"] = 2
    with pytest.raises(SchemaError):
        docs.loads(json.dumps(doc))
    doc["gram"] = [["1", "0"]]
    with pytest.raises(SchemaError):
        docs.loads(json.dumps(doc))


def test_fixture_directory_override(tmp_path, monkeypatch):
    (tmp_path / "mine.json").write_text(docs.read_text("figure_eight"), encoding="utf-8")
    monkeypatch.setenv(docs.FIXTURE_ENV, str(tmp_path))
    assert docs.fixture_dir() == tmp_path
    assert docs.load("mine")["kind"] == "decorated_cycle"
    with pytest.raises(SchemaError):
        docs.load("torus")
