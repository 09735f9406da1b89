"""JSON documents: canonical serialization and conversion to library objects.

Every document is a JSON object with ``format``, ``version``, ``kind`` and
``field`` keys.  Scalars are strings (``"3/7"`` over the rationals,
``"5 mod 11"`` over GF(11)); plain integers are accepted on input and
rewritten on output.  The canonical text form uses sorted keys and two-space
indentation, so serializing a loaded document reproduces it byte for byte.
"""
from __future__ import annotations

import json
import os
from importlib import resources
from pathlib import Path

from .complexes import GradedComplex
from .cycles import DecoratedCycle, DualLoop, EdgeLoop, IntersectionRecord, integrate_potential
from .errors import SchemaError
from .field import Field
from .simplicial import Cochain, SimplicialComplex, cocycle_from_windings, genus_surface, sphere, torus

FORMAT = "twisted-pairing"
VERSION = 1
KINDS = ("complex", "cochain", "surface", "decorated_cycle", "floer_model", "family")
FIXTURE_ENV = "TWISTED_PAIRING_FIXTURES"


# --- text level --------------------------------------------------------------------


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from None
    return validate(doc)


def fixture_dir() -> Path:
    override = os.environ.get(FIXTURE_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("twisted_pairing") / "fixtures"))


def resolve(name: str) -> Path:
    """A path as given, or a fixture by file name (with or without .json)."""
    p = Path(name)
    if p.exists():
        return p
    base = fixture_dir()
    for cand in (base / name, base / f"{name}.json"):
        if cand.exists():
            return cand
    raise SchemaError(f"no such document or fixture: {name}")


def read_text(name: str) -> str:
    return resolve(name).read_text(encoding="utf-8")


def load(name: str) -> dict:
    return loads(read_text(name))


def header(kind: str, F: Field) -> dict:
    return {"format": FORMAT, "version": VERSION, "kind": kind, "field": F.spec}


# --- validation ---------------------------------------------------------------------


def _require(doc, key, types, where="document"):
    if key not in doc:
        raise SchemaError(f"{where}: missing key {key!r}")
    if not isinstance(doc[key], types):
        raise SchemaError(f"{where}: {key!r} has the wrong type")
    return doc[key]


def field_of(doc: dict, override: Field | None = None) -> Field:
    return override or Field.parse(doc.get("field", "q"))


def validate(doc) -> dict:
    if not isinstance(doc, dict):
        raise SchemaError("a document must be a JSON object")
    if doc.get("format") != FORMAT:
        raise SchemaError(f"format must be {FORMAT!r}")
    if doc.get("version") != VERSION:
        raise SchemaError(f"unsupported version {doc.get('version')!r}")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise SchemaError(f"unknown kind {kind!r}")
    F = Field.parse(_require(doc, "field", str))
    globals()[f"_validate_{kind}"](doc, F)
    return doc


def _scalars(F, values, where):
    if not isinstance(values, list):
        raise SchemaError(f"{where}: expected a list of scalars")
    out = []
    for v in values:
        if isinstance(v, bool) or not isinstance(v, (str, int)):
            raise SchemaError(f"{where}: scalar {v!r} must be a string or integer")
        out.append(F.parse_scalar(v) if isinstance(v, str) else F(v))
    return out


def _matrix(F, rows, where):
    if not isinstance(rows, list):
        raise SchemaError(f"{where}: expected a matrix")
    M = [_scalars(F, r, where) for r in rows]
    if M and any(len(r) != len(M[0]) for r in M):
        raise SchemaError(f"{where}: ragged matrix")
    return M


def _validate_complex(doc, F):
    complex_from_doc(doc, F)


def _validate_cochain(doc, F):
    cochain_from_doc(doc, F)


def _validate_surface(doc, F):
    surface_from_doc(doc, F)


def _validate_decorated_cycle(doc, F):
    records_from_doc(doc, F)


def _validate_floer_model(doc, F):
    recipe = _require(doc, "recipe", str)
    if recipe not in ("simplicial", "synthetic", "exterior"):
        raise SchemaError(f"unknown model recipe {recipe!r}")
    if recipe == "simplicial":
        K = complex_of_spec(_require(doc, "surface", dict))
        cochain_of_spec(K, F, _require(doc, "beta", dict), "beta")
    for key in ("seed", "n", "genus", "corrupt_star"):
        if key in doc and (isinstance(doc[key], bool) or not isinstance(doc[key], int)):
            raise SchemaError(f"{key!r} must be an integer")
    if "flags" in doc and not all(isinstance(f, str) for f in doc["flags"]):
        raise SchemaError("flags must be strings")


def _validate_family(doc, F):
    family_from_doc(doc, F)


# --- surfaces, cochains, cycles ---------------------------------------------------


def complex_of_spec(spec: dict) -> SimplicialComplex:
    if "builtin" in spec:
        name = spec["builtin"]
        if name == "torus":
            return torus()
        if name == "sphere":
            return sphere()
        if isinstance(name, str) and name.startswith("genus:"):
            try:
                g = int(name.split(":", 1)[1])
            except ValueError:
                raise SchemaError(f"bad surface {name!r}") from None
            return genus_surface(g)
        raise SchemaError(f"unknown builtin surface {name!r}")
    facets = _require(spec, "facets", list, "surface")
    if not all(isinstance(f, list) and all(isinstance(v, int) for v in f) for f in facets):
        raise SchemaError("surface: facets must be lists of integers")
    K = SimplicialComplex(facets, name=spec.get("name", ""))
    return K.oriented() if K.dim == 2 else K


def cochain_of_spec(K, F, spec, name):
    degree = spec.get("degree", 1)
    if "windings" in spec:
        w = spec["windings"]
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in w):
            raise SchemaError(f"cochain {name!r}: windings must be integers")
        return cocycle_from_windings(K, F, w)
    values = _scalars(F, _require(spec, "values", list, f"cochain {name!r}"), f"cochain {name!r}")
    if len(values) != K.count(degree):
        raise SchemaError(f"cochain {name!r} needs {K.count(degree)} values, got {len(values)}")
    return Cochain(K, F, degree, values)


def _cycle_of_spec(K, F, cochains, spec, name):
    if "edge_loop" in spec:
        carrier = EdgeLoop(tuple(spec["edge_loop"]))
    elif "dual_loop" in spec:
        carrier = DualLoop(spec["dual_loop"])
    else:
        raise SchemaError(f"cycle {name!r} needs an edge_loop or a dual_loop")
    carrier.validate(K)
    if "gamma" in spec:
        gamma = _scalars(F, spec["gamma"], f"cycle {name!r}")
        if len(gamma) != len(carrier):
            raise SchemaError(f"cycle {name!r}: one potential value per position")
        return DecoratedCycle(carrier, gamma, name)
    ref = _require(spec, "beta", str, f"cycle {name!r}")
    if ref not in cochains:
        raise SchemaError(f"cycle {name!r} refers to unknown cochain {ref!r}")
    start = _scalars(F, [spec.get("start", 0)], f"cycle {name!r}")[0]
    return integrate_potential(cochains[ref], carrier, start, name)


class SurfaceData:
    """A surface document resolved to a complex, named cochains and named cycles."""

    def __init__(self, K, F, cochains, cycles, cycle_beta):
        self.K, self.F, self.cochains, self.cycles, self.cycle_beta = K, F, cochains, cycles, cycle_beta

    def beta(self, name=None):
        if name is None:
            if len(self.cochains) != 1:
                raise SchemaError("name the cochain to use (--beta)")
            name = next(iter(self.cochains))
        if name not in self.cochains:
            raise SchemaError(f"unknown cochain {name!r}")
        return self.cochains[name]

    def cycle(self, name):
        if name not in self.cycles:
            raise SchemaError(f"unknown cycle {name!r}")
        return self.cycles[name]


def surface_from_doc(doc: dict, F: Field) -> SurfaceData:
    K = complex_of_spec(_require(doc, "surface", dict))
    cochains = {}
    for name, spec in sorted(doc.get("cochains", {}).items()):
        if not isinstance(spec, dict):
            raise SchemaError(f"cochain {name!r} must be an object")
        cochains[name] = cochain_of_spec(K, F, spec, name)
    cycles, refs = {}, {}
    for name, spec in sorted(doc.get("cycles", {}).items()):
        if not isinstance(spec, dict):
            raise SchemaError(f"cycle {name!r} must be an object")
        cycles[name] = _cycle_of_spec(K, F, cochains, spec, name)
        refs[name] = spec.get("beta")
    return SurfaceData(K, F, cochains, cycles, refs)


def cochain_from_doc(doc: dict, F: Field) -> Cochain:
    K = complex_of_spec(_require(doc, "surface", dict))
    spec = {"degree": _require(doc, "degree", int), "values": _require(doc, "values", list)}
    return cochain_of_spec(K, F, spec, "cochain")


def cochain_to_doc(x: Cochain, surface_spec: dict) -> dict:
    doc = header("cochain", x.F)
    doc.update(surface=surface_spec, degree=x.degree, values=[x.F.format_scalar(v) for v in x.values])
    return doc


# --- complexes ----------------------------------------------------------------------


def complex_from_doc(doc: dict, F: Field) -> GradedComplex:
    dims = {}
    for k, d in _require(doc, "dims", dict).items():
        if isinstance(d, bool) or not isinstance(d, int) or d < 0:
            raise SchemaError("dims must be nonnegative integers")
        dims[int(k)] = d
    diffs = {int(k): _matrix(F, M, f"differential {k}") for k, M in doc.get("differentials", {}).items()}
    return GradedComplex(F, dims, diffs)


def complex_to_doc(C: GradedComplex) -> dict:
    F = C.F
    doc = header("complex", F)
    doc["dims"] = {str(k): C.dim(k) for k in C.degrees}
    doc["differentials"] = {
        str(k): [[F.format_scalar(x) for x in row] for row in C.differential(k)]
        for k in C.degrees if C.dim(k) and C.dim(k + 1)
    }
    return doc


# --- intersection records -----------------------------------------------------------


def records_from_doc(doc: dict, F: Field):
    records = []
    for i, r in enumerate(_require(doc, "records", list)):
        if not isinstance(r, dict):
            raise SchemaError(f"record {i} must be an object")
        sign = _require(r, "sign", int, f"record {i}")
        g1, g0 = _scalars(F, [_require(r, "gamma1", (str, int), f"record {i}"),
                              _require(r, "gamma0", (str, int), f"record {i}")], f"record {i}")
        records.append(IntersectionRecord(sign, g1, g0, r.get("label")))
    codims = doc.get("codims", [1, 1])
    if not (isinstance(codims, list) and len(codims) == 2 and all(isinstance(c, int) for c in codims)):
        raise SchemaError("codims must be two integers")
    return records, tuple(codims)


def records_to_doc(records, F: Field, codims=(1, 1)) -> dict:
    doc = header("decorated_cycle", F)
    doc["codims"] = list(codims)
    doc["records"] = []
    for r in records:
        item = {"sign": r.sign, "gamma1": F.format_scalar(F(r.gamma1)), "gamma0": F.format_scalar(F(r.gamma0))}
        if r.label is not None:
            item["label"] = r.label if isinstance(r.label, (str, int)) else list(r.label)
        doc["records"].append(item)
    return doc


# --- families -----------------------------------------------------------------------


def family_from_doc(doc: dict, F: Field) -> dict:
    n = _require(doc, "n", int)
    out = {"n": n}
    for key in ("gram", "form"):
        if key in doc:
            out[key] = _matrix(F, doc[key], key)
    for key in ("classes", "isotropic"):
        if key in doc:
            out[key] = _matrix(F, doc[key], key)
    if "expected_diagonal" in doc:
        out["expected_diagonal"] = _scalars(F, doc["expected_diagonal"], "expected_diagonal")
    if "chis" in doc:
        chis = doc["chis"]
        if not all(isinstance(c, int) and not isinstance(c, bool) for c in chis):
            raise SchemaError("chis must be integers")
        out["chis"] = list(chis)
    if "weights" in doc:
        w = doc["weights"]
        if not isinstance(w, dict) or not all(isinstance(v, int) for v in w.values()):
            raise SchemaError("weights must map integer weights to integer Euler characteristics")
        try:
            out["weights"] = {int(k): v for k, v in w.items()}
        except ValueError:
            raise SchemaError("weights must be keyed by integers") from None
    if "gram" not in out and not ("classes" in out and "form" in out):
        raise SchemaError("a family needs a gram matrix or classes together with a form")
    if "classes" in out and "form" in out:
        dim = len(out["form"])
        if any(len(x) != dim for x in out["classes"] + out.get("isotropic", [])):
            raise SchemaError("class and subspace vectors must match the form dimension")
    if "gram" in out and any(len(r) != len(out["gram"]) for r in out["gram"]):
        raise SchemaError("gram must be square")
    return out


def canonical(doc: dict) -> dict:
    """The document with every scalar rewritten in canonical string form."""
    F = Field.parse(doc["field"])
    doc = validate(json.loads(json.dumps(doc)))

    def fix(node, key=None):
        if isinstance(node, dict):
            return {k: fix(v, key if key in _SCALAR_KEYS else k) for k, v in node.items()}
        if isinstance(node, list):
            return [fix(v, key) for v in node]
        if key in _SCALAR_KEYS and isinstance(node, (int, str)) and not isinstance(node, bool):
            return F.format_scalar(F.parse_scalar(node) if isinstance(node, str) else F(node))
        return node

    return fix(doc)


_SCALAR_KEYS = {"values", "gamma", "gamma0", "gamma1", "start", "gram", "form", "classes", "isotropic",
                "expected_diagonal", "differentials"}
