"""Command-line interface: ``twisted-pairing <command> FILE [options]``.

Exit codes: 0 success, 2 schema error, 3 axiom or flag failure, 4 identity defect.
"""
from __future__ import annotations

import argparse
import json
import random
import sys

from . import bounds
from . import documents as docs
from .covers import build_cover
from .cycles import bullet_records, intersect, swap_records
from .errors import AxiomViolation, IdentityDefect, SchemaError
from .field import Field

EXIT_OK, EXIT_SCHEMA, EXIT_AXIOM, EXIT_DEFECT = 0, 2, 3, 4


class Outcome:
    """Ordered report rows plus the exit status they imply."""

    def __init__(self, title):
        self.title = title
        self.rows = []
        self.status = EXIT_OK

    def add(self, key, value):
        self.rows.append((key, value))

    def fail(self, code):
        self.status = max(self.status, code)


def _fmt(F, v):
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "n/a"
    if isinstance(v, (int, str)):
        return str(v)
    if isinstance(v, dict):
        return {str(k): _fmt(F, x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_fmt(F, x) for x in v]
    return F.format_scalar(v)


def _json_value(F, v):
    """Like _fmt, but booleans, integers and missing values stay native JSON."""
    if v is None or isinstance(v, (bool, int)):
        return v
    if isinstance(v, dict):
        return {str(k): _json_value(F, x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(F, x) for x in v]
    return _fmt(F, v)


def _scalar(F, v):
    """Field element printed as a fraction or residue."""
    if F.characteristic:
        return str(int(v) % F.characteristic)
    return F.format_scalar(v)


def emit(out: Outcome, F, report: str, stream):
    if report == "json":
        payload = {"command": out.title, "field": F.spec, "exit": out.status,
                   "results": {k: _json_value(F, v) for k, v in out.rows}}
        stream.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
        return
    width = max((len(k) for k, _ in out.rows), default=0)
    for k, v in out.rows:
        v = _fmt(F, v)
        text = json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v
        stream.write(f"{k.ljust(width)}  {text}\n")


# --- commands -------------------------------------------------------------------


def _field(args, doc):
    return args.field or docs.field_of(doc)


def cmd_cohomology(args):
    doc = docs.load(args.file)
    F = _field(args, doc)
    kind = doc["kind"]
    if kind == "complex":
        C = docs.complex_from_doc(doc, F)
    elif kind == "surface":
        data = docs.surface_from_doc(doc, F)
        if args.beta:
            from .conealg.cone import cone_complex
            from .conealg.model import from_simplicial
            C = cone_complex(from_simplicial(data.K, data.beta(args.beta)))
        else:
            C = data.K.cochain_complex(F)
    else:
        raise SchemaError(f"cohomology needs a complex or surface document, not {kind!r}")
    out = Outcome("cohomology")
    betti = C.betti()
    for k in C.degrees:
        out.add(f"H^{k}", betti.get(k, 0))
    out.add("euler characteristic", sum((-1) ** k * b for k, b in betti.items()))
    return out, F


def cmd_cover(args):
    doc = docs.load(args.file)
    p = args.p or (args.field.characteristic if args.field else docs.field_of(doc).characteristic)
    if not p:
        raise SchemaError("the cover needs a prime: pass --p or --field p:N")
    F = Field(p)
    data = docs.surface_from_doc(doc, F)
    beta = data.beta(args.beta)
    if not beta.d().is_zero():
        raise AxiomViolation("beta is not a cocycle")
    cover = build_cover(data.K, beta, p)
    tw = cover.twisted_complex()
    base = data.K.dims()
    total = cover.total.dims()
    out = Outcome("cover")
    out.add("sheets", p)
    out.add("components", cover.components())
    out.add("base cells", base)
    out.add("cover cells", total)
    free = all(total.get(k, 0) == p * n for k, n in base.items())
    out.add("free module of rank base", free)
    out.add("twisted complex dims", tw.complex.dims)
    out.add("twisted cohomology", tw.cohomology().dims())
    les_ok, _ = tw.les_check()
    out.add("long exact sequence", les_ok)
    if not (free and les_ok):
        out.fail(EXIT_DEFECT)
    return out, F


def _pair_of(args, doc, F):
    data = docs.surface_from_doc(doc, F)
    names = args.classes or args.cycles or sorted(data.cycles)[:2]
    if len(names) != 2:
        raise SchemaError("name two cycles")
    L0, L1 = (data.cycle(n) for n in names)
    refs = {data.cycle_beta.get(n) for n in names} - {None}
    if args.beta:
        beta = data.beta(args.beta)
    elif len(refs) == 1:
        beta = data.beta(refs.pop())
    else:
        beta = data.beta()
    if L0.is_dual and not L1.is_dual:
        raise SchemaError("the first cycle must be an edge loop and the second a dual loop")
    return data, beta, L0, L1


def cmd_pair(args):
    from .recovery import CONE_SIGN, recover

    doc = docs.load(args.file)
    F = _field(args, doc)
    data, beta, L0, L1 = _pair_of(args, doc, F)
    rec = recover(data.K, beta, L0, L1)
    out = Outcome("pair")
    out.add("bullet", _scalar(F, rec.bullet))
    out.add("intersection number", rec.intersection)
    if args.route in ("cover", "both"):
        out.add("I (covering route)", _scalar(F, rec.cover) if rec.cover is not None else "n/a (needs GF(p))")
        out.add("cover equals bullet", rec.cover_ok if rec.cover is not None else None)
        if not rec.cover_ok:
            out.fail(EXIT_DEFECT)
    if args.route in ("cone", "both"):
        out.add("I (cone route)", _scalar(F, rec.cone))
        out.add(f"cone equals {CONE_SIGN:+d} * bullet", rec.cone_ok)
        if not rec.cone_ok:
            out.fail(EXIT_DEFECT)
    return out, F


def cmd_bullet(args):
    if args.records is not None:
        text = docs.read_text(args.records)
        doc = docs.loads(text) if text.strip() else None
    elif args.file:
        doc = docs.load(args.file)
    else:
        raise SchemaError("give a document or --records")
    F = args.field or (docs.field_of(doc) if doc else Field(0))
    if doc is None:
        records, codims = [], (1, 1)
    elif doc["kind"] == "decorated_cycle":
        records, codims = docs.records_from_doc(doc, F)
    elif doc["kind"] == "surface":
        data, beta, L0, L1 = _pair_of(args, doc, F)
        records, codims = intersect(data.K, beta, L0, L1), (1, 1)
    else:
        raise SchemaError(f"bullet needs records or a surface document, not {doc['kind']!r}")
    value = bullet_records(records, F)
    swapped = bullet_records(swap_records(records, codims), F)
    eps = (-1) ** (codims[0] * codims[1])
    sym_ok = F.is_zero(swapped + eps * value)
    out = Outcome("bullet")
    out.add("bullet", _scalar(F, value))
    out.add("records", len(records))
    out.add("reversed bullet", _scalar(F, swapped))
    out.add("symmetry law", sym_ok)
    if not sym_ok:
        out.fail(EXIT_DEFECT)
    return out, F


def _model_of(doc, F, seed):
    from .conealg.model import from_simplicial
    from .conealg.synthetic import corrupt_star, exterior_bv_model, synthetic

    recipe = doc["recipe"]
    if recipe == "simplicial":
        K = docs.complex_of_spec(doc["surface"])
        model = from_simplicial(K, docs.cochain_of_spec(K, F, doc["beta"], "beta"))
    elif recipe == "synthetic":
        inst = synthetic(seed=doc.get("seed", seed), flags=tuple(doc.get("flags", ())) + ("model_only",),
                         n=doc.get("n", 1), F=F, genus=doc.get("genus", 2))
        model = inst.model
    else:
        model = exterior_bv_model(F, n=doc.get("n", 1))
    if "corrupt_star" in doc:
        model = corrupt_star(model, seed=doc["corrupt_star"])
    return model


def cmd_cone_check(args):
    from .conealg.cone import ConePairing, cohomology_nondegenerate
    from .conealg.model import check_axioms

    doc = docs.load(args.file)
    if doc["kind"] != "floer_model":
        raise SchemaError(f"cone-check needs a floer_model document, not {doc['kind']!r}")
    F = _field(args, doc)
    model = _model_of(doc, F, args.seed)
    out = Outcome("cone-check")
    report = check_axioms(model)
    for name, r in report.results.items():
        if r.status == "cohomology":
            text = f"holds on cohomology; strict form fails at {r.witness}"
        else:
            text = r.status if r.witness is None else f"{r.status} at {r.witness}"
        out.add(f"axiom {name}", text)
        if r.status == "fail":
            out.fail(EXIT_AXIOM)
    if out.status:
        return out, F
    cone = ConePairing(model)
    defect = cone.chain_map_defect()
    out.add("iota chain map", "pass" if defect is None else f"fail at {defect}")
    if defect is not None:
        out.fail(EXIT_DEFECT)
    nondeg = cohomology_nondegenerate(model)
    out.add("pairing nondegenerate on cohomology", nondeg)
    if nondeg:
        rows = cone.nondegeneracy_report()
        full = all(r[3] for r in rows.values())
        out.add("cone pairing ranks", {k: f"{r[2]}/{r[0]}" for k, r in rows.items()})
        out.add("cone pairing nondegenerate", full)
        if not full:
            out.fail(EXIT_DEFECT)
    rng = random.Random(args.seed)
    H = cone.complex.cohomology()
    worst = F.zero
    for k in cone.complex.degrees:
        s = 2 * cone.n - k
        for a in H.reps.get(k, [])[:4]:
            for b in H.reps.get(s, [])[:4]:
                c = F.random_element(rng) or F.one
                d = cone.symmetry_defect(k, [F.norm(c * x) for x in a], b)
                worst = worst or d
    out.add("symmetry defect", _scalar(F, worst))
    if worst:
        out.fail(EXIT_DEFECT)
    les_ok, _ = cone.les_check()
    out.add("long exact sequence", les_ok)
    if not les_ok:
        out.fail(EXIT_DEFECT)
    return out, F


def cmd_bound(args):
    doc = docs.load(args.file)
    if doc["kind"] != "family":
        raise SchemaError(f"bound needs a family document, not {doc['kind']!r}")
    F = _field(args, doc)
    fam = docs.family_from_doc(doc, F)
    n = fam["n"]
    out = Outcome("bound")
    gram = fam.get("gram")
    form = None
    if "form" in fam:
        form = bounds.IntersectionForm(F, fam["form"], n)
        computed = form.gram(fam["classes"]) if "classes" in fam else None
        if gram is None:
            gram = computed
        elif computed is not None and computed != gram:
            out.add("gram matches classes", False)
            out.fail(EXIT_DEFECT)
    rep = bounds.gram_bound(F, gram, classes=fam.get("classes"), form=fam.get("form"),
                            isotropic=fam.get("isotropic"), expected_diagonal=fam.get("expected_diagonal"),
                            chis=fam.get("chis"))
    for k, v in rep.rows():
        out.add(k, v)
    if rep.diagonal_ok is False or rep.half_bound_ok is False or rep.definite_ok is False or rep.bound_ok is False:
        out.fail(EXIT_DEFECT)
    if rep.isotropic_valid is False:
        out.fail(EXIT_AXIOM)
    if form is not None and "chis" in fam and "classes" in fam:
        verdict = bounds.folk_independent(fam["classes"], fam["chis"], form)
        out.add("euler verdict", verdict.verdict)
        if verdict.reason:
            out.add("euler verdict reason", verdict.reason)
    if "weights" in fam:
        data = bounds.WeightedEulerData(fam["weights"])
        ok, lhs, rhs = bounds.shift_identity_check(data)
        out.add("weighted derivative", bounds.mukai_derivative(data))
        out.add("shift identity", ok)
        if not ok:
            out.fail(EXIT_DEFECT)
    return out, F


COMMANDS = {
    "cohomology": cmd_cohomology,
    "cover": cmd_cover,
    "pair": cmd_pair,
    "bullet": cmd_bullet,
    "cone-check": cmd_cone_check,
    "bound": cmd_bound,
}


def _field_arg(text):
    try:
        return Field.parse(text)
    except SchemaError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=_field_arg, default=None, help="q or p:<prime> (default: the document's)")
    common.add_argument("--seed", type=int, default=0, help="seed for synthetic generators and sampling")
    common.add_argument("--report", choices=("text", "json"), default="text")

    parser = argparse.ArgumentParser(prog="twisted-pairing", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cohomology", parents=[common], help="Betti numbers of a complex or surface")
    p.add_argument("file")
    p.add_argument("--beta", help="cohomology of the cone of multiplication by this cochain")

    p = sub.add_parser("cover", parents=[common], help="cyclic cover and twisted complex report")
    p.add_argument("file")
    p.add_argument("--p", type=int)
    p.add_argument("--beta")

    p = sub.add_parser("pair", parents=[common], help="pairing of two decorated cycles by both routes")
    p.add_argument("file")
    p.add_argument("--classes", nargs=2, metavar="ID")
    p.add_argument("--beta")
    p.add_argument("--route", choices=("cover", "cone", "both"), default="both")
    p.set_defaults(cycles=None)

    p = sub.add_parser("bullet", parents=[common], help="twisted intersection count")
    p.add_argument("file", nargs="?")
    p.add_argument("--cycles", nargs=2, metavar="ID")
    p.add_argument("--records", metavar="FILE")
    p.add_argument("--beta")
    p.set_defaults(classes=None)

    p = sub.add_parser("cone-check", parents=[common], help="axioms and cone pairing checks for a model")
    p.add_argument("file")

    p = sub.add_parser("bound", parents=[common], help="independence and rank bounds for a family")
    p.add_argument("file")
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_SCHEMA if exc.code else EXIT_OK
    try:
        out, F = COMMANDS[args.command](args)
    except SchemaError as exc:
        stderr.write(f"schema error: {exc}\n")
        return EXIT_SCHEMA
    except AxiomViolation as exc:
        stderr.write(f"axiom failure: {exc}\n")
        return EXIT_AXIOM
    except IdentityDefect as exc:
        stderr.write(f"identity defect: {exc}\n")
        return EXIT_DEFECT
    emit(out, F, args.report, stdout)
    return out.status


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
