"""Acceptance suite: one check per criterion, each reporting a PASS/FAIL line.

Run under pytest (the lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import functools
import io
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import instances  # noqa: E402
import oracles as O  # noqa: E402
from conftest import ACCEPTANCE, simplicial_model, surface  # noqa: E402
from twisted_pairing import simplicial as S  # noqa: E402
from twisted_pairing.bounds import (WeightedEulerData, a_m_bound, a_m_witness, brute_force_relation,  # noqa: E402
                                    dual_endomorphism, duality_supertrace_identities, eigenvalue_pairing,
                                    folk_independent, gram_bound, semicharacteristic, shift_identity_check,
                                    traces_of)
from twisted_pairing.cli import main  # noqa: E402
from twisted_pairing.conealg.cone import ConePairing, cohomology_nondegenerate  # noqa: E402
from twisted_pairing.conealg.lagrangian import cardy_check, hexagon_kills_coboundaries, phi_on_cohomology  # noqa: E402
from twisted_pairing.conealg.traces import supertrace  # noqa: E402
from twisted_pairing.conealg.synthetic import synthetic  # noqa: E402
from twisted_pairing.covers import build_cover  # noqa: E402
from twisted_pairing.cycles import bullet_records, swap_records  # noqa: E402
from twisted_pairing.field import GF, QQ, Field  # noqa: E402
from twisted_pairing.recovery import random_decorated_pair, recover  # noqa: E402

WINDINGS = [(0, 1), (1, 0), (1, 1)]
# dim H of the cone of beta over GF(3), frozen from the dense elimination oracle
LES_DIMS = {"torus": {0: 1, 1: 2, 2: 1}, "genus2": {0: 1, 1: 6, 2: 1}}


def criterion(number, title):
    def wrap(check):
        @functools.wraps(check)
        def run():
            try:
                detail = check()
            except AssertionError as exc:
                ACCEPTANCE[number] = f"criterion {number:2d} FAIL  {title}: {exc}"
                print(ACCEPTANCE[number])
                raise
            ACCEPTANCE[number] = f"criterion {number:2d} PASS  {title}" + (f" ({detail})" if detail else "")
            print(ACCEPTANCE[number])

        return run

    return wrap


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    values = dict(line.split("  ", 1) for line in out.getvalue().splitlines() if "  " in line)
    return code, {k.strip(): v.strip() for k, v in values.items()}


@criterion(1, "figure-eight bullet count")
def test_c01_figure_eight():
    for field in ("q", "p:3", "p:5", "p:7"):
        code, res = cli("bullet", "figure_eight", "--field", field)
        assert code == 0 and res["bullet"] == "2", (field, res)
    code, res = cli("bullet", "figure_eight", "--field", "p:2")
    assert code == 0 and res["bullet"] == "0"
    return "2 over Q, GF(3), GF(5), GF(7); 0 over GF(2)"


@criterion(2, "bullet symmetry law")
def test_c02_symmetry():
    rng = random.Random(2)
    for t in range(100):
        F = (QQ, GF(3), GF(5))[t % 3]
        codims = ((1, 1), (1, 2), (2, 2), (3, 1))[t % 4]
        recs = instances.records(rng, F, rng.randint(0, 8))
        eps = (-1) ** (codims[0] * codims[1])
        assert F.is_zero(bullet_records(swap_records(recs, codims), F) + eps * bullet_records(recs, F)), t
    return "100 record configurations"


@criterion(3, "covering descent and q-relation")
def test_c03_descent():
    for p in (2, 3, 5):
        rng = random.Random(30 + p)
        K = surface("torus")
        cov = build_cover(K, S.cocycle_from_windings(K, GF(p), [1, 0]), p)
        F = cov.F
        for _ in range(100):
            k = rng.randrange(3)
            x, y = cov.random_cochain(k, rng), cov.random_cochain(2 - k, rng)
            qx = cov.q(x)
            sq = cov.q(qx) - 2 * qx + x
            assert cov.iota(sq, y) == 0
            integral = S.integrate(S.cup(cov.pushdown(x), cov.pushdown(y)))
            assert F.is_zero(cov.iota(qx, y) - cov.iota(x, y) - integral)
    return "100 pairs for each p in {2, 3, 5}"


@criterion(4, "long exact sequence dimensions")
def test_c04_les():
    for name in ("torus", "genus2"):
        for w in WINDINGS:
            model = simplicial_model(name, 3, w)
            cone = ConePairing(model)
            ok, rows = cone.les_check()
            assert ok, (name, w, rows)
            assert cone.complex.cohomology().dims() == LES_DIMS[name]
            K = surface(name)
            gens = len(S.tree_cotree(K)[1])
            beta = S.cocycle_from_windings(K, GF(3), list(w) + [0] * (gens - 2))
            tw = build_cover(K, beta, 3).twisted_complex()
            ok, rows = tw.les_check()
            assert ok, (name, w, rows)
            assert tw.cohomology().dims() == LES_DIMS[name]
    return "torus and genus 2, three windings each, cone and covering complexes"


@criterion(5, "iota is a chain map")
def test_c05_chain_map():
    for name in ("torus", "genus2"):
        for p, w in ((3, (1, 0)), (0, (1, 1))):
            assert ConePairing(simplicial_model(name, p, w)).chain_map_defect() is None, (name, p, w)
    return "every basis pair, torus and genus 2"


def _cocycle(F, rng, H, k, n):
    reps = H.reps.get(k, [])
    coeffs = [F.random_element(rng) for _ in reps]
    return [F.norm(sum(c * r[i] for c, r in zip(coeffs, reps))) for i in range(n)]


@criterion(6, "literal form of the cone pairing and its symmetry defect")
def test_c06_literal_form_and_symmetry():
    for name in ("torus", "genus2"):
        rng = random.Random(len(name))
        cone = ConePairing(simplicial_model(name, 3, (1, 0)))
        F, C, P1 = cone.F, cone.complex, cone.model.pairing(1)
        H = C.cohomology()
        for _ in range(100):
            k = rng.randrange(3)
            a = _cocycle(F, rng, H, k, C.dim(k))
            b = _cocycle(F, rng, H, 2 - k, C.dim(2 - k))
            assert cone.symmetry_defect(k, a, b) == 0
            xi0, _ = cone.split(k, a)
            x1 = [F.random_element(rng) for _ in range(cone.pos.dim(2 - k))]
            b0 = cone.join([F.zero] * cone.neg.dim(2 - k), x1)
            assert cone.iota(k, a, b0) == F.norm(-F.sign(k) * P1(2 - k, x1, xi0))
    return "100 cocycle pairs per surface"


@criterion(7, "nondegeneracy of the cone pairing")
def test_c07_nondegeneracy():
    count = 0
    for name in ("torus", "genus2"):
        for p in (0, 3, 5):
            for w in WINDINGS + [(0, 0)]:
                model = simplicial_model(name, p, w)
                if not cohomology_nondegenerate(model):
                    continue
                report = ConePairing(model).nondegeneracy_report()
                assert all(full for *_, full in report.values()), (name, p, w, report)
                count += 1
    assert count == 24
    return f"{count} surface models"


def _pairs(K, F, rng, want=6):
    """Decorated pairs, preferring nonzero bullet counts, at least ``want`` of them."""
    found, zeros = [], []
    for _ in range(60):
        beta, L0, L1 = random_decorated_pair(K, F, rng)
        rec = recover(K, beta, L0, L1)
        (found if rec.bullet else zeros).append(rec)
        if len(found) >= want:
            break
    return (found + zeros)[:max(want, len(found))]


@criterion(8, "recovery of the bullet count by both pairings")
def test_c08_recovery():
    notes = []
    for name in ("torus", "genus2"):
        K = surface(name)
        for p in (3, 5, 0):
            F = Field(p)
            recs = _pairs(K, F, random.Random(80 + p + len(name)))
            assert len(recs) >= 6
            for r in recs:
                assert r.cone_ok, (name, p, r)
                if p:
                    assert r.cover is not None and r.cover_ok, (name, p, r)
            nonzero = sum(1 for r in recs if r.bullet)
            route = "cover+cone" if p else "cone; cover N/A over Q"
            notes.append(f"{name}/{F!r}: {len(recs)} pairs, {nonzero} nonzero, {route}")
    return "; ".join(notes)


@criterion(9, "supertrace identities")
def test_c09_supertraces():
    rng = random.Random(9)
    counts = dict(sphere=0, even=0, semichar=0, eigen=0)
    for t in range(60):
        F = (QQ, GF(3), GF(5), GF(2))[t % 4]
        n = 1 + t % 4
        blocks = dual_endomorphism(F, rng, {0: 1, n: 1}, n)
        rep = duality_supertrace_identities(F, traces_of(F, blocks), {0: 1, n: 1}, n)
        assert rep.checks["sphere"].status == "pass" and rep.supertrace == F.sign(n)
        counts["sphere"] += 1
    for t in range(60):
        n = (2, 4)[t % 2]
        F = (QQ, GF(3), GF(2))[t % 3]
        mid = rng.choice([0, 2, 4])
        b = {0: 1, n: 1, n // 2: mid}
        if n == 4:
            b[1] = b[3] = rng.randint(0, 2)
        blocks = dual_endomorphism(F, rng, b, n)
        rep = duality_supertrace_identities(F, traces_of(F, blocks), b, n, blocks=blocks)
        assert rep.checks["even"].status == "pass"
        assert F.norm(2 * rep.supertrace) == F(rep.euler) or F.characteristic == 2
        counts["even"] += 1
    for t in range(60):
        n = (1, 3, 5)[t % 3]
        F = GF(2)
        b = {k: rng.randint(0, 2) for k in range((n + 1) // 2)}
        b[0] = 1
        b.update({n - k: v for k, v in list(b.items())})
        blocks = dual_endomorphism(F, rng, b, n)
        rep = duality_supertrace_identities(F, traces_of(F, blocks), b, n, blocks=blocks)
        betti = [b[k] for k in range(n + 1)]
        assert rep.supertrace == semicharacteristic(betti, n)
        counts["semichar"] += 1
    for t in range(60):
        F = GF(2)
        n = (1, 2, 3)[t % 3]
        b = {0: 1, n: 1}
        if n == 2:
            b[1] = rng.choice([0, 2, 4])
        if n == 3:
            b[1] = b[2] = rng.randint(1, 3)
        blocks = dual_endomorphism(F, rng, b, n)
        ok, table = eigenvalue_pairing(F, blocks, n)
        assert ok, table
        counts["eigen"] += 1
    sphere = synthetic(0, ("sphere",), n=1, F=GF(5)).ext

    assert supertrace(GF(5), phi_on_cohomology(sphere)) == GF(5).sign(1)
    return ", ".join(f"{k} {v}" for k, v in counts.items())


@criterion(10, "independence and rank bounds")
def test_c10_bounds():
    folk = 0
    for p in (2, 3):
        F = Field(p)
        rng = random.Random(100 + p)
        for _ in range(150):
            classes, chis, form = instances.folk_instance(F, rng)
            v = folk_independent(classes, chis, form)
            relation = brute_force_relation(F, classes)
            assert not (v.independent and relation is not None), (classes, chis)
            assert O.nonzero_relation(p, classes) == (None if relation is None else tuple(relation))
            folk += 1
    rng = random.Random(10)
    for _ in range(200):
        gram, classes, M, W = instances.isotropic_instance(QQ, rng)
        rep = gram_bound(QQ, gram, classes=classes, form=M, isotropic=W)
        assert rep.isotropic_valid and rep.half_bound_ok, rep
        assert rep.intersection_dim <= len(gram) // 2
    for m in range(1, 13):
        assert a_m_bound(m) == (m + 1) // 2 and a_m_witness(m).ok, m
    return f"{folk} folk instances, 200 isotropic instances, A_1..A_12"


@criterion(11, "six-term map and the supertrace relation")
def test_c11_hexagon():
    count = 0
    for seed in range(5):
        for n in (1, 2, 3):
            for flags in ((), ("plain",), ("beta_zero",)):
                ext = synthetic(seed, flags, n=n, F=(GF(3), QQ)[seed % 2]).ext
                assert hexagon_kills_coboundaries(ext)[0], (seed, n, flags)
                assert cardy_check(ext).defect == 0, (seed, n, flags)
                count += 1
    return f"{count} flag-complete instances"


@criterion(12, "weighted Euler characteristic shift identity")
def test_c12_weighted():
    rng = random.Random(12)
    for _ in range(100):
        ok, lhs, rhs = shift_identity_check(WeightedEulerData(instances.weighted_instance(rng)))
        assert ok, (lhs, rhs)
    return "100 random weight data"


if __name__ == "__main__":
    failed = 0
    for name, check in sorted(globals().items()):
        if name.startswith("test_c"):
            try:
                check()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
