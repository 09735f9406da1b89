from __future__ import annotations

import random

import pytest

import oracles as O
from conftest import surface
from twisted_pairing import linalg as la
from twisted_pairing import simplicial as S
from twisted_pairing.covers import build_cover
from twisted_pairing.errors import SchemaError
from twisted_pairing.field import Field
from twisted_pairing.simplicial import Cochain


def winding_beta(K, p, windings):
    gens = len(S.tree_cotree(K)[1])
    return S.cocycle_from_windings(K, Field(p), list(windings) + [0] * (gens - len(windings)))


def oracle_betti(K, p):
    top = max(K.simplices)
    dims = {k: K.count(k) for k in range(top + 1)}
    diffs = {k: O.coboundary_matrix(K.simplices[k], K.simplices[k + 1]) for k in range(top)}
    return O.betti(p, dims, diffs)


def cover_of(name, p, windings):
    K = surface(name) if name != "circle" else S.circle(3)
    return build_cover(K, winding_beta(K, p, windings), p)


@pytest.mark.parametrize("p", [2, 3])
def test_trivial_beta_gives_disjoint_copies(p):
    cov = cover_of("torus", p, [0, 0])
    assert cov.components() == p
    assert oracle_betti(cov.total, p) == {0: p, 1: 2 * p, 2: p}
    assert cov.total_complex().betti()[0] == p


def test_circle_cover_is_connected():
    cov = cover_of("circle", 3, [1])
    assert cov.components() == 1
    assert oracle_betti(cov.total, 3) == {0: 1, 1: 1}


@pytest.mark.parametrize("name,p", [("torus", 2), ("torus", 3), ("genus2", 2)])
def test_euler_characteristic_multiplies(name, p):
    cov = cover_of(name, p, [1, 0])
    assert cov.total.euler_characteristic() == p * cov.base.euler_characteristic()


def test_torus_double_cover_cohomology_and_transfer():
    cov = cover_of("torus", 2, [1, 0])
    C = cov.total_complex()
    H = C.cohomology()
    # frozen from the dense elimination oracle
    assert oracle_betti(cov.total, 2) == {0: 1, 1: 2, 2: 1}
    assert H.dims() == {0: 1, 1: 2, 2: 1}
    F = cov.F
    for k in range(3):
        reps = H.reps[k]
        Q = la.transpose([H.project(k, cov.q(Cochain(cov.total, F, k, list(r))).values) for r in reps], len(reps))
        fixed = len(reps) - la.rank(F, la.add(F, Q, la.scale(F, -1, la.identity(F, len(reps)))), len(reps))
        assert fixed == cov.base.cochain_complex(F).betti()[k]


def test_non_closed_beta_rejected(rng):
    K = surface("torus")
    beta = Cochain.random(K, Field(3), 1, rng)
    while beta.d().is_zero():
        beta = Cochain.random(K, Field(3), 1, rng)
    with pytest.raises(SchemaError):
        build_cover(K, beta, 3)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_pushdown_pullback(p, rng):
    cov = cover_of("torus", p, [1, 1])
    F = cov.F
    for k in range(3):
        x = Cochain.random(cov.base, F, k, rng)
        assert cov.pushdown(cov.pullback(x)) == p * x
        y = cov.random_cochain(k, rng)
        total = Cochain.zero(cov.total, F, k)
        for j in range(p):
            total = total + cov.q(y, j)
        assert cov.pullback(cov.pushdown(y)) == total


@pytest.mark.parametrize("p", [2, 3, 5])
def test_deck_action_is_a_chain_automorphism(p, rng):
    cov = cover_of("genus2", p, [1, 0, 0, 1])
    for k in range(2):
        y = cov.random_cochain(k, rng)
        assert cov.q(y).d() == cov.q(y.d())
        assert cov.q(y, p) == y


def _minus_one_squared(cov, x):
    qx = cov.q(x)
    return cov.q(qx) - 2 * qx + x


@pytest.mark.parametrize("p", [2, 3, 5])
def test_iota_relations(p):
    rng = random.Random(p)
    cov = cover_of("torus", p, [1, 0])
    F = cov.F
    for _ in range(35):
        k = rng.randrange(3)
        x, y = cov.random_cochain(k, rng), cov.random_cochain(2 - k, rng)
        assert cov.iota(_minus_one_squared(cov, x), y) == 0
        assert cov.iota(x, _minus_one_squared(cov, y)) == 0
        integral = S.integrate(S.cup(cov.pushdown(x), cov.pushdown(y)))
        assert F.norm(cov.iota(cov.q(x), y) - cov.iota(x, y) - integral) == 0


def test_iota_matches_brute_force_sum(rng):
    cov = cover_of("torus", 3, [1, 0])
    K, p = cov.total, 3
    for _ in range(5):
        x, y = cov.random_cochain(1, rng), cov.random_cochain(1, rng)
        yd = dict(zip(K.simplices[1], y.values))
        total = 0
        for j in range(1, p):
            xd = dict(zip(K.simplices[1], cov.q(x, -j).values))
            prod = {T: O.cup_value(xd, yd, 1, 1, T) for T in K.simplices[2]}
            total += j * O.integrate_value(K.fundamental_cycle, prod)
        assert cov.iota(x, y) == total % p
    assert cov.iota(Cochain.zero(K, cov.F, 1), y) == 0


def test_iota_rejects_wrong_degrees(rng):
    cov = cover_of("torus", 3, [1, 0])
    with pytest.raises(SchemaError):
        cov.iota(cov.random_cochain(1, rng), cov.random_cochain(0, rng))


def test_section_inverts_quotient(rng):
    cov = cover_of("torus", 5, [2, 1])
    for k in range(3):
        a, b = Cochain.random(cov.base, cov.F, k, rng), Cochain.random(cov.base, cov.F, k, rng)
        assert cov.quotient(cov.section(a, b)) == (a, b)


def combo(F, rng, reps, n):
    coeffs = [F.random_element(rng) for _ in reps]
    return [F.norm(sum(c * r[i] for c, r in zip(coeffs, reps))) for i in range(n)]


@pytest.mark.parametrize("name,p,w", [("torus", 3, [1, 0]), ("torus", 5, [0, 1]), ("genus2", 3, [1, 0, 0, 1])])
def test_cover_pairing_descends(name, p, w, rng):
    cov = cover_of(name, p, w)
    tw = cov.twisted_complex()
    F = cov.F
    C = tw.complex
    H = C.cohomology()
    for _ in range(25):
        k = rng.randrange(3)
        if not H.dim(k) or not H.dim(2 - k):
            continue
        u, v = combo(F, rng, H.reps[k], C.dim(k)), combo(F, rng, H.reps[2 - k], C.dim(2 - k))
        base = cov.I(tw.split(k, u), tw.split(2 - k, v))
        if k:
            z = C.apply_d(k - 1, [F.random_element(rng) for _ in range(C.dim(k - 1))])
            u2 = [F.norm(a + b) for a, b in zip(u, z)]
            assert cov.I(tw.split(k, u2), tw.split(2 - k, v)) == base
            assert cov.I(tw.split(k, z), tw.split(2 - k, v)) == 0
        if k < 2:
            z = C.apply_d(1 - k, [F.random_element(rng) for _ in range(C.dim(1 - k))])
            v2 = [F.norm(a + b) for a, b in zip(v, z)]
            assert cov.I(tw.split(k, u), tw.split(2 - k, v2)) == base


def test_cover_pairing_rejects_non_cocycles(rng):
    cov = cover_of("torus", 3, [1, 0])
    tw = cov.twisted_complex()
    a = Cochain.random(cov.base, cov.F, 1, rng)
    while tw.is_cocycle(a, a):
        a = Cochain.random(cov.base, cov.F, 1, rng)
    with pytest.raises(SchemaError):
        cov.I((a, a), (a, a))


def test_trivial_beta_twisted_is_doubled():
    cov = cover_of("torus", 3, [0, 0])
    assert cov.twisted_complex().cohomology().dims() == {0: 2, 1: 4, 2: 2}


@pytest.mark.parametrize("name,p,w,dims", [
    ("torus", 3, [1, 0], {0: 1, 1: 2, 2: 1}),
    ("torus", 3, [1, 1], {0: 1, 1: 2, 2: 1}),
    ("torus", 2, [0, 1], {0: 1, 1: 2, 2: 1}),
    ("genus2", 3, [1, 0, 0, 1], {0: 1, 1: 6, 2: 1}),
])
def test_twisted_les(name, p, w, dims):
    tw = cover_of(name, p, w).twisted_complex()
    C = tw.complex
    diffs = {k: C.differential(k) for k in C.degrees if C.dim(k + 1)}
    assert O.betti(p, {k: C.dim(k) for k in C.degrees}, diffs) == dims
    ok, rows = tw.les_check()
    assert ok, rows
    assert C.cohomology().dims() == dims


def test_circle_twisted_degree_zero_two_ways():
    tw = cover_of("circle", 3, [1]).twisted_complex()
    C = tw.complex
    naive = O.betti(3, {k: C.dim(k) for k in C.degrees}, {0: C.differential(0)})
    ok, rows = tw.les_check()
    assert ok
    les0 = next(h for k, h, _, _ in rows if k == 0)
    assert naive[0] == les0 == C.cohomology().dim(0) == 1


def test_inclusion_and_projection_are_chain_maps():
    tw = cover_of("torus", 3, [1, 0]).twisted_complex()
    assert tw.inclusion().chain_defect() is None
    assert tw.projection().chain_defect() is None
    assert tw.boundary_map().chain_defect() is None
