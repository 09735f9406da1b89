from __future__ import annotations

import random

import pytest

import instances
from twisted_pairing import linalg as la
from twisted_pairing.bounds import (IntersectionForm, WeightedEulerData, a_m_bound, a_m_witness, brute_force_relation,
                                    definiteness, dual_endomorphism, duality_supertrace_identities,
                                    eigenvalue_pairing, folk_independent, gram_bound, mukai_derivative,
                                    self_intersection_euler, semicharacteristic, shift_identity_check, traces_of)
from twisted_pairing.errors import IdentityDefect, SchemaError
from twisted_pairing.field import GF, QQ, Field


@pytest.mark.parametrize("n,chi,expected", [(1, 0, 0), (3, 0, 0), (2, 2, -2), (4, 2, 2), (1, 5, -5), (3, 4, 4)])
def test_self_intersection(n, chi, expected):
    assert self_intersection_euler(n, chi) == expected


def test_form_symmetry_is_checked():
    IntersectionForm(QQ, [[0, 1], [-1, 0]], 1)
    with pytest.raises(SchemaError):
        IntersectionForm(QQ, [[0, 1], [1, 0]], 1)
    with pytest.raises(SchemaError):
        IntersectionForm(QQ, [[0, 1], [-1, 0]], 2)
    IntersectionForm(GF(2), [[0, 1], [1, 0]], 1)


def test_folk_diagonal_case():
    F = QQ
    form = IntersectionForm(F, [[-2, 0], [0, -2]], 2)
    v = folk_independent([[1, 0], [0, 1]], [2, 2], form)
    assert v.independent and v.certificate == [-2, -2]


def test_folk_torus_is_inconclusive():
    form = IntersectionForm(QQ, [[0]], 1)
    v = folk_independent([[1]], [0], form)
    assert not v.independent and v.failing == [0]


def test_folk_rejects_mismatches():
    form = IntersectionForm(QQ, [[1, 0], [0, 1]], 0)
    with pytest.raises(SchemaError):
        folk_independent([[1, 0]], [1, 1], form)
    with pytest.raises(SchemaError):
        folk_independent([[1, 0, 0]], [1], form)
    v = folk_independent([[1, 1], [1, 0]], [2, 1], form)
    assert v.verdict == "inconclusive" and "orthogonal" in v.reason


def test_folk_euler_vanishing_mod_p():
    F = GF(3)
    form = IntersectionForm(F, [[0]], 0)
    v = folk_independent([[1]], [3], form)
    assert not v.independent


@pytest.mark.parametrize("p", [2, 3])
def test_folk_against_brute_force(p):
    rng = random.Random(p)
    F = Field(p)
    verdicts = set()
    for _ in range(150):
        classes, chis, form = instances.folk_instance(F, rng)
        v = folk_independent(classes, chis, form)
        verdicts.add(v.verdict)
        if v.independent:
            assert brute_force_relation(F, classes) is None
    assert verdicts == {"independent", "inconclusive"}


def test_brute_force_needs_finite_field():
    with pytest.raises(SchemaError):
        brute_force_relation(QQ, [[1]])
    assert brute_force_relation(GF(3), [[1, 2], [2, 1]]) == [1, 1]


@pytest.mark.parametrize("betti,n,expected", [([1, 0], 3, 1), ([1, 1], 3, 0), ([1, 0, 0], 5, 1), ([1], 1, 1),
                                              ([1, 1, 1, 1], 3, 0)])
def test_semicharacteristic(betti, n, expected):
    assert semicharacteristic(betti, n) == expected


def test_semicharacteristic_needs_odd_n():
    with pytest.raises(SchemaError):
        semicharacteristic([1, 0, 1], 2)


def test_definiteness():
    assert definiteness(QQ, [[2, 0], [0, 1]]) == 1
    assert definiteness(QQ, [[-1, 0], [0, -3]]) == -1
    assert definiteness(QQ, [[1, 0], [0, -1]]) == 0
    assert definiteness(GF(5), [[1]]) == 0


def test_gram_scaled_identity_is_independent():
    for n in (1, 2):
        F = QQ
        gram = [[F((-1) ** n) if i == j else F.zero for j in range(3)] for i in range(3)]
        rep = gram_bound(F, gram)
        assert rep.nondegenerate and rep.independent


def test_gram_with_zero_row_asserts_nothing():
    rep = gram_bound(QQ, [[0, 0], [0, 1]])
    assert not rep.nondegenerate and rep.independent is None and rep.half_bound_ok is None


def test_isotropic_bound_on_random_instances():
    rng = random.Random(3)
    dims = set()
    for _ in range(100):
        gram, classes, M, W = instances.isotropic_instance(QQ, rng)
        rep = gram_bound(QQ, gram, classes=classes, form=M, isotropic=W)
        assert rep.isotropic_valid and rep.half_bound_ok and rep.ok
        assert rep.recompute() == rep
        dims.add(rep.intersection_dim)
    assert max(dims) >= 1


def test_definite_family_misses_isotropic_subspace():
    F = QQ
    M = [[F(1), 0, 0, 0], [0, F(1), 0, 0], [0, 0, F(-1), 0], [0, 0, 0, F(-1)]]
    W = [[1, 0, 1, 0], [0, 1, 0, 1]]
    classes = [[0, 0, 1, 0], [0, 0, 0, 1]]
    gram = IntersectionForm(F, M, 0).gram(classes)
    rep = gram_bound(F, gram, classes=classes, form=M, isotropic=W, expected_diagonal=[-1, -1])
    assert rep.definite == -1 and rep.definite_ok and rep.diagonal_ok


def test_non_isotropic_subspace_flagged():
    F = QQ
    M = [[1, 0], [0, 1]]
    rep = gram_bound(F, [[1]], classes=[[1, 0]], form=M, isotropic=[[1, 0]])
    assert rep.isotropic_valid is False
    with pytest.raises(SchemaError):
        gram_bound(F, [[1]], isotropic=[[1, 0]])


# supertrace identities


def betti_for(F, rng, n):
    b = {k: rng.randint(0, 3) for k in range((n + 1) // 2)}
    b[0] = 1
    for k in list(b):
        b[n - k] = b[k]
    if n % 2 == 0:
        odd_ok = F.characteristic != 2 and (n // 2) % 2 == 0
        b[n // 2] = rng.randint(0, 3) if odd_ok else rng.choice([0, 2, 4])
    return b


@pytest.mark.parametrize("p", [0, 2, 3, 5])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_dual_endomorphisms_satisfy_identities(p, n):
    rng = random.Random(10 * p + n)
    F = Field(p)
    for _ in range(15):
        b = betti_for(F, rng, n)
        blocks = dual_endomorphism(F, rng, b, n)
        report = duality_supertrace_identities(F, traces_of(F, blocks), b, n, blocks=blocks, strict=True)
        assert report.ok
        assert report.checks["eigen_pairing"].status == "pass"
        if n % 2 == 0:
            assert report.checks["even"].status == "pass"


def test_sphere_supertrace():
    for n in (1, 2, 3):
        for F in (QQ, GF(3)):
            rng = random.Random(n)
            b = {0: 1, n: 1}
            blocks = dual_endomorphism(F, rng, b, n)
            report = duality_supertrace_identities(F, traces_of(F, blocks), b, n)
            assert report.checks["sphere"].status == "pass"
            assert report.supertrace == F.sign(n)


def test_char_two_semicharacteristic_example():
    F = GF(2)
    report = duality_supertrace_identities(F, {0: 0, 1: 1, 2: 0, 3: 1}, {0: 1, 1: 1, 2: 1, 3: 1}, 3)
    assert report.supertrace == 0 == semicharacteristic([1, 1, 1, 1], 3)
    assert report.checks["semicharacteristic"].status == "pass"


def test_duality_violation_detected():
    F = QQ
    report = duality_supertrace_identities(F, {0: 0, 1: 0}, {0: 1, 1: 1}, 1)
    assert "duality" in report.failures()
    with pytest.raises(IdentityDefect):
        duality_supertrace_identities(F, {0: 0, 1: 0}, {0: 1, 1: 1}, 1, strict=True)
    with pytest.raises(SchemaError):
        duality_supertrace_identities(F, {5: 0}, {0: 1}, 1)


def test_reverse_pair_identity():
    F = QQ
    # HF(L0, L1) in degrees 0, 1 of an n = 1 pair, with an explicit reverse endomorphism
    traces = {0: F(2), 1: F(-1)}
    dims = {0: 3, 1: 1}
    reverse = {0: F(dims[1]) - traces[1], 1: F(dims[0]) - traces[0]}
    chi = dims[0] - dims[1]
    report = duality_supertrace_identities(F, traces, dims, 1, reverse_traces=reverse)
    assert report.checks["duality"].status == "pass"
    assert report.checks["reverse"].status == "pass"
    assert report.checks["reverse"].rhs == report.supertrace - chi
    wrong = duality_supertrace_identities(F, traces, dims, 1, reverse_traces=reverse, intersection=chi)
    assert wrong.failures() == ["reverse"]


def test_eigen_pairing_in_char_two():
    F = GF(2)
    rng = random.Random(1)
    for _ in range(10):
        blocks = dual_endomorphism(F, rng, {0: 1, 1: 2, 2: 1}, 2)
        ok, table = eigenvalue_pairing(F, blocks, 2)
        assert ok and table


def test_nilpotent_pairing_fails_eigen_pairing():
    ok, _ = eigenvalue_pairing(GF(3), {0: [[0]], 1: [[0]]}, 1)
    assert not ok


# A_m


@pytest.mark.parametrize("m", range(1, 13))
def test_a_m_bound(m):
    assert a_m_bound(m) == (m + 1) // 2
    w = a_m_witness(m)
    assert w.ok


def test_a_5_witness():
    w = a_m_witness(5)
    assert len(w.classes) == 3 and w.rank == 3 and w.form_rank == 4 and w.max_isotropic == 3
    assert w.classes == [[1, 0, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 0, 1]]
    assert a_m_witness(5, GF(3)).ok


def test_a_m_bound_rejects_zero():
    with pytest.raises(SchemaError):
        a_m_bound(0)


# weighted Euler characteristics


def test_weighted_examples():
    assert mukai_derivative(WeightedEulerData({0: 4})) == 0
    assert mukai_derivative(WeightedEulerData({1: 2})) == 2
    assert WeightedEulerData({2: 0, 1: 3}).weights == {1: 3}
    with pytest.raises(SchemaError):
        WeightedEulerData({"1/2": 1})


def test_shift_identity_random():
    rng = random.Random(12)
    for _ in range(100):
        data = WeightedEulerData(instances.weighted_instance(rng))
        ok, lhs, rhs = shift_identity_check(data)
        assert ok and lhs == rhs
    data = WeightedEulerData({1: 2, 3: -1})
    assert not shift_identity_check(data, chi_total=5)[0]
