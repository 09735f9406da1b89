"""Finite chain-level packages and their axiom checker.

Complexes are indexed by slope labels in {-2, -1, 1, 2}, multiples of one
fixed slope.  Slot conventions:

* ``products[(a, b)]`` maps C(a) x C(b) -> C(a + b); it is applied as x.y
  with x in C(a).
* ``star[(a, b)]`` has the same signature and degree -1.
* ``pairings[(a, -a)]`` pairs C(a)^k with C(-a)^{2n-k}.
* ``bv[a]`` is an optional degree -1 operator on C(a), given per degree as
  matrices ``C^k -> C^{k-1}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .. import linalg as la
from ..complexes import GradedComplex, GradedPairing
from ..errors import SchemaError
from ..field import Field
from ..simplicial import SimplicialComplex, Cochain, cup1_tensor, cup_tensor, integration_vector
from .tensors import (BilinearMap, combine, evaluate_trilinear, first_key, post, pre_left,
                      pre_right, trilinear)

LABELS = (-2, -1, 1, 2)


@dataclass
class FloerModel:
    F: Field
    n: int
    complexes: dict
    pairings: dict
    products: dict
    star: dict
    beta: list
    bv: dict | None = None
    bv_homotopy: dict | None = None
    name: str = ""

    def __post_init__(self):
        for lab in self.complexes:
            if lab not in LABELS:
                raise SchemaError(f"unknown slope label {lab}")
        for (a, b), P in self.pairings.items():
            if b != -a or P.total != 2 * self.n:
                raise SchemaError(f"pairing slot {(a, b)} must pair opposite labels in total degree 2n")
        for slots in (self.products, self.star):
            for (a, b), m in slots.items():
                if a + b not in self.complexes:
                    raise SchemaError(f"product slot {(a, b)} lands outside the labels")
        C2 = self.complexes.get(2)
        if C2 is None or len(self.beta) != C2.dim(1):
            raise SchemaError("beta must be a vector in C^1 of label 2")
        self.beta = [self.F(x) for x in self.beta]

    def C(self, label) -> GradedComplex:
        try:
            return self.complexes[label]
        except KeyError:
            raise SchemaError(f"model has no complex with label {label}") from None

    def product(self, a, b) -> BilinearMap:
        try:
            return self.products[(a, b)]
        except KeyError:
            raise SchemaError(f"model has no product slot {(a, b)}") from None

    def pairing(self, a) -> GradedPairing:
        try:
            return self.pairings[(a, -a)]
        except KeyError:
            raise SchemaError(f"model has no pairing slot {(a, -a)}") from None

    def bv_matrix(self, label, k):
        C = self.C(label)
        return (self.bv or {}).get(label, {}).get(k) or la.zeros(self.F, C.dim(k - 1), C.dim(k))


@dataclass
class AxiomResult:
    name: str
    status: str  # "pass", "fail", "cohomology" (weak form only) or "skipped"
    witness: object = None
    detail: str = ""

    @property
    def ok(self):
        return self.status in ("pass", "skipped")


@dataclass
class AxiomReport:
    results: dict = dc_field(default_factory=dict)

    def __getitem__(self, name):
        return self.results[name]

    def passed(self, *names):
        return all(self.results[n].ok for n in names)

    def as_rows(self):
        return [(r.name, r.status, r.witness) for r in self.results.values()]


def _diff_witness(F, lhs, rhs):
    delta = combine(F, (1, lhs), (-1, rhs))
    return first_key(delta)


def check_a1(model: FloerModel):
    for key, P in sorted(model.pairings.items()):
        bad = P.adjointness_defect()
        if bad:
            return AxiomResult("A1", "fail", {"slot": key, "degree": bad[0], "basis": bad[1:]})
    return AxiomResult("A1", "pass")


def check_a3(model: FloerModel):
    F = model.F
    for (a, b), m in sorted(model.products.items()):
        A, B, T = m.left, m.right, m.target
        for p in A.degrees:
            for q in B.degrees:
                r = p + q + m.degree
                lhs = post(F, m.block(p, q), T.differential(r))
                r1 = pre_left(F, m.block(p + 1, q), A.differential(p))
                r2 = pre_right(F, m.block(p, q + 1), B.differential(q))
                rhs = combine(F, (1, r1), (F.sign(p), r2))
                w = _diff_witness(F, lhs, rhs)
                if w is not None:
                    return AxiomResult("A3", "fail", {"slot": (a, b), "degrees": (p, q), "basis": w})
    return AxiomResult("A3", "pass")


def check_a4(model: FloerModel, star=None):
    """d(x*y) + dx*y + (-1)^|x| x*dy = x.y - (-1)^{|x||y|} y.x on every basis pair."""
    F = model.F
    star = model.star if star is None else star
    for (a, b), s in sorted(star.items()):
        if (a, b) not in model.products or (b, a) not in model.products:
            continue
        m_ab, m_ba = model.products[(a, b)], model.products[(b, a)]
        A, B, T = s.left, s.right, s.target
        for p in A.degrees:
            for q in B.degrees:
                lhs = combine(
                    F,
                    (1, post(F, s.block(p, q), T.differential(p + q - 1))),
                    (1, pre_left(F, s.block(p + 1, q), A.differential(p))),
                    (F.sign(p), pre_right(F, s.block(p, q + 1), B.differential(q))),
                )
                swapped = {(i, j): vec for (j, i), vec in m_ba.block(q, p).items()}
                rhs = combine(F, (1, m_ab.block(p, q)), (-F.sign(p * q), swapped))
                w = _diff_witness(F, lhs, rhs)
                if w is not None:
                    return AxiomResult("A4", "fail", {"slot": (a, b), "degrees": (p, q), "basis": w})
    return AxiomResult("A4", "pass")


def check_a5(model: FloerModel):
    dbeta = model.C(2).apply_d(1, model.beta)
    if any(dbeta):
        return AxiomResult("A5", "fail", {"d beta": dbeta})
    return AxiomResult("A5", "pass")


def _degree_triples(n, A, B, C):
    for p in A.degrees:
        for q in B.degrees:
            s = 2 * n - p - q
            if s in C.degrees:
                yield p, q, s


def check_a2w(model: FloerModel):
    """<x.y, z> = <x, y.z> for x, y, z in C(a), C(b), C(c) with a + b + c = 0."""
    F, n = model.F, model.n
    seen = set()
    for (a, b), m_ab in sorted(model.products.items()):
        c = -(a + b)
        if (b, c) not in model.products or (a + b, c) not in model.pairings or (a, -a) not in model.pairings:
            continue
        m_bc = model.products[(b, c)]
        P1, P2 = model.pairings[(a + b, c)], model.pairings[(a, -a)]
        key = (id(m_ab), id(m_bc), id(P1), id(P2))
        if key in seen:
            continue
        seen.add(key)
        for p, q, s in _degree_triples(n, m_ab.left, m_ab.right, m_bc.right):
            lhs = trilinear(F, m_ab.block(p, q), P1.block(p + q), "out_left")
            rhs_raw = trilinear(F, m_bc.block(q, s), P2.block(p), "out_right")
            rhs = {(i, j, l): v for (j, l, i), v in rhs_raw.items()}
            if lhs != rhs:
                w = min(set(lhs) ^ set(rhs) | {k for k in lhs if rhs.get(k) != lhs[k]})
                return AxiomResult("A2w", "fail", {"labels": (a, b, c), "degrees": (p, q, s), "basis": w})
    return AxiomResult("A2w", "pass")


def _a2s_forms(model, l1, l2, p1, p2, p3):
    """The three trilinear forms of cyclic symmetry, keyed (i1, i2, i3)."""
    F = model.F
    l3 = -l1 - l2
    m21, m13 = model.products[(l2, l1)], model.products[(l1, l3)]
    Pa, Pb, Pc = model.pairings[(l3, -l3)], model.pairings[(l2, -l2)], model.pairings[(-l2, l2)]
    # <x3, x2.x1>
    ta = trilinear(F, m21.block(p2, p1), Pa.block(p3), "out_right")
    ta = {(i1, i2, i3): v for (i2, i1, i3), v in ta.items()}
    # (-1)^|x3| <x2, x1.x3>
    tb = trilinear(F, m13.block(p1, p3), Pb.block(p2), "out_right")
    tb = {(i1, i2, i3): F.norm(F.sign(p3) * v) for (i1, i3, i2), v in tb.items()}
    # (-1)^|x1| <x1.x3, x2>
    tc = trilinear(F, m13.block(p1, p3), Pc.block(p1 + p3), "out_left")
    tc = {(i1, i2, i3): F.norm(F.sign(p1) * v) for (i1, i3, i2), v in tc.items()}
    return ta, tb, tc


def _a2s_slots(model):
    for l1 in LABELS:
        for l2 in LABELS:
            l3 = -l1 - l2
            if (l2, l1) in model.products and (l1, l3) in model.products and all(
                    k in model.pairings for k in ((l3, -l3), (l2, -l2), (-l2, l2))):
                yield l1, l2, l3


def check_a2s(model: FloerModel):
    """Cyclic symmetry; when it fails strictly, retest on cohomology representatives."""
    n = model.n
    strict_witness = None
    for l1, l2, l3 in _a2s_slots(model):
        C1, C2, C3 = model.C(l1), model.C(l2), model.C(l3)
        for p1, p2, p3 in _degree_triples(n, C1, C2, C3):
            ta, tb, tc = _a2s_forms(model, l1, l2, p1, p2, p3)
            if ta != tb or ta != tc:
                bad = min((set(ta) | set(tb) | set(tc)) - {k for k in ta if ta[k] == tb.get(k) == tc.get(k)})
                strict_witness = {"labels": (l1, l2, l3), "degrees": (p1, p2, p3), "basis": bad}
                break
        if strict_witness:
            break
    if strict_witness is None:
        return AxiomResult("A2s", "pass")
    F = model.F
    for l1, l2, l3 in _a2s_slots(model):
        C1, C2, C3 = model.C(l1), model.C(l2), model.C(l3)
        H1, H2, H3 = C1.cohomology(), C2.cohomology(), C3.cohomology()
        for p1, p2, p3 in _degree_triples(n, C1, C2, C3):
            forms = _a2s_forms(model, l1, l2, p1, p2, p3)
            for u in H1.reps.get(p1, []):
                for v in H2.reps.get(p2, []):
                    for w in H3.reps.get(p3, []):
                        vals = {evaluate_trilinear(F, f, u, v, w) for f in forms}
                        if len(vals) > 1:
                            return AxiomResult("A2s", "fail", strict_witness,
                                               "fails on cohomology representatives too")
    return AxiomResult("A2s", "cohomology", strict_witness, "holds on cohomology only")


def check_a6(model: FloerModel):
    """BV operator: square zero, anticommutes with d, adjoint, and the bracket relation."""
    if not model.bv:
        return AxiomResult("A6", "skipped", detail="no BV operator supplied")
    F, n = model.F, model.n
    for lab, C in sorted(model.complexes.items()):
        for k in C.degrees:
            dk = model.bv_matrix(lab, k)
            sq = la.matmul(F, model.bv_matrix(lab, k - 1), dk, inner=C.dim(k - 1), cols=C.dim(k))
            if not la.is_zero_matrix(sq):
                return AxiomResult("A6", "fail", {"label": lab, "degree": k, "what": "delta^2"})
            a = la.matmul(F, C.differential(k - 1), dk, inner=C.dim(k - 1), cols=C.dim(k))
            b = la.matmul(F, model.bv_matrix(lab, k + 1), C.differential(k), inner=C.dim(k + 1), cols=C.dim(k))
            if not la.is_zero_matrix(la.add(F, a, b)):
                return AxiomResult("A6", "fail", {"label": lab, "degree": k, "what": "d delta + delta d"})
    # <delta x, y> + (-1)^|x| <x, delta y> = 0, the same shape as A1
    for (a, b), P in sorted(model.pairings.items()):
        L, R = P.left, P.right
        for k in L.degrees:
            s = 2 * n - k + 1
            if s not in R.degrees:
                continue
            lhs = la.matmul(F, la.transpose(model.bv_matrix(a, k), L.dim(k)), P.block(k - 1),
                            inner=L.dim(k - 1), cols=R.dim(s))
            rhs = la.matmul(F, P.block(k), model.bv_matrix(b, s), inner=R.dim(s - 1), cols=R.dim(s))
            if not la.is_zero_matrix(la.add(F, lhs, la.scale(F, F.sign(k), rhs))):
                return AxiomResult("A6", "fail", {"slot": (a, b), "degree": k, "what": "adjointness"})
    for (a, b), m in sorted(model.products.items()):
        if (a, b) not in model.star or (b, a) not in model.star:
            continue
        s_ab, s_ba = model.star[(a, b)], model.star[(b, a)]
        A, B, T = m.left, m.right, m.target
        H = (model.bv_homotopy or {}).get((a, b))
        for p in A.degrees:
            for q in B.degrees:
                bracket = combine(F, (1, s_ab.block(p, q)),
                                  (F.sign(p * q), {(i, j): v for (j, i), v in s_ba.block(q, p).items()}))
                rhs = combine(
                    F,
                    (1, post(F, m.block(p, q), model.bv_matrix(a + b, p + q))),
                    (-1, pre_left(F, m.block(p - 1, q), model.bv_matrix(a, p))),
                    (-F.sign(p), pre_right(F, m.block(p, q - 1), model.bv_matrix(b, q))),
                )
                defect = combine(F, (1, bracket), (-1, rhs))
                if H is not None:
                    boundary = combine(
                        F,
                        (1, post(F, H.block(p, q), T.differential(p + q - 2))),
                        (-1, pre_left(F, H.block(p + 1, q), A.differential(p))),
                        (-F.sign(p), pre_right(F, H.block(p, q + 1), B.differential(q))),
                    )
                    defect = combine(F, (1, defect), (-1, boundary))
                if defect:
                    return AxiomResult("A6", "fail", {"slot": (a, b), "degrees": (p, q),
                                                      "basis": first_key(defect), "what": "bracket relation"})
    return AxiomResult("A6", "pass", detail="with homotopy" if model.bv_homotopy else "strict")


def check_axioms(model: FloerModel) -> AxiomReport:
    report = AxiomReport()
    for check in (check_a1, check_a2s, check_a2w, check_a3, check_a4, check_a5, check_a6):
        r = check(model)
        report.results[r.name] = r
    return report


# the simplicial generator


def simplicial_pairing(K: SimplicialComplex, F: Field, C: GradedComplex):
    """<x, y> = integral of x.y as a GradedPairing on the cochains of K."""
    top = K.dim
    w = integration_vector(K, F)
    blocks = {}
    for k in range(top + 1):
        M = la.zeros(F, K.count(k), K.count(top - k))
        for (i, j), vec in cup_tensor(K, k, top - k).items():
            M[i][j] = F.norm(sum(c * w[t] for t, c in vec.items()))
        blocks[k] = M
    return GradedPairing(C, C, top, blocks)


def from_simplicial(K: SimplicialComplex, beta: Cochain, F: Field | None = None) -> FloerModel:
    """Every slope label gets the cochains of K; products are cup and cup-1."""
    if K.fundamental_cycle is None or K.dim % 2:
        raise SchemaError("the simplicial generator needs an even-dimensional oriented complex")
    F = F or beta.F
    C = K.cochain_complex(F)
    top = K.dim
    cupm = BilinearMap(C, C, C, 0, {(p, q): cup_tensor(K, p, q)
                                    for p in range(top + 1) for q in range(top + 1 - p)})
    starm = BilinearMap(C, C, C, -1, {(p, q): cup1_tensor(K, p, q)
                                      for p in range(top + 1) for q in range(top + 1)
                                      if 0 <= p + q - 1 <= top})
    P = simplicial_pairing(K, F, C)
    complexes = {lab: C for lab in LABELS}
    pairs = {(a, b) for a in LABELS for b in LABELS if a + b in LABELS}
    return FloerModel(
        F=F, n=top // 2, complexes=complexes,
        pairings={(a, -a): P for a in LABELS},
        products={ab: cupm for ab in pairs},
        star={ab: starm for ab in pairs},
        beta=[F(v) for v in beta.values],
        name=f"simplicial:{K.name}",
    )
