"""Lagrangian slots for decorated loops on a triangulated surface.

A decorated dual loop D gives the per-Lagrangian data over the simplicial
model: CF(D, D) is the cochain complex of D as a circle (positions are its
triangles, edges are its steps), the restriction map reads a cochain at
triangle anchors and along dual steps, the Gysin-type map is the signed
crossing count, and the transport of beta to the crossed edge is the
degree-0 correction.  The two slots not given by a formula (the Gysin map on
1-cochains of D and the correction on 2-cochains) are solved for, triangle by
triangle, from the chain-map and correction relations.

For an edge loop L0 crossed by a dual loop L1, the cross slots live on the
span of the intersection points, with a positive crossing in odd degree.
"""
from __future__ import annotations

from .. import linalg as la
from ..complexes import ChainMap, GradedComplex
from ..cycles import DecoratedCycle, anchor, intersect, is_left_of, pushoff
from ..errors import AxiomViolation, SchemaError
from ..simplicial import Cochain, SimplicialComplex, edge_value
from .lagrangian import CrossDatum, ExtendedModel, LagrangianDatum
from .model import FloerModel
from .tensors import BilinearMap, matrix_of_right


def _path_vector(K, F, points):
    """Coefficients on edges of the path through ``points`` (as a functional on C^1)."""
    v = [F.zero] * K.count(1)
    for a, b in zip(points, points[1:]):
        if a != b:
            i = K.idx(tuple(sorted((a, b))))
            v[i] = F.norm(v[i] + (1 if a < b else -1))
    return v


def circle_complex(F, m):
    d = la.zeros(F, m, m)
    for i in range(m):
        d[i][(i + 1) % m] = F.norm(d[i][(i + 1) % m] + 1)
        d[i][i] = F.norm(d[i][i] - 1)
    return GradedComplex(F, {0: m, 1: m}, {0: d})


def dual_loop_datum(model: FloerModel, K: SimplicialComplex, L: DecoratedCycle, name="L") -> LagrangianDatum:
    F = model.F
    beta = Cochain(K, F, 1, model.beta)
    if not L.is_dual:
        L = pushoff(K, beta, L)
    tris = L.carrier.triangles
    steps = L.carrier.steps()
    m = len(tris)
    C = model.C(2)
    m0, m1, m2 = K.count(0), K.count(1), K.count(2)
    endo = circle_complex(F, m)
    crossed = []
    for T, U in steps:
        a, b = sorted(set(T) & set(U))
        crossed.append((a, b, 1 if is_left_of(K, U, a, b) else -1))
    # restriction
    r0 = la.zeros(F, m, m0)
    for i, T in enumerate(tris):
        r0[i][K.idx((anchor(T),))] = F.one
    r1 = []
    for T, U in steps:
        u = min(set(T) & set(U))
        r1.append(_path_vector(K, F, (anchor(T), u, anchor(U))))
    phi11 = ChainMap(C, endo, 0, {0: r0, 1: r1, 2: la.zeros(F, 0, m2)})
    # crossing count and transport
    g0 = la.zeros(F, m1, m)
    t1 = la.zeros(F, m1, m1)
    for i, ((a, b, s), (T, _)) in enumerate(zip(crossed, steps)):
        e = K.idx((a, b))
        g0[e][i] = F.norm(g0[e][i] + s)
        for j, c in enumerate(_path_vector(K, F, (anchor(T), a))):
            if c:
                t1[e][j] = F.norm(t1[e][j] + s * c)
    d1 = C.differential(1)
    mu = endo.differential(0)
    xi = la.matvec(F, g0, [F.one] * m)  # Poincare dual: crossing count with unit weights
    cup_xi = matrix_of_right(F, model.product(2, -1), 1, 1, xi)
    dg0 = la.matmul(F, d1, g0)
    rhs_b = la.add(F, la.matmul(F, d1, t1), la.scale(F, -1, cup_xi))
    # per triangle r: X[r] mu = -dg0[r];  Y[r] d1 + X[r] r1 = rhs_b[r]
    X, Y = la.zeros(F, m2, m), la.zeros(F, m2, m2)
    for r in range(m2):
        A = []
        b = []
        for j in range(m):
            A.append([mu[i][j] for i in range(m)] + [F.zero] * m2)
            b.append(F.norm(-dg0[r][j]))
        for e in range(m1):
            A.append([r1[i][e] for i in range(m)] + [d1[t][e] for t in range(m2)])
            b.append(rhs_b[r][e])
        sol = la.solve(F, A, b, cols=m + m2)
        if sol is None:
            raise AxiomViolation(f"{name}: the loop slots admit no completion on triangle {r}")
        X[r], Y[r] = sol[:m], sol[m:]
    check = ChainMap(endo, model.C(1), 1, {0: g0, 1: X})
    phi20 = {0: la.zeros(F, m0, m0), 1: t1, 2: Y}
    return LagrangianDatum(name, endo, xi, phi11, check, phi20, [F(g) for g in L.gamma], [F.one] * m)


def _transport_triangle(K, F, beta, D: DecoratedCycle, u, gamma_u):
    """A position of D on a triangle containing u whose value is gamma_u transported."""
    for t, T in enumerate(D.carrier.triangles):
        if u in T and F.norm(D.gamma[t] - gamma_u - edge_value(beta, u, anchor(T))) == 0:
            return t
    raise AxiomViolation(f"no push-off triangle carries the potential at vertex {u}")


def surface_extended_model(model: FloerModel, K: SimplicialComplex, L0: DecoratedCycle, L1: DecoratedCycle):
    """Extended model for an edge loop L0 and a dual loop L1 on the simplicial model."""
    if L0.is_dual or not L1.is_dual:
        raise SchemaError("expected an edge loop and a dual loop")
    F = model.F
    beta = Cochain(K, F, 1, model.beta)
    D0 = pushoff(K, beta, L0)
    datum0 = dual_loop_datum(model, K, D0, "L0")
    datum1 = dual_loop_datum(model, K, L1, "L1")
    records = intersect(K, beta, L0, L1)
    by_degree = {0: [], 1: []}
    for r in records:
        by_degree[1 if r.sign == 1 else 0].append(r)
    W = GradedComplex(F, {0: len(by_degree[0]), 1: len(by_degree[1])})
    left, right, phi12 = {}, {}, {}
    for q, recs in by_degree.items():
        tl, tr, tp = {}, {}, {}
        for k, r in enumerate(recs):
            j, i = r.label
            T = L1.carrier.triangles[i]
            u = L0.carrier.vertices[j]
            t = _transport_triangle(K, F, beta, D0, u, F(L0.gamma[j]))
            tl[(i, k)] = {k: F.one}
            tr[(k, t)] = {k: F.one}
            for e, c in enumerate(_path_vector(K, F, (anchor(T), u, anchor(D0.carrier.triangles[t])))):
                if c:
                    tp.setdefault((e, k), {})[k] = F.norm(-c)
        left[(0, q)], right[(q, 0)], phi12[(1, q)] = tl, tr, tp
    cross = CrossDatum(
        W,
        BilinearMap(datum1.endo, W, W, 0, left),
        BilinearMap(W, datum0.endo, W, 0, right),
        BilinearMap(model.C(2), W, W, -1, phi12),
    )
    return ExtendedModel(model, datum0, datum1, cross), records
