"""Randomized instances with zero differentials (plus one acyclic pair) on
which every relation holds by construction.

All slope labels carry the same graded-commutative Frobenius algebra H,
the cohomology of a genus-g surface times n - 1 copies of that of a
2-sphere.  The label-2 complex gets an extra acyclic pair a0 -> a1 so that
coboundaries are not all zero.  The per-Lagrangian complexes are the
quotients H / Ann[L], realized as the image of multiplication by [L].
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dc_field
from itertools import combinations

from .. import linalg as la
from ..complexes import ChainMap, GradedComplex, GradedPairing
from ..errors import SchemaError
from ..field import Field
from .lagrangian import CrossDatum, ExtendedModel, LagrangianDatum
from .model import FloerModel
from .tensors import BilinearMap


class FrobeniusAlgebra:
    """Basis elements are pairs (surface element, set of sphere factors)."""

    def __init__(self, F: Field, genus=1, n=1):
        if n < 1 or genus < 0:
            raise SchemaError("need n >= 1 and genus >= 0")
        self.F, self.genus, self.n = F, genus, n
        surf = [("1", 0)] + [(f"a{i}", 1) for i in range(1, genus + 1)] + \
               [(f"b{i}", 1) for i in range(1, genus + 1)] + [("w", 2)]
        subsets = [frozenset(c) for r in range(n) for c in combinations(range(n - 1), r)]
        elems = [(s, S, d + 2 * len(S)) for s, d in surf for S in subsets]
        elems.sort(key=lambda e: e[2])
        self.top = 2 * n
        self.dims = {k: 0 for k in range(self.top + 1)}
        self.index = {}
        self.names = {k: [] for k in range(self.top + 1)}
        for s, S, d in elems:
            self.index[(s, S)] = (d, self.dims[d])
            self.dims[d] += 1
            label = s + "".join(f"s{i + 1}" for i in sorted(S))
            self.names[d].append(label)
        self._elems = elems
        self._full = frozenset(range(n - 1))

    @staticmethod
    def _surface_product(s, t):
        if s == "1":
            return 1, t
        if t == "1":
            return 1, s
        if s[0] in "ab" and t[0] in "ab" and s[1:] == t[1:] and s[0] != t[0]:
            return (1 if s[0] == "a" else -1), "w"
        return 0, None

    def product_table(self, p, q):
        """{(i, j): {k: c}} for basis elements of degrees p and q."""
        out = {}
        for s, S, d in self._elems:
            if d != p:
                continue
            for t, T, e in self._elems:
                if e != q or S & T:
                    continue
                c, u = self._surface_product(s, t)
                if c:
                    i, j = self.index[(s, S)][1], self.index[(t, T)][1]
                    out[(i, j)] = {self.index[(u, S | T)][1]: c}
        return out

    def multiply(self, p, x, q, y):
        F = self.F
        out = [F.zero] * self.dims.get(p + q, 0)
        for (i, j), vec in self.product_table(p, q).items():
            if x[i] and y[j]:
                for k, c in vec.items():
                    out[k] = F.norm(out[k] + c * x[i] * y[j])
        return out

    def integral_vector(self):
        F = self.F
        v = [F.zero] * self.dims[self.top]
        v[self.index[("w", self._full)][1]] = F.one
        return v

    def integrate(self, z):
        return self.F.norm(sum(a * b for a, b in zip(self.integral_vector(), z)))

    def complex(self):
        return GradedComplex(self.F, dict(self.dims))

    def multiplication_matrix(self, p, x, q):
        """Matrix of y -> x.y from degree q to degree p + q."""
        F = self.F
        M = la.zeros(F, self.dims.get(p + q, 0), self.dims.get(q, 0))
        for (i, j), vec in self.product_table(p, q).items():
            if x[i]:
                for k, c in vec.items():
                    M[k][j] = F.norm(M[k][j] + c * x[i])
        return M


@dataclass
class SyntheticInstance:
    model: FloerModel
    ext: ExtendedModel | None
    algebra: FrobeniusAlgebra
    info: dict = dc_field(default_factory=dict)


def _rand_vec(F, rng, n, density=1.0):
    return [F.random_element(rng) if rng.random() < density else F.zero for _ in range(n)]


def _nonzero(F, rng):
    while True:
        v = F.random_element(rng)
        if v:
            return v


def _base_model(F, rng, H: FrobeniusAlgebra, extra_pair=True, beta_zero=False):
    n, top = H.n, H.top
    c = _nonzero(F, rng)
    plain = H.complex()
    if extra_pair:
        dims = dict(H.dims)
        dims[0] += 1
        dims[1] += 1
        d0 = la.zeros(F, dims[1], dims[0])
        d0[dims[1] - 1][dims[0] - 1] = F.one
        C2 = GradedComplex(F, dims, {0: d0})
        a0, a1 = (0, dims[0] - 1), (1, dims[1] - 1)
    else:
        C2, a0, a1 = plain, None, None
    Cm1, C1, Cm2 = H.complex(), H.complex(), H.complex()
    w = H.integral_vector()

    def gram(k):
        return _gram(F, H, k)

    blocks = {k: gram(k) for k in range(top + 1)}
    pairings = {(-1, 1): GradedPairing(Cm1, C1, top, blocks),
                (1, -1): GradedPairing(C1, Cm1, top, blocks)}
    b2 = {k: [row[:] for row in gram(k)] for k in range(top + 1)}
    bm2 = {k: [row[:] for row in gram(k)] for k in range(top + 1)}
    if extra_pair:
        b2[0].append([F.norm(c * x) for x in w])
        b2[1].append([F.zero] * H.dims[top - 1])
        for k, col in ((top, [F.norm(c * x) for x in w]), (top - 1, None)):
            for r, row in enumerate(bm2[k]):
                row.append(col[r] if col else F.zero)
    pairings[(2, -2)] = GradedPairing(C2, Cm2, top, b2)
    pairings[(-2, 2)] = GradedPairing(Cm2, C2, top, bm2)

    def table(p, q, left_extra=False, right_extra=False):
        t = {ij: dict(v) for ij, v in H.product_table(p, q).items()}
        if left_extra and a0 and p == 0:
            for j in range(H.dims.get(q, 0)):
                t[(a0[1], j)] = {j: c}
        if right_extra and a0 and q == 0:
            for i in range(H.dims.get(p, 0)):
                t[(i, a0[1])] = {i: c}
        return t

    deg = range(top + 1)
    m2m1 = BilinearMap(C2, Cm1, C1, 0, {(p, q): table(p, q, left_extra=True) for p in deg for q in deg})
    mm12 = BilinearMap(Cm1, C2, C1, 0, {(p, q): table(p, q, right_extra=True) for p in deg for q in deg})
    mm1m1 = BilinearMap(Cm1, Cm1, Cm2, 0, {(p, q): table(p, q) for p in deg for q in deg})
    star_entries = {}
    for p in deg:
        for q in deg:
            r = p + q - 1
            if 0 <= r <= top:
                tab = {}
                for i in range(H.dims[p]):
                    for j in range(H.dims[q]):
                        if rng.random() < 0.4:
                            tab[(i, j)] = {k: F.random_element(rng) for k in range(H.dims[r]) if rng.random() < 0.5}
                star_entries[(p, q)] = tab
    star = BilinearMap(Cm1, Cm1, Cm2, -1, star_entries)
    if beta_zero:
        beta = [F.zero] * C2.dim(1)
    else:
        beta = [F.zero] * C2.dim(1)
        while not any(beta[:H.dims[1]]):
            beta = [F(rng.randint(-2, 2)) for _ in range(H.dims[1])] + ([F.zero] if extra_pair else [])
    model = FloerModel(
        F=F, n=n, complexes={-2: Cm2, -1: Cm1, 1: C1, 2: C2}, pairings=pairings,
        products={(2, -1): m2m1, (-1, 2): mm12, (-1, -1): mm1m1},
        star={(-1, -1): star}, beta=beta, name="synthetic",
    )
    return model, {"c": c, "a0": a0, "a1": a1}


def _gram(F, H, k):
    w = H.integral_vector()
    rows, cols = H.dims[k], H.dims[H.top - k]
    M = la.zeros(F, rows, cols)
    for (i, j), vec in H.product_table(k, H.top - k).items():
        M[i][j] = F.norm(sum(c * w[t] for t, c in vec.items()))
    return M


def _lagrangian(model, H, rng, L, s, extra, name, zero_phi20=False):
    """Datum for a class L in H^n with beta.L = 0."""
    F, n = model.F, model.n
    endo_basis, dims = {}, {}
    for k in range(n + 1):
        M = _right_mult(H, k, L)
        endo_basis[k] = la.column_basis(F, M, H.dims.get(k, 0))
        dims[k] = len(endo_basis[k])
    endo = GradedComplex(F, dims)
    C2, C1 = model.C(2), model.C(1)

    def coords(k, v):
        B = endo_basis[k]
        x = la.solve(F, la.transpose(B, H.dims[k + n]) if B else [[] for _ in v], v, cols=len(B))
        if x is None:
            raise SchemaError("element outside the image of multiplication by [L]")
        return x

    phi11 = {}
    for k in C2.degrees:
        cols = []
        for i in range(C2.dim(k)):
            if k < len(H.dims) and i < H.dims.get(k, 0) and k <= n:
                e = [F.one if j == i else F.zero for j in range(H.dims[k])]
                cols.append(coords(k, H.multiply(k, e, n, L)) if dims.get(k) else [])
            elif extra["a0"] and (k, i) == extra["a0"]:
                cols.append([F.norm(s)] if dims.get(0) else [])
            else:
                cols.append([F.zero] * endo.dim(k))
        phi11[k] = la.transpose(cols, endo.dim(k)) if cols else la.zeros(F, endo.dim(k), 0)
    phi11 = ChainMap(C2, endo, 0, phi11)
    check = {k: [[F.norm(F.sign(n * k) * B[j][i]) for j in range(len(B))] for i in range(H.dims[k + n])]
             for k, B in endo_basis.items()}
    phi11_check = ChainMap(endo, C1, n, check)
    phi20 = {}
    for k in C2.degrees:
        rows = C1.dim(k + n - 1)
        if rows and not zero_phi20:
            M = la.random_matrix(F, rng, rows, C2.dim(k), density=0.5)
        else:
            M = la.zeros(F, rows, C2.dim(k))
        if extra["a1"] and k == 1:
            col = extra["a1"][1]
            for r in range(rows):
                M[r][col] = F.norm(F.sign(n) * (s - extra["c"]) * L[r])
        phi20[k] = M
    g = F.random_element(rng)
    unit = [F.one] if endo.dim(0) else []
    gamma = [F.norm(g)] if endo.dim(0) else []
    return LagrangianDatum(name, endo, list(L), phi11, phi11_check, phi20, gamma, unit)


def _right_mult(H, k, L):
    """Matrix of x -> x.L from H^k to H^{k+n}."""
    F, n = H.F, H.n
    M = la.zeros(F, H.dims.get(k + n, 0), H.dims.get(k, 0))
    for (i, j), vec in H.product_table(k, n).items():
        if L[j]:
            for t, c in vec.items():
                M[t][i] = F.norm(M[t][i] + c * L[j])
    return M


def _as_int(F, v):
    if F.characteristic:
        v = int(v)
        return v if v <= F.characteristic // 2 else v - F.characteristic
    if v.denominator != 1:
        raise SchemaError("intersection number must be an integer")
    return int(v)


def _random_class(F, rng, H, beta):
    """Random L in H^n with beta.L = 0 (beta read in the algebra part)."""
    n = H.n
    b = beta[:H.dims[1]]
    M = la.zeros(F, H.dims.get(n + 1, 0), H.dims[n])
    for (i, j), vec in H.product_table(1, n).items():
        if b[i]:
            for t, c in vec.items():
                M[t][j] = F.norm(M[t][j] + c * b[i])
    kernel = la.nullspace(F, M, H.dims[n]) if M else [
        [F.one if j == i else F.zero for j in range(H.dims[n])] for i in range(H.dims[n])]
    while True:
        coeffs = [rng.randint(-2, 2) for _ in kernel]
        L = [F.norm(sum(F(c) * v[j] for c, v in zip(coeffs, kernel))) for j in range(H.dims[n])]
        if any(L):
            if not F.characteristic:
                den = math.lcm(*(v.denominator for v in L))
                L = [F.norm(v * den) for v in L]
            return L


def synthetic(seed=0, flags=(), n=1, F: Field | None = None, genus=2):
    """A flag-complete extended model.

    ``flags`` may contain ``"plain"`` (no acyclic pair), ``"beta_zero"``,
    ``"sphere"`` (L0 = L1 with a two-point Floer complex in degrees 0 and n
    and phi12(beta, .) projecting to degree n), ``"raw_hexagon"`` (skip the
    correction that makes the six-term map vanish on cocycles) and
    ``"model_only"``.
    """
    flags = set(flags)
    F = F or Field(0)
    rng = random.Random(seed)
    H = FrobeniusAlgebra(F, genus, n)
    model, extra = _base_model(F, rng, H, extra_pair="plain" not in flags, beta_zero="beta_zero" in flags)
    if "model_only" in flags:
        return SyntheticInstance(model, None, H, extra)
    sphere = "sphere" in flags
    if sphere and n % 2 == 0:
        raise SchemaError("the sphere-type instance is built for odd n")
    while True:
        L0 = _random_class(F, rng, H, model.beta)
        L1 = L0 if sphere else _random_class(F, rng, H, model.beta)
        pairing = H.integrate(H.multiply(n, L0, n, L1))
        if sphere or pairing or rng.random() < 0.2:
            break
    s0 = F.random_element(rng)
    s1 = s0 if sphere else F.random_element(rng)
    D0 = _lagrangian(model, H, rng, L0, s0, extra, "L0", zero_phi20="beta_zero" in flags)
    D1 = D0 if sphere else _lagrangian(model, H, rng, L1, s1, extra, "L1", zero_phi20="beta_zero" in flags)
    # W with Euler characteristic (-1)^{n + n(n-1)/2} <L0, L1>
    chi = (-1) ** (n + n * (n - 1) // 2) * _as_int(F, pairing)
    if sphere:
        wdims = {k: 0 for k in range(n + 1)}
        wdims[0] += 1
        wdims[n] += 1
    else:
        wdims = {k: rng.randint(0, 1) for k in range(n + 1)}
        e = sum((-1) ** k * v for k, v in wdims.items())
        wdims[0] += chi - e
        if wdims[0] < 0:
            wdims[1 if n >= 1 else 0] += -wdims[0]
            wdims[0] = 0
        if not any(wdims.values()):
            wdims[0] = wdims[1] = 1
    W = GradedComplex(F, wdims)
    C2 = model.C(2)

    def augmentation(D):
        return {(0, q): {(0, j): {j: F.one} for j in range(W.dim(q))} for q in W.degrees} if D.endo.dim(0) else {}

    mu_left = BilinearMap(D1.endo, W, W, 0, augmentation(D1))
    mu_right = BilinearMap(W, D0.endo, W, 0, {(q, p): {(j, i): v for (i, j), v in t.items()}
                                              for (p, q), t in augmentation(D0).items()})
    entries = {}
    h1 = H.dims[1]
    for p in C2.degrees:
        for q in W.degrees:
            r = p + q - 1
            if r not in W.degrees or not W.dim(r) or not W.dim(q):
                continue
            tab = {}
            for i in range(C2.dim(p)):
                if extra["a1"] and (p, i) == extra["a1"]:
                    if r == q:
                        for j in range(W.dim(q)):
                            tab[(i, j)] = {j: F.norm(s1 - s0)}
                    continue
                if extra["a0"] and (p, i) == extra["a0"]:
                    continue
                if sphere:
                    continue
                for j in range(W.dim(q)):
                    if rng.random() < 0.6:
                        tab[(i, j)] = {k: F.random_element(rng) for k in range(W.dim(r))}
            entries[(p, q)] = tab
    if sphere:
        j0 = next(i for i in range(h1) if model.beta[i])
        entries[(1, n)] = {(j0, 0): {0: F.inv(model.beta[j0])}}
    phi12 = BilinearMap(C2, W, W, -1, entries)
    psi = _rand_vec(F, rng, D1.endo.dim(1))
    psi_check = _rand_vec(F, rng, D0.endo.dim(1))
    cross = CrossDatum(W, mu_left, mu_right, phi12, psi, psi_check)
    ext = ExtendedModel(model, D0, D1, cross)
    if not sphere and "raw_hexagon" not in flags:
        from .lagrangian import hexagon_map
        q0 = next(q for q in W.degrees if W.dim(q))
        sign = F.sign(n * (n - 1) // 2 + 1) * F.sign(q0)
        ent = {pq: {ij: dict(v) for ij, v in t.items()} for pq, t in phi12.entries.items()}
        for i in range(h1):
            e = [F.one if j == i else F.zero for j in range(C2.dim(1))]
            h, _ = hexagon_map(ext, e)
            if h:
                tab = ent.setdefault((1, q0), {})
                vec = tab.setdefault((i, 0), {})
                vec[0] = F.norm(vec.get(0, F.zero) - h * sign)
        cross.phi12 = phi12.with_entries(ent)
    info = dict(extra, L0=L0, L1=L1, s0=s0, s1=s1, intersection=pairing, chi=chi, wdims=wdims)
    return SyntheticInstance(model, ext, H, info)


def _wedge(S, T):
    """Sign and support of e_S ^ e_T for sorted index tuples, or (0, None)."""
    if set(S) & set(T):
        return 0, None
    inversions = sum(1 for s in S for t in T if s > t)
    return (-1) ** inversions, tuple(sorted(S + T))


def exterior_bv_model(F: Field | None = None, n=1):
    """Exterior algebra on 2n generators with delta the contraction dual to e1.

    delta is a derivation, so the secondary product is zero and the BV
    relation holds strictly; beta = e1 satisfies delta(beta) = 1.
    """
    F = F or Field(0)
    gens = range(2 * n)
    basis = {k: [S for S in combinations(gens, k)] for k in range(2 * n + 1)}
    pos = {S: (k, i) for k, ss in basis.items() for i, S in enumerate(ss)}
    C = GradedComplex(F, {k: len(v) for k, v in basis.items()})
    top = tuple(gens)

    def table(p, q):
        out = {}
        for i, S in enumerate(basis[p]):
            for j, T in enumerate(basis[q]):
                c, U = _wedge(S, T)
                if c:
                    out[(i, j)] = {pos[U][1]: c}
        return out

    deg = range(2 * n + 1)
    wedge = BilinearMap(C, C, C, 0, {(p, q): table(p, q) for p in deg for q in deg if p + q <= 2 * n})
    blocks = {}
    for k in deg:
        M = la.zeros(F, len(basis[k]), len(basis[2 * n - k]))
        for (i, j), vec in table(k, 2 * n - k).items():
            M[i][j] = F(vec[0]) if top == basis[2 * n][0] else F.zero
        blocks[k] = M
    P = GradedPairing(C, C, 2 * n, blocks)
    bv = {}
    for k in range(1, 2 * n + 1):
        M = la.zeros(F, len(basis[k - 1]), len(basis[k]))
        for j, S in enumerate(basis[k]):
            if S[0] == 0:
                M[pos[S[1:]][1]][j] = F.one
        bv[k] = M
    labels = (-2, -1, 1, 2)
    pairs = [(a, b) for a in labels for b in labels if a + b in labels]
    zero_star = BilinearMap(C, C, C, -1, {})
    beta = [F.one if S == (0,) else F.zero for S in basis[1]]
    return FloerModel(
        F=F, n=n, complexes={lab: C for lab in labels},
        pairings={(a, -a): P for a in labels},
        products={ab: wedge for ab in pairs},
        star={ab: zero_star for ab in pairs},
        beta=beta, bv={lab: bv for lab in labels}, name=f"exterior({2 * n})",
    )


def corrupt_star(model: FloerModel, seed=0, slot=None):
    """Copy of the model with one entry of one secondary product perturbed."""
    rng = random.Random(seed)
    F = model.F
    slot = slot or sorted(model.star)[0]
    s = model.star[slot]
    keys = sorted(s.entries)
    if not keys:
        raise SchemaError("secondary product has no entries to corrupt")
    pq = keys[rng.randrange(len(keys))]
    tab = {ij: dict(v) for ij, v in s.entries[pq].items()}
    ij = sorted(tab)[rng.randrange(len(tab))]
    k = sorted(tab[ij])[0]
    tab[ij][k] = F.norm(tab[ij][k] + 1)
    entries = dict(s.entries)
    entries[pq] = tab
    star = dict(model.star)
    star[slot] = s.with_entries(entries)
    return FloerModel(F=F, n=model.n, complexes=model.complexes, pairings=model.pairings,
                      products=model.products, star=star, beta=model.beta, bv=model.bv,
                      bv_homotopy=model.bv_homotopy, name=model.name + "+corrupted")
