"""Cyclic p-fold covers of simplicial complexes and the pairing on them.

The cover of ``K`` classified by an integer 1-cocycle ``beta`` (read mod p)
is built as an honest simplicial complex: vertex ``v`` on sheet ``s`` gets
the id ``v * p + s``, and the copy of a simplex ``(v0, ..., vk)`` on sheet
``s`` puts ``vi`` on sheet ``s + beta(v0 -> vi)``.  Because ids grow with
``v``, lifted simplices keep their vertex order.

Cochains on the cover form a free module over GF(p)[q]/(q^p - 1), with
``(q x)(sigma_s) = x(sigma_{s+1})``.  Reducing modulo (q - 1)^2 and writing
the result in the basis {1, q - 1} gives pairs ``(a, b)`` of cochains on
``K``; in those coordinates the induced coboundary is
``(a, b) -> (da, db + beta.a)``.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import linalg as la
from .complexes import ChainMap, GradedComplex, les_dimension_check
from .errors import SchemaError
from .field import Field
from .simplicial import Cochain, SimplicialComplex, cup, integrate


class CyclicCover:
    def __init__(self, base: SimplicialComplex, beta: Cochain, p: int):
        F = Field(p)
        if beta.degree != 1 or beta.K is not base:
            raise SchemaError("beta must be a 1-cochain on the base")
        b = [int(F(v)) for v in beta.values]
        beta = Cochain(base, F, 1, b)
        if not beta.d().is_zero():
            raise SchemaError("beta is not closed mod p")
        self.base, self.p, self.F, self.beta = base, p, F, beta
        facets = []
        for k in range(base.dim + 1):
            for s in base.simplices[k]:
                for sheet in range(p):
                    facets.append(self.lift_simplex(s, sheet))
        cyc = None
        if base.fundamental_cycle is not None:
            cyc = {self.lift_simplex(s, sheet): sign
                   for s, sign in base.fundamental_cycle.items() for sheet in range(p)}
        self.total = SimplicialComplex(facets, cyc, name=f"{base.name}~{p}")
        # lifted[k][i][s] = index in the cover of simplex i of the base on sheet s
        self.lifted = {
            k: [[self.total.idx(self.lift_simplex(s, sheet)) for sheet in range(p)] for s in ss]
            for k, ss in base.simplices.items()
        }
        self._twisted = None

    def sheet_offset(self, u, v):
        """beta(u -> v) as an integer in 0..p-1."""
        if u == v:
            return 0
        e = (u, v) if u < v else (v, u)
        val = self.beta(e)
        return val if u < v else (-val) % self.p

    def lift_simplex(self, simplex, sheet):
        v0 = simplex[0]
        p = self.p
        return tuple(v * p + (sheet + self.sheet_offset(v0, v)) % p for v in simplex)

    def project_vertex(self, w):
        return divmod(w, self.p)

    # module structure

    def q(self, x: Cochain, power=1) -> Cochain:
        """Deck action (q^power x)(sigma_s) = x(sigma_{s+power})."""
        k, p = x.degree, self.p
        out = [self.F.zero] * len(x.values)
        for row in self.lifted.get(k, ()):
            for s in range(p):
                out[row[s]] = x.values[row[(s + power) % p]]
        return Cochain(self.total, self.F, k, out)

    def pushdown(self, x: Cochain) -> Cochain:
        k = x.degree
        return Cochain(self.base, self.F, k,
                       [self.F.norm(sum(x.values[i] for i in row)) for row in self.lifted[k]])

    def pullback(self, x: Cochain) -> Cochain:
        k = x.degree
        out = [self.F.zero] * self.total.count(k)
        for val, row in zip(x.values, self.lifted[k]):
            for i in row:
                out[i] = val
        return Cochain(self.total, self.F, k, out)

    def quotient(self, x: Cochain):
        """Image modulo (q - 1)^2 as coefficients (a, b) of 1 and q - 1."""
        F, k = self.F, x.degree
        a, b = [], []
        for row in self.lifted[k]:
            a.append(F.norm(sum(x.values[i] for i in row)))
            b.append(F.norm(-sum(s * x.values[i] for s, i in enumerate(row))))
        return Cochain(self.base, F, k, a), Cochain(self.base, F, k, b)

    def section(self, a: Cochain, b: Cochain) -> Cochain:
        """A cochain on the cover whose quotient is (a, b)."""
        F, k = self.F, a.degree
        out = [F.zero] * self.total.count(k)
        for row, av, bv in zip(self.lifted[k], a.values, b.values):
            out[row[0]] = F.norm(out[row[0]] + av - bv)
            out[row[-1]] = F.norm(out[row[-1]] + bv)
        return Cochain(self.total, F, k, out)

    def random_cochain(self, k, rng) -> Cochain:
        return Cochain.random(self.total, self.F, k, rng)

    # pairings

    def iota(self, x0: Cochain, x1: Cochain):
        """sum_j j * integral over the cover of (q^{-j} x0) . x1."""
        if self.total.fundamental_cycle is None:
            raise SchemaError("the base has no fundamental cycle")
        if x0.degree + x1.degree != self.base.dim:
            raise SchemaError("degrees must add up to the dimension")
        F = self.F
        return F.norm(sum(j * integrate(cup(self.q(x0, -j), x1)) for j in range(1, self.p)))

    def I(self, c0, c1):
        """The pairing on the quotient, evaluated through sections.

        ``c0`` and ``c1`` are pairs (a, b) of base cochains.
        """
        tw = self.twisted_complex()
        for c in (c0, c1):
            if not tw.is_cocycle(*c):
                raise SchemaError("pairing arguments must be cocycles of the twisted complex")
        return self.iota(self.section(*c0), self.section(*c1))

    def total_complex(self) -> GradedComplex:
        return self.total.cochain_complex(self.F)

    def twisted_complex(self) -> "TwistedComplex":
        if self._twisted is None:
            self._twisted = TwistedComplex(self)
        return self._twisted

    def components(self):
        """Number of connected components of the cover."""
        parent = {}

        def find(v):
            while parent.setdefault(v, v) != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for v in self.total.vertices:
            find(v)
        for u, v in self.total.simplices.get(1, ()):
            parent[find(u)] = find(v)
        return len({find(v) for v in self.total.vertices})


def build_cover(K: SimplicialComplex, beta: Cochain, p: int) -> CyclicCover:
    return CyclicCover(K, beta, p)


@dataclass
class TwistedComplex:
    """Cochains of the cover modulo (q - 1)^2, in (a, b) block coordinates."""

    cover: CyclicCover

    def __post_init__(self):
        cov = self.cover
        K, F = cov.base, cov.F
        dims = {k: 2 * n for k, n in K.dims().items()}
        d = {}
        for k in range(K.dim + 1):
            n, m = K.count(k), K.count(k + 1)
            cols = []
            for j in range(2 * n):
                a = Cochain.zero(K, F, k)
                b = Cochain.zero(K, F, k)
                (a if j < n else b).values[j % n] = F.one
                img = cov.section(a, b).d()
                if m:
                    qa, qb = cov.quotient(img)
                    cols.append(qa.values + qb.values)
                else:
                    cols.append([])
            d[k] = la.transpose(cols, 2 * m)
        self.complex = GradedComplex(F, dims, d)

    @property
    def F(self):
        return self.cover.F

    def split(self, k, v):
        n = self.cover.base.count(k)
        K, F = self.cover.base, self.F
        return Cochain(K, F, k, list(v[:n])), Cochain(K, F, k, list(v[n:]))

    def join(self, a: Cochain, b: Cochain):
        return a.values + b.values

    def d(self, a: Cochain, b: Cochain):
        return self.split(a.degree + 1, self.complex.apply_d(a.degree, self.join(a, b)))

    def is_cocycle(self, a, b):
        return not any(self.complex.apply_d(a.degree, self.join(a, b)))

    def inclusion(self) -> ChainMap:
        """C(K) -> twisted complex, b -> (0, b): multiplication by q - 1."""
        K, F = self.cover.base, self.F
        C = K.cochain_complex(F)
        blocks = {}
        for k in range(K.dim + 1):
            n = K.count(k)
            blocks[k] = [[F.zero] * n for _ in range(n)] + la.identity(F, n)
        return ChainMap(C, self.complex, 0, blocks)

    def projection(self) -> ChainMap:
        """twisted complex -> C(K), (a, b) -> a."""
        K, F = self.cover.base, self.F
        blocks = {}
        for k in range(K.dim + 1):
            n = K.count(k)
            blocks[k] = [row + [F.zero] * n for row in la.identity(F, n)]
        return ChainMap(self.complex, K.cochain_complex(F), 0, blocks)

    def boundary_map(self) -> ChainMap:
        """Connecting map of the coefficient sequence: a -> beta.a, degree one."""
        return cup_left_map(self.cover.beta, self.F)

    def les_check(self):
        """The twisted complex is the cone of a -> -beta.a; verify the sequence."""
        f = cup_left_map(self.cover.beta, self.F, sign=-1)
        return les_dimension_check(self.complex, f)

    def cohomology(self):
        return self.complex.cohomology()

    def cocycle_basis(self, k):
        return [self.split(k, v) for v in self.cohomology().reps.get(k, [])]


def cup_left_map(beta: Cochain, F: Field, sign=1) -> ChainMap:
    """Degree-one chain map x -> sign * beta.x on the cochains of beta's complex."""
    K = beta.K
    if beta.F != F:
        beta = Cochain(K, F, 1, [F(v) for v in beta.values])
    C = K.cochain_complex(F)
    blocks = {}
    for k in range(K.dim + 1):
        cols = []
        for j in range(K.count(k)):
            e = Cochain.zero(K, F, k)
            e.values[j] = F.one
            cols.append([F.norm(sign * v) for v in cup(beta, e).values])
        blocks[k] = la.transpose(cols, K.count(k + 1))
    return ChainMap(C, C, 1, blocks)
