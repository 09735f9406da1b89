"""The cone of multiplication by beta and its pairing.

A cochain of the cone in degree k is a pair (xi, x) with xi in C(-1)^k and x
in C(1)^k, stored as the concatenated vector; the differential is
(xi, x) -> (d xi, d x - beta.xi).  The pairing of (xi0, x0) in degree k with
(xi1, x1) in degree 2n - k is

    <x0, xi1> - (-1)^k <x1, xi0> + <beta, xi0 * xi1>.
"""
from __future__ import annotations

from dataclasses import dataclass

from .. import linalg as la
from ..complexes import ChainMap, GradedComplex, les_dimension_check, mapping_cone
from ..errors import AxiomViolation, SchemaError
from .model import FloerModel
from .tensors import matrix_of_left


def beta_map(model: FloerModel) -> ChainMap:
    """xi -> beta.xi, a degree one chain map C(-1) -> C(1)."""
    F = model.F
    m = model.product(2, -1)
    A, B = model.C(-1), model.C(1)
    blocks = {k: matrix_of_left(F, m, 1, model.beta, k) for k in A.degrees}
    return ChainMap(A, B, 1, blocks)


def cone_complex(model: FloerModel) -> GradedComplex:
    return mapping_cone(beta_map(model))


@dataclass
class ConePairing:
    model: FloerModel

    def __post_init__(self):
        model = self.model
        self.F = F = model.F
        self.n = model.n
        self.f = beta_map(model)
        self.complex = mapping_cone(self.f)
        self.neg, self.pos = model.C(-1), model.C(1)
        P1 = model.pairing(1)
        P2 = model.pairing(2)
        star = model.star.get((-1, -1))
        top = 2 * self.n
        # w . z = <beta, z> for z in C(-2)^{2n-1}
        w = la.vecmat(F, model.beta, P2.block(1), cols=model.C(-2).dim(top - 1))
        self.gram = {}
        for k in self.complex.degrees:
            s = top - k
            a0, b0 = self.neg.dim(k), self.pos.dim(k)
            a1, b1 = self.neg.dim(s), self.pos.dim(s)
            J = la.zeros(F, a0 + b0, a1 + b1)
            if star is not None:
                for (i, j), vec in star.block(k, s).items():
                    J[i][j] = F.norm(sum(c * w[t] for t, c in vec.items()))
            G = P1.block(k)  # C(1)^k x C(-1)^s
            for i in range(b0):
                for j in range(a1):
                    J[a0 + i][j] = G[i][j]
            Gs = P1.block(s)  # C(1)^s x C(-1)^k
            sign = -F.sign(k)
            for j in range(b1):
                for i in range(a0):
                    J[i][a1 + j] = F.norm(sign * Gs[j][i])
            self.gram[k] = J

    # cochain level

    def split(self, k, v):
        a = self.neg.dim(k)
        return list(v[:a]), list(v[a:])

    def join(self, xi, x):
        return list(xi) + list(x)

    def d(self, k, v):
        return self.complex.apply_d(k, v)

    def iota(self, k, a, b):
        """Pairing of a in degree k with b in degree 2n - k."""
        F = self.F
        J = self.gram.get(k)
        if J is None or len(a) != len(J) or (J and len(b) != len(J[0])):
            raise SchemaError("cone elements must have degrees adding up to 2n")
        return F.norm(sum(x * m * y for x, row in zip(a, J) if x for m, y in zip(row, b) if m and y))

    def chain_map_defect(self):
        """First (k, i, j) where iota(d e_i, e_j) + (-1)^k iota(e_i, d e_j) != 0."""
        F, C, top = self.F, self.complex, 2 * self.n
        for k in C.degrees:
            s = top - 1 - k
            if s not in C.degrees:
                continue
            Dk = C.differential(k)
            lhs = la.matmul(F, la.transpose(Dk, C.dim(k)), self.gram.get(k + 1) or la.zeros(F, C.dim(k + 1), C.dim(s)),
                            inner=C.dim(k + 1), cols=C.dim(s))
            rhs = la.matmul(F, self.gram[k], C.differential(s), inner=C.dim(s + 1), cols=C.dim(s))
            sign = F.sign(k)
            for i in range(C.dim(k)):
                for j in range(C.dim(s)):
                    if F.norm(lhs[i][j] + sign * rhs[i][j]):
                        return k, i, j
        return None

    # cohomology level

    def _check_cocycle(self, k, v):
        if any(self.complex.apply_d(k, v)):
            raise AxiomViolation(f"argument in degree {k} is not a cocycle of the cone")

    def I(self, k, a, b):
        self._check_cocycle(k, a)
        self._check_cocycle(2 * self.n - k, b)
        return self.iota(k, a, b)

    def cohomology_gram(self, k):
        H = self.complex.cohomology()
        R0, R1 = H.reps.get(k, []), H.reps.get(2 * self.n - k, [])
        return [[self.iota(k, a, b) for b in R1] for a in R0]

    def nondegeneracy_report(self):
        """Per degree: (dim H^k, dim H^{2n-k}, rank of the Gram matrix, full rank?)."""
        F = self.F
        H = self.complex.cohomology()
        rows = {}
        for k in self.complex.degrees:
            G = self.cohomology_gram(k)
            h0, h1 = H.dim(k), H.dim(2 * self.n - k)
            r = la.rank(F, G, h1) if G else 0
            rows[k] = (h0, h1, r, h0 == h1 == r)
        return rows

    def symmetry_defect(self, k, a, b):
        """I(a, b) + (-1)^k I(b, a) - <beta, [xi0, xi1]>, zero by construction of iota."""
        F, model = self.F, self.model
        s = 2 * self.n - k
        xi0, _ = self.split(k, a)
        xi1, _ = self.split(s, b)
        star = model.star[(-1, -1)]
        bracket = [F.norm(u + F.sign(k * s) * v)
                   for u, v in zip(star.apply(k, xi0, s, xi1), star.apply(s, xi1, k, xi0))]
        rhs = model.pairing(2)(1, model.beta, bracket)
        return F.norm(self.I(k, a, b) + F.sign(k) * self.I(s, b, a) - rhs)

    def les_check(self):
        return les_dimension_check(self.complex, self.f)


def cohomology_nondegenerate(model: FloerModel, label=1):
    """Is the pairing of C(label) with C(-label) perfect on cohomology?"""
    P = model.pairing(label)
    F = model.F
    for k in P.left.degrees:
        G = P.on_cohomology(k)
        h0, h1 = P.left.cohomology().dim(k), P.right.cohomology().dim(P.total - k)
        if h0 != h1 or (h0 and la.rank(F, G, h1) != h0):
            return False
    return True


def dilation_defect(cone: ConePairing, k, a, b):
    """I(a, b) + (-1)^k I(b, a) - <delta beta, xi0 . xi1>, cochain level.

    Under the BV relation the bracket term equals <delta beta, xi0 . xi1> as
    soon as both xi are delta-closed; with delta beta the unit this is the
    ordinary intersection number of xi0 and xi1.
    """
    model, F = cone.model, cone.F
    if not model.bv:
        raise SchemaError("the dilation form needs a BV operator")
    s = 2 * cone.n - k
    xi0, _ = cone.split(k, a)
    xi1, _ = cone.split(s, b)
    dbeta = la.matvec(F, model.bv_matrix(2, 1), model.beta)
    prod = model.product(-1, -1).apply(k, xi0, s, xi1)
    rhs = model.pairing(2)(0, dbeta, prod)
    return F.norm(cone.iota(k, a, b) + F.sign(k) * cone.iota(s, b, a) - rhs)
