"""Per-Lagrangian data slots, equivariant classes, the twisted endomorphism
and the six-term map.

Slot shapes, for a model of dimension parameter n:

* ``phi10`` is a cocycle in C(-1)^n;
* ``phi11`` is a chain map C(2) -> CF(L, L) of degree 0;
* ``phi11_check`` is a chain map CF(L, L) -> C(1) of degree n;
* ``phi20`` maps C(2)^k -> C(1)^{k+n-1};
* ``gamma`` lies in CF^0(L, L).

For a pair (L0, L1) the cross slots act on W = CF(L0, L1): ``mu2_left`` is
CF(L1, L1) x W -> W, ``mu2_right`` is W x CF(L0, L0) -> W, ``phi12`` is
C(2) x W -> W of degree -1 and ``psi``/``psi_check`` are functionals on
CF^1(L1, L1) and CF^1(L0, L0).
"""
from __future__ import annotations

from dataclasses import dataclass

from .. import linalg as la
from ..complexes import ChainMap, GradedComplex
from ..errors import AxiomViolation, SchemaError
from .cone import ConePairing
from .model import AxiomResult, FloerModel
from .tensors import BilinearMap, combine, first_key, matrix_of_left, matrix_of_right, post, pre_left, pre_right
from .traces import supertrace


def _dot(F, u, v):
    return F.norm(sum(a * b for a, b in zip(u, v) if a and b))


def _matrix_fail(name, F, A, B, where):
    for i, (ra, rb) in enumerate(zip(A, B)):
        for j, (a, b) in enumerate(zip(ra, rb)):
            if F.norm(a - b):
                return AxiomResult(name, "fail", {**where, "entry": (i, j)})
    return None


@dataclass
class LagrangianDatum:
    name: str
    endo: GradedComplex
    phi10: list
    phi11: ChainMap
    phi11_check: ChainMap
    phi20: dict
    gamma: list
    unit: list | None = None

    def phi20_block(self, model: FloerModel, k):
        n = model.n
        m = self.phi20.get(k)
        return m if m is not None else la.zeros(model.F, model.C(1).dim(k + n - 1), model.C(2).dim(k))

    def phi20_apply(self, model, k, v):
        return la.matvec(model.F, self.phi20_block(model, k), v)

    def validate(self, model: FloerModel):
        n, F = model.n, model.F
        if len(self.phi10) != model.C(-1).dim(n):
            raise SchemaError(f"{self.name}: phi10 must lie in C(-1)^n")
        if self.phi11.source is not model.C(2) or self.phi11.target is not self.endo or self.phi11.shift:
            raise SchemaError(f"{self.name}: phi11 must map C(2) to CF(L, L) in degree 0")
        if (self.phi11_check.source is not self.endo or self.phi11_check.target is not model.C(1)
                or self.phi11_check.shift != n):
            raise SchemaError(f"{self.name}: phi11_check must map CF(L, L) to C(1) in degree n")
        for k, m in self.phi20.items():
            rows, cols = model.C(1).dim(k + n - 1), model.C(2).dim(k)
            if len(m) != rows or any(len(r) != cols for r in m):
                raise SchemaError(f"{self.name}: phi20 block {k} should be {rows}x{cols}")
        if len(self.gamma) != self.endo.dim(0):
            raise SchemaError(f"{self.name}: gamma must lie in CF^0(L, L)")
        self.phi10 = [F(v) for v in self.phi10]
        self.gamma = [F(v) for v in self.gamma]

    def relations(self, model: FloerModel):
        """Exact check of every relation the slots are supposed to satisfy."""
        self.validate(model)
        F, n = model.F, model.n
        C1, C2 = model.C(1), model.C(2)
        out = {}
        bad = any(model.C(-1).apply_d(n, self.phi10))
        out["phi10_closed"] = AxiomResult("phi10_closed", "fail" if bad else "pass")
        for key, f in (("phi11_chain", self.phi11), ("phi11_check_chain", self.phi11_check)):
            k = f.chain_defect()
            out[key] = AxiomResult(key, "pass" if k is None else "fail", None if k is None else {"degree": k})
        # d phi20(x) + (-1)^n phi20(dx) = phi11_check(phi11(x)) - (-1)^{n|x|} x.phi10
        m = model.product(2, -1)
        out["phi_phi"] = AxiomResult("phi_phi", "pass")
        for k in C2.degrees:
            cols = C2.dim(k)
            lhs = la.add(F, la.matmul(F, C1.differential(k + n - 1), self.phi20_block(model, k),
                                      inner=C1.dim(k + n - 1), cols=cols),
                         la.scale(F, F.sign(n), la.matmul(F, self.phi20_block(model, k + 1), C2.differential(k),
                                                          inner=C2.dim(k + 1), cols=cols)))
            rhs = la.add(F, la.matmul(F, self.phi11_check.block(k), self.phi11.block(k),
                                      inner=self.endo.dim(k), cols=cols),
                         la.scale(F, -F.sign(n * k), matrix_of_right(F, m, k, n, self.phi10)))
            fail = _matrix_fail("phi_phi", F, lhs, rhs, {"degree": k})
            if fail:
                out["phi_phi"] = fail
                break
        want = self.phi11.apply(1, model.beta)
        got = self.endo.apply_d(0, self.gamma)
        ok = all(not F.norm(a - b) for a, b in zip(got, want))
        out["gamma_cobounds"] = AxiomResult("gamma_cobounds", "pass" if ok else "fail")
        return out


def _require(results, names, what):
    bad = [n for n in names if not results[n].ok]
    if bad:
        raise AxiomViolation(f"{what}: relations fail: {', '.join(bad)}", witness={n: results[n].witness for n in bad})


def equivariant_class(model: FloerModel, datum: LagrangianDatum, check=True):
    """The cone cocycle (phi10, (-1)^{n+1} phi20(beta) + phi11_check(gamma)) as a flat vector."""
    F, n = model.F, model.n
    if check:
        _require(datum.relations(model), ("phi10_closed", "phi11_chain", "phi11_check_chain",
                                          "phi_phi", "gamma_cobounds"), datum.name)
    else:
        datum.validate(model)
    a = datum.phi20_apply(model, 1, model.beta)
    b = datum.phi11_check.apply(0, datum.gamma)
    x = [F.norm(F.sign(n + 1) * u + v) for u, v in zip(a, b)]
    vec = list(datum.phi10) + x
    cone = ConePairing(model)
    if any(cone.d(n, vec)):
        raise AxiomViolation(f"{datum.name}: equivariant element is not closed in the cone")
    return vec


@dataclass
class CrossDatum:
    complex: GradedComplex
    mu2_left: BilinearMap
    mu2_right: BilinearMap
    phi12: BilinearMap
    psi: list | None = None
    psi_check: list | None = None


@dataclass
class ExtendedModel:
    model: FloerModel
    L0: LagrangianDatum
    L1: LagrangianDatum
    cross: CrossDatum

    def __post_init__(self):
        W, c = self.cross.complex, self.cross
        if c.mu2_left.left is not self.L1.endo or c.mu2_left.right is not W or c.mu2_left.target is not W:
            raise SchemaError("mu2_left must map CF(L1, L1) x W to W")
        if c.mu2_right.left is not W or c.mu2_right.right is not self.L0.endo or c.mu2_right.target is not W:
            raise SchemaError("mu2_right must map W x CF(L0, L0) to W")
        if c.phi12.left is not self.model.C(2) or c.phi12.right is not W or c.phi12.degree != -1:
            raise SchemaError("phi12 must map C(2) x W to W with degree -1")
        for name, psi, L in (("psi", c.psi, self.L1), ("psi_check", c.psi_check, self.L0)):
            if psi is not None and len(psi) != L.endo.dim(1):
                raise SchemaError(f"{name} must be a functional on CF^1")

    @property
    def F(self):
        return self.model.F

    @property
    def n(self):
        return self.model.n

    def str_left(self, a):
        """Str(mu2_left(a, .)) for a in CF^0(L1, L1)."""
        W = self.cross.complex
        return supertrace(self.F, {q: matrix_of_left(self.F, self.cross.mu2_left, 0, a, q) for q in W.degrees})

    def str_right(self, a):
        W = self.cross.complex
        return supertrace(self.F, {q: matrix_of_right(self.F, self.cross.mu2_right, q, 0, a) for q in W.degrees})

    def relations(self):
        F, n, model, c = self.F, self.n, self.model, self.cross
        W = c.complex
        out = {}
        for tag, L in (("L0", self.L0), ("L1", self.L1)):
            for key, r in L.relations(model).items():
                out[f"{tag}.{key}"] = r
        # mu1 phi12(x, a) + phi12(dx, a) + (-1)^|x| phi12(x, mu1 a)
        #   = mu2(phi11_L1 x, a) - (-1)^{|a||x|} mu2(a, phi11_L0 x)
        C2 = model.C(2)
        out["phi12"] = AxiomResult("phi12", "pass")
        for p in C2.degrees:
            for q in W.degrees:
                r = p + q - 1
                lhs = combine(F, (1, post(F, c.phi12.block(p, q), W.differential(r))),
                              (1, pre_left(F, c.phi12.block(p + 1, q), C2.differential(p))),
                              (F.sign(p), pre_right(F, c.phi12.block(p, q + 1), W.differential(q))))
                t1 = pre_left(F, c.mu2_left.block(p, q), self.L1.phi11.block(p))
                t2 = pre_right(F, c.mu2_right.block(q, p), self.L0.phi11.block(p))
                t2 = {(i, j): v for (j, i), v in t2.items()}
                rhs = combine(F, (1, t1), (-F.sign(p * q), t2))
                delta = combine(F, (1, lhs), (-1, rhs))
                if delta:
                    out["phi12"] = AxiomResult("phi12", "fail", {"degrees": (p, q), "basis": first_key(delta)})
                    break
            if not out["phi12"].ok:
                break
        P = model.pairing(-1)
        sign0 = F.sign(n * (n - 1) // 2)
        for key, psi, L, Lo, strf, s in (
                ("phi_check_phi", c.psi, self.L1, self.L0, self.str_left, -F.sign(n)),
                ("phi_check_phi_2", c.psi_check, self.L0, self.L1, self.str_right, -F.one)):
            if psi is None:
                out[key] = AxiomResult(key, "skipped", detail="functional not supplied")
                continue
            out[key] = AxiomResult(key, "pass")
            for i in range(L.endo.dim(0)):
                e = [F.one if j == i else F.zero for j in range(L.endo.dim(0))]
                lhs = _dot(F, psi, L.endo.apply_d(0, e))
                rhs = F.norm(sign0 * strf(e) + s * P(n, Lo.phi10, L.phi11_check.apply(0, e)))
                if F.norm(lhs - rhs):
                    out[key] = AxiomResult(key, "fail", {"basis": i})
                    break
        return out


def phi_endomorphism(ext: ExtendedModel, check=True):
    """x -> phi12(beta, x) - mu2(gamma_L1, x) + mu2(x, gamma_L0) as a ChainMap on W."""
    F, c = ext.F, ext.cross
    W = c.complex
    beta = ext.model.beta
    blocks = {}
    for q in W.degrees:
        a = matrix_of_left(F, c.phi12, 1, beta, q)
        b = matrix_of_left(F, c.mu2_left, 0, ext.L1.gamma, q)
        d = matrix_of_right(F, c.mu2_right, q, 0, ext.L0.gamma)
        blocks[q] = [[F.norm(x - y + z) for x, y, z in zip(ra, rb, rd)] for ra, rb, rd in zip(a, b, d)]
    return ChainMap(W, W, 0, blocks, check=check)


def phi_on_cohomology(ext: ExtendedModel):
    phi = phi_endomorphism(ext)
    return {q: phi.on_cohomology(q) for q in ext.cross.complex.degrees}


def hexagon_terms(ext: ExtendedModel, x):
    """The six contributions for x in C^1(2), in order (i)..(vi)."""
    F, n, model, c = ext.F, ext.n, ext.model, ext.cross
    if c.psi is None or c.psi_check is None:
        raise SchemaError("the six-term map needs both annulus functionals")
    if len(x) != model.C(2).dim(1):
        raise SchemaError("the six-term map takes an element of C^1(2)")
    P = model.pairing(-1)
    t1 = P(n, ext.L0.phi10, ext.L1.phi20_apply(model, 1, x))
    t2 = _dot(F, c.psi, ext.L1.phi11.apply(1, x))
    W = c.complex
    s12 = supertrace(F, {q: matrix_of_left(F, c.phi12, 1, x, q) for q in W.degrees})
    t3 = F.norm(F.sign(n * (n - 1) // 2 + 1) * s12)
    t4 = F.norm(-_dot(F, c.psi_check, ext.L0.phi11.apply(1, x)))
    t5 = F.norm(F.sign(n + 1) * P(n, ext.L1.phi10, ext.L0.phi20_apply(model, 1, x)))
    star = model.star[(-1, -1)].apply(n, ext.L0.phi10, n, ext.L1.phi10)
    t6 = F.norm(F.sign(n) * model.pairing(2)(1, x, star))
    return (t1, t2, t3, t4, t5, t6)


def hexagon_map(ext: ExtendedModel, x):
    """Value of the six-term functional on x, together with the individual terms."""
    terms = hexagon_terms(ext, x)
    return ext.F.norm(sum(terms)), terms


def hexagon_functional(ext: ExtendedModel):
    """The six-term map as a row vector on C^1(2)."""
    F = ext.F
    m = ext.model.C(2).dim(1)
    return [hexagon_map(ext, [F.one if j == i else F.zero for j in range(m)])[0] for i in range(m)]


def hexagon_kills_coboundaries(ext: ExtendedModel):
    """(ok, first failing basis index of C^0(2)): the functional composed with d vanishes."""
    F = ext.F
    C2 = ext.model.C(2)
    h = hexagon_functional(ext)
    row = la.vecmat(F, h, C2.differential(0), cols=C2.dim(0))
    for i, v in enumerate(row):
        if v:
            return False, i
    return True, None


@dataclass
class CardyReport:
    pairing: object
    supertrace: object
    sign: int
    defect: object
    hexagon_at_beta: object = None
    recombination_defect: object = None

    @property
    def ok(self):
        return not self.defect


def str_main_terms(ext: ExtendedModel):
    """Right-hand side of the supertrace expansion through the annulus relations."""
    F, n, model = ext.F, ext.n, ext.model
    c = ext.cross
    P = model.pairing(-1)
    beta = model.beta
    W = c.complex
    s12 = supertrace(F, {q: matrix_of_left(F, c.phi12, 1, beta, q) for q in W.degrees})
    sg = F.sign(n * (n + 1) // 2)
    return (
        F.norm(sg * s12),
        F.norm(-F.sign(n) * _dot(F, c.psi, ext.L1.phi11.apply(1, beta))),
        F.norm(-P(n, ext.L0.phi10, ext.L1.phi11_check.apply(0, ext.L1.gamma))),
        F.norm(F.sign(n) * _dot(F, c.psi_check, ext.L0.phi11.apply(1, beta))),
        F.norm(F.sign(n) * P(n, ext.L1.phi10, ext.L0.phi11_check.apply(0, ext.L0.gamma))),
    )


def cardy_check(ext: ExtendedModel, check=True):
    """I(class L0, class L1) - (-1)^{n(n+1)/2} Str(phi) on cohomology."""
    F, n, model = ext.F, ext.n, ext.model
    e0 = equivariant_class(model, ext.L0, check=check)
    e1 = equivariant_class(model, ext.L1, check=check)
    I = ConePairing(model).I(n, e0, e1)
    str_phi = supertrace(F, phi_on_cohomology(ext))
    sign = (-1) ** (n * (n + 1) // 2)
    defect = F.norm(I - sign * str_phi)
    hexa = recomb = None
    if ext.cross.psi is not None and ext.cross.psi_check is not None:
        hexa = hexagon_map(ext, model.beta)[0]
        recomb = F.norm(sign * str_phi - sum(str_main_terms(ext)))
    return CardyReport(I, str_phi, sign, defect, hexa, recomb)
