"""Finite cochain complexes, chain maps, pairings, cohomology and mapping cones."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from . import linalg as la
from .errors import MalformedComplex, NotAChainMap, SchemaError
from .field import Field


class GradedComplex:
    """Cochain complex concentrated in degrees ``lo .. hi``.

    ``d[k]`` is the matrix of ``C^k -> C^{k+1}`` with shape
    ``dims[k+1] x dims[k]``; any degree outside the window is zero.
    """

    def __init__(self, F: Field, dims: dict, d: dict | None = None, check=True):
        self.F = F
        self.dims = {int(k): int(v) for k, v in dims.items()}
        self.degrees = sorted(self.dims)
        if self.degrees and self.degrees != list(range(self.degrees[0], self.degrees[-1] + 1)):
            raise MalformedComplex("degrees must form a contiguous window")
        self.d = {}
        for k in self.degrees:
            m = (d or {}).get(k)
            rows, cols = self.dim(k + 1), self.dim(k)
            if m is None:
                m = la.zeros(F, rows, cols)
            if len(m) != rows or any(len(r) != cols for r in m):
                raise MalformedComplex(f"d_{k} should be {rows}x{cols}")
            self.d[k] = [[F(x) for x in r] for r in m]
        if check:
            for k in self.degrees:
                sq = la.matmul(F, self.differential(k + 1), self.differential(k),
                               inner=self.dim(k + 1), cols=self.dim(k))
                if not la.is_zero_matrix(sq):
                    raise MalformedComplex(f"d_{k + 1} d_{k} != 0")
        self._cohomology = None

    def dim(self, k):
        return self.dims.get(k, 0)

    @property
    def lo(self):
        return self.degrees[0] if self.degrees else 0

    @property
    def hi(self):
        return self.degrees[-1] if self.degrees else -1

    def differential(self, k):
        if k in self.d:
            return self.d[k]
        return la.zeros(self.F, self.dim(k + 1), self.dim(k))

    def apply_d(self, k, v):
        return la.matvec(self.F, self.differential(k), v) if self.dim(k + 1) else []

    def euler_characteristic(self):
        return sum((-1) ** k * n for k, n in self.dims.items())

    def cohomology(self):
        if self._cohomology is None:
            self._cohomology = Cohomology(self)
        return self._cohomology

    def betti(self):
        return {k: self.cohomology().dim(k) for k in self.degrees}

    def __repr__(self):
        return f"GradedComplex({self.F!r}, dims={self.dims})"


class Cohomology:
    """Cocycle representatives and the projection to cohomology coordinates.

    In degree k the basis of C^k is split as (coboundaries, representatives,
    complement); ``project`` returns the representative coordinates of a
    vector in that basis, which for a cocycle is its cohomology class.
    """

    def __init__(self, C: GradedComplex):
        F = C.F
        self.complex = C
        self.reps = {}
        self._ech = {}
        self._rep_tags = {}
        for k in C.degrees:
            n = C.dim(k)
            ech = la.Echelon(F)
            prev = C.differential(k - 1)
            for j in range(C.dim(k - 1)):
                ech.add({i: prev[i][j] for i in range(n) if prev[i][j]})
            reps, tags = [], []
            for z in la.nullspace(F, C.differential(k), n):
                tag = ech.generators
                if ech.add(la.to_sparse(z)):
                    reps.append(z)
                    tags.append(tag)
            for i in range(n):
                ech.add({i: F.one})
            self.reps[k] = reps
            self._ech[k] = ech
            self._rep_tags[k] = tags

    def dim(self, k):
        return len(self.reps.get(k, ()))

    def dims(self):
        return {k: self.dim(k) for k in self.complex.degrees}

    def project(self, k, v):
        """Class of a cocycle ``v`` in degree k, in the representative basis."""
        F = self.complex.F
        if k not in self._ech:
            return []
        coords = self._ech[k].coordinates(la.to_sparse(v))
        return [coords.get(t, F.zero) for t in self._rep_tags[k]]

    def projection_matrix(self, k):
        n = self.complex.dim(k)
        F = self.complex.F
        cols = [self.project(k, [F.one if i == j else F.zero for i in range(n)]) for j in range(n)]
        return la.transpose(cols, self.dim(k))

    def is_cocycle(self, k, v):
        return not any(self.complex.apply_d(k, v))

    def is_coboundary(self, k, v):
        return self.is_cocycle(k, v) and not any(self.project(k, v))


@dataclass
class ChainMap:
    """Degree-``shift`` map with blocks ``f[k]: C^k -> D^{k+shift}``.

    Chain condition: ``d_D f = (-1)^shift f d_C``.
    """

    source: GradedComplex
    target: GradedComplex
    shift: int
    blocks: dict = dc_field(default_factory=dict)
    check: bool = True

    def __post_init__(self):
        F = self.source.F
        for k in self.source.degrees:
            rows, cols = self.target.dim(k + self.shift), self.source.dim(k)
            m = self.blocks.get(k)
            if m is None:
                m = la.zeros(F, rows, cols)
            if len(m) != rows or any(len(r) != cols for r in m):
                raise SchemaError(f"chain map block {k} should be {rows}x{cols}")
            self.blocks[k] = m
        if self.check:
            bad = self.chain_defect()
            if bad is not None:
                raise NotAChainMap(f"chain condition fails in degree {bad}")

    def block(self, k):
        if k in self.blocks:
            return self.blocks[k]
        return la.zeros(self.source.F, self.target.dim(k + self.shift), self.source.dim(k))

    def apply(self, k, v):
        return la.matvec(self.source.F, self.block(k), v)

    def chain_defect(self):
        """First degree where the chain condition fails, else None."""
        F, s = self.source.F, self.shift
        for k in self.source.degrees:
            lhs = la.matmul(F, self.target.differential(k + s), self.block(k),
                            inner=self.target.dim(k + s), cols=self.source.dim(k))
            rhs = la.matmul(F, self.block(k + 1), self.source.differential(k),
                            inner=self.source.dim(k + 1), cols=self.source.dim(k))
            sign = F.sign(s)
            if any(F.norm(a - sign * b) for ra, rb in zip(lhs, rhs) for a, b in zip(ra, rb)):
                return k
        return None

    def on_cohomology(self, k):
        """Matrix of the induced map H^k(source) -> H^{k+shift}(target)."""
        HA, HB = self.source.cohomology(), self.target.cohomology()
        cols = [HB.project(k + self.shift, self.apply(k, z)) for z in HA.reps.get(k, [])]
        return la.transpose(cols, HB.dim(k + self.shift))


class GradedPairing:
    """Bilinear pairing of ``left^k`` with ``right^{total-k}``.

    ``blocks[k][i][j]`` is the value on the i-th basis vector of ``left^k``
    and the j-th of ``right^{total-k}``.
    """

    def __init__(self, left: GradedComplex, right: GradedComplex, total: int, blocks: dict):
        self.left, self.right, self.total = left, right, total
        F = left.F
        self.blocks = {}
        for k in left.degrees:
            rows, cols = left.dim(k), right.dim(total - k)
            m = blocks.get(k) or la.zeros(F, rows, cols)
            if len(m) != rows or any(len(r) != cols for r in m):
                raise SchemaError(f"pairing block {k} should be {rows}x{cols}")
            self.blocks[k] = m

    def block(self, k):
        return self.blocks.get(k) or la.zeros(self.left.F, self.left.dim(k), self.right.dim(self.total - k))

    def __call__(self, k, x, y):
        F = self.left.F
        M = self.block(k)
        return F.norm(sum(a * m * b for a, row in zip(x, M) if a for m, b in zip(row, y) if m and b))

    def adjointness_defect(self):
        """First (k, i, j) where <dx,y> + (-1)^|x| <x,dy> != 0 on basis vectors."""
        F, L, R, n = self.left.F, self.left, self.right, self.total
        for k in L.degrees:
            # x in L^k, y in R^{n-k-1}
            dL = L.differential(k)
            dR = R.differential(n - k - 1)
            lhs = la.matmul(F, la.transpose(dL, L.dim(k)), self.block(k + 1),
                            inner=L.dim(k + 1), cols=R.dim(n - k - 1))
            rhs = la.matmul(F, self.block(k), dR, inner=R.dim(n - k), cols=R.dim(n - k - 1))
            sign = F.sign(k)
            for i in range(L.dim(k)):
                for j in range(R.dim(n - k - 1)):
                    if F.norm(lhs[i][j] + sign * rhs[i][j]):
                        return k, i, j
        return None

    def on_cohomology(self, k):
        """Gram matrix on cohomology representatives."""
        HL, HR = self.left.cohomology(), self.right.cohomology()
        return [[self(k, a, b) for b in HR.reps.get(self.total - k, [])] for a in HL.reps.get(k, [])]


def mapping_cone(f: ChainMap) -> GradedComplex:
    """Cone of a degree one map: C^k = A^k + B^k, d(a, b) = (d a, d b - f a)."""
    if f.shift != 1:
        raise SchemaError("mapping_cone expects a map of degree one")
    A, B = f.source, f.target
    F = A.F
    degrees = range(min(A.lo, B.lo), max(A.hi, B.hi) + 1)
    dims = {k: A.dim(k) + B.dim(k) for k in degrees}
    d = {}
    for k in degrees:
        a0, b0, a1, b1 = A.dim(k), B.dim(k), A.dim(k + 1), B.dim(k + 1)
        m = la.zeros(F, a1 + b1, a0 + b0)
        dA, dB, fk = A.differential(k), B.differential(k), f.block(k)
        for i in range(a1):
            m[i][:a0] = dA[i]
        for i in range(b1):
            m[a1 + i][:a0] = [F.norm(-x) for x in fk[i]]
            m[a1 + i][a0:] = dB[i]
        d[k] = m
    return GradedComplex(F, dims, d)


def les_dimension_check(cone: GradedComplex, f: ChainMap):
    """Compare dim H^k(cone) with dim coker(Hf)_{k-1} + dim ker(Hf)_k.

    Hf_k : H^k(A) -> H^{k+1}(B).  Returns ``(ok, rows)`` where each row is
    ``(k, dim H^k(cone), coker part, ker part)``.
    """
    F = f.source.F
    HA, HB = f.source.cohomology(), f.target.cohomology()
    rows, ok = [], True
    for k in cone.degrees:
        prev = f.on_cohomology(k - 1)
        coker = HB.dim(k) - la.rank(F, prev, HA.dim(k - 1))
        cur = f.on_cohomology(k)
        ker = HA.dim(k) - la.rank(F, cur, HA.dim(k))
        h = cone.cohomology().dim(k)
        rows.append((k, h, coker, ker))
        ok &= h == coker + ker
    return ok, rows


def direct_sum(F: Field, *complexes: GradedComplex) -> GradedComplex:
    degrees = sorted({k for C in complexes for k in C.degrees})
    dims = {k: sum(C.dim(k) for C in complexes) for k in degrees}
    d = {}
    for k in degrees:
        m = la.zeros(F, dims.get(k + 1, 0), dims[k])
        r0 = c0 = 0
        for C in complexes:
            blk = C.differential(k)
            for i, row in enumerate(blk):
                m[r0 + i][c0:c0 + len(row)] = row
            r0 += C.dim(k + 1)
            c0 += C.dim(k)
        d[k] = m
    return GradedComplex(F, dims, d)


def random_complex(F: Field, rng, degrees=range(0, 3), max_dim=4, homology=None):
    """Random complex with d^2 = 0, conjugated away from normal form.

    Returns ``(complex, data)`` where ``data`` describes the normal form
    (homology dims, number of acyclic pairs per degree, change of basis).
    """
    degrees = list(degrees)
    hom = {k: (homology or {}).get(k, rng.randint(0, max_dim // 2)) for k in degrees}
    pairs = {k: rng.randint(0, max_dim // 2) if k != degrees[-1] else 0 for k in degrees}
    # basis of C^k: [H^k | sources of pairs from k | targets of pairs from k-1]
    dims = {k: hom[k] + pairs[k] + pairs.get(k - 1, 0) for k in degrees}
    normal = {}
    for k in degrees:
        m = la.zeros(F, dims.get(k + 1, 0), dims[k])
        for t in range(pairs[k]):
            m[hom[k + 1] + pairs.get(k + 1, 0) + t][hom[k] + t] = F.one
        normal[k] = m
    change = {k: la.random_invertible(F, rng, dims[k]) for k in degrees}
    d = {}
    for k in degrees:
        if dims.get(k + 1, 0) == 0:
            d[k] = la.zeros(F, 0, dims[k])
            continue
        inv = la.inverse(F, change[k]) if dims[k] else []
        d[k] = la.matmul(F, la.matmul(F, change[k + 1], normal[k], cols=dims[k]), inv,
                         inner=dims[k], cols=dims[k])
    C = GradedComplex(F, dims, d)
    return C, {"homology": hom, "pairs": pairs, "change": change, "normal": normal}


def random_chain_map(F: Field, rng, A, A_data, B, B_data, shift=1):
    """Random degree-``shift`` chain map between two ``random_complex`` outputs.

    Built in normal-form coordinates as f0 + d K + (-1)^shift K d, where f0
    sends homology generators to homology generators, then conjugated.
    """
    sign = F.sign(shift)
    hA, hB = A_data["homology"], B_data["homology"]

    def normal(data, C, k):
        return data["normal"].get(k) or la.zeros(F, C.dim(k + 1), C.dim(k))

    K = {k: la.random_matrix(F, rng, B.dim(k + shift - 1), A.dim(k), density=0.5)
         for k in range(A.lo, A.hi + 2)}
    f = {}
    for k in A.degrees:
        t = k + shift
        rows, cols = B.dim(t), A.dim(k)
        if not rows or not cols:
            f[k] = la.zeros(F, rows, cols)
            continue
        blk = la.zeros(F, rows, cols)
        for i in range(hB.get(t, 0)):
            for j in range(hA[k]):
                blk[i][j] = F.random_element(rng)
        dK = la.matmul(F, normal(B_data, B, t - 1), K[k], inner=B.dim(t - 1), cols=cols)
        Kd = la.matmul(F, K[k + 1], normal(A_data, A, k), inner=A.dim(k + 1), cols=cols)
        blk = [[F.norm(a + b + sign * c) for a, b, c in zip(r0, r1, r2)]
               for r0, r1, r2 in zip(blk, dK, Kd)]
        PA, PB = A_data["change"][k], B_data["change"][t]
        f[k] = la.matmul(F, la.matmul(F, PB, blk), la.inverse(F, PA))
    return ChainMap(A, B, shift, f)
