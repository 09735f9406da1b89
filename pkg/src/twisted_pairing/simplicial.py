"""Ordered simplicial complexes and their cochain operations.

Simplices are sorted vertex tuples, so the global vertex order fixes every
front/back face decomposition.  Products are exposed twice: as operations
on :class:`Cochain` objects and as sparse structure tensors
``{(i, j): {k: c}}`` (basis indices of the two inputs and of the output),
which is what the pairing code consumes.
"""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from itertools import combinations

from . import linalg as la
from .complexes import GradedComplex
from .errors import SchemaError
from .field import Field


class SimplicialComplex:
    def __init__(self, facets, fundamental_cycle=None, name=""):
        simplices = set()
        for f in facets:
            f = tuple(sorted(int(v) for v in f))
            if len(set(f)) != len(f) or not f:
                raise SchemaError(f"bad simplex {f}")
            for r in range(1, len(f) + 1):
                simplices.update(combinations(f, r))
        self.name = name
        self.dim = max(len(s) for s in simplices) - 1
        self.simplices = {k: sorted(s for s in simplices if len(s) == k + 1) for k in range(self.dim + 1)}
        self.index = {k: {s: i for i, s in enumerate(ss)} for k, ss in self.simplices.items()}
        self.vertices = [s[0] for s in self.simplices[0]]
        self.fundamental_cycle = None
        if fundamental_cycle is not None:
            cyc = {tuple(sorted(s)): int(sign) for s, sign in dict(fundamental_cycle).items()}
            if any(s not in self.index[self.dim] for s in cyc) or any(v not in (1, -1) for v in cyc.values()):
                raise SchemaError("fundamental cycle must use top simplices with signs +-1")
            self.fundamental_cycle = cyc
            if any(boundary_of(cyc).values()):
                raise SchemaError("fundamental cycle has nonzero boundary")
        self._cobound = {}

    # sizes and lookup

    def count(self, k):
        return len(self.simplices.get(k, ()))

    def dims(self):
        return {k: self.count(k) for k in range(self.dim + 1)}

    def euler_characteristic(self):
        return sum((-1) ** k * self.count(k) for k in range(self.dim + 1))

    def __contains__(self, simplex):
        s = tuple(sorted(simplex))
        return s in self.index.get(len(s) - 1, {})

    def idx(self, simplex):
        s = tuple(sorted(simplex))
        return self.index[len(s) - 1][s]

    # structure

    def coboundary(self, F: Field, k):
        """Matrix of C^k -> C^{k+1}, rows indexed by (k+1)-simplices."""
        key = (F, k)
        if key not in self._cobound:
            m = la.zeros(F, self.count(k + 1), self.count(k))
            idx = self.index.get(k, {})
            for r, s in enumerate(self.simplices.get(k + 1, ())):
                for i in range(len(s)):
                    m[r][idx[s[:i] + s[i + 1:]]] = F.sign(i)
            self._cobound[key] = m
        return self._cobound[key]

    def cochain_complex(self, F: Field) -> GradedComplex:
        dims = self.dims()
        return GradedComplex(F, dims, {k: self.coboundary(F, k) for k in dims}, check=False)

    def oriented(self):
        """Copy carrying a fundamental cycle found by sign propagation.

        Raises SchemaError when the top simplices do not form an orientable
        closed pseudomanifold.
        """
        n = self.dim
        faces = defaultdict(list)
        for s in self.simplices[n]:
            for i in range(n + 1):
                faces[s[:i] + s[i + 1:]].append((s, i))
        if any(len(v) != 2 for v in faces.values()):
            raise SchemaError("not a closed pseudomanifold: some face is not shared by two facets")
        sign = {}
        for start in self.simplices[n]:
            if start in sign:
                continue
            sign[start] = 1
            queue = deque([start])
            while queue:
                s = queue.popleft()
                for i in range(n + 1):
                    (a, ia), (b, ib) = faces[s[:i] + s[i + 1:]]
                    other, j = (b, ib) if a == s else (a, ia)
                    want = -sign[s] * (-1) ** (i + j)
                    if other in sign:
                        if sign[other] != want:
                            raise SchemaError("complex is not orientable")
                    else:
                        sign[other] = want
                        queue.append(other)
        return SimplicialComplex(self.simplices[n], sign, self.name)

    def subcomplex(self, simplices):
        return Subcomplex(self, simplices)

    def __repr__(self):
        return f"SimplicialComplex({self.name or 'unnamed'}, f={[self.count(k) for k in range(self.dim + 1)]})"


def boundary_of(chain):
    """Simplicial boundary of an integer chain {simplex: coefficient}."""
    out = defaultdict(int)
    for s, c in chain.items():
        for i in range(len(s)):
            out[s[:i] + s[i + 1:]] += (-1) ** i * c
    return {s: c for s, c in out.items() if c}


@dataclass
class Cochain:
    K: SimplicialComplex
    F: Field
    degree: int
    values: list

    @classmethod
    def zero(cls, K, F, k):
        return cls(K, F, k, [F.zero] * K.count(k))

    @classmethod
    def from_dict(cls, K, F, k, values):
        c = cls.zero(K, F, k)
        for s, v in values.items():
            c.values[K.idx(s)] = F(v)
        return c

    @classmethod
    def random(cls, K, F, k, rng):
        return cls(K, F, k, [F.random_element(rng) for _ in range(K.count(k))])

    def __call__(self, simplex):
        return self.values[self.K.idx(simplex)]

    def _check(self, other):
        if other.K is not self.K or other.F != self.F:
            raise SchemaError("cochains live on different complexes or fields")

    def __add__(self, other):
        self._check(other)
        if other.degree != self.degree:
            raise SchemaError("degree mismatch")
        return Cochain(self.K, self.F, self.degree, [self.F.norm(a + b) for a, b in zip(self.values, other.values)])

    def __neg__(self):
        return Cochain(self.K, self.F, self.degree, [self.F.norm(-a) for a in self.values])

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        c = self.F(c)
        return Cochain(self.K, self.F, self.degree, [self.F.norm(c * a) for a in self.values])

    def __eq__(self, other):
        return (isinstance(other, Cochain) and other.K is self.K and other.degree == self.degree
                and other.values == self.values)

    def is_zero(self):
        return not any(self.values)

    def d(self):
        k = self.degree
        if k >= self.K.dim:
            return Cochain(self.K, self.F, k + 1, [])
        return Cochain(self.K, self.F, k + 1, la.matvec(self.F, self.K.coboundary(self.F, k), self.values))

    def sparse(self):
        return {i: v for i, v in enumerate(self.values) if v}


def coboundary(K: SimplicialComplex, F: Field, k):
    return K.coboundary(F, k)


# products as structure tensors


def _tensor_apply(F, tensor, x, y, out_len):
    out = [F.zero] * out_len
    xs, ys = x.sparse(), y.sparse()
    if len(xs) * len(ys) < len(tensor):
        for i, a in xs.items():
            for j, b in ys.items():
                for k, c in tensor.get((i, j), {}).items():
                    out[k] += a * b * c
    else:
        for (i, j), terms in tensor.items():
            a, b = xs.get(i), ys.get(j)
            if a and b:
                for k, c in terms.items():
                    out[k] += a * b * c
    return [F.norm(v) for v in out]


_TENSORS = {}


def cup_tensor(K: SimplicialComplex, p, q):
    """Alexander-Whitney: (x cup y)(v0..v_{p+q}) = x(v0..vp) y(vp..v_{p+q})."""
    key = ("cup", id(K), p, q)
    if key not in _TENSORS:
        t = defaultdict(dict)
        ip, iq = K.index.get(p, {}), K.index.get(q, {})
        for k, s in enumerate(K.simplices.get(p + q, ())):
            t[(ip[s[:p + 1]], iq[s[p:]])][k] = 1
        _TENSORS[key] = (K, dict(t))
    return _TENSORS[key][1]


def cup1_terms(s, p, q):
    """Steenrod cup-1 terms on a (p+q-1)-simplex: (i, front part, middle part).

    Term i pairs the p-face (v0..vi, v_{i+q}..v_{p+q-1}) with the q-face
    (vi..v_{i+q}); faces with repeated vertices are degenerate and dropped.
    """
    out = []
    if q < 1:
        return out
    for i in range(p):
        u = s[:i + 1] + s[i + q:]
        v = s[i:i + q + 1]
        out.append((i, u, v))
    return out


def cup1_sign(p, q, i):
    """Sign of term i, normalised so that, with x*y := cup1(x, y),

        d(x*y) + dx*y + (-1)^|x| x*dy = x.y - (-1)^{|x||y|} y.x
    """
    return -1 if ((p - i) * (q + 1) + p + q + 1) % 2 else 1


def cup1_tensor(K: SimplicialComplex, p, q):
    key = ("cup1", id(K), p, q)
    if key not in _TENSORS:
        t = defaultdict(dict)
        ip, iq = K.index.get(p, {}), K.index.get(q, {})
        for k, s in enumerate(K.simplices.get(p + q - 1, ())):
            for i, u, v in cup1_terms(s, p, q):
                entry = t[(ip[u], iq[v])]
                entry[k] = entry.get(k, 0) + cup1_sign(p, q, i)
        _TENSORS[key] = (K, {ij: {k: c for k, c in e.items() if c} for ij, e in t.items()})
    return _TENSORS[key][1]


def cup(x: Cochain, y: Cochain) -> Cochain:
    x._check(y)
    r = x.degree + y.degree
    if r > x.K.dim:
        return Cochain(x.K, x.F, r, [])
    return Cochain(x.K, x.F, r, _tensor_apply(x.F, cup_tensor(x.K, x.degree, y.degree), x, y, x.K.count(r)))


def cup1(x: Cochain, y: Cochain) -> Cochain:
    """Steenrod cup-1 product, the homotopy between x.y and the swapped product."""
    x._check(y)
    r = x.degree + y.degree - 1
    if r < 0 or r > x.K.dim:
        return Cochain(x.K, x.F, r, [])
    return Cochain(x.K, x.F, r, _tensor_apply(x.F, cup1_tensor(x.K, x.degree, y.degree), x, y, x.K.count(r)))


def integrate(x: Cochain):
    K = x.K
    if K.fundamental_cycle is None:
        raise SchemaError("complex has no fundamental cycle")
    if x.degree != K.dim:
        raise SchemaError(f"can only integrate {K.dim}-cochains")
    F = x.F
    return F.norm(sum(sign * x(s) for s, sign in K.fundamental_cycle.items()))


def integration_vector(K: SimplicialComplex, F: Field):
    """Row vector w with integrate(x) = w . x."""
    w = [F.zero] * K.count(K.dim)
    for s, sign in K.fundamental_cycle.items():
        w[K.idx(s)] = F(sign)
    return w


class Subcomplex:
    def __init__(self, K: SimplicialComplex, simplices):
        closed = set()
        for s in simplices:
            s = tuple(sorted(s))
            if s not in K:
                raise SchemaError(f"{s} is not a simplex of the ambient complex")
            for r in range(1, len(s) + 1):
                closed.update(combinations(s, r))
        self.ambient = K
        self.complex = SimplicialComplex(closed)
        self.inclusion = {k: [K.idx(s) for s in ss] for k, ss in self.complex.simplices.items()}


def restrict(x: Cochain, L: Subcomplex) -> Cochain:
    K = L.complex
    if x.degree > K.dim:
        return Cochain(K, x.F, x.degree, [])
    return Cochain(K, x.F, x.degree, [x.values[i] for i in L.inclusion[x.degree]])


def edge_value(beta: Cochain, a, b):
    """beta on the oriented edge a -> b (negated against the vertex order)."""
    if a == b:
        return beta.F.zero
    return beta((a, b)) if a < b else beta.F.norm(-beta((a, b)))


# generators


def point():
    return SimplicialComplex([(0,)], name="point")


def circle(n=3):
    if n < 3:
        raise SchemaError("a simplicial circle needs at least 3 vertices")
    edges = [(i, (i + 1) % n) for i in range(n)]
    cyc = {tuple(sorted(e)): (1 if e[0] < e[1] else -1) for e in edges}
    return SimplicialComplex(edges, cyc, name=f"circle{n}")


def sphere():
    """Boundary of the tetrahedron."""
    return SimplicialComplex(combinations(range(4), 3), name="sphere").oriented()


def torus():
    """The 7-vertex (Moebius-Csaszar) torus."""
    tris = []
    for i in range(7):
        tris.append((i, (i + 1) % 7, (i + 3) % 7))
        tris.append((i, (i + 2) % 7, (i + 3) % 7))
    return SimplicialComplex(tris, name="torus").oriented()


def connected_sum(A: SimplicialComplex, B: SimplicialComplex, name=""):
    """Remove a facet from each surface and glue along the boundary triangles.

    The removed facet of A is its last one, that of B its first; B's vertices
    are renumbered after A's, the three glued vertices identified in order.
    """
    fa = A.simplices[2][-1]
    fb = B.simplices[2][0]
    offset = max(A.vertices) + 1
    rename = {}
    nxt = offset
    for v in B.vertices:
        if v in fb:
            rename[v] = fa[fb.index(v)]
        else:
            rename[v] = nxt
            nxt += 1
    tris = [t for t in A.simplices[2] if t != fa]
    tris += [tuple(rename[v] for v in t) for t in B.simplices[2] if t != fb]
    return SimplicialComplex(tris, name=name).oriented()


def genus_surface(g):
    if g < 1:
        return sphere()
    S = torus()
    for _ in range(g - 1):
        S = connected_sum(S, torus())
    S.name = f"genus{g}"
    return S


def tree_cotree(K: SimplicialComplex):
    """Spanning tree, dual spanning tree and the leftover generator edges.

    Returns ``(tree_edges, generators, loops)``; ``loops[i]`` is the closed
    vertex path made of ``generators[i]`` (traversed low to high) and the
    tree path back, so those loops form a basis of the first homology.
    """
    parent = {K.vertices[0]: None}
    adj = defaultdict(list)
    for u, v in K.simplices[1]:
        adj[u].append(v)
        adj[v].append(u)
    tree = set()
    queue = deque([K.vertices[0]])
    while queue:
        u = queue.popleft()
        for v in sorted(adj[u]):
            if v not in parent:
                parent[v] = u
                tree.add(tuple(sorted((u, v))))
                queue.append(v)
    rest = [e for e in K.simplices[1] if e not in tree]
    cotree = set()
    if K.dim == 2:
        tri_of_edge = defaultdict(list)
        for t in K.simplices[2]:
            for e in combinations(t, 2):
                tri_of_edge[e].append(t)
        seen = {K.simplices[2][0]}
        queue = deque(seen)
        while queue:
            t = queue.popleft()
            for e in combinations(t, 2):
                if e in tree:
                    continue
                for o in tri_of_edge[e]:
                    if o not in seen:
                        seen.add(o)
                        cotree.add(e)
                        queue.append(o)
    generators = [e for e in rest if e not in cotree]

    def path_to_root(v):
        out = [v]
        while parent[out[-1]] is not None:
            out.append(parent[out[-1]])
        return out

    loops = []
    for u, v in generators:
        pu, pv = path_to_root(u), path_to_root(v)
        common = set(pu) & set(pv)
        up = pu[:next(i for i, x in enumerate(pu) if x in common) + 1]
        vp = pv[:next(i for i, x in enumerate(pv) if x in common)]
        # u -> v along the generator, then v up to the meeting point, then down to u
        loops.append([u] + vp + list(reversed(up))[:-1])
    return sorted(tree), generators, loops


def cocycle_from_windings(K: SimplicialComplex, F: Field, windings):
    """Integer-valued 1-cocycle with prescribed values on the generator loops.

    Zero on the spanning tree; cotree edges are solved triangle by triangle.
    Missing windings default to 0.
    """
    tree, generators, loops = tree_cotree(K)
    values = {e: 0 for e in tree}
    for e, w in zip(generators, list(windings) + [0] * len(generators)):
        values[e] = int(w)
    pending = [t for t in K.simplices.get(2, [])]
    while pending:
        progress = []
        for t in pending:
            a, b, c = t
            missing = [e for e in ((a, b), (b, c), (a, c)) if e not in values]
            if len(missing) == 1:
                e = missing[0]
                # cocycle: beta(bc) - beta(ac) + beta(ab) = 0
                signs = {(b, c): 1, (a, c): -1, (a, b): 1}
                known = sum(signs[f] * values[f] for f in signs if f != e)
                values[e] = -known * signs[e]
            elif not missing:
                progress.append(t)
        if not progress and all(
            len([e for e in ((t[0], t[1]), (t[1], t[2]), (t[0], t[2])) if e not in values]) > 1 for t in pending
        ):
            raise SchemaError("could not solve the cocycle condition along the dual tree")
        pending = [t for t in pending if t not in progress]
    beta = Cochain.from_dict(K, F, 1, values)
    if not beta.d().is_zero():
        raise SchemaError("prescribed windings do not give a cocycle")
    return beta


def loop_sum(beta: Cochain, loop):
    """Sum of beta along a closed vertex path."""
    F = beta.F
    return F.norm(sum(edge_value(beta, loop[i], loop[(i + 1) % len(loop)]) for i in range(len(loop))))
