"""Decorated cycles on triangulated surfaces and the twisted intersection count.

Two kinds of carriers keep transversality combinatorial:

* an :class:`EdgeLoop` is a closed path in the 1-skeleton, a cyclic list of
  vertices;
* a :class:`DualLoop` is a closed path in the dual graph, a cyclic list of
  triangles in which consecutive entries share an edge.

A potential on an edge loop assigns a value to each position (vertex).  On a
dual loop the value at a triangle is read at its smallest vertex, which is
also the sheet of that triangle's lift to a cyclic cover.

An edge step ``u -> v`` crossed by a dual step ``T -> T'`` through the edge
``{u, v}`` gives a crossing of sign +1 exactly when ``T'`` lies to the left
of ``u -> v``.  Both potentials are compared at ``u``: the dual-loop value is
transported from the anchor of the exit triangle ``T`` to ``u`` along beta.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field as dc_field

from .errors import AxiomViolation, SchemaError
from .field import Field
from .simplicial import Cochain, SimplicialComplex, cup, edge_value


@dataclass(frozen=True)
class IntersectionRecord:
    sign: int
    gamma1: object
    gamma0: object
    label: object = None

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise SchemaError("intersection sign must be +1 or -1")


@dataclass(frozen=True)
class EdgeLoop:
    vertices: tuple

    def steps(self):
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def validate(self, K: SimplicialComplex):
        if len(self.vertices) < 2:
            raise SchemaError("an edge loop needs at least two vertices")
        for u, v in self.steps():
            if u == v or (u, v) not in K and (v, u) not in K:
                raise SchemaError(f"edge loop step {u}->{v} is not an edge")

    def __len__(self):
        return len(self.vertices)


@dataclass(frozen=True)
class DualLoop:
    triangles: tuple

    def __init__(self, triangles):
        object.__setattr__(self, "triangles", tuple(tuple(sorted(t)) for t in triangles))

    def steps(self):
        t = self.triangles
        return [(t[i], t[(i + 1) % len(t)]) for i in range(len(t))]

    def validate(self, K: SimplicialComplex):
        if len(self.triangles) < 2:
            raise SchemaError("a dual loop needs at least two triangles")
        for T in self.triangles:
            if T not in K or len(T) != 3:
                raise SchemaError(f"{T} is not a triangle of the surface")
        for T, U in self.steps():
            if len(set(T) & set(U)) != 2:
                raise SchemaError(f"dual loop step {T}->{U} does not cross an edge")

    def __len__(self):
        return len(self.triangles)


@dataclass
class DecoratedCycle:
    """A carrier plus potential values, one per position of the carrier."""

    carrier: object
    gamma: list
    name: str = ""

    @property
    def is_dual(self):
        return isinstance(self.carrier, DualLoop)

    def shifted(self, F: Field, c):
        return DecoratedCycle(self.carrier, [F.norm(F(g) + F(c)) for g in self.gamma], self.name)


# orientation helpers


def positive_order(K: SimplicialComplex, T):
    """The cyclic vertex order of T that agrees with the fundamental cycle."""
    if K.fundamental_cycle is None:
        raise SchemaError("surface has no fundamental cycle")
    a, b, c = T
    return (a, b, c) if K.fundamental_cycle[T] == 1 else (a, c, b)


def is_left_of(K: SimplicialComplex, T, u, v):
    """Does triangle T (containing u and v) lie to the left of u -> v?"""
    a, b, c = positive_order(K, T)
    return (u, v) in ((a, b), (b, c), (c, a))


def triangles_on_edge(K: SimplicialComplex, u, v):
    return [T for T in K.simplices[2] if u in T and v in T]


def left_triangle(K: SimplicialComplex, u, v):
    for T in triangles_on_edge(K, u, v):
        if is_left_of(K, T, u, v):
            return T
    raise SchemaError(f"no triangle on the left of {u}->{v}")


def anchor(T):
    return min(T)


def dual_step_value(beta: Cochain, T, U):
    """Change of a dual-loop potential across the step T -> U."""
    u = min(set(T) & set(U))
    return beta.F.norm(edge_value(beta, anchor(T), u) + edge_value(beta, u, anchor(U)))


def step_values(beta: Cochain, carrier):
    if isinstance(carrier, DualLoop):
        return [dual_step_value(beta, T, U) for T, U in carrier.steps()]
    return [edge_value(beta, u, v) if u != v else beta.F.zero for u, v in carrier.steps()]


def check_potential(K: SimplicialComplex, L: DecoratedCycle, beta: Cochain):
    """(ok, defects): defects lists (step index, observed change, expected change)."""
    L.carrier.validate(K)
    F = beta.F
    g = [F(x) for x in L.gamma]
    if len(g) != len(L.carrier):
        raise SchemaError("one potential value per carrier position is required")
    defects = []
    for i, want in enumerate(step_values(beta, L.carrier)):
        got = F.norm(g[(i + 1) % len(g)] - g[i])
        if got != want:
            defects.append((i, got, want))
    return not defects, defects


def holonomy(beta: Cochain, carrier):
    """Sum of beta along the carrier; a potential exists iff this vanishes."""
    return beta.F.norm(sum(step_values(beta, carrier)))


def integrate_potential(beta: Cochain, carrier, start=0, name=""):
    """The potential along ``carrier`` with value ``start`` at position 0."""
    F = beta.F
    steps = step_values(beta, carrier)
    if F.norm(sum(steps)):
        raise AxiomViolation("beta has nonzero holonomy along the carrier", witness=F.norm(sum(steps)))
    g = [F(start)]
    for s in steps[:-1]:
        g.append(F.norm(g[-1] + s))
    return DecoratedCycle(carrier, g, name)


# intersection records and the bullet count


def bullet_records(records, F: Field):
    return F.norm(sum(r.sign * (F(r.gamma1) - F(r.gamma0)) for r in records))


def swap_records(records, codims=(1, 1)):
    """Records of the same intersection with the roles of the two cycles exchanged."""
    eps = (-1) ** (codims[0] * codims[1])
    return [IntersectionRecord(eps * r.sign, r.gamma0, r.gamma1, r.label) for r in records]


def intersect(K: SimplicialComplex, beta: Cochain, L0: DecoratedCycle, L1: DecoratedCycle):
    """Records for an edge loop L0 crossed by a dual loop L1."""
    if L0.is_dual or not L1.is_dual:
        raise SchemaError("intersect expects an edge loop and a dual loop")
    L0.carrier.validate(K)
    L1.carrier.validate(K)
    F = beta.F
    crossings = {}
    for i, (T, U) in enumerate(L1.carrier.steps()):
        crossings.setdefault(frozenset(set(T) & set(U)), []).append((i, T, U))
    records = []
    for j, (u, v) in enumerate(L0.carrier.steps()):
        for i, T, U in crossings.get(frozenset((u, v)), ()):
            sign = 1 if is_left_of(K, U, u, v) else -1
            g1 = F.norm(F(L1.gamma[i]) + edge_value(beta, anchor(T), u))
            records.append(IntersectionRecord(sign, g1, F(L0.gamma[j]), label=(j, i)))
    return records


def intersection_number(records):
    return sum(r.sign for r in records)


def pd_cocycle(K: SimplicialComplex, F: Field, D: DualLoop) -> Cochain:
    """Poincare dual of a dual loop: signed count of its crossings of each edge."""
    xi = Cochain.zero(K, F, 1)
    for T, U in D.steps():
        a, b = sorted(set(T) & set(U))
        i = K.idx((a, b))
        xi.values[i] = F.norm(xi.values[i] + (1 if is_left_of(K, U, a, b) else -1))
    return xi


def crossing_cochain(K: SimplicialComplex, beta: Cochain, L1: DecoratedCycle) -> Cochain:
    """Potential-weighted crossing count of a decorated dual loop.

    The value on an edge (a, b), a < b, sums sign * (potential transported to a).
    """
    F = beta.F
    x = Cochain.zero(K, F, 1)
    for g, (T, U) in zip(L1.gamma, L1.carrier.steps()):
        a, b = sorted(set(T) & set(U))
        sign = 1 if is_left_of(K, U, a, b) else -1
        i = K.idx((a, b))
        x.values[i] = F.norm(x.values[i] + sign * (F(g) + edge_value(beta, anchor(T), a)))
    return x


@dataclass
class EquivariantConeCocycle:
    xi: Cochain
    x: Cochain
    source: DecoratedCycle = dc_field(default=None, repr=False)

    def defect(self, beta: Cochain):
        """(d xi, d x - beta.xi); both vanish for a cocycle of the cone."""
        return self.xi.d(), self.x.d() - cup(beta, self.xi)


def equivariant_cocycle_surface(K: SimplicialComplex, beta: Cochain, L1: DecoratedCycle):
    if not L1.is_dual:
        L1 = pushoff(K, beta, L1)
    ok, defects = check_potential(K, L1, beta)
    if not ok:
        raise AxiomViolation("potential does not integrate beta along the loop", witness=defects)
    xi = pd_cocycle(K, beta.F, L1.carrier)
    x = crossing_cochain(K, beta, L1)
    c = EquivariantConeCocycle(xi, x, L1)
    dxi, dx = c.defect(beta)
    if not dxi.is_zero() or not dx.is_zero():
        raise AxiomViolation("crossing convention produced a non-closed cone element")
    return c


# carriers from other carriers


def fan(K: SimplicialComplex, v, start, stop):
    """Triangles around v swept clockwise from neighbour ``start`` to ``stop``.

    With ``start == stop`` the sweep goes once around.
    """
    nxt = {}
    for T in K.simplices[2]:
        if v in T:
            a, b, c = positive_order(K, T)
            while a != v:
                a, b, c = b, c, a
            nxt[c] = (b, T)  # clockwise from neighbour c lies T, then neighbour b
    out, cur = [], start
    while True:
        b, T = nxt[cur]
        out.append(T)
        cur = b
        if cur == stop:
            return out
        if len(out) > len(nxt):
            raise SchemaError(f"link of vertex {v} is not a circle")


def pushoff(K: SimplicialComplex, beta: Cochain, L0: DecoratedCycle) -> DecoratedCycle:
    """Parallel copy of a decorated edge loop, pushed to its left, as a dual loop."""
    if L0.is_dual:
        return L0
    F = beta.F
    vs = L0.carrier.vertices
    m = len(vs)
    tris, gamma = [], []
    for j in range(m):
        v, prev, nxt = vs[j], vs[j - 1], vs[(j + 1) % m]
        for T in fan(K, v, prev, nxt):
            if tris and tris[-1] == T:
                continue
            tris.append(T)
            gamma.append(F.norm(F(L0.gamma[j]) + edge_value(beta, v, anchor(T))))
    while len(tris) > 1 and tris[0] == tris[-1]:
        tris.pop()
        gamma.pop()
    return DecoratedCycle(DualLoop(tris), gamma, L0.name + "'")


def dual_path(K: SimplicialComplex, start, goal, blocked=()):
    """Shortest dual-graph path of triangles from start to goal avoiding blocked edges."""
    blocked = {frozenset(e) for e in blocked}
    start, goal = tuple(sorted(start)), tuple(sorted(goal))
    by_edge = {}
    for T in K.simplices[2]:
        for e in ((T[0], T[1]), (T[1], T[2]), (T[0], T[2])):
            by_edge.setdefault(e, []).append(T)
    prev = {start: None}
    queue = deque([start])
    while queue:
        T = queue.popleft()
        if T == goal:
            path = [T]
            while prev[path[-1]] is not None:
                path.append(prev[path[-1]])
            return path[::-1]
        for e in ((T[0], T[1]), (T[1], T[2]), (T[0], T[2])):
            if frozenset(e) in blocked:
                continue
            for U in by_edge[e]:
                if U not in prev:
                    prev[U] = T
                    queue.append(U)
    return None


def dual_loop_through(K: SimplicialComplex, edge, blocked=()):
    """A dual loop crossing ``edge`` once, otherwise avoiding ``blocked`` edges."""
    u, v = edge
    T, U = left_triangle(K, v, u), left_triangle(K, u, v)
    back = dual_path(K, U, T, blocked=set(map(frozenset, blocked)) | {frozenset(edge)})
    if back is None:
        return None
    return DualLoop([T] + back[:-1])


def lift_class(cover, L: DecoratedCycle):
    """Class of the lift of a decorated cycle in the cover, reduced mod (q - 1)^2.

    The dual loop (a push-off for edge loops) is lifted triangle by triangle to
    the sheets named by its potential; the Poincare dual of the lifted loop is
    then pushed to the quotient.
    """
    beta = cover.beta
    if not L.is_dual:
        L = pushoff(cover.base, beta, DecoratedCycle(L.carrier, [beta.F(g) for g in L.gamma], L.name))
    F = cover.F
    gamma = [int(F(g)) for g in L.gamma]
    ok, defects = check_potential(cover.base, DecoratedCycle(L.carrier, gamma), beta)
    if not ok:
        raise AxiomViolation("potential is not compatible with beta mod p", witness=defects)
    lifted = DualLoop([cover.lift_simplex(T, g) for T, g in zip(L.carrier.triangles, gamma)])
    xt = pd_cocycle(cover.total, F, lifted)
    return cover.quotient(xt)


def figure_eight_records():
    """Self-intersection data of the figure-eight curve in the twice-punctured plane.

    Only the two crossings between different branches of the curve and its
    push-off contribute; along the curve the potential jumps by one between
    the two preimages of the double point.
    """
    return [
        IntersectionRecord(1, 1, 0, label="branch crossing A"),
        IntersectionRecord(-1, 0, 1, label="branch crossing B"),
    ]
