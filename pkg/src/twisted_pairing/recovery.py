"""The bullet count of two decorated loops, recovered by both pairings.

The covering route lifts both loops to the cyclic cover and pairs their
classes; it needs a prime field.  The cone route pairs the equivariant
cocycles on the simplicial model and works over any field.  On a surface
the cone value is the negative of the bullet count.
"""
from __future__ import annotations

from dataclasses import dataclass

from .covers import build_cover
from .cycles import (DecoratedCycle, EdgeLoop, bullet_records, dual_loop_through, equivariant_cocycle_surface,
                     integrate_potential, intersect, lift_class)
from .errors import AxiomViolation
from .field import Field
from .simplicial import Cochain, SimplicialComplex, cocycle_from_windings, tree_cotree

CONE_SIGN = -1  # (-1)^{n(n+1)/2} for curves on a surface


@dataclass
class Recovery:
    bullet: object
    cover: object  # None over the rationals
    cone: object
    intersection: int

    @property
    def cover_ok(self):
        return self.cover is None or self.cover == self.bullet

    @property
    def cone_ok(self):
        return self.cone == self.field.norm(CONE_SIGN * self.bullet)

    @property
    def ok(self):
        return self.cover_ok and self.cone_ok


def recover(K: SimplicialComplex, beta: Cochain, L0: DecoratedCycle, L1: DecoratedCycle, cover=None,
            cone=None) -> Recovery:
    """Bullet count of (L0, L1) with the covering and cone pairings of their classes.

    ``cover`` and ``cone`` may be passed in to reuse a cover or a
    :class:`ConePairing` across pairs with the same beta.
    """
    from .conealg.cone import ConePairing
    from .conealg.model import from_simplicial

    F = beta.F
    records = intersect(K, beta, L0, L1)
    b = bullet_records(records, F)
    cov_value = None
    if F.characteristic:
        cover = cover or build_cover(K, beta, F.characteristic)
        cov_value = cover.I(lift_class(cover, L0), lift_class(cover, L1))
    cone = cone or ConePairing(from_simplicial(K, beta))
    e0 = equivariant_cocycle_surface(K, beta, L0)
    e1 = equivariant_cocycle_surface(K, beta, L1)
    cone_value = cone.I(1, e0.xi.values + e0.x.values, e1.xi.values + e1.x.values)
    out = Recovery(b, cov_value, cone_value, sum(r.sign for r in records))
    out.field = F
    return out


def random_decorated_pair(K: SimplicialComplex, F: Field, rng, tries=200):
    """(beta, L0, L1): an edge loop and a dual loop through one of its edges, both decorated.

    beta has random windings plus a random coboundary; draws whose holonomy
    obstructs a potential are discarded.
    """
    _, gens, loops = tree_cotree(K)
    bound = F.characteristic or 5
    for _ in range(tries):
        w = [rng.randrange(bound) for _ in gens]
        i = rng.randrange(len(loops))
        w[i] = 0
        beta = cocycle_from_windings(K, F, w) + Cochain.random(K, F, 0, rng).d()
        try:
            L0 = integrate_potential(beta, EdgeLoop(tuple(loops[i])), F.random_element(rng), "L0")
        except AxiomViolation:
            continue
        steps = L0.carrier.steps()
        D = dual_loop_through(K, steps[rng.randrange(len(steps))])
        if D is None:
            continue
        try:
            L1 = integrate_potential(beta, D, F.random_element(rng), "L1")
        except AxiomViolation:
            continue
        return beta, L0, L1
    raise AxiomViolation("no decorated pair found")
