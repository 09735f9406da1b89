"""Random instance generators shared by the unit tests and the acceptance suite."""
from __future__ import annotations

from twisted_pairing import linalg as la
from twisted_pairing.bounds import IntersectionForm, self_intersection_euler
from twisted_pairing.cycles import IntersectionRecord
from twisted_pairing.field import Field


def records(rng, F: Field, count):
    return [IntersectionRecord(rng.choice((1, -1)), F.random_element(rng, 9), F.random_element(rng, 9))
            for _ in range(count)]


def folk_instance(F: Field, rng):
    """(classes, chis, form) in a diagonalisable form of dimension <= 6.

    Classes are columns of the diagonalising basis, so they are orthogonal;
    some Euler characteristics are shifted by the characteristic, and a
    duplicate class is sometimes appended to force a relation.
    """
    p = F.characteristic
    N = rng.randint(1, 6)
    n = rng.choice([0, 2]) if p != 2 else rng.choice([0, 1, 2, 3])
    d = [F(rng.randint(0, 2)) for _ in range(N)]
    P = la.random_invertible(F, rng, N)
    Pi = la.inverse(F, P)
    D = [[d[i] if i == j else F.zero for j in range(N)] for i in range(N)]
    form = IntersectionForm(F, la.matmul(F, la.matmul(F, la.transpose(Pi), D), Pi), n)
    idx = rng.sample(range(N), rng.randint(1, N))
    if rng.random() < 0.2:
        idx.append(idx[0])
    basis = la.transpose(P)
    classes = [list(basis[i]) for i in idx]
    chis = [self_intersection_euler(n, int(d[i])) + p * rng.randint(-1, 1) for i in idx]
    return classes, chis, form


def isotropic_instance(F: Field, rng):
    """(gram, classes, form, W): a nondegenerate family in a hyperbolic space with Lagrangian W."""
    N = rng.randint(1, 3)
    n = rng.choice([0, 1])
    s = F.sign(n)
    H = la.zeros(F, 2 * N, 2 * N)
    for i in range(N):
        H[i][N + i], H[N + i][i] = F.one, s
    Q = la.random_invertible(F, rng, 2 * N)
    M = la.matmul(F, la.matmul(F, la.transpose(Q), H), Q)
    W = [list(row) for row in la.transpose(la.inverse(F, Q))[:N]]
    form = IntersectionForm(F, M, n)
    while True:
        r = rng.randint(1, 2 * N)
        classes = []
        for _ in range(r):
            v = la.random_matrix(F, rng, 1, 2 * N)[0]
            w = W[rng.randrange(N)]
            roll = rng.random()
            if roll < 0.3:
                v = list(w)
            elif roll < 0.6:
                v = [F.norm(a + b) for a, b in zip(v, w)]
            classes.append(v)
        gram = form.gram(classes)
        if la.rank(F, gram, r) == r:
            return gram, classes, M, W


def weighted_instance(rng):
    return {rng.randint(-6, 6): rng.randint(-5, 5) for _ in range(rng.randint(0, 6))}
