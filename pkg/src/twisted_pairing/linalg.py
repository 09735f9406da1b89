"""Exact linear algebra over a :class:`~twisted_pairing.field.Field`.

Matrices are row-major lists of rows.  Elimination runs on sparse rows
(``{column: value}`` dicts), which keeps the simplicial coboundary matrices
(a few nonzeros per row) cheap even over the rationals.
"""
from __future__ import annotations

import heapq

from .field import Field


def zeros(F: Field, rows: int, cols: int):
    return [[F.zero] * cols for _ in range(rows)]


def identity(F: Field, n: int):
    m = zeros(F, n, n)
    for i in range(n):
        m[i][i] = F.one
    return m


def shape(M, cols=None):
    """(rows, cols); ``cols`` disambiguates matrices with no rows."""
    if M:
        return len(M), len(M[0])
    return 0, cols or 0


def transpose(M, cols=None):
    r, c = shape(M, cols)
    return [[M[i][j] for i in range(r)] for j in range(c)]


def matmul(F: Field, A, B, inner=None, cols=None):
    """A @ B.  ``inner``/``cols`` give the sizes when a factor is empty."""
    r = len(A)
    k = len(B) if B else (len(A[0]) if A else inner or 0)
    c = len(B[0]) if B else cols or 0
    out = [[F.zero] * c for _ in range(r)]
    for i in range(r):
        row_a = A[i]
        out_i = out[i]
        for t in range(k):
            a = row_a[t]
            if a:
                row_b = B[t]
                for j in range(c):
                    b = row_b[j]
                    if b:
                        out_i[j] += a * b
        if F.characteristic:
            out[i] = [x % F.characteristic for x in out_i]
    return out


def matvec(F: Field, M, v):
    return [F.norm(sum(a * b for a, b in zip(row, v) if a and b)) for row in M]


def vecmat(F: Field, v, M, cols=None):
    """Row vector times matrix."""
    c = len(M[0]) if M else cols or 0
    out = [F.zero] * c
    for a, row in zip(v, M):
        if a:
            for j, b in enumerate(row):
                if b:
                    out[j] += a * b
    return [F.norm(x) for x in out]


def add(F: Field, A, B):
    return [[F.norm(a + b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def scale(F: Field, c, A):
    return [[F.norm(c * a) for a in row] for row in A]


def is_zero_matrix(M):
    return all(not x for row in M for x in row)


def to_sparse(row):
    return {j: x for j, x in enumerate(row) if x}


def to_dense(F: Field, vec, n):
    out = [F.zero] * n
    for j, x in vec.items():
        out[j] = x
    return out


def _axpy(F: Field, target, c, source):
    """target += c * source, in place, dropping zeros."""
    p = F.characteristic
    for j, x in source.items():
        y = target.get(j, 0) + c * x
        if p:
            y %= p
        if y:
            target[j] = y
        else:
            target.pop(j, None)


class Echelon:
    """Incrementally grown echelon basis of a subspace of F^n.

    Every stored row remembers how it was built from the vectors passed to
    :meth:`add`, so membership queries return coordinates with respect to the
    original generators.
    """

    def __init__(self, F: Field):
        self.F = F
        self.rows = {}  # pivot -> (row, combination of generators)
        self.generators = 0

    def __len__(self):
        return len(self.rows)

    def _reduce(self, vec, combo):
        F = self.F
        vec = dict(vec)
        heap = list(vec)
        heapq.heapify(heap)
        seen = set()
        while heap:
            i = heapq.heappop(heap)
            if i in seen:
                continue
            seen.add(i)
            c = vec.get(i)
            if not c or i not in self.rows:
                continue
            row, rc = self.rows[i]
            _axpy(F, vec, -c, row)
            _axpy(F, combo, -c, rc)
            for j in row:
                if j > i and j not in seen:
                    heapq.heappush(heap, j)
        return vec, combo

    def add(self, vec):
        """Add a sparse vector as a new generator; return True if independent."""
        tag = self.generators
        self.generators += 1
        residual, combo = self._reduce(vec, {tag: self.F.one})
        if not residual:
            return False
        pivot = min(residual)
        inv = self.F.inv(residual[pivot])
        row = {j: self.F.norm(x * inv) for j, x in residual.items()}
        rc = {j: self.F.norm(x * inv) for j, x in combo.items()}
        self.rows[pivot] = (row, rc)
        return True

    def contains(self, vec):
        residual, _ = self._reduce(vec, {})
        return not residual

    def coordinates(self, vec):
        """Generator coefficients expressing ``vec``; None if outside the span."""
        residual, combo = self._reduce(vec, {})
        if residual:
            return None
        return {t: self.F.norm(-c) for t, c in combo.items()}


def rref(F: Field, M, cols=None):
    """Reduced row echelon form: (list of sparse rows, pivot columns)."""
    by_pivot = {}
    for row in M:
        vec = to_sparse(row)
        # stored rows are mutually reduced, so the order of elimination is free
        for pcol in set(vec) & set(by_pivot):
            coeff = vec.get(pcol)
            if coeff:
                _axpy(F, vec, -coeff, by_pivot[pcol])
        if not vec:
            continue
        pcol = min(vec)
        inv = F.inv(vec[pcol])
        vec = {j: F.norm(x * inv) for j, x in vec.items()}
        for other in by_pivot.values():
            coeff = other.get(pcol)
            if coeff:
                _axpy(F, other, -coeff, vec)
        by_pivot[pcol] = vec
    pivots = sorted(by_pivot)
    reduced = [by_pivot[pcol] for pcol in pivots]
    return reduced, pivots


def rank(F: Field, M, cols=None):
    ech = Echelon(F)
    return sum(ech.add(to_sparse(row)) for row in M)


def nullspace(F: Field, M, cols=None):
    """Basis (list of dense vectors) of {v : M v = 0}."""
    r, c = shape(M, cols)
    reduced, pivots = rref(F, M, c)
    pivot_set = set(pivots)
    basis = []
    for free in range(c):
        if free in pivot_set:
            continue
        v = [F.zero] * c
        v[free] = F.one
        for row, pcol in zip(reduced, pivots):
            coeff = row.get(free)
            if coeff:
                v[pcol] = F.norm(-coeff)
        basis.append(v)
    return basis


def column_basis(F: Field, M, cols=None):
    """A basis (dense vectors) of the column space."""
    r, c = shape(M, cols)
    ech = Echelon(F)
    out = []
    for j in range(c):
        col = {i: M[i][j] for i in range(r) if M[i][j]}
        if ech.add(col):
            out.append([M[i][j] for i in range(r)])
    return out


def solve(F: Field, A, b, cols=None):
    """Some x with A x = b, or None when the system is inconsistent."""
    r, c = shape(A, cols)
    ech = Echelon(F)
    for j in range(c):
        ech.add({i: A[i][j] for i in range(r) if A[i][j]})
    coords = ech.coordinates(to_sparse(b))
    if coords is None:
        return None
    x = [F.zero] * c
    for t, v in coords.items():
        x[t] = v
    return x


def inverse(F: Field, M):
    n = len(M)
    aug = [list(row) + [F.one if i == j else F.zero for j in range(n)] for i, row in enumerate(M)]
    reduced, pivots = rref(F, aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return [[row.get(n + j, F.zero) for j in range(n)] for row in reduced[:n]]


def determinant(F: Field, M):
    n = len(M)
    A = [list(row) for row in M]
    det = F.one
    for col in range(n):
        piv = next((i for i in range(col, n) if A[i][col]), None)
        if piv is None:
            return F.zero
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            det = F.norm(-det)
        det = F.norm(det * A[col][col])
        inv = F.inv(A[col][col])
        for i in range(col + 1, n):
            f = A[i][col]
            if f:
                f = F.norm(f * inv)
                A[i] = [F.norm(a - f * b) for a, b in zip(A[i], A[col])]
    return det


def random_matrix(F: Field, rng, rows, cols, density=1.0):
    return [
        [F.random_element(rng) if rng.random() < density else F.zero for _ in range(cols)]
        for _ in range(rows)
    ]


def random_invertible(F: Field, rng, n):
    while True:
        M = random_matrix(F, rng, n, n)
        if rank(F, M, n) == n:
            return M
