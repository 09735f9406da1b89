"""Sparse bilinear maps between graded complexes.

A bilinear map of degree ``deg`` from ``left x right`` to ``target`` stores,
for each pair of degrees ``(p, q)``, a dict ``{(i, j): {k: c}}`` giving the
image of the pair of basis vectors ``(e_i, e_j)`` in degree ``p + q + deg``.
The helpers below compose such tables with matrices, which is all the axiom
checks need.
"""
from __future__ import annotations

from collections import defaultdict

from .. import linalg as la
from ..complexes import GradedComplex
from ..errors import SchemaError


def _clean(F, table):
    out = {}
    for ij, vec in table.items():
        v = {k: F.norm(c) for k, c in vec.items()}
        v = {k: c for k, c in v.items() if c}
        if v:
            out[ij] = v
    return out


class BilinearMap:
    def __init__(self, left: GradedComplex, right: GradedComplex, target: GradedComplex,
                 degree: int = 0, entries: dict | None = None):
        self.left, self.right, self.target, self.degree = left, right, target, degree
        self.F = F = left.F
        self.entries = {}
        for (p, q), table in (entries or {}).items():
            r = p + q + degree
            n = target.dim(r)
            for (i, j), vec in table.items():
                if not (0 <= i < left.dim(p) and 0 <= j < right.dim(q)) or any(not 0 <= k < n for k in vec):
                    raise SchemaError(f"bilinear entry {(p, q)}:{(i, j)} out of range")
            table = _clean(F, {ij: {k: F(c) for k, c in vec.items()} for ij, vec in table.items()})
            if table:
                self.entries[(p, q)] = table

    def block(self, p, q):
        return self.entries.get((p, q), {})

    def apply(self, p, x, q, y):
        """Image of (x, y), x in left^p and y in right^q, as a dense vector."""
        F = self.F
        out = [F.zero] * self.target.dim(p + q + self.degree)
        table = self.block(p, q)
        if not table:
            return out
        xs = {i: a for i, a in enumerate(x) if a}
        ys = {j: b for j, b in enumerate(y) if b}
        for i, a in xs.items():
            for j, b in ys.items():
                for k, c in table.get((i, j), {}).items():
                    out[k] += a * b * c
        return [F.norm(v) for v in out]

    def with_entries(self, entries):
        return BilinearMap(self.left, self.right, self.target, self.degree, entries)

    def scaled(self, c):
        F = self.F
        return self.with_entries({pq: {ij: {k: F.norm(c * v) for k, v in vec.items()}
                                       for ij, vec in t.items()} for pq, t in self.entries.items()})

    def swapped(self):
        """The map (y, x) -> self(x, y), without any sign."""
        return BilinearMap(self.right, self.left, self.target, self.degree,
                           {(q, p): {(j, i): vec for (i, j), vec in t.items()}
                            for (p, q), t in self.entries.items()})


# composition with matrices; a matrix M maps degree a to degree b with shape dim(b) x dim(a)


def sparse_columns(M):
    cols = defaultdict(dict)
    for r, row in enumerate(M):
        for c, v in enumerate(row):
            if v:
                cols[c][r] = v
    return cols


def sparse_rows(M):
    return [{c: v for c, v in enumerate(row) if v} for row in M]


def post(F, table, M):
    """(i, j) -> M . table(i, j)."""
    cols = sparse_columns(M)
    out = {}
    for ij, vec in table.items():
        acc = defaultdict(int)
        for k, c in vec.items():
            for r, m in cols.get(k, {}).items():
                acc[r] += c * m
        out[ij] = acc
    return _clean(F, out)


def pre_left(F, table, M):
    """(i, j) -> table(M e_i, e_j), where ``table`` lives on the target degree of M."""
    rows = sparse_rows(M)
    out = defaultdict(lambda: defaultdict(int))
    for (i2, j), vec in table.items():
        for i, m in rows[i2].items() if i2 < len(rows) else ():
            acc = out[(i, j)]
            for k, c in vec.items():
                acc[k] += m * c
    return _clean(F, out)


def pre_right(F, table, M):
    rows = sparse_rows(M)
    out = defaultdict(lambda: defaultdict(int))
    for (i, j2), vec in table.items():
        for j, m in rows[j2].items() if j2 < len(rows) else ():
            acc = out[(i, j)]
            for k, c in vec.items():
                acc[k] += m * c
    return _clean(F, out)


def combine(F, *terms):
    """Sum of ``(coefficient, table)`` terms."""
    out = defaultdict(lambda: defaultdict(int))
    for coeff, table in terms:
        if not coeff:
            continue
        for ij, vec in table.items():
            acc = out[ij]
            for k, c in vec.items():
                acc[k] += coeff * c
    return _clean(F, out)


def first_key(table):
    return min(table) if table else None


def trilinear(F, table, P, order):
    """Contract a bilinear table with a pairing block into a trilinear form.

    ``P`` is a dense pairing block.  With ``order == "out_left"`` the product
    output sits in the left slot of the pairing: (i, j, l) -> <t(i, j), e_l>;
    with ``"out_right"``: (i, j, l) -> <e_l, t(i, j)>.
    """
    if order == "out_left":
        rows = sparse_rows(P)
        lookup = lambda k: rows[k].items() if k < len(rows) else ()  # noqa: E731
    else:
        cols = sparse_columns(P)
        lookup = lambda k: cols.get(k, {}).items()  # noqa: E731
    out = defaultdict(int)
    for (i, j), vec in table.items():
        for k, c in vec.items():
            for l, v in lookup(k):
                out[(i, j, l)] += c * v
    return {key: F.norm(v) for key, v in out.items() if F.norm(v)}


def evaluate_trilinear(F, form, u, v, w):
    return F.norm(sum(c * u[i] * v[j] * w[l] for (i, j, l), c in form.items() if u[i] and v[j] and w[l]))


def matrix_of_left(F, bil: BilinearMap, p, x, q):
    """Matrix of y -> bil(x, y) from right^q to target^{p+q+deg}."""
    rows, cols = bil.target.dim(p + q + bil.degree), bil.right.dim(q)
    M = la.zeros(F, rows, cols)
    for (i, j), vec in bil.block(p, q).items():
        a = x[i]
        if a:
            for k, c in vec.items():
                M[k][j] = F.norm(M[k][j] + a * c)
    return M


def matrix_of_right(F, bil: BilinearMap, p, q, y):
    """Matrix of x -> bil(x, y) from left^p."""
    rows, cols = bil.target.dim(p + q + bil.degree), bil.left.dim(p)
    M = la.zeros(F, rows, cols)
    for (i, j), vec in bil.block(p, q).items():
        b = y[j]
        if b:
            for k, c in vec.items():
                M[k][i] = F.norm(M[k][i] + b * c)
    return M
