"""Linear-algebra decision procedures for counting disjoint cycles.

Everything here is exact: verdicts are recomputed from the matrix data on
demand, and every check returns the numbers it compared.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from sympy import Poly, symbols

from . import linalg as la
from .conealg.traces import q_refined
from .errors import IdentityDefect, SchemaError
from .field import Field, QQ

_t = symbols("t")


def self_intersection_euler(n: int, chi: int) -> int:
    """Self-intersection of a totally real n-cycle with Euler characteristic chi."""
    return (-1) ** (n * (n + 1) // 2 % 2) * chi


@dataclass
class IntersectionForm:
    field: Field
    matrix: list
    n: int

    def __post_init__(self):
        F, M = self.field, self.matrix
        if any(len(row) != len(M) for row in M):
            raise SchemaError("intersection form must be square")
        self.matrix = [[F(x) for x in row] for row in M]
        s = F.sign(self.n)
        for i, row in enumerate(self.matrix):
            for j, x in enumerate(row):
                if F.norm(x - s * self.matrix[j][i]):
                    kind = "skew-symmetric" if self.n % 2 else "symmetric"
                    raise SchemaError(f"form is not {kind} at ({i}, {j})")

    @property
    def dimension(self):
        return len(self.matrix)

    @property
    def symmetric(self):
        return self.n % 2 == 0 or self.field.characteristic == 2

    def __call__(self, x, y):
        F = self.field
        return F.norm(sum(a * b for a, b in zip(x, la.matvec(F, self.matrix, y))))

    def gram(self, classes):
        return [[self(x, y) for y in classes] for x in classes]


@dataclass
class FolkVerdict:
    verdict: str  # "independent" or "inconclusive"
    gram: list
    certificate: list  # diagonal entries a_i * chi_i pins a_i
    failing: list = dc_field(default_factory=list)
    reason: str = ""

    @property
    def independent(self):
        return self.verdict == "independent"


def folk_independent(classes, chis, form: IntersectionForm) -> FolkVerdict:
    """Independence of pairwise orthogonal classes whose Euler characteristics survive in the field.

    Pairing a relation sum a_j x_j = 0 with x_i leaves a_i * (x_i . x_i) = 0,
    and x_i . x_i = +-chi_i, so a nonzero chi_i forces a_i = 0.
    """
    F = form.field
    if len(classes) != len(chis):
        raise SchemaError(f"{len(classes)} classes but {len(chis)} Euler characteristics")
    for x in classes:
        if len(x) != form.dimension:
            raise SchemaError(f"class of length {len(x)} in a form of dimension {form.dimension}")
    classes = [[F(c) for c in x] for x in classes]
    gram = form.gram(classes)
    certificate = [F.norm(self_intersection_euler(form.n, chi)) for chi in chis]
    off = [(i, j) for i in range(len(classes)) for j in range(len(classes)) if i != j and gram[i][j]]
    if off:
        i, j = off[0]
        return FolkVerdict("inconclusive", gram, certificate, [], f"classes {i} and {j} are not orthogonal")
    bad_diag = [i for i in range(len(classes)) if F.norm(gram[i][i] - certificate[i])]
    if bad_diag:
        return FolkVerdict("inconclusive", gram, certificate, bad_diag,
                           "self-intersection differs from the Euler characteristic for "
                           + ", ".join(f"class {i}" for i in bad_diag))
    failing = [i for i, chi in enumerate(chis) if F.is_zero(F(chi))]
    if failing:
        return FolkVerdict("inconclusive", gram, certificate, failing,
                           "Euler characteristic vanishes in the field for "
                           + ", ".join(f"chi_{i} = {chis[i]}" for i in failing))
    return FolkVerdict("independent", gram, certificate)


def brute_force_relation(F: Field, classes):
    """First nonzero coefficient vector killing the classes, by enumeration (finite fields)."""
    if not F.characteristic:
        raise SchemaError("exhaustive search needs a finite field")
    r = len(classes)
    dim = len(classes[0]) if classes else 0
    for coeffs in itertools.product(range(F.characteristic), repeat=r):
        if not any(coeffs):
            continue
        if all(F.is_zero(sum(c * x[k] for c, x in zip(coeffs, classes))) for k in range(dim)):
            return list(coeffs)
    return None


def semicharacteristic(betti, n: int) -> int:
    """Mod-2 sum of the Betti numbers strictly below the middle of an odd dimension."""
    if n % 2 == 0:
        raise SchemaError("the semicharacteristic needs odd n")
    half = (n + 1) // 2
    if len(betti) < half:
        raise SchemaError(f"need at least {half} Betti numbers, got {len(betti)}")
    return sum(int(b) for b in betti[:half]) % 2


def _leading_minors(F: Field, M):
    return [la.determinant(F, [row[:k] for row in M[:k]]) for k in range(1, len(M) + 1)]


def definiteness(F: Field, gram):
    """+1 / -1 for a positive / negative definite symmetric rational matrix, else 0."""
    if F.characteristic or any(gram[i][j] != gram[j][i] for i in range(len(gram)) for j in range(len(gram))):
        return 0
    if not gram:
        return 0
    minors = _leading_minors(F, gram)
    if all(m > 0 for m in minors):
        return 1
    if all((m > 0) == (k % 2 == 0) and m != 0 for k, m in enumerate(minors, start=1)):
        return -1
    return 0


@dataclass
class FamilyReport:
    field: Field
    gram: list
    classes: list | None = None
    chis: list | None = None
    expected_diagonal: list | None = None
    form: list | None = None
    isotropic: list | None = None
    # verdicts
    rank: int = 0
    nondegenerate: bool = False
    diagonal_ok: bool | None = None
    independent: bool | None = None
    ambient: int | None = None
    bound_ok: bool | None = None
    isotropic_valid: bool | None = None
    intersection_dim: int | None = None
    half_bound: int | None = None
    half_bound_ok: bool | None = None
    definite: int = 0
    definite_ok: bool | None = None

    @property
    def size(self):
        return len(self.gram)

    @property
    def ok(self):
        flags = (self.diagonal_ok, self.bound_ok, self.isotropic_valid, self.half_bound_ok, self.definite_ok)
        return all(f is not False for f in flags)

    def recompute(self) -> "FamilyReport":
        return gram_bound(self.field, self.gram, classes=self.classes, form=self.form,
                          isotropic=self.isotropic, expected_diagonal=self.expected_diagonal, chis=self.chis)

    def rows(self):
        """(label, value) pairs for tabular output."""
        yield "classes", self.size
        yield "gram rank", self.rank
        yield "nondegenerate", self.nondegenerate
        if self.diagonal_ok is not None:
            yield "diagonal as expected", self.diagonal_ok
        yield "independent", "unknown" if self.independent is None else self.independent
        if self.ambient is not None:
            yield "ambient dimension", self.ambient
            yield "r <= ambient", "not asserted" if self.bound_ok is None else self.bound_ok
        if self.isotropic is not None:
            yield "isotropic subspace valid", self.isotropic_valid
            yield "dim(span & W)", self.intersection_dim
            yield "floor(r/2)", self.half_bound
            yield "half bound holds", "not asserted" if self.half_bound_ok is None else self.half_bound_ok
        if self.definite:
            yield "definite", "positive" if self.definite > 0 else "negative"
            if self.definite_ok is not None:
                yield "span & W = 0", self.definite_ok


def gram_bound(F: Field, gram, *, classes=None, form=None, isotropic=None, expected_diagonal=None,
               chis=None) -> FamilyReport:
    """Rank bounds from the Gram matrix of a family of classes.

    ``gram`` holds the pairing values of the family.  Given the classes as
    vectors in an ambient space with pairing matrix ``form``, the report also
    bounds the family against the ambient dimension and, for an isotropic
    subspace spanned by the rows of ``isotropic``, bounds dim(span & W) by
    floor(r/2) (zero when the Gram matrix is definite over the rationals).
    """
    gram = [[F(x) for x in row] for row in gram]
    r = len(gram)
    if any(len(row) != r for row in gram):
        raise SchemaError("Gram matrix must be square")
    rep = FamilyReport(F, gram, classes=classes, chis=chis, expected_diagonal=expected_diagonal,
                       form=form, isotropic=isotropic)
    rep.rank = la.rank(F, gram, r)
    rep.nondegenerate = rep.rank == r
    if expected_diagonal is not None:
        rep.diagonal_ok = all(F.is_zero(gram[i][i] - F(e)) for i, e in enumerate(expected_diagonal))
    if rep.nondegenerate:
        rep.independent = True
    if classes is not None:
        classes = [[F(c) for c in x] for x in classes]
        rep.ambient = len(classes[0]) if classes else 0
        span_rank = la.rank(F, classes, rep.ambient)
        if rep.independent:
            rep.bound_ok = r <= rep.ambient and span_rank == r
        elif span_rank == r:
            rep.independent = True
    rep.definite = definiteness(F, gram)
    if isotropic is not None:
        if classes is None or form is None:
            raise SchemaError("an isotropic subspace needs class vectors and the ambient form")
        W = [[F(c) for c in w] for w in isotropic]
        M = [[F(x) for x in row] for row in form]
        rep.isotropic_valid = all(
            F.is_zero(sum(a * b for a, b in zip(u, la.matvec(F, M, v)))) for u in W for v in W)
        span_rank = la.rank(F, classes, rep.ambient)
        w_rank = la.rank(F, W, rep.ambient)
        rep.intersection_dim = span_rank + w_rank - la.rank(F, classes + W, rep.ambient)
        rep.half_bound = r // 2
        if rep.nondegenerate and rep.isotropic_valid:
            rep.half_bound_ok = rep.intersection_dim <= rep.half_bound
            if rep.definite:
                rep.definite_ok = rep.intersection_dim == 0
    return rep


# --- supertrace identities coming from duality ---------------------------------


@dataclass
class IdentityCheck:
    status: str  # "pass", "fail" or "n/a"
    lhs: object = None
    rhs: object = None
    note: str = ""


@dataclass
class IdentityReport:
    field: Field
    n: int
    supertrace: object
    euler: int
    checks: dict

    @property
    def ok(self):
        return all(c.status != "fail" for c in self.checks.values())

    def failures(self):
        return [name for name, c in self.checks.items() if c.status == "fail"]


def _trace(F, blocks, k):
    M = blocks.get(k)
    return F.norm(sum(M[i][i] for i in range(len(M)))) if M else F.zero


def _str(F, traces):
    return F.norm(sum(F.sign(k) * t for k, t in traces.items()))


def _partner(F: Field, coeffs):
    """Monic coefficients of f(1 - t), the factor whose roots are 1 - (roots of f)."""
    mod = {"modulus": F.characteristic} if F.characteristic else {"domain": "QQ"}
    raw = [int(c) for c in coeffs] if F.characteristic else list(coeffs)
    g = Poly(raw, _t, **mod).compose(Poly(1 - _t, _t, **mod)).monic()
    return tuple(F(int(c)) if F.characteristic else F(c) for c in g.all_coeffs())


def eigenvalue_pairing(F: Field, blocks: dict, n: int):
    """Check that the sigma and 1 - sigma generalized eigenspaces agree as graded-mod-2 spaces.

    Duality exchanges degrees k and n - k, so for odd n the parity flips.  Returns (ok, table) where table maps each factor to its (even, odd) multiplicities.
    """
    table = {}
    for f in q_refined(F, blocks):
        even = sum(e for k, e in f.multiplicity.items() if k % 2 == 0)
        odd = sum(e for k, e in f.multiplicity.items() if k % 2)
        table[f.coefficients] = (even, odd)
    ok = all(table.get(_partner(F, key), (0, 0)) == (parity[::-1] if n % 2 else parity)
             for key, parity in table.items())
    return ok, table


def duality_supertrace_identities(F: Field, traces: dict, dims: dict, n: int, *, reverse_traces=None,
                                  intersection=None, blocks=None, strict=False) -> IdentityReport:
    """Verify the consequences of Phi(L1, L0) being dual to id - Phi(L0, L1).

    ``traces[k]`` is Tr(Phi) on degree k of HF(L0, L1) and ``dims[k]`` its
    dimension.  Without ``reverse_traces`` the pair is taken to be (L, L), and
    ``dims`` are then the Betti numbers of L.  The duality input itself is
    checked first; a violation is reported under "duality" (or raised as
    IdentityDefect when ``strict``).
    """
    traces = {int(k): F(v) for k, v in traces.items()}
    dims = {int(k): int(v) for k, v in dims.items()}
    degrees = range(0, n + 1)
    if any(k not in degrees for k in list(traces) + list(dims)):
        raise SchemaError(f"degrees must lie in 0..{n}")
    self_pair = reverse_traces is None
    rev = traces if self_pair else {int(k): F(v) for k, v in reverse_traces.items()}
    checks = {}
    st = _str(F, traces)
    chi = sum((-1) ** k * d for k, d in dims.items())

    # duality input: Tr Phi'^k + Tr Phi^{n-k} = dim HF^{n-k}
    bad = [k for k in degrees
           if F.norm(rev.get(k, F.zero) + traces.get(n - k, F.zero) - dims.get(n - k, 0))]
    checks["duality"] = IdentityCheck("fail" if bad else "pass", bad, [],
                                      "violating degrees" if bad else "")
    if self_pair and any(dims.get(k, 0) != dims.get(n - k, 0) for k in degrees):
        checks["duality"] = IdentityCheck("fail", dims, None, "Betti numbers are not symmetric")
    if strict and checks["duality"].status == "fail":
        raise IdentityDefect("duality input violated", checks["duality"].lhs)

    def verdict(lhs, rhs, note=""):
        return IdentityCheck("pass" if F.is_zero(lhs - rhs) else "fail", lhs, rhs, note)

    # (i) reversing the pair
    if intersection is None:
        intersection = self_intersection_euler(n, chi)  # the sign is an involution
    checks["reverse"] = verdict(_str(F, rev), F.norm(F.sign(n + 1) * st + F.sign(n * (n - 1) // 2) * F(intersection)))

    # (ii) n even
    p = F.characteristic
    if self_pair and n % 2 == 0:
        checks["even"] = verdict(F.norm(2 * st), F(chi), "2 Str = chi")
        if p == 2:
            total = sum(dims.values())
            if total % 2:
                checks["even_char2"] = IdentityCheck("fail", total, None, "total dimension is odd")
            else:
                checks["even_char2"] = verdict(st, F(chi // 2), "Str = chi/2")
        else:
            checks["even_char2"] = IdentityCheck("n/a", note="characteristic is not 2")
    else:
        checks["even"] = IdentityCheck("n/a", note="n odd or distinct pair")
        checks["even_char2"] = IdentityCheck("n/a", note="n odd or distinct pair")

    # (iii) n odd, characteristic 2
    if self_pair and n % 2 and p == 2:
        betti = [dims.get(k, 0) for k in degrees]
        checks["semicharacteristic"] = verdict(st, F(semicharacteristic(betti, n)), "Str = chi_1/2")
    else:
        checks["semicharacteristic"] = IdentityCheck("n/a", note="needs n odd, characteristic 2")

    # (iv) homology sphere: Phi is 0 in degree 0 and the identity in degree n
    sphere = self_pair and n > 0 and all(dims.get(k, 0) == (1 if k in (0, n) else 0) for k in degrees)
    if sphere:
        ends = F.is_zero(traces.get(0, F.zero)) and F.is_zero(traces.get(n, F.zero) - 1)
        checks["sphere"] = verdict(st, F.sign(n), "Str = (-1)^n") if ends else IdentityCheck(
            "fail", traces, None, "Phi must vanish in degree 0 and be the identity in degree n")
    else:
        checks["sphere"] = IdentityCheck("n/a", note="not a homology sphere")

    if blocks is not None:
        if any(F.norm(_trace(F, blocks, k) - traces.get(k, F.zero)) for k in degrees):
            raise SchemaError("blocks disagree with the supplied traces")
        if self_pair:
            ok, table = eigenvalue_pairing(F, blocks, n)
            checks["eigen_pairing"] = IdentityCheck("pass" if ok else "fail", table, None,
                                                    "sigma and 1 - sigma multiplicities")
    report = IdentityReport(F, n, st, chi, checks)
    if strict and not report.ok:
        raise IdentityDefect("supertrace identity failed: " + ", ".join(report.failures()))
    return report


def dual_endomorphism(F: Field, rng, betti: dict, n: int, *, sphere_ends=True):
    """A random Phi on a Poincare-duality space with Phi(degree n-k) = id - Phi(degree k)^T.

    The middle degree (n even) uses a hyperbolic pairing, or, for odd middle
    dimension in odd characteristic with a symmetric pairing, Phi = 1/2 + skew.
    ``sphere_ends`` forces Phi = 0 in degree 0 (so Phi = id in degree n).
    """
    blocks = {}
    for k in range(0, (n + 1) // 2):
        d = betti.get(k, 0)
        A = la.random_matrix(F, rng, d, d)
        if k == 0 and sphere_ends:
            A = la.zeros(F, d, d)
        blocks[k] = A
        blocks[n - k] = la.add(F, la.identity(F, d), la.scale(F, -1, la.transpose(A, d)))
    if n % 2 == 0:
        m = betti.get(n // 2, 0)
        if m % 2 == 0:
            A = la.random_matrix(F, rng, m // 2, m // 2)
            B = la.add(F, la.identity(F, m // 2), la.scale(F, -1, la.transpose(A, m // 2)))
            mid = la.zeros(F, m, m)
            for i in range(m // 2):
                for j in range(m // 2):
                    mid[i][j] = A[i][j]
                    mid[m // 2 + i][m // 2 + j] = B[i][j]
        elif F.characteristic != 2 and (n // 2) % 2 == 0:
            S = la.random_matrix(F, rng, m, m)
            half = F.inv(F(2))
            mid = [[F.norm((S[i][j] - S[j][i]) + (half if i == j else 0)) for j in range(m)] for i in range(m)]
        else:
            raise SchemaError("no self-dual middle block of this dimension")
        P = la.random_invertible(F, rng, m) if m else []
        blocks[n // 2] = la.matmul(F, la.matmul(F, P, mid, cols=m), la.inverse(F, P), cols=m) if m else []
    return blocks


def traces_of(F: Field, blocks: dict):
    return {k: _trace(F, blocks, k) for k in blocks}


# --- the A_m example -------------------------------------------------------------


def a_m_bound(m: int) -> int:
    if m < 1:
        raise SchemaError("m must be at least 1")
    return (m + 1) // 2


def a_m_form(F: Field, m: int):
    """Skew intersection matrix of the A_m vanishing-cycle chain (odd n)."""
    M = la.zeros(F, m, m)
    for i in range(m - 1):
        M[i][i + 1] = F.one
        M[i + 1][i] = F.norm(-1)
    return M


@dataclass
class AmWitness:
    m: int
    form: list
    classes: list
    rank: int
    form_rank: int
    max_isotropic: int
    orthogonal: bool

    @property
    def ok(self):
        size = len(self.classes)
        return self.orthogonal and self.rank == size == self.max_isotropic == a_m_bound(self.m)


def a_m_witness(m: int, F: Field = QQ) -> AmWitness:
    """Alternating vanishing cycles e_1, e_3, ...: isotropic, independent, and maximal.

    A maximal isotropic subspace of a form with radical of dimension rho in
    dimension m has dimension (m - rho)/2 + rho = m - rank/2.
    """
    M = a_m_form(F, m)
    classes = [[F.one if j == i else F.zero for j in range(m)] for i in range(0, m, 2)]
    form = IntersectionForm(F, M, 1)
    gram = form.gram(classes)
    orthogonal = all(F.is_zero(x) for row in gram for x in row)
    form_rank = la.rank(F, M, m)
    return AmWitness(m, M, classes, la.rank(F, classes, m), form_rank, m - form_rank // 2, orthogonal)


# --- weighted Euler characteristics -----------------------------------------------


def _integer(x):
    try:
        q = Fraction(x)
    except (TypeError, ValueError):
        q = None
    if q is None or q.denominator != 1:
        raise SchemaError(f"weights and Euler characteristics must be integers, got {x!r}")
    return int(q)


@dataclass
class WeightedEulerData:
    """Euler characteristic chi_sigma of each weight-sigma piece."""

    weights: dict

    def __post_init__(self):
        clean = {}
        for s, c in dict(self.weights).items():
            s, c = _integer(s), _integer(c)
            if c:
                clean[s] = clean.get(s, 0) + c
        self.weights = dict(sorted((s, c) for s, c in clean.items() if c))

    @property
    def total(self):
        return sum(self.weights.values())

    def shifted(self, by: int) -> "WeightedEulerData":
        return WeightedEulerData({s + by: c for s, c in self.weights.items()})


def mukai_derivative(data: WeightedEulerData) -> int:
    """Derivative at q = 1 of sum_sigma q^sigma chi_sigma."""
    return sum(s * c for s, c in data.weights.items())


def shift_identity_check(data: WeightedEulerData, chi_total: int | None = None):
    """Lowering every weight by one lowers the derivative by chi; returns (ok, lhs, rhs)."""
    chi = data.total if chi_total is None else chi_total
    lhs = mukai_derivative(data.shifted(-1))
    rhs = mukai_derivative(data) - chi
    return lhs == rhs, lhs, rhs
