"""Supertraces of graded endomorphisms and their eigenvalue refinement."""
from __future__ import annotations

from dataclasses import dataclass

from sympy import Poly, symbols
from sympy.polys.domains import GF as SymGF, QQ as SymQQ
from sympy.polys.matrices import DomainMatrix

from ..errors import SchemaError
from ..field import Field

_t = symbols("t")


def _check_square(blocks):
    for k, M in blocks.items():
        if any(len(row) != len(M) for row in M):
            raise SchemaError(f"degree {k} block is not square")


def supertrace(F: Field, blocks: dict):
    """sum_k (-1)^k Tr(blocks[k])."""
    _check_square(blocks)
    return F.norm(sum(F.sign(k) * sum(M[i][i] for i in range(len(M))) for k, M in blocks.items()))


def charpoly(F: Field, M):
    """Coefficients of det(t - M), leading coefficient first."""
    n = len(M)
    if n == 0:
        return [F.one]
    dom = SymGF(F.characteristic) if F.characteristic else SymQQ
    dm = DomainMatrix([[dom.convert(int(x) if F.characteristic else x) for x in row] for row in M], (n, n), dom)
    return [F(int(c) if F.characteristic else dom.to_sympy(c)) for c in dm.charpoly()]


def _poly(F: Field, coeffs):
    if F.characteristic:
        return Poly([int(c) for c in coeffs], _t, modulus=F.characteristic)
    return Poly(coeffs, _t, domain="QQ")


@dataclass
class EigenFactor:
    """An irreducible factor f of the characteristic polynomial.

    ``multiplicity[k]`` is the exponent of f in degree k; every root of f has
    generalized eigenspace Euler characteristic ``chi``.
    """

    coefficients: tuple
    multiplicity: dict
    chi: int

    @property
    def degree(self):
        return len(self.coefficients) - 1

    def root_sum(self, F: Field):
        """Sum of the roots of f (f is monic)."""
        return F.norm(-F(self.coefficients[1])) if self.degree else F.zero

    def as_text(self, F: Field):
        return str(_poly(F, self.coefficients).as_expr())


def q_refined(F: Field, blocks: dict):
    """Irreducible factors of the degreewise characteristic polynomials."""
    _check_square(blocks)
    found = {}
    for k, M in sorted(blocks.items()):
        if not M:
            continue
        poly = _poly(F, charpoly(F, M))
        _, factors = poly.factor_list()
        for f, e in factors:
            f = f.monic()
            key = tuple(F(int(c)) if F.characteristic else F(c) for c in f.all_coeffs())
            found.setdefault(key, {})[k] = found.get(key, {}).get(k, 0) + e
    out = []
    for key, mult in sorted(found.items(), key=lambda kv: (len(kv[0]), [str(c) for c in kv[0]])):
        chi = sum((-1) ** k * e for k, e in mult.items())
        out.append(EigenFactor(key, dict(sorted(mult.items())), chi))
    return out


def refined_supertrace(F: Field, factors):
    """sum over eigenvalues of sigma * chi_sigma, through root sums of the factors."""
    return F.norm(sum(f.chi * f.root_sum(F) for f in factors))


def total_euler(factors):
    return sum(f.degree * f.chi for f in factors)


def bullet_supertrace(F: Field, blocks: dict):
    return supertrace(F, blocks)
