"""Exact coefficient fields: the rationals and prime fields GF(p).

Elements are plain Python values: ``Fraction`` for the rationals and ints in
``range(p)`` for GF(p).  Arithmetic is done with the usual operators followed
by :meth:`Field.norm`, which keeps every computation exact and cheap.
"""
from __future__ import annotations

import re
from fractions import Fraction

from sympy import isprime

from .errors import SchemaError


class Field:
    __slots__ = ("characteristic",)

    def __init__(self, characteristic=0):
        characteristic = int(characteristic)
        if characteristic < 0 or (characteristic and not isprime(characteristic)):
            raise ValueError(f"characteristic must be 0 or a prime, got {characteristic}")
        self.characteristic = characteristic

    @classmethod
    def parse(cls, spec):
        """Read ``q``/``Q`` or ``p:<prime>`` (the CLI spelling)."""
        spec = str(spec).strip()
        if spec.lower() in ("q", "qq", "rationals", "0"):
            return cls(0)
        m = re.fullmatch(r"(?:p:|gf\()?(\d+)\)?", spec, flags=re.I)
        if not m:
            raise SchemaError(f"unrecognised field {spec!r}")
        try:
            return cls(int(m.group(1)))
        except ValueError as exc:
            raise SchemaError(str(exc)) from None

    @property
    def is_prime(self):
        return self.characteristic > 0

    @property
    def spec(self):
        return f"p:{self.characteristic}" if self.characteristic else "q"

    def __eq__(self, other):
        return isinstance(other, Field) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("Field", self.characteristic))

    def __repr__(self):
        return f"GF({self.characteristic})" if self.characteristic else "QQ"

    # element handling

    @property
    def zero(self):
        return 0 if self.characteristic else Fraction(0)

    @property
    def one(self):
        return 1 if self.characteristic else Fraction(1)

    def __call__(self, value):
        """Coerce an int, Fraction or scalar string into the field."""
        if isinstance(value, str):
            return self.parse_scalar(value)
        p = self.characteristic
        if not p:
            return Fraction(value)
        if isinstance(value, Fraction):
            num, den = value.numerator, value.denominator
            if den % p == 0:
                raise ZeroDivisionError(f"{value} has no image in GF({p})")
            return num * pow(den, -1, p) % p
        return int(value) % p

    def norm(self, value):
        """Reduce the result of an integer/Fraction expression."""
        p = self.characteristic
        return value % p if p else value

    def inv(self, value):
        if value == 0:
            raise ZeroDivisionError("inverse of zero")
        p = self.characteristic
        return pow(value, -1, p) if p else 1 / Fraction(value)

    def sign(self, k):
        """(-1)**k as a field element."""
        return self.norm(-1 if k % 2 else 1)

    def is_zero(self, value):
        return self.norm(value) == 0

    def vector(self, values):
        return [self(v) for v in values]

    def random_element(self, rng, bound=3):
        p = self.characteristic
        if p:
            return rng.randrange(p)
        return Fraction(rng.randint(-bound, bound), rng.randint(1, 2))

    # serialisation

    def format_scalar(self, value):
        p = self.characteristic
        if p:
            return f"{int(value) % p} mod {p}"
        value = Fraction(value)
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"

    def parse_scalar(self, text):
        text = str(text).strip()
        m = re.fullmatch(r"(-?\d+)\s*mod\s*(\d+)", text)
        if m:
            if int(m.group(2)) != self.characteristic:
                raise SchemaError(f"scalar {text!r} does not live in {self!r}")
            return int(m.group(1)) % self.characteristic
        try:
            return self(Fraction(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"bad scalar {text!r}: {exc}") from None


QQ = Field(0)


def GF(p):
    return Field(p)
