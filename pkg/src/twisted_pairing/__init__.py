"""Exact twisted intersection pairings: cones, cyclic covers, decorated cycles and bounds."""
from __future__ import annotations

from .errors import AxiomViolation, IdentityDefect, MalformedComplex, NotAChainMap, SchemaError, TwistedPairingError
from .field import GF, QQ, Field

__version__ = "1.0.0"

__all__ = [
    "AxiomViolation", "Field", "GF", "IdentityDefect", "MalformedComplex", "NotAChainMap", "QQ", "SchemaError",
    "TwistedPairingError", "__version__",
]
