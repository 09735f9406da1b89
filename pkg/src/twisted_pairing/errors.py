from __future__ import annotations


class TwistedPairingError(Exception):
    """Base class for every error raised by the package."""

    exit_code = 1


class SchemaError(TwistedPairingError, ValueError):
    """A document or argument does not have the expected shape."""

    exit_code = 2


class MalformedComplex(SchemaError):
    """Coboundary matrices of the wrong size, or d composed with d is nonzero."""


class NotAChainMap(SchemaError):
    pass


class AxiomViolation(TwistedPairingError):
    """A declared algebraic relation fails on the supplied data."""

    exit_code = 3

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class IdentityDefect(TwistedPairingError):
    """A computed identity came out with a nonzero defect."""

    exit_code = 4

    def __init__(self, message, defect=None):
        super().__init__(message)
        self.defect = defect
