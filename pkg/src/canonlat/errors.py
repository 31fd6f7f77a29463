"""Exception hierarchy shared by every module."""

from __future__ import annotations


class CanonlatError(Exception):
    """Base class for all library errors."""


class MalformedInput(CanonlatError):
    pass


class InvalidSymbol(CanonlatError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class DimensionMismatch(CanonlatError):
    pass


class NotPseudoRoot(CanonlatError):
    pass


class IndexOutOfRange(CanonlatError):
    pass


class NotExceptional(CanonlatError):
    pass


class ProductMismatch(CanonlatError):
    pass


class NotBlockTriangular(CanonlatError):
    pass


class NotDecomposable(CanonlatError):
    pass


class MixedSigns(CanonlatError):
    pass


class NotTubular(CanonlatError):
    pass


class IsotropicVector(CanonlatError):
    pass


class NotVInvariant(CanonlatError):
    pass


class NotInRadical(CanonlatError):
    pass


class NotNested(CanonlatError):
    pass


class IsotropicGamma(CanonlatError):
    pass


class PreconditionViolated(CanonlatError):
    pass


class AxiomViolated(CanonlatError):
    def __init__(self, axiom: str, witness: object):
        super().__init__(f"{axiom} violated by {witness!r}")
        self.axiom = axiom
        self.witness = witness
