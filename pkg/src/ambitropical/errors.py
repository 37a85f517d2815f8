"""Exception hierarchy.

Every domain failure derives from :class:`DomainError` and carries a short
``code`` plus a JSON-friendly ``payload`` so the CLI can report it verbatim.
"""

from __future__ import annotations


class DomainError(Exception):
    code = "DomainError"

    def __init__(self, message: str = "", **payload):
        super().__init__(message or self.code)
        self.payload = payload


class DimensionMismatch(DomainError, ValueError):
    code = "DimensionMismatch"


class UndefinedSum(DomainError, ArithmeticError):
    code = "UndefinedSum"


class PositiveCircuit(DomainError):
    """A circuit of positive weight; ``circuit`` lists 0-based nodes."""

    code = "PositiveCircuit"

    def __init__(self, circuit, weight):
        self.circuit = tuple(circuit)
        self.weight = weight
        super().__init__(f"positive circuit {self.circuit} of weight {weight}")


class EmptyPolyhedron(DomainError):
    code = "EmptyPolyhedron"

    def __init__(self, cause: PositiveCircuit):
        self.cause = cause
        super().__init__(f"empty polyhedron: {cause}")


class ImproperMatrix(DomainError, ValueError):
    code = "ImproperMatrix"


class EmptyInput(DomainError, ValueError):
    code = "EmptyInput"


class NotDeterministic(DomainError):
    code = "NotDeterministic"


class SizeBlowup(DomainError):
    code = "SizeBlowup"


class SizeCap(DomainError):
    code = "SizeCap"


class NonConvergence(DomainError):
    code = "NonConvergence"


class NotAnEigenvector(DomainError):
    code = "NotAnEigenvector"


class HorizonTooLarge(DomainError):
    code = "HorizonTooLarge"


class NotHomogeneous(DomainError):
    code = "NotHomogeneous"


class NotALattice(DomainError):
    code = "NotALattice"


class NotAFixedPoint(DomainError):
    code = "NotAFixedPoint"


class PairwiseConditionViolated(DomainError):
    code = "PairwiseConditionViolated"


class UnsupportedDimension(DomainError):
    code = "UnsupportedDimension"


class InvalidGenerator(DomainError, ValueError):
    code = "InvalidGenerator"
