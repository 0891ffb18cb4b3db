"""Exception hierarchy.

Mathematical failures (an axiom not holding, a counit not existing) are
reported as data; these exceptions signal structural misuse only.
"""


class TwistcoError(Exception):
    """Base class for every error raised by the package."""


class DimensionMismatch(TwistcoError, ValueError):
    pass


class LabelMismatch(DimensionMismatch):
    pass


class FieldMismatch(TwistcoError, ValueError):
    pass


class SpaceMismatch(TwistcoError, ValueError):
    pass


class NotAGroup(TwistcoError, ValueError):
    pass


class NoCounit(TwistcoError):
    pass


class NoUnit(TwistcoError):
    pass


class MuNotInvertible(TwistcoError):
    pass


class EtaNotInvertible(TwistcoError):
    pass


class NotInvertible(TwistcoError):
    pass


class ZNotOpInvertible(TwistcoError):
    pass


class NotMorphism(TwistcoError):
    pass


class NotInTw(TwistcoError):
    pass


class NotAnAction(TwistcoError):
    pass


class AxiomFailure(TwistcoError):
    pass


class PreconditionFailed(TwistcoError):
    pass


class ThetaInvalid(TwistcoError):
    pass


class BudgetExceeded(TwistcoError):
    pass


class InvariantViolation(TwistcoError, AssertionError):
    """An identity the theory guarantees did not hold; indicates a bug or a finding."""


class ParseError(TwistcoError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class ValidationError(TwistcoError):
    pass
