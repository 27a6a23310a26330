"""Exception hierarchy shared by every module of the package."""


class TropCritError(Exception):
    """Base class for all errors raised by tropcrit."""


class CoeffOfZero(TropCritError):
    """Leading coefficient requested for the zero series."""


class NonPositiveValuation(TropCritError):
    """exp() called on a series whose valuation is not strictly positive."""


class NotUnitLeading(TropCritError):
    """log() called on a series that is not of the form 1 + (positive valuation)."""


class NotPositive(TropCritError):
    """A coefficient that must be positive is not."""


class DimensionMismatch(TropCritError, ValueError):
    pass


class NotComplete(TropCritError):
    """Newton polytope is not full-dimensional with 0 in its interior.

    A positive Laurent polynomial has a unique positive critical point if and
    only if this completeness condition holds, so no critical point is
    produced for such input.
    """


class NoPointAboveZero(TropCritError):
    pass


class TargetNotInHull(TropCritError):
    pass


class NotTransversal(TropCritError):
    pass


class WrongDimension(TropCritError):
    pass


class InvariantViolation(TropCritError):
    """An internal self-check failed; on valid input this indicates a bug."""


class MaxIterExceeded(TropCritError):
    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class StalledProgress(TropCritError):
    """A lifting step neither raised the residual valuation nor lowered its level."""


class NotLaurent(TropCritError):
    def __init__(self, message, factor=None):
        super().__init__(message)
        self.factor = factor


class NonPrimitiveRay(TropCritError):
    pass


class EmptyPolytope(TropCritError):
    pass


class Unbounded(TropCritError):
    pass


class ParseError(TropCritError, ValueError):
    pass
