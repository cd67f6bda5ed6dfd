"""Exception types shared across the package."""


class DimensionMismatch(ValueError):
    """Operands have incompatible shapes for the requested operation."""


class FieldMismatch(ValueError):
    """Operands live over different scalar fields."""


class SingularMatrixError(ValueError):
    """A matrix required to be invertible is singular."""


class PrimeDenominatorError(ValueError):
    """A reduction prime divides the denominator of a matrix entry."""


class BoundViolation(RuntimeError):
    """A certified inequality failed.

    Every inequality certified by this package is a theorem, so a violation
    indicates an implementation bug.  The exception carries the offending
    values (and matrices, when available) for diagnosis.
    """

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = dict(details) if details else {}
