"""Exception types raised by the xx3spin modules."""


class ValidationError(ValueError):
    """Input that violates a precondition (shape, range, physicality)."""

    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class SeparationRangeError(ValidationError):
    """Site separation m outside the supported determinant sizes."""


class ClosedFormUnavailable(ArithmeticError):
    """A closed-form expression is singular here; use the generic route."""


class ConsistencyError(RuntimeError):
    """Two independent routes to the same quantity disagree."""

    def __init__(self, message, alpha=None, m=None, closed=None, numeric=None):
        super().__init__(message)
        self.alpha = alpha
        self.m = m
        self.closed = closed
        self.numeric = numeric
