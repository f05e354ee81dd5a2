"""Exception types shared across the package."""


class PolyvolError(Exception):
    """Base class for all polyvol errors."""


class ParseError(PolyvolError):
    """Malformed instance file. Carries the 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(PolyvolError):
    """Polytope data violates a structural requirement."""


class EmptyPolytopeError(ValidationError):
    """The feasible region {Ax <= b} is empty."""


class UnboundedPolytopeError(ValidationError):
    """The feasible region {Ax <= b} is unbounded in some direction."""


class NotPositiveDefiniteError(PolyvolError):
    """A matrix required to be symmetric positive definite is not."""


class RoundingError(PolyvolError):
    """The ellipsoid rounding iteration failed or stagnated."""


class EstimationError(PolyvolError):
    """The multiphase estimator could not produce a result."""


class GenerationError(PolyvolError):
    """A random instance generator exhausted its retry budget."""
