"""Exception types shared across the package."""


class PolyzetaError(Exception):
    """Base class for all package errors."""


class DomainError(PolyzetaError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class PrecisionMismatch(PolyzetaError, ValueError):
    """Binary operation between values bound to different precisions."""


class DivergenceError(PolyzetaError, ValueError):
    """A sum or integral representation that does not converge."""


class UnsupportedSpec(PolyzetaError, ValueError):
    """A structurally valid input outside the numeric scope (e.g. words for
    nonpositive exponents)."""


class InsufficientPrecision(PolyzetaError, ValueError):
    """Inputs carry too few digits for a reliable integer-relation search."""


class ExpressionError(PolyzetaError, ValueError):
    """Parse or evaluation error in the expression language, with position."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
