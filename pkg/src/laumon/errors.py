"""Exception types shared across the package."""


class LaumonError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(LaumonError, ValueError):
    """Operands disagree on variable count or truncation bound."""


class NotAUnitError(LaumonError, ZeroDivisionError):
    """Series inversion requested for a series with zero constant term."""


class NormalizationError(LaumonError, ValueError):
    """A rational power was requested of a series whose constant term is not 1."""


class WindowIndexError(LaumonError, IndexError):
    """A window [i;j] with i out of range or j < i."""


class NonGenericParametersError(LaumonError, ArithmeticError):
    """Parameters hit a resonance, a zero weight, or a degenerate linear system.

    ``degree`` names the offending exponent vector when one is known.
    """

    def __init__(self, message: str, degree: tuple[int, ...] | None = None):
        super().__init__(message)
        self.degree = degree


class DegreeBoundError(LaumonError, ValueError):
    """A truncated object was used beyond the degree it was computed to."""


class LedgerAmbiguityError(LaumonError, RuntimeError):
    """Convention resolution found zero or several surviving combinations."""

    def __init__(self, message: str, evidence: list[dict]):
        super().__init__(message)
        self.evidence = evidence
