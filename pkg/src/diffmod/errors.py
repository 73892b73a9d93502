"""Shared exception types."""


class DiffmodError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(DiffmodError):
    """Operands live over different ambient dimensions or rings."""


class NotAComplexError(DiffmodError):
    """A pair of maps that should compose to zero does not."""


class UnsupportedOperation(DiffmodError):
    """The requested computation is outside what the representation supports."""


class InternalConsistencyError(DiffmodError):
    """An identity that must hold by construction failed; indicates a bug."""
