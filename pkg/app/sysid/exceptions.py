"""Errors raised by the identification toolkit.

Every error derives from IdentificationError, which is a ValueError,
so callers that only care about "bad numbers in" can catch ValueError.
"""


class IdentificationError(ValueError):
    """Base class for toolkit errors"""


class DimensionError(IdentificationError):
    """Matrix or signal dimensions do not agree"""


class SignalLengthError(IdentificationError):
    """A signal is too short for the requested operation"""


class DegenerateDataError(IdentificationError):
    """Data does not carry enough information for the requested order"""


class SingularTransformError(IdentificationError):
    """A coordinate transformation could not be inverted reliably"""

    def __init__(self, message, condition_estimate=float('inf')):
        super().__init__(message)
        self.condition_estimate = condition_estimate


class UnrecoverableStructureError(IdentificationError):
    """No transformation route recovered the cyclic structure"""


class UnsupportedModelError(IdentificationError):
    """The model is outside what an operation supports (e.g. m > 1)"""


class DegenerateReferenceError(IdentificationError):
    """A reference signal is constant, so a normalized score is undefined"""


class SimplexError(IdentificationError):
    """A weight vector is not on the standard simplex"""
