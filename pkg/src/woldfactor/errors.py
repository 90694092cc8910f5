"""Exception hierarchy shared by every module."""


class WoldFactorError(Exception):
    """Base class for all errors raised by :mod:`woldfactor`."""


class DimensionError(WoldFactorError, ValueError):
    """Incompatible shapes, e.g. a non-square matrix or a rank mismatch."""


class SymmetryError(WoldFactorError, ValueError):
    """Matrix is not Hermitian within tolerance."""


class AliasingError(WoldFactorError, ValueError):
    """Requested Fourier index lies outside the alias-free range |k| < N/2."""


class DefinitenessError(WoldFactorError, ValueError):
    """A spectral density value is indefinite beyond tolerance."""


class PositivityError(WoldFactorError, ValueError):
    """A grid function that must be strictly positive is not."""


class MagnitudeError(WoldFactorError, OverflowError):
    """Exponentiation would overflow."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class RankInstabilityError(WoldFactorError):
    """The pointwise rank of a spectral density is not a.e. constant."""

    def __init__(self, message, histogram=None):
        super().__init__(message)
        self.histogram = dict(histogram or {})


class NonCausalGaugeError(WoldFactorError):
    """The eigenvector field failed the Hardy-space check and no override was given."""


class GaugeError(WoldFactorError):
    """The constant unitary gauge cannot be fixed (rank-deficient leading block)."""


class InsufficientHistoryError(WoldFactorError, ValueError):
    """A sample path is too short for the requested filter."""


class InputFormatError(WoldFactorError, ValueError):
    """Malformed model, density or path file."""
